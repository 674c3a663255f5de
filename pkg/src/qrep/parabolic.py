"""Principal series: characters induced from the Borel subgroup, their
intertwiners, and the even/odd splitting for self-dual inducing data.

The Hecke-algebra side works with kernels on the group: Delta_1 is the
inducing character spread over B, Delta_w its twist over the big Bruhat
cell, and convolution is the plain sum (k1 * k2)(x) = sum_g k1(x g^-1)
k2(g).  With that normalization the kernels satisfy

    Delta_1 * Delta_1 = q(q-1) Delta_1
    Delta_1 * Delta_w = Delta_w * Delta_1 = q(q-1) Delta_w
    Delta_w * Delta_w = q^2 (q-1) chi(-1) Delta_1

and the two idempotents carry q^(-1/2) on the Delta_w part.  All of
these identities are re-verified numerically on every construction.
"""

import numpy as np

from .config import get_tol
from .errors import (CharMismatch, EvenQ, GroupMismatch, NotSplitting,
                     VerificationFailed)
from .gl2 import bruhat
from .repcore import (ClassFunction, MatrixRep, hom_dim, induce,
                      inner_product, rep_character)


class BorelChar:
    """A character of B trivial on N: two multiplicative characters
    (chi1, chi2) acting through the diagonal for GL2, a single chi
    acting through the upper-left entry for SL2."""

    def __init__(self, ctx, chars):
        chars = tuple(chars)
        want = 2 if ctx.kind == "gl2" else 1
        if len(chars) != want:
            raise CharMismatch(f"{ctx.kind} needs {want} inducing character(s)")
        for c in chars:
            if c.ctx is not ctx.field:
                raise GroupMismatch("character field != group field")
        self.ctx = ctx
        self.chars = chars

    def value_on_mats(self, mats):
        """Vectorized value at Borel matrices (..., 4); entry c must be 0."""
        mats = np.asarray(mats, dtype=np.int64)
        if np.any(mats[..., 2] != 0):
            raise GroupMismatch("matrix is not upper triangular")
        if self.ctx.kind == "gl2":
            chi1, chi2 = self.chars
            return chi1.values[mats[..., 0]] * chi2.values[mats[..., 3]]
        return self.chars[0].values[mats[..., 0]]

    def key(self):
        return tuple(c.j for c in self.chars)


def _cache(ctx):
    if not hasattr(ctx, "_parabolic_cache"):
        ctx._parabolic_cache = {}
    return ctx._parabolic_cache


def borel_subview(ctx):
    cache = _cache(ctx)
    if "borel" not in cache:
        cache["borel"] = ctx.subview(ctx.borel_ids())
    return cache["borel"]


def borel_class_function(ctx, bchar):
    bview, bemb = borel_subview(ctx)
    reps = bemb.injection[bview.reps]
    return ClassFunction(bview, bchar.value_on_mats(ctx.elems[reps]))


def induced_character(ctx, bchar):
    """Character of Ind_B^G of the given Borel character."""
    bview, bemb = borel_subview(ctx)
    return induce(borel_class_function(ctx, bchar), bemb)


def predicted_intertwiner_dim(bchar1, bchar2):
    """e_1 + e_w: one for equality of the inducing data, one for
    equality after the Weyl twist (swap for GL2, inverse for SL2)."""
    if bchar1.ctx is not bchar2.ctx:
        raise GroupMismatch("characters on different groups")
    if bchar1.ctx.kind == "gl2":
        (a1, a2), (b1, b2) = bchar1.key(), bchar2.key()
        return int((a1, a2) == (b1, b2)) + int((a1, a2) == (b2, b1))
    qm1 = bchar1.ctx.q - 1
    (a,), (b,) = bchar1.key(), bchar2.key()
    return int(a == b) + int(a == (-b) % qm1)


def intertwiner_dim(ctx, bchar1, bchar2):
    """dim Hom(I(bchar1), I(bchar2)) computed from the characters."""
    f1 = induced_character(ctx, bchar1)
    f2 = induced_character(ctx, bchar2)
    return hom_dim(f1, f2)


def decompose_gl2(ctx, bchar):
    """Split I(chi, chi) on GL2 into its linear constituent chi(det) and
    the twisted Steinberg complement; both are verified irreducible."""
    if ctx.kind != "gl2":
        raise GroupMismatch("decompose_gl2 needs a gl2 context")
    chi1, chi2 = bchar.chars
    if chi1.j != chi2.j:
        raise CharMismatch("the two inducing characters must coincide")
    ind = induced_character(ctx, bchar)
    dets = ctx.mat_det(ctx.elems[ctx.view.reps])
    linear = ClassFunction(ctx.view, chi1.values[np.asarray(dets)])
    steinberg = ind - linear
    for f in (linear, steinberg):
        if hom_dim(f, f) != 1:
            raise VerificationFailed("constituent is not irreducible")
    if hom_dim(linear, steinberg) != 0:
        raise VerificationFailed("constituents are not disjoint")
    return linear, steinberg


# --- matrix model of the induced representation (SL2) ---

def _coset_structure(ctx):
    """Right cosets B\\G: canonical (minimal id) representatives and the
    coset index of every element."""
    cache = _cache(ctx)
    if "cosets" in cache:
        return cache["cosets"]
    bids = ctx.borel_ids()
    coset_of = np.full(ctx.n, -1, dtype=np.int64)
    reps = []
    for g in range(ctx.n):
        if coset_of[g] >= 0:
            continue
        members = ctx.view.mul(bids, g)
        coset_of[members] = len(reps)
        reps.append(g)
    cache["cosets"] = (np.array(reps, dtype=np.int64), coset_of)
    return cache["cosets"]


def build_induced_rep(ctx, bchar, check_pairs=4096, seed=20070714):
    """Matrix model of Ind_B^G chi for SL2 with basis indexed by B\\G:
    M(g)[j, i] = chi~(b) where r_j g = b r_i.  Verified multiplicative
    on all pairs when |G| <= 400, else on a seeded sample."""
    if ctx.kind != "sl2":
        raise GroupMismatch("matrix model is built for sl2")
    if ctx.q % 2 == 0:
        raise EvenQ("odd q required")
    reps, coset_of = _coset_structure(ctx)
    k = len(reps)
    if k != ctx.q + 1:
        raise VerificationFailed(f"expected {ctx.q + 1} cosets, got {k}")
    view = ctx.view
    images = np.zeros((ctx.n, k, k), dtype=complex)
    allg = np.arange(ctx.n)
    for j in range(k):
        x = view.mul(reps[j], allg)          # r_j g for all g
        i = coset_of[x]
        b = view.mul(x, view.inv[reps[i]])   # x r_i^-1 in B
        vals = bchar.value_on_mats(ctx.elems[b])
        images[allg, j, i] = vals
    rep = MatrixRep(view, images)
    if ctx.n <= 400:
        worst = rep.check_homomorphism()
    else:
        rng = np.random.default_rng(seed)
        pairs = rng.integers(0, ctx.n, size=(check_pairs, 2))
        worst = rep.check_homomorphism(pairs=pairs)
    if worst > get_tol():
        raise VerificationFailed(f"induced rep not multiplicative, defect {worst}")
    return rep


def sl2_generators(ctx):
    """A small generating set of SL2(F_q), verified to generate."""
    F = ctx.field
    gens = [ctx.t_id(F.gen), ctx.w_id(), ctx.upper_id(1), ctx.lower_id(1)]
    if F.k > 1:
        gens += [ctx.upper_id(F.gen), ctx.lower_id(F.gen)]
    gens = sorted(set(gens))
    reached = np.zeros(ctx.n, dtype=bool)
    frontier = np.array([ctx.identity], dtype=np.int64)
    reached[frontier] = True
    garr = np.array(gens, dtype=np.int64)
    while len(frontier):
        nxt = np.unique(ctx.view.mul(frontier[:, None], garr[None, :]))
        nxt = nxt[~reached[nxt]]
        reached[nxt] = True
        frontier = nxt
    if not reached.all():
        raise VerificationFailed("generator set does not generate")
    return gens


def two_dim_commutant_projectors(gen_mats, tol=None, seed=20070714):
    """Spectral projectors of the two-dimensional commutant of a set of
    unitary matrices.  Raises NotSplitting unless the solution space of
    [X, g] = 0 for all g has dimension exactly 2."""
    tol = get_tol() if tol is None else tol
    d = gen_mats[0].shape[0]
    eye = np.eye(d)
    rows = []
    for g in gen_mats:
        rows.append(np.kron(eye, g) - np.kron(g.T, eye))  # vec(gX - Xg)
    A = np.vstack(rows)
    _, s, vh = np.linalg.svd(A)
    null_dim = int(np.sum(s < 1e-9)) + (d * d - len(s) if A.shape[0] < d * d else 0)
    if null_dim != 2:
        raise NotSplitting(f"commutant dimension {null_dim}, expected 2")
    basis = [vh[-(i + 1)].reshape(d, d).T for i in range(2)]

    rng = np.random.default_rng(seed)
    J = None
    for attempt in range(16):
        if attempt < 2:
            cand = basis[attempt]
        else:
            c = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            cand = c[0] * basis[0] + c[1] * basis[1]
        for herm in ((cand + cand.conj().T) / 2, (cand - cand.conj().T) / 2j):
            if np.max(np.abs(herm - np.trace(herm) / d * eye)) > 1e-6:
                J = herm
                break
        if J is not None:
            break
    if J is None:
        raise NotSplitting("no non-scalar Hermitian element in the commutant")

    evals, evecs = np.linalg.eigh(J)
    gaps = np.diff(evals)
    cut = int(np.argmax(gaps)) + 1
    P1 = evecs[:, :cut] @ evecs[:, :cut].conj().T
    P2 = evecs[:, cut:] @ evecs[:, cut:].conj().T
    for P in (P1, P2):
        if np.max(np.abs(P @ P - P)) > 1e-8:
            raise NotSplitting("projector is not idempotent")
        for g in gen_mats:
            if np.max(np.abs(P @ g - g @ P)) > 1e-6:
                raise NotSplitting("projector does not commute with the action")
    if np.max(np.abs(P1 + P2 - eye)) > 1e-8:
        raise NotSplitting("projectors do not sum to the identity")
    return P1, P2


def split_rho_pm(ctx, bchar):
    """Split I(chi) for the quadratic character chi of F_q^* into its two
    irreducible halves of degree (q+1)/2.

    Returns (rho_plus, rho_minus) as ClassFunctions; rho_plus is the one
    whose value at the class of (1 1; 0 1) has nonnegative imaginary
    part (ties broken toward the larger real part)."""
    if ctx.kind != "sl2":
        raise GroupMismatch("rho+- live on sl2")
    chi = bchar.chars[0]
    if not chi.is_quadratic:
        raise CharMismatch("splitting needs the quadratic character")
    rep = build_induced_rep(ctx, bchar)
    gens = sl2_generators(ctx)
    P1, P2 = two_dim_commutant_projectors([rep.images[g] for g in gens])
    reps_mats = rep.images[ctx.view.reps]
    f1 = ClassFunction(ctx.view, np.einsum("ij,nji->n", P1, reps_mats))
    f2 = ClassFunction(ctx.view, np.einsum("ij,nji->n", P2, reps_mats))

    tol = get_tol()
    want_deg = (ctx.q + 1) // 2
    for f in (f1, f2):
        if abs(f.values[ctx.class_index_of((1, 0, 0, 1))] - want_deg) > tol:
            raise VerificationFailed("constituent degree != (q+1)/2")
        if hom_dim(f, f) != 1:
            raise VerificationFailed("constituent is not irreducible")
    ind = induced_character(ctx, bchar)
    if np.max(np.abs((f1 + f2).values - ind.values)) > tol:
        raise VerificationFailed("constituents do not sum to the induced character")

    u = ctx.class_index_of((1, 1, 0, 1))
    a, b = f1.values[u], f2.values[u]
    key = lambda z: (round(z.imag, 9), round(z.real, 9))
    if key(a) >= key(b):
        return f1, f2
    return f2, f1


def epsilon_swap_defect(ctx, f_plus, f_minus):
    """max over classes of |f+(m g m^-1) - f-(g)| for m = diag(eps, 1);
    conjugation by m is an outer automorphism of SL2 exchanging the two
    halves."""
    F = ctx.field
    eps = ctx.eps
    worst = 0.0
    for ci, (rid, _) in enumerate(ctx.view.classes):
        a, b, c, d = ctx.mat_of(rid)
        conj = (a, int(F.mul(eps, b)), int(F.mul(c, F.inv(eps))), d)
        cj = ctx.class_index_of(conj)
        worst = max(worst, abs(f_plus.values[cj] - f_minus.values[ci]))
    return worst


# --- Hecke kernels on the group ---

def delta_kernels(ctx, bchar):
    """(Delta_1, Delta_w) as length-|G| arrays: the inducing character
    on B, and chi~(b1) chi~(b2) on the cell B w B via the canonical
    Bruhat factorization.

    Delta_w is well defined only when the inducing character equals its
    Weyl twist, so that is required."""
    if ctx.kind == "sl2":
        chi = bchar.chars[0]
        if chi.j != 0 and not chi.is_quadratic:
            raise CharMismatch("inducing character must be self-dual")
    else:
        if bchar.chars[0] != bchar.chars[1]:
            raise CharMismatch("inducing pair must be Weyl symmetric")
    d1 = np.zeros(ctx.n, dtype=complex)
    dw = np.zeros(ctx.n, dtype=complex)
    for g in range(ctx.n):
        m = ctx.mat_of(g)
        parts = bruhat(ctx, m)
        if parts[0] == "B":
            d1[g] = complex(bchar.value_on_mats(np.array(m)))
        else:
            _, b1, b2 = parts
            dw[g] = complex(bchar.value_on_mats(np.array(b1))) * \
                complex(bchar.value_on_mats(np.array(b2)))
    return d1, dw


def convolve(ctx, k1, k2):
    """(k1 * k2)(x) = sum_g k1(x g^-1) k2(g)."""
    view = ctx.view
    inv = view.inv
    out = np.empty(ctx.n, dtype=complex)
    allg = np.arange(ctx.n)
    chunk = max(1, (1 << 22) // ctx.n)
    for lo in range(0, ctx.n, chunk):
        hi = min(ctx.n, lo + chunk)
        idx = view.mul(allg[lo:hi, None], inv[None, :])
        out[lo:hi] = k1[idx] @ k2
    return out


def delta_relation_defect(ctx, bchar):
    """Numerical defect of the four convolution identities above.

    The pure two-term relations hold only for the nontrivial quadratic
    inducing character; for the trivial character Delta_w * Delta_w
    acquires an extra Delta_w term (the classical quadratic Hecke
    relation), so that case is rejected."""
    q = ctx.q
    if ctx.kind != "sl2":
        raise GroupMismatch("kernel relations are stated on sl2")
    chi = bchar.chars[0]
    if not chi.is_quadratic:
        raise CharMismatch("inducing character must be the nontrivial "
                           "quadratic character")
    sign = chi.values[int(ctx.field.neg(1))]
    d1, dw = delta_kernels(ctx, bchar)
    c = q * (q - 1)
    worst = 0.0
    worst = max(worst, float(np.max(np.abs(convolve(ctx, d1, d1) - c * d1))))
    worst = max(worst, float(np.max(np.abs(convolve(ctx, d1, dw) - c * dw))))
    worst = max(worst, float(np.max(np.abs(convolve(ctx, dw, d1) - c * dw))))
    worst = max(worst, float(np.max(np.abs(
        convolve(ctx, dw, dw) - q * q * (q - 1) * sign * d1))))
    return worst


def intertwiner_idempotents(ctx, bchar):
    """The two idempotents of the rank-two Hecke algebra attached to a
    self-dual inducing character.

    Returns ((c1, cw_plus), (c1, cw_minus), kappa, defect): each
    idempotent is c1 Delta_1 + cw Delta_w with
    c1 = 1/(2q(q-1)) and cw = +- i^kappa q^(-1/2) c1, where kappa = 0
    when chi(-1) = 1 and kappa = 1 when chi(-1) = -1."""
    if ctx.kind != "sl2":
        raise GroupMismatch("idempotents are built on sl2")
    chi = bchar.chars[0]
    if not chi.is_quadratic:
        raise CharMismatch("inducing character must be the nontrivial "
                           "quadratic character")
    q = ctx.q
    sign = chi.values[int(ctx.field.neg(1))]
    kappa = 0 if abs(sign - 1) < 1e-12 else 1
    d1, dw = delta_kernels(ctx, bchar)
    c1 = 1.0 / (2 * q * (q - 1))
    cw = (1j ** kappa) * c1 / np.sqrt(q)
    e_plus = c1 * d1 + cw * dw
    e_minus = c1 * d1 - cw * dw
    ident = d1 / (q * (q - 1))
    worst = 0.0
    for e in (e_plus, e_minus):
        worst = max(worst, float(np.max(np.abs(convolve(ctx, e, e) - e))))
    worst = max(worst, float(np.max(np.abs(convolve(ctx, e_plus, e_minus)))))
    worst = max(worst, float(np.max(np.abs(convolve(ctx, e_minus, e_plus)))))
    worst = max(worst, float(np.max(np.abs(e_plus + e_minus - ident))))
    if worst > get_tol():
        raise VerificationFailed(f"idempotent identities fail, defect {worst}")
    return (c1, cw), (c1, -cw), kappa, worst
