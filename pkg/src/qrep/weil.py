"""Heisenberg groups, the oscillator construction, and the cuspidal
representations it produces.

The Heisenberg group H(G) of a finite abelian G has elements (x, chi, z)
with x in G, chi in the dual (identified with G through a fixed
pairing), z a root of unity of order m = exp(G), and multiplication
(x, c, z)(x', c', z') = (x + x', c + c', z z' c(x')).  For G = F_{q^2}
the pairing is chi_y(x) = psi(tr(conj(y) x)), with psi the canonical
additive character of F_q and tr the relative trace.

SL2(F_q) acts on H(F_{q^2}) by automorphisms fixing the center; pushing
that action through the canonical model of the irreducible
representation with tautological central character yields the
normalized operators rho~ on L^2(F_{q^2}):

  rho~(a b; c d) f(x) = psi(d c N(x)) f(d x)                  if b = 0
  rho~(a b; c d) f(x) = -(1/q) sum_y psi((d N(x) - tr(conj(y) x)
                          + a N(y)) / b) f(y)                 if b != 0

which is multiplicative on the nose.  Cuspidal representations are cut
out of this model by a character omega of the norm-one subgroup (SL2)
or of the full F_{q^2}^* (GL2, after extending by an operator for
diag(1, a)).
"""

import numpy as np

from .config import get_tol
from .errors import (EvenExponent, EvenQ, GroupMismatch, NotPrimitive,
                     NotSL2, SizeExceeded, VerificationFailed)
from .ff import AddChar, MultChar, NormOneChar, is_primitive
from .gl2 import GroupCtx
from .parabolic import sl2_generators, two_dim_commutant_projectors
from .repcore import (ClassFunction, FiniteGroupView, MatrixRep,
                      character_table_bruteforce, inner_product,
                      rep_character)

MAX_H = 1 << 18


def _lcm(vals):
    out = 1
    for v in vals:
        g, a = out, v
        while a:
            g, a = a, g % a
        out = out * v // g
    return out


class HeisenbergCtx:
    """Either the abstract H(prod Z/n_i) with the standard pairing, or
    H(F_{q^2}) with the trace-form pairing.  Elements are encoded as
    x + nG (c + nG z) with z an exponent mod m."""

    def __init__(self, orders=None, ectx=None):
        if (orders is None) == (ectx is None):
            raise GroupMismatch("give exactly one of orders, ectx")
        self.ectx = ectx
        if ectx is not None:
            self.nG = ectx.ext.q
            self.m = ectx.p
            self.orders = [ectx.p] * ectx.ext.k
        else:
            self.orders = [int(o) for o in orders]
            self.nG = 1
            for o in self.orders:
                self.nG *= o
            self.m = _lcm(self.orders)
        self.nH = self.nG * self.nG * self.m
        if self.nH > MAX_H:
            raise SizeExceeded(f"|H| = {self.nH} exceeds {MAX_H}")
        if ectx is None:
            places = []
            acc = 1
            for o in self.orders:
                places.append(acc)
                acc *= o
            self._places = np.array(places, dtype=np.int64)
            self._omod = np.array(self.orders, dtype=np.int64)
            self._weights = np.array([self.m // o for o in self.orders],
                                     dtype=np.int64)

    # --- the abelian group G and its self-pairing ---

    def g_add(self, x, y):
        if self.ectx is not None:
            return self.ectx.ext.add(x, y)
        dx = (np.asarray(x)[..., None] // self._places) % self._omod
        dy = (np.asarray(y)[..., None] // self._places) % self._omod
        return ((dx + dy) % self._omod) @ self._places

    def g_neg(self, x):
        if self.ectx is not None:
            return self.ectx.ext.neg(x)
        dx = (np.asarray(x)[..., None] // self._places) % self._omod
        return ((-dx) % self._omod) @ self._places

    def pair_exp(self, c, x):
        """Exponent e with chi_c(x) = zeta_m^e."""
        if self.ectx is not None:
            ext = self.ectx.ext
            return ext.trace_to_prime[ext.mul(self.ectx.frob[c], x)]
        dc = (np.asarray(c)[..., None] // self._places) % self._omod
        dx = (np.asarray(x)[..., None] // self._places) % self._omod
        return (dc * dx * self._weights).sum(axis=-1) % self.m

    # --- H itself ---

    def encode(self, x, c, z):
        return (np.asarray(x) + self.nG * (np.asarray(c)
                + self.nG * (np.asarray(z) % self.m)))

    def decode(self, h):
        h = np.asarray(h)
        return h % self.nG, (h // self.nG) % self.nG, h // (self.nG * self.nG)

    def h_mul(self, h1, h2):
        x1, c1, z1 = self.decode(np.asarray(h1))
        x2, c2, z2 = self.decode(np.asarray(h2))
        x1, c1, z1, x2, c2, z2 = np.broadcast_arrays(x1, c1, z1, x2, c2, z2)
        return self.encode(self.g_add(x1, x2), self.g_add(c1, c2),
                           (z1 + z2 + self.pair_exp(c1, x2)) % self.m)

    def h_inv_array(self):
        h = np.arange(self.nH)
        x, c, z = self.decode(h)
        return self.encode(self.g_neg(x), self.g_neg(c),
                           (-z + self.pair_exp(c, x)) % self.m)

    def view(self):
        if not hasattr(self, "_view"):
            self._view = FiniteGroupView(self.nH, self.h_mul,
                                         inv=self.h_inv_array(), identity=0)
        return self._view

    # --- symplectic presentation, for 2 invertible mod m ---

    def _inv2(self):
        if self.m % 2 == 0:
            raise EvenExponent("2 is not invertible mod the exponent")
        return (self.m + 1) // 2

    def symplectic_mul(self, h1, h2):
        """Multiplication with the antisymmetric cocycle
        (1/2)(chi(x') - chi'(x))."""
        i2 = self._inv2()
        x1, c1, z1 = self.decode(np.asarray(h1))
        x2, c2, z2 = self.decode(np.asarray(h2))
        x1, c1, z1, x2, c2, z2 = np.broadcast_arrays(x1, c1, z1, x2, c2, z2)
        zz = (z1 + z2 + i2 * (self.pair_exp(c1, x2)
                              - self.pair_exp(c2, x1))) % self.m
        return self.encode(self.g_add(x1, x2), self.g_add(c1, c2), zz)

    def to_symplectic(self, h):
        """The bijection phi(x, c, z) = (x, c, z chi_c(-x/2)) carrying
        standard multiplication to symplectic multiplication."""
        i2 = self._inv2()
        x, c, z = self.decode(np.asarray(h))
        return self.encode(x, c, (z - i2 * self.pair_exp(c, x)) % self.m)


def heisenberg_group(orders):
    return HeisenbergCtx(orders=orders)


def heisenberg_from_ext(ectx):
    return HeisenbergCtx(ectx=ectx)


def symplectic_defect(hctx, max_pairs=1 << 22, sample=None, seed=20070714):
    """Exact count of pairs violating phi(h h') = phi(h) *_symp phi(h').

    Pairs are exhausted (chunked) when n^2 <= max_pairs; otherwise
    `sample` seeded random pairs are checked, or SizeExceeded is raised
    when no sample size was given."""
    n = hctx.nH
    if n * n > max_pairs:
        if sample is None:
            raise SizeExceeded("too many pairs for the symplectic check")
        rng = np.random.default_rng(seed)
        h1 = rng.integers(0, n, sample)
        h2 = rng.integers(0, n, sample)
        lhs = hctx.to_symplectic(hctx.h_mul(h1, h2))
        rhs = hctx.symplectic_mul(hctx.to_symplectic(h1),
                                  hctx.to_symplectic(h2))
        return int(np.sum(lhs != rhs))
    allh = np.arange(n)
    bad = 0
    for h in allh:
        lhs = hctx.to_symplectic(hctx.h_mul(h, allh))
        rhs = hctx.symplectic_mul(hctx.to_symplectic(h),
                                  hctx.to_symplectic(allh))
        bad += int(np.sum(lhs != rhs))
    return bad


def heisenberg_rep(hctx):
    """The canonical model on L^2(G):
    (eta(x', c', z') f)(x) = zeta^z' chi_c'(x - x') f(x - x').
    Dense images; |H| is capped at 4096 here."""
    if hctx.nH > 4096:
        raise SizeExceeded("dense Heisenberg images need |H| <= 4096")
    nG, m = hctx.nG, hctx.m
    xs = np.arange(nG)
    images = np.zeros((hctx.nH, nG, nG), dtype=complex)
    for h in range(hctx.nH):
        x1, c1, z1 = (int(t) for t in hctx.decode(h))
        src = hctx.g_add(xs, hctx.g_neg(x1))       # x - x'
        e = (z1 + hctx.pair_exp(np.full(nG, c1), src)) % m
        images[h, xs, src] = np.exp(2j * np.pi * e / m)
    return MatrixRep(hctx.view(), images)


def svn_check(hctx):
    """Stone-von-Neumann uniqueness by brute force: the canonical model
    is irreducible, and the full character table (class-algebra method)
    contains exactly one irreducible whose central character is the
    tautological z -> z, namely the canonical model's.

    Only for |G| <= 16.  Returns True; raises VerificationFailed with
    the offending datum otherwise."""
    if hctx.nG > 16:
        raise SizeExceeded("svn check is restricted to |G| <= 16")
    view = hctx.view()
    rep = heisenberg_rep(hctx)
    worst = rep.check_homomorphism()
    if worst > get_tol():
        raise VerificationFailed(f"canonical model not multiplicative: {worst}")
    chi = rep_character(rep)
    ip = inner_product(chi, chi)
    if abs(ip - 1) > get_tol():
        raise VerificationFailed(f"canonical model reducible: <chi,chi> = {ip}")

    # central elements act by the tautological scalar
    z0 = int(hctx.encode(0, 0, 1))
    zeta = np.exp(2j * np.pi / hctx.m)
    if np.max(np.abs(rep.images[z0] - zeta * np.eye(hctx.nG))) > get_tol():
        raise VerificationFailed("center does not act tautologically")

    table = character_table_bruteforce(view)
    idc = int(view.class_of[view.identity])
    zc = int(view.class_of[z0])
    hits = []
    for r in range(table.shape[0]):
        if abs(table[r, zc] / table[r, idc] - zeta) < 1e-8:
            hits.append(r)
    if len(hits) != 1:
        raise VerificationFailed(
            f"{len(hits)} irreducibles with tautological central character")
    got = table[hits[0]]
    want = chi.values
    if np.max(np.abs(got - want)) > 1e-8:
        raise VerificationFailed("tautological irreducible != canonical model")
    return True


def fourier_intertwines(hctx):
    """Max defect of FT o eta(h) = eta^(h) o FT over every h in H, where
    eta^ is the dual-model action
    (eta^(x', c', z') F)(c) = zeta^z' chi_c(x')^{-1} F(c - c').

    Works by permutation/phase indexing, so the full H(F_81) is feasible.
    The center scales both sides by the same literal zeta^z' prefactor,
    so checking every (x', c') at z' = 0 covers all of H."""
    nG, m = hctx.nG, hctx.m
    cs = np.arange(nG)
    xs = np.arange(nG)
    pair_all = np.empty((nG, nG), dtype=np.int64)
    for c in cs:
        pair_all[c] = hctx.pair_exp(np.full(nG, c), xs)
    FT = np.exp(-2j * np.pi * pair_all / m)  # FT[c, x] = conj(chi_c(x))

    worst = 0.0
    for x1 in range(nG):
        shifted = np.asarray(hctx.g_add(xs, x1))        # x + x'
        for c1 in range(nG):
            # LHS[c, x] = FT[c, x + x'] * chi_c'(x)
            lhs = FT[:, shifted] * np.exp(2j * np.pi * pair_all[c1] / m)[None, :]
            # RHS[c, x] = chi_c(x')^{-1} FT[c - c', x]
            src = np.asarray(hctx.g_add(cs, hctx.g_neg(c1)))
            rhs = FT[src, :] * np.exp(-2j * np.pi * pair_all[:, x1] / m)[:, None]
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


# --- the normalized SL2 operators on L^2(F_{q^2}) ---

def _weil_cache(ectx):
    if not hasattr(ectx, "_weil_cache"):
        base, ext = ectx.base, ectx.ext
        Q = ext.q
        idx = np.arange(Q)
        # TP[x, y] = tr(conj(y) x), a base-field index
        TP = ectx.trace[ext.mul(idx[:, None], ectx.frob[idx][None, :])]
        psi = AddChar(base)
        ectx._weil_cache = {
            "TP": TP,
            "psi": psi,
            "inv2": int(base.inv(2 % base.q)) if base.q % 2 else None,
        }
    return ectx._weil_cache


def weil_matrix(ectx, sigma):
    """The operator rho~(sigma) on L^2(F_{q^2}) as a q^2 x q^2 matrix,
    rows indexed by the argument x.  sigma = (a, b, c, d) base-field
    indices with determinant 1."""
    base, ext = ectx.base, ectx.ext
    q, Q = base.q, ext.q
    if q % 2 == 0:
        raise EvenQ("odd q required")
    a, b, c, d = (int(t) for t in sigma)
    det = int(base.sub(base.mul(a, d), base.mul(b, c)))
    if det != 1:
        raise NotSL2(f"det {det} != 1")
    cache = _weil_cache(ectx)
    psi = cache["psi"].values
    Nx = ectx.norm
    idx = np.arange(Q)
    if b == 0:
        M = np.zeros((Q, Q), dtype=complex)
        cols = ext.mul(d, idx)
        M[idx, cols] = psi[base.mul(base.mul(d, c), Nx)]
        return M
    binv = int(base.inv(b))
    arg = base.mul(binv, base.sub(
        base.add(base.mul(d, Nx)[:, None], base.mul(a, Nx)[None, :]),
        cache["TP"]))
    return (-1.0 / q) * psi[arg]


class WeilCtx:
    """rho~ for every element of SL2(F_q), with lazy per-element caching
    of the dense q^2 x q^2 images."""

    def __init__(self, ectx, slctx=None):
        if ectx.q % 2 == 0:
            raise EvenQ("odd q required")
        self.ectx = ectx
        self.slctx = slctx if slctx is not None else GroupCtx("sl2", ectx.base)
        if self.slctx.field is not ectx.base:
            raise GroupMismatch("sl2 context must live over the base field")
        self.psi = _weil_cache(ectx)["psi"]
        self._images = {}

    def image(self, gid):
        gid = int(gid)
        if gid not in self._images:
            self._images[gid] = weil_matrix(self.ectx, self.slctx.mat_of(gid))
        return self._images[gid]

    def all_images(self):
        n = self.slctx.n
        out = np.empty((n, self.ectx.ext.q, self.ectx.ext.q), dtype=complex)
        for g in range(n):
            out[g] = self.image(g)
        return out


def _word_for(ctx, mat):
    """Generator word for an SL2 element: t(a) u(ac) when b = 0, else
    u(d/b) w u(ab) t(1/b), with u lower triangular."""
    F = ctx.field
    a, b, c, d = (int(t) for t in mat)
    if b == 0:
        return [ctx.t_id(a), ctx.lower_id(int(F.mul(a, c)))]
    return [ctx.lower_id(int(F.mul(d, F.inv(b)))), ctx.w_id(),
            ctx.lower_id(int(F.mul(a, b))), ctx.t_id(int(F.inv(b)))]


def verify_ordinary(ectx, mode="all", seed=20070714, sample=1000):
    """Multiplicativity and normalization checks for rho~.

    mode "all": every pair of group elements (use for q <= 5).
    mode "sampled": all pairs from the generator panel {t(a)} u {w} u
    {u(c)} plus `sample` seeded random pairs.

    Always also checks, for every single element, that rho~ equals the
    product of rho~ over a generator word, and pins the normalization:
    rho~(w) 1_0 evaluated at 0 equals -1/q, and
    (rho~(sigma) 1_0)(x) = -(1/q) psi(d b^{-1} N(x)) for b != 0.

    Returns {"mode", "pairs", "max_defect", "word_defect", "norm_defect"}.
    """
    W = WeilCtx(ectx)
    ctx = W.slctx
    n = ctx.n
    q = ectx.q

    if mode == "all":
        pairs = np.stack(np.meshgrid(np.arange(n), np.arange(n),
                                     indexing="ij"), axis=-1).reshape(-1, 2)
    elif mode == "sampled":
        F = ctx.field
        panel = [ctx.t_id(a) for a in range(1, q)]
        panel += [ctx.w_id()]
        panel += [ctx.lower_id(cc) for cc in range(q)]
        panel = np.array(sorted(set(panel)), dtype=np.int64)
        pgrid = np.stack(np.meshgrid(panel, panel, indexing="ij"),
                         axis=-1).reshape(-1, 2)
        rng = np.random.default_rng(seed)
        rnd = rng.integers(0, n, size=(sample, 2))
        pairs = np.vstack([pgrid, rnd])
    else:
        raise GroupMismatch(f"unknown mode {mode!r}")

    worst = 0.0
    for g1, g2 in pairs:
        m1 = W.image(g1)
        m2 = W.image(g2)
        m12 = W.image(ctx.view.mul(int(g1), int(g2)))
        worst = max(worst, float(np.max(np.abs(m1 @ m2 - m12))))

    word_worst = 0.0
    for g in range(n):
        word = _word_for(ctx, ctx.mat_of(g))
        acc = W.image(word[0])
        for piece in word[1:]:
            acc = acc @ W.image(piece)
        word_worst = max(word_worst, float(np.max(np.abs(acc - W.image(g)))))

    # normalization: rho~(sigma) delta_0 at 0 is -1/q whenever b != 0
    norm_worst = 0.0
    delta0 = np.zeros(ectx.ext.q)
    delta0[0] = 1.0
    psi = W.psi.values
    base = ectx.base
    for g in range(n):
        a, b, c, d = ctx.mat_of(g)
        if b == 0:
            continue
        out = W.image(g) @ delta0
        norm_worst = max(norm_worst, abs(out[0] - (-1.0 / q)))
        pred = (-1.0 / q) * psi[base.mul(base.mul(d, base.inv(b)), ectx.norm)]
        norm_worst = max(norm_worst, float(np.max(np.abs(out - pred))))

    return {"mode": mode, "pairs": int(len(pairs)),
            "max_defect": float(worst), "word_defect": float(word_worst),
            "norm_defect": float(norm_worst)}


# --- the averaging intertwiner, built from the Heisenberg action ---

def _half_psi_exponent(ectx, z):
    """Exponent e (mod p) with psi((1/2) tr z) = zeta_p^e for ext
    indices z."""
    base = ectx.base
    inv2 = _weil_cache(ectx)["inv2"]
    return base.trace_to_prime[base.mul(inv2, ectx.trace[z])]


def sigma_action(ectx, sigma, x, y, zphase):
    """The SL2 automorphism of H(F_{q^2}) in coordinates (x, y, z):
    (x, y) -> (a x + b y, c x + d y) with a twist
    psi((1/2) tr(-conj(y) x + conj(c x + d y)(a x + b y))) on z."""
    ext = ectx.ext
    a, b, c, d = (int(t) for t in sigma)
    X = ext.add(ext.mul(a, x), ext.mul(b, y))
    Y = ext.add(ext.mul(c, x), ext.mul(d, y))
    t1 = ext.neg(ext.mul(ectx.frob[y], x))
    t2 = ext.mul(ectx.frob[Y], X)
    e = _half_psi_exponent(ectx, ext.add(t1, t2))
    return X, Y, zphase * np.exp(2j * np.pi * e / ectx.p)


def nu_from_action(ectx, sigma):
    """The averaging intertwiner specialized to the induced model:
    (nu(sigma) f~)(x) = (1/q^2) sum_y f(^sigma((-x, y, psi(tr(-conj(y) x)))))
    with f read off through f(x, y, z) = z psi(tr(conj(y) x))^{-1} f~(-x)."""
    ext = ectx.ext
    Q = ext.q
    base = ectx.base
    psi_exp = ext.trace_to_prime  # absolute trace exponent of psi on the ext
    M = np.zeros((Q, Q), dtype=complex)
    ys = np.arange(Q)
    for x in range(Q):
        xg = int(ext.neg(x))
        # h = (0, y, 1)(xg, 0, 1) = (xg, y, psi(tr(conj(y) xg)))
        z0 = np.exp(2j * np.pi * psi_exp[ext.mul(ectx.frob[ys], xg)] / ectx.p)
        X, Y, Z = sigma_action(ectx, sigma, np.full(Q, xg), ys, z0)
        # f(X, Y, Z) = Z conj(psi(tr(conj(Y) X))) f~(-X)
        coeff = Z * np.exp(-2j * np.pi * psi_exp[ext.mul(ectx.frob[Y], X)] / ectx.p)
        np.add.at(M, (np.full(Q, x), np.asarray(ext.neg(X))), coeff)
    return M / Q


def rho_special(ectx, sigma):
    """The un-normalized intertwiner in closed form:
    (rho(sigma) f~)(x) = (1/q^2) sum_y psi((1/2) tr(-conj(y) x
        - conj(c x + a y)(-d x - b y))) f~(d x + b y)."""
    ext = ectx.ext
    Q = ext.q
    a, b, c, d = (int(t) for t in sigma)
    xs = np.arange(Q)
    M = np.zeros((Q, Q), dtype=complex)
    for y in range(Q):
        u = ext.add(ext.mul(c, xs), int(ext.mul(a, y)))
        v = ext.neg(ext.add(ext.mul(d, xs), int(ext.mul(b, y))))
        z = ext.neg(ext.add(ext.mul(ectx.frob[y], xs), ext.mul(ectx.frob[u], v)))
        e = _half_psi_exponent(ectx, z)
        coeff = np.exp(2j * np.pi * e / ectx.p)
        tgt = np.asarray(ext.add(ext.mul(d, xs), int(ext.mul(b, y))))
        np.add.at(M, (xs, tgt), coeff)
    return M / Q


def averaging_check(ectx):
    """At q = 3 (cheap anywhere): nu built from the Heisenberg action
    agrees with the closed-form rho at sigma^{-1}, and rho agrees with
    the normalized rho~ up to the per-element scalar (1 for b = 0, -q
    otherwise).  Returns the max defects."""
    ctx = GroupCtx("sl2", ectx.base)
    worst_nu = 0.0
    worst_scale = 0.0
    for g in range(ctx.n):
        mat = ctx.mat_of(g)
        ginv = ctx.mat_of(int(ctx.view.inv[g]))
        nu = nu_from_action(ectx, mat)
        rs = rho_special(ectx, ginv)
        worst_nu = max(worst_nu, float(np.max(np.abs(nu - rs))))
        rho = rho_special(ectx, mat)
        tilde = weil_matrix(ectx, mat)
        scal = 1.0 if mat[1] == 0 else -float(ectx.q)
        worst_scale = max(worst_scale, float(np.max(np.abs(scal * rho - tilde))))
    return {"nu_vs_rho": worst_nu, "rho_vs_normalized": worst_scale}


# --- cuspidal modules ---

class CuspidalModule:
    """The omega-isotypic model W_omega inside L^2(F_{q^2}): functions
    with f(y x) = omega(y)^{-1} f(x) for norm-one y, spanned by the
    indicators 1_u of the norm fibers, normalized by 1_u(u~) = 1 at the
    smallest-index point u~ of the fiber over u."""

    def __init__(self, ectx, omega):
        if ectx.q % 2 == 0:
            raise EvenQ("odd q required")
        if isinstance(omega, MultChar):
            if omega.ctx is not ectx.ext:
                raise GroupMismatch("character lives on the wrong field")
            if not is_primitive(omega):
                raise NotPrimitive("a GL2 cuspidal datum must be primitive")
            self.kind = "gl2"
        elif isinstance(omega, NormOneChar):
            if omega.ectx is not ectx:
                raise GroupMismatch("character lives on the wrong extension")
            if omega.is_trivial:
                raise NotPrimitive("an SL2 cuspidal datum must be nontrivial")
            self.kind = "sl2"
        else:
            raise GroupMismatch("omega must be MultChar or NormOneChar")
        self.ectx = ectx
        self.omega = omega
        q = ectx.q
        ext = ectx.ext
        basis = np.zeros((ext.q, q - 1), dtype=complex)
        u_tilde = np.zeros(q - 1, dtype=np.int64)
        for col, u in enumerate(range(1, q)):
            fiber = np.flatnonzero(ectx.norm == u)
            ut = int(fiber.min())
            u_tilde[col] = ut
            zx = ext.mul(fiber, int(ext.inv_table[ut]))
            basis[fiber, col] = np.conj(omega.values[zx])
        self.basis = basis
        self.u_tilde = u_tilde
        self.dim = q - 1

    def restrict(self, M, tol=None):
        """Compress a full-space operator that preserves W_omega to the
        1_u basis; the invariance is verified to tolerance."""
        tol = get_tol() if tol is None else tol
        C = M @ self.basis
        R = C[self.u_tilde, :]
        defect = float(np.max(np.abs(C - self.basis @ R)))
        if defect > tol:
            raise VerificationFailed(f"W_omega is not preserved, defect {defect}")
        return R


def cuspidal_module(ectx, omega):
    return CuspidalModule(ectx, omega)


def _gl2_full_operator(module, glctx, mat, sigma_cache):
    """pi_omega(g) = E_{det g} rho~(sigma) for g = diag(1, det g) sigma."""
    ectx = module.ectx
    ext = ectx.ext
    F = glctx.field
    det = int(glctx.mat_det(np.asarray(mat)))
    dinv = int(F.inv(det))
    sig = tuple(int(t) for t in
                glctx.mat_mul(np.array([1, 0, 0, dinv]), np.asarray(mat)))
    if sig not in sigma_cache:
        sigma_cache[sig] = weil_matrix(ectx, sig)
    Ms = sigma_cache[sig]
    atil = int(np.flatnonzero(ectx.norm == det).min())
    perm = np.asarray(ext.mul(atil, np.arange(ext.q)))
    return complex(module.omega.values[atil]) * Ms[perm, :]


def pi_omega_character(module, gctx):
    """Character of the cuspidal representation on the given group
    context, together with construction-time checks: the restricted
    images exist (W_omega invariance), the degree is q - 1, and the
    averaged upper-unipotent action on W_omega vanishes (cuspidality at
    the level of N-fixed vectors)."""
    if gctx.kind != module.kind:
        raise GroupMismatch(f"module is {module.kind}, group is {gctx.kind}")
    if gctx.field is not module.ectx.base:
        raise GroupMismatch("group field != module base field")
    ectx = module.ectx
    q = ectx.q
    sigma_cache = getattr(gctx, "_weil_sigma_cache", None)
    if sigma_cache is None:
        sigma_cache = {}
        gctx._weil_sigma_cache = sigma_cache

    vals = []
    for rid in gctx.view.reps:
        mat = gctx.mat_of(int(rid))
        if module.kind == "sl2":
            full = weil_matrix(ectx, mat)
        else:
            full = _gl2_full_operator(module, gctx, mat, sigma_cache)
        R = module.restrict(full)
        vals.append(np.trace(R))
    f = ClassFunction(gctx.view, np.array(vals, dtype=complex))

    tol = get_tol()
    if abs(f.values[gctx.class_index_of((1, 0, 0, 1))] - (q - 1)) > tol:
        raise VerificationFailed("cuspidal degree != q - 1")
    acc = np.zeros((q - 1, q - 1), dtype=complex)
    for x in range(q):
        acc += module.restrict(weil_matrix(ectx, (1, x, 0, 1)))
    if float(np.max(np.abs(acc / q))) > tol:
        raise VerificationFailed("nonzero N-fixed vectors in W_omega")
    return f


def gl2_cuspidal_family(ectx, glctx):
    """One cuspidal character per Frobenius orbit {omega, omega^q} of
    primitive characters of F_{q^2}^*; (q^2-q)/2 in total.  The two
    members of each orbit are both computed and checked to give the
    same character, and the anisotropic values are cross-checked
    against -(omega(z) + omega(conj z)) for z a root of the class's
    characteristic polynomial."""
    if glctx.kind != "gl2":
        raise GroupMismatch("need a gl2 context")
    ext = ectx.ext
    q = ectx.q
    Q1 = ext.q - 1
    tol = get_tol()
    seen = set()
    out = []
    for j in range(1, Q1):
        if j % (q + 1) == 0 or j in seen:
            continue
        partner = (j * q) % Q1
        seen.update({j, partner})
        om = MultChar(ext, j)
        f = pi_omega_character(cuspidal_module(ectx, om), glctx)
        f2 = pi_omega_character(cuspidal_module(ectx, MultChar(ext, partner)), glctx)
        if float(np.max(np.abs(f.values - f2.values))) > tol:
            raise VerificationFailed("omega and omega^q give different characters")
        for ci, cls in enumerate(glctx.conj_classes):
            if cls.tag != "anisotropic":
                continue
            det_i, tr_i = cls.params
            lam = np.arange(ext.q)
            vals = ext.add(ext.sub(ext.mul(lam, lam), ext.mul(tr_i, lam)), det_i)
            roots = lam[np.asarray(vals) == 0]
            if len(roots) != 2:
                raise VerificationFailed("anisotropic class has no ext roots")
            z = int(roots[0])
            want = -(om.values[z] + om.values[int(ectx.frob[z])])
            if abs(f.values[ci] - want) > tol:
                raise VerificationFailed("anisotropic cuspidal value mismatch")
        out.append(((j, partner), f))
    if len(out) != (q * q - q) // 2:
        raise VerificationFailed("wrong number of cuspidal orbits")
    return out


def sl2_cuspidal_family(ectx, slctx):
    """All cuspidal data for SL2: the (q-1)/2 characters pi_omega of
    degree q-1 for inverse-pairs {omega, omega^{-1}} of nontrivial
    non-quadratic norm-one characters, plus the quadratic omega_0 whose
    module splits into two halves of degree (q-1)/2.

    Returns {"cuspidal": [(j, character), ...],
             "omega0": {"character", "plus", "minus",
                        "sum_traces", "sum_abs_squares"}}."""
    if slctx.kind != "sl2":
        raise GroupMismatch("need an sl2 context")
    q = ectx.q
    tol = get_tol()
    out = []
    for j in range(1, (q + 1) // 2):
        om = NormOneChar(ectx, j)
        f = pi_omega_character(cuspidal_module(ectx, om), slctx)
        finv = pi_omega_character(
            cuspidal_module(ectx, om.conj()), slctx)
        if float(np.max(np.abs(f.values - finv.values))) > tol:
            raise VerificationFailed("omega and omega^{-1} differ")
        ip = inner_product(f, f)
        if abs(ip - 1) > tol:
            raise VerificationFailed(f"pi_omega reducible: <chi,chi> = {ip}")
        out.append((j, f))
    if len(out) != (q - 1) // 2:
        raise VerificationFailed("wrong number of sl2 cuspidal pairs")

    om0 = NormOneChar(ectx, (q + 1) // 2)
    module = CuspidalModule(ectx, om0)
    chi0 = pi_omega_character(module, slctx)
    ip = inner_product(chi0, chi0)
    if abs(ip - 2) > tol:
        raise VerificationFailed(f"<chi,chi> = {ip} for omega_0, expected 2")
    gens = sl2_generators(slctx)
    gen_mats = [module.restrict(weil_matrix(ectx, slctx.mat_of(g))) for g in gens]
    P1, P2 = two_dim_commutant_projectors(gen_mats)
    rep_mats = np.stack([module.restrict(weil_matrix(ectx, slctx.mat_of(int(r))))
                         for r in slctx.view.reps])
    f1 = ClassFunction(slctx.view, np.einsum("ij,nji->n", P1, rep_mats))
    f2 = ClassFunction(slctx.view, np.einsum("ij,nji->n", P2, rep_mats))
    want = (q - 1) // 2
    ident = slctx.class_index_of((1, 0, 0, 1))
    for f in (f1, f2):
        if abs(f.values[ident] - want) > tol:
            raise VerificationFailed("half has wrong degree")
        if abs(inner_product(f, f) - 1) > tol:
            raise VerificationFailed("half is not irreducible")
    if float(np.max(np.abs((f1 + f2).values - chi0.values))) > tol:
        raise VerificationFailed("halves do not sum to the omega_0 character")
    u = slctx.class_index_of((1, 1, 0, 1))
    key = lambda z: (round(z.real, 9), round(z.imag, 9))
    plus, minus = (f1, f2) if key(f1.values[u]) >= key(f2.values[u]) else (f2, f1)

    sizes = slctx.view.sizes
    sum_traces = complex(np.sum(sizes * chi0.values))
    sum_abs2 = float(np.sum(sizes * np.abs(chi0.values) ** 2))
    return {"cuspidal": out,
            "omega0": {"character": chi0, "plus": plus, "minus": minus,
                       "sum_traces": sum_traces,
                       "sum_abs_squares": sum_abs2}}
