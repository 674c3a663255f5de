"""Group views, class functions, matrix representations, induction.

A FiniteGroupView addresses group elements by integer indices 0..n-1
and exposes a vectorized multiplication callback; no n x n table is
ever materialized, so the same machinery serves cyclic toy groups and
GL2 over F_11 alike.  Conjugacy classes are computed by conjugating a
representative by every group element in one vectorized sweep, which is
exact and cheap (order n work per class).
"""

import numpy as np

from .config import get_tol
from .errors import (GroupMismatch, NonIntegral, NotInGroup, NotNormal,
                     SizeExceeded, VerificationFailed)


class FiniteGroupView:
    """n, mul(a, b) vectorized over int arrays, inv array, identity,
    classes as a list of (representative, members) pairs, class_of map.

    If classes is given it must be a complete partition (it is checked);
    otherwise classes are found in increasing order of their smallest
    member, which makes the ordering deterministic.
    """

    def __init__(self, n, mul, inv=None, identity=0, classes=None):
        self.n = int(n)
        self.mul = mul
        self.identity = int(identity)
        if inv is None:
            if self.n > 4096:
                raise SizeExceeded("inverse search needs n <= 4096")
            inv = np.empty(self.n, dtype=np.int64)
            allg = np.arange(self.n)
            for a in range(self.n):
                hits = np.flatnonzero(mul(a, allg) == self.identity)
                inv[a] = hits[0]
        self.inv = np.asarray(inv, dtype=np.int64)
        if classes is None:
            classes = self._find_classes()
        self.classes = [(int(r), np.asarray(m, dtype=np.int64)) for r, m in classes]
        self.class_of = np.full(self.n, -1, dtype=np.int64)
        for ci, (_, members) in enumerate(self.classes):
            self.class_of[members] = ci
        if (self.class_of < 0).any():
            raise VerificationFailed("classes do not cover the group")
        self.sizes = np.array([len(m) for _, m in self.classes], dtype=np.int64)
        if int(self.sizes.sum()) != self.n:
            raise VerificationFailed("class sizes do not sum to |G|")
        self.reps = np.array([r for r, _ in self.classes], dtype=np.int64)

    def _find_classes(self):
        allg = np.arange(self.n)
        seen = np.zeros(self.n, dtype=bool)
        out = []
        for x in range(self.n):
            if seen[x]:
                continue
            orbit = np.unique(self.mul(self.mul(allg, x), self.inv[allg]))
            seen[orbit] = True
            out.append((x, orbit))
        return out

    def conjugate(self, g, x):
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv[g])


def abelian_view(orders):
    """Direct product of cyclic groups Z/n_1 x ... indexed little-endian."""
    orders = [int(o) for o in orders]
    n = 1
    for o in orders:
        n *= o
    places = []
    acc = 1
    for o in orders:
        places.append(acc)
        acc *= o
    places = np.array(places, dtype=np.int64)
    omod = np.array(orders, dtype=np.int64)

    def digits(x):
        return (np.asarray(x)[..., None] // places) % omod

    def mul(a, b):
        return ((digits(a) + digits(b)) % omod) @ places

    inv = ((-digits(np.arange(n))) % omod) @ places
    return FiniteGroupView(n, mul, inv=inv, identity=0)


class ClassFunction:
    """A complex-valued function constant on conjugacy classes, stored
    by class index in the order of view.classes."""

    def __init__(self, view, values):
        values = np.asarray(values, dtype=complex)
        if values.shape != (len(view.classes),):
            raise GroupMismatch("value count != class count")
        self.view = view
        self.values = values

    def at_element(self, g):
        return self.values[self.view.class_of[g]]

    def _coerce(self, other):
        if isinstance(other, ClassFunction):
            if other.view is not self.view:
                raise GroupMismatch("class functions live on different groups")
            return other.values
        return other

    def __add__(self, other):
        return ClassFunction(self.view, self.values + self._coerce(other))

    def __sub__(self, other):
        return ClassFunction(self.view, self.values - self._coerce(other))

    def __mul__(self, other):
        return ClassFunction(self.view, self.values * self._coerce(other))

    def conj(self):
        return ClassFunction(self.view, self.values.conj())


def inner_product(f, g):
    """<f, g> = (1/|G|) sum over classes |C| f(C) conj(g(C))."""
    if f.view is not g.view:
        raise GroupMismatch("inner product across different groups")
    v = f.view
    return complex(np.sum(v.sizes * f.values * np.conj(g.values)) / v.n)


def hom_dim(f, g, tol=None):
    """<f, g> rounded to a nonnegative integer; NonIntegral if it is not
    one beyond 1e-4, which would mean f or g is not a genuine character."""
    val = inner_product(f, g)
    r = round(val.real)
    if abs(val - r) > 1e-4 or r < 0:
        raise NonIntegral(f"inner product {val} is not a nonnegative integer")
    return int(r)


class SubgroupEmbedding:
    """An injection H -> G verified to be a group homomorphism on every
    pair of H elements."""

    def __init__(self, sub, big, injection):
        injection = np.asarray(injection, dtype=np.int64)
        if injection.shape != (sub.n,):
            raise GroupMismatch("injection length != |H|")
        if len(np.unique(injection)) != sub.n:
            raise NotInGroup("injection is not injective")
        self.sub = sub
        self.big = big
        self.injection = injection
        h = np.arange(sub.n)
        lhs = injection[sub.mul(h[:, None], h[None, :])]
        rhs = big.mul(injection[:, None], injection[None, :])
        if not np.array_equal(lhs, rhs):
            raise NotInGroup("injection is not a homomorphism")
        self.g_to_h = np.full(big.n, -1, dtype=np.int64)
        self.g_to_h[injection] = h


def subgroup_view(big, members):
    """Build a FiniteGroupView on a subset closed under multiplication,
    together with its embedding into the ambient view."""
    members = np.unique(np.asarray(members, dtype=np.int64))
    pos = np.full(big.n, -1, dtype=np.int64)
    pos[members] = np.arange(len(members))

    def mul(a, b):
        out = pos[big.mul(members[a], members[b])]
        if np.any(np.asarray(out) < 0):
            raise NotInGroup("subset is not closed under multiplication")
        return out

    inv = pos[big.inv[members]]
    if np.any(inv < 0):
        raise NotInGroup("subset is not closed under inversion")
    ident = pos[big.identity]
    if ident < 0:
        raise NotInGroup("subset does not contain the identity")
    sub = FiniteGroupView(len(members), mul, inv=inv, identity=int(ident))
    emb = SubgroupEmbedding(sub, big, members)
    return sub, emb


def induce(f, emb):
    """Induced class function: ind f(g) = (1/|H|) sum over x in G with
    x g x^-1 in H of f(x g x^-1)."""
    if f.view is not emb.sub:
        raise GroupMismatch("function does not live on the subgroup")
    G, H = emb.big, emb.sub
    allg = np.arange(G.n)
    vals = np.zeros(len(G.classes), dtype=complex)
    for ci, (rep, _) in enumerate(G.classes):
        conj = G.mul(G.mul(allg, rep), G.inv[allg])
        h = emb.g_to_h[conj]
        inside = h >= 0
        if inside.any():
            vals[ci] = f.values[H.class_of[h[inside]]].sum() / H.n
    return ClassFunction(G, vals)


def restrict(f, emb):
    """Restriction of a class function on G to H."""
    if f.view is not emb.big:
        raise GroupMismatch("function does not live on the big group")
    vals = [f.at_element(int(emb.injection[rep])) for rep, _ in emb.sub.classes]
    return ClassFunction(emb.sub, np.array(vals, dtype=complex))


def double_cosets(emb):
    """Representatives of H\\G/H, each the smallest index in its coset."""
    G = emb.big
    hin = emb.injection
    seen = np.zeros(G.n, dtype=bool)
    reps = []
    for x in range(G.n):
        if seen[x]:
            continue
        hx = G.mul(hin[:, None], x)
        members = np.unique(G.mul(hx.ravel()[:, None], hin[None, :]))
        seen[members] = True
        reps.append(x)
    return reps


def mackey_check(f, emb):
    """Mackey decomposition of res ind f as a sum over double cosets of
    inductions of twisted restrictions.  Returns the maximum absolute
    defect between the two sides."""
    G, H = emb.big, emb.sub
    lhs = restrict(induce(f, emb), emb)
    total = np.zeros(len(H.classes), dtype=complex)
    for x in double_cosets(emb):
        xinv = int(G.inv[x])
        # K_x = { h in H : x^-1 h x in H }
        hg = emb.injection
        conj_in = emb.g_to_h[G.mul(G.mul(xinv, hg), x)]
        kmembers = np.flatnonzero(conj_in >= 0)
        K, kemb = subgroup_view(H, kmembers)
        # twisted function f_x(k) = f(x^-1 k x) on K_x
        tw = []
        for rep, _ in K.classes:
            hrep = int(kemb.injection[rep])
            tw.append(f.values[H.class_of[conj_in[hrep]]])
        total += induce(ClassFunction(K, np.array(tw, dtype=complex)), kemb).values
    return float(np.max(np.abs(lhs.values - total)))


class MatrixRep:
    """A matrix representation with eagerly stored images, one d x d
    complex matrix per group element."""

    def __init__(self, view, images):
        images = np.asarray(images, dtype=complex)
        if images.shape[0] != view.n or images.shape[1] != images.shape[2]:
            raise GroupMismatch("images must be (n, d, d)")
        self.view = view
        self.images = images
        self.dim = images.shape[1]

    def check_homomorphism(self, pairs=None, tol=None):
        """Max |pi(a)pi(b) - pi(ab)| over the given (or all) pairs."""
        tol = get_tol() if tol is None else tol
        v = self.view
        if pairs is None:
            a, b = np.meshgrid(np.arange(v.n), np.arange(v.n), indexing="ij")
            pairs = np.stack([a.ravel(), b.ravel()], axis=1)
        worst = 0.0
        for chunk in np.array_split(pairs, max(1, len(pairs) // 4096)):
            pa = self.images[chunk[:, 0]]
            pb = self.images[chunk[:, 1]]
            pab = self.images[v.mul(chunk[:, 0], chunk[:, 1])]
            worst = max(worst, float(np.max(np.abs(pa @ pb - pab))))
        return worst


def rep_character(rep):
    tr = [np.trace(rep.images[r]) for r, _ in rep.view.classes]
    return ClassFunction(rep.view, np.array(tr, dtype=complex))


def compress_rep(rep, basis, tol=None):
    """Restrict a representation to an invariant subspace.

    basis is d x m with orthonormal columns; invariance of its span is
    verified to tolerance before the compressed images are returned."""
    tol = get_tol() if tol is None else tol
    Q = np.asarray(basis, dtype=complex)
    if np.max(np.abs(Q.conj().T @ Q - np.eye(Q.shape[1]))) > 1e-10:
        raise VerificationFailed("basis is not orthonormal")
    small = np.einsum("ij,njk,kl->nil", Q.conj().T, rep.images, Q)
    defect = float(np.max(np.abs(rep.images @ Q - np.einsum("ij,njk->nik", Q, small))))
    if defect > tol:
        raise VerificationFailed(f"subspace is not invariant, defect {defect}")
    return MatrixRep(rep.view, small)


def character_table_bruteforce(view, seed=20070714, max_tries=8):
    """Complete character table by the class-algebra (Dixon/Burnside)
    method: the structure constants a_ijl of class sums give commuting
    matrices N_i, a random real combination of which has the characters'
    eigenvalue vectors as eigenvectors.

    Returns a (k, k) complex array, rows sorted by (degree, values), and
    columns aligned with view.classes.  Raises VerificationFailed if no
    random combination yields a table passing orthonormality."""
    k = len(view.classes)
    n = view.n
    sizes = view.sizes
    reps = view.reps
    ident_class = int(view.class_of[view.identity])

    a = np.zeros((k, k, k), dtype=np.int64)  # a[i, j, l]
    for i, (_, members) in enumerate(view.classes):
        t = view.class_of[view.mul(view.inv[members][:, None], reps[None, :])]
        for l in range(k):
            a[i, :, l] = np.bincount(t[:, l], minlength=k)

    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        coeff = rng.standard_normal(k)
        M = np.tensordot(coeff, a, axes=(0, 0))  # sum_i c_i a[i,:,:]
        evals, evecs = np.linalg.eig(M)
        if len(np.unique(np.round(evals, 6))) < k:
            continue
        rows = []
        ok = True
        for r in range(k):
            v = evecs[:, r]
            if abs(v[ident_class]) < 1e-12:
                ok = False
                break
            omega = v / v[ident_class]
            s = np.sum(np.abs(omega) ** 2 / sizes)
            d2 = n / s.real
            d = round(np.sqrt(d2))
            if d < 1 or abs(np.sqrt(d2) - d) > 1e-6:
                ok = False
                break
            chi = d * omega / sizes
            rows.append(chi)
        if not ok:
            continue
        table = np.array(rows)
        gram = (table * sizes) @ table.conj().T / n
        if np.max(np.abs(gram - np.eye(k))) > 1e-8:
            continue
        if int(np.round(np.sum(np.abs(table[:, ident_class]) ** 2))) != n:
            continue
        order = sorted(range(k), key=lambda r: (
            round(table[r, ident_class].real),
            [(round(z.real, 6), round(z.imag, 6)) for z in table[r]]))
        return table[order]
    raise VerificationFailed("class-algebra method failed to converge")


def clifford_orbit_check(rep, normal_members, tol=None, seed=20070714):
    """Decompose the restriction of rep to an abelian normal subgroup
    into joint eigenspaces and verify Clifford's theorem: the characters
    appearing form a single orbit under conjugation, all eigenspaces
    have equal dimension, and dim rep = (orbit size) x (common dim).

    normal_members: element indices of an abelian subgroup, verified
    normal in rep.view.  Returns (orbit size, common dimension)."""
    tol = get_tol() if tol is None else tol
    v = rep.view
    members = np.unique(np.asarray(normal_members, dtype=np.int64))
    allg = np.arange(v.n)
    for m in members:
        conj = v.mul(v.mul(allg, m), v.inv[allg])
        if not np.all(np.isin(conj, members)):
            raise NotNormal("subgroup is not normal")

    mats = rep.images[members]
    rng = np.random.default_rng(seed)
    combo = np.tensordot(rng.standard_normal(len(members))
                         + 1j * rng.standard_normal(len(members)), mats, axes=(0, 0))
    evals, evecs = np.linalg.eig(combo)
    # cluster eigenvalues
    order = np.lexsort((np.round(evals.imag, 8), np.round(evals.real, 8)))
    groups = []
    for idx in order:
        if groups and abs(evals[idx] - evals[groups[-1][-1]]) < 1e-6:
            groups[-1].append(idx)
        else:
            groups.append([idx])

    tuples = []
    dims = []
    for g in groups:
        Q, _ = np.linalg.qr(evecs[:, g])
        chi = []
        for m_i, m in enumerate(members):
            MQ = mats[m_i] @ Q
            lam = np.vdot(Q[:, 0], MQ[:, 0])
            if np.max(np.abs(MQ - lam * Q)) > 1e-6:
                raise VerificationFailed("normal subgroup image is not scalar "
                                         "on a joint eigenspace")
            chi.append(lam)
        tuples.append(np.array(chi))
        dims.append(Q.shape[1])

    if len(set(dims)) != 1:
        raise VerificationFailed("joint eigenspaces have unequal dimensions")

    # orbit of the first character tuple under conjugation by all of G
    pos = np.full(v.n, -1, dtype=np.int64)
    pos[members] = np.arange(len(members))

    def close(u, w):
        return np.max(np.abs(u - w)) < 1e-6

    orbit = []
    for g in range(v.n):
        moved = pos[v.mul(v.mul(v.inv[g], members), g)]
        cand = tuples[0][moved]
        if not any(close(cand, o) for o in orbit):
            orbit.append(cand)
    if len(orbit) != len(tuples):
        raise VerificationFailed(
            f"expected one orbit of size {len(tuples)}, got {len(orbit)}")
    for t in tuples:
        if not any(close(t, o) for o in orbit):
            raise VerificationFailed("eigenspace character outside the orbit")
    if len(tuples) * dims[0] != rep.dim:
        raise VerificationFailed("orbit size x multiplicity != degree")
    return len(tuples), dims[0]
