"""GL2 and SL2 over a small finite field: enumeration, Bruhat
decomposition, conjugacy classes with canonical representatives.

A matrix (a b; c d) of field-element indices is packed into the single
integer ((a q + b) q + c) q + d, and the group is enumerated in
increasing packed order.  All matrix arithmetic is vectorized over
index arrays; no |G| x |G| multiplication table is ever built.

Class representatives follow the rational-canonical shapes: scalars,
(lambda v; 0 lambda) with v = 1 (and v = eps for SL2, where the two
unipotent directions are not conjugate), diag(l1, l2) with l1 < l2, and
the companion matrix (0 -a0; 1 a1) of an irreducible quadratic.  Each
constructed representative is verified to lie in its flooded class, so
the canonical labels are cross-checked against ground truth.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EvenQ, NotInGroup, Singular, VerificationFailed
from .repcore import FiniteGroupView, subgroup_view

TAG_RANK = {"central": 0, "nonsemisimple": 1, "split_regular": 2, "anisotropic": 3}


@dataclass
class ConjClass:
    tag: str
    params: tuple
    rep: tuple          # (a, b, c, d) field indices
    rep_id: int
    size: int
    centralizer_order: int


def _pack(q, m):
    m = np.asarray(m, dtype=np.int64)
    return ((m[..., 0] * q + m[..., 1]) * q + m[..., 2]) * q + m[..., 3]


class GroupCtx:
    """kind is "gl2" or "sl2"; field is the FieldCtx of entries."""

    def __init__(self, kind, field):
        if kind not in ("gl2", "sl2"):
            raise NotInGroup(f"unknown kind {kind!r}")
        self.kind = kind
        self.field = field
        q = field.q
        self.q = q

        grid = np.indices((q, q, q, q)).reshape(4, -1).T.astype(np.int64)
        det = self.mat_det(grid)
        keep = det != 0 if kind == "gl2" else det == 1
        self.elems = grid[keep]
        self.n = len(self.elems)
        self.lookup = np.full(q ** 4, -1, dtype=np.int64)
        self.lookup[_pack(q, self.elems)] = np.arange(self.n)

        self.identity = self.id_of((1, 0, 0, 1))
        inv = self.lookup[_pack(q, self.mat_inv(self.elems))]
        self._mul = self._make_mul()
        self.view = FiniteGroupView(self.n, self._mul, inv=inv,
                                    identity=self.identity,
                                    classes=self._canonical_classes(inv))
        self.conj_classes = self._attach_class_data()
        self.eps = None
        if q % 2 == 1:
            for a in range(2, q):
                if not field.is_square_unit(a):
                    self.eps = a
                    break

    # --- matrix arithmetic on (..., 4) index arrays ---

    def mat_mul(self, m1, m2):
        F = self.field
        m1 = np.asarray(m1, dtype=np.int64)
        m2 = np.asarray(m2, dtype=np.int64)
        a1, b1, c1, d1 = (m1[..., i] for i in range(4))
        a2, b2, c2, d2 = (m2[..., i] for i in range(4))
        return np.stack([
            F.add(F.mul(a1, a2), F.mul(b1, c2)),
            F.add(F.mul(a1, b2), F.mul(b1, d2)),
            F.add(F.mul(c1, a2), F.mul(d1, c2)),
            F.add(F.mul(c1, b2), F.mul(d1, d2)),
        ], axis=-1)

    def mat_det(self, m):
        F = self.field
        m = np.asarray(m, dtype=np.int64)
        return F.sub(F.mul(m[..., 0], m[..., 3]), F.mul(m[..., 1], m[..., 2]))

    def mat_inv(self, m):
        F = self.field
        m = np.asarray(m, dtype=np.int64)
        det = self.mat_det(m)
        if np.any(np.asarray(det) == 0):
            raise Singular("matrix is not invertible")
        di = F.inv(det)
        return np.stack([
            F.mul(m[..., 3], di),
            F.neg(F.mul(m[..., 1], di)),
            F.neg(F.mul(m[..., 2], di)),
            F.mul(m[..., 0], di),
        ], axis=-1)

    def _make_mul(self):
        elems, lookup, q = self.elems, self.lookup, self.q

        def mul(ai, bi):
            prod = self.mat_mul(elems[ai], elems[bi])
            return lookup[_pack(q, prod)]
        return mul

    # --- element constructors ---

    def id_of(self, m):
        i = int(self.lookup[int(_pack(self.q, np.asarray(m, dtype=np.int64)))])
        if i < 0:
            raise NotInGroup(f"{tuple(m)} is not in {self.kind}")
        return i

    def mat_of(self, i):
        return tuple(int(x) for x in self.elems[i])

    def w_id(self):
        return self.id_of((0, 1, int(self.field.neg(1)), 0))

    def diag_id(self, y1, y2):
        return self.id_of((y1, 0, 0, y2))

    def t_id(self, a):
        """diag(a, a^-1), the standard torus of SL2."""
        return self.id_of((a, 0, 0, int(self.field.inv(a))))

    def upper_id(self, x):
        return self.id_of((1, x, 0, 1))

    def lower_id(self, c):
        return self.id_of((1, 0, c, 1))

    # --- standard subgroups (element id lists) ---

    def borel_ids(self):
        m = self.elems
        return np.flatnonzero(m[:, 2] == 0)

    def torus_ids(self):
        m = self.elems
        return np.flatnonzero((m[:, 1] == 0) & (m[:, 2] == 0))

    def upper_unipotent_ids(self):
        m = self.elems
        return np.flatnonzero((m[:, 0] == 1) & (m[:, 2] == 0) & (m[:, 3] == 1))

    def lower_unipotent_ids(self):
        m = self.elems
        return np.flatnonzero((m[:, 0] == 1) & (m[:, 1] == 0) & (m[:, 3] == 1))

    def subview(self, members):
        return subgroup_view(self.view, members)

    # --- conjugacy structure ---

    def _char_roots(self, m):
        """Roots in F_q of the characteristic polynomial of one matrix."""
        F = self.field
        tr = int(F.add(m[0], m[3]))
        det = int(self.mat_det(np.asarray(m)))
        lam = np.arange(self.q, dtype=np.int64)
        vals = F.add(F.sub(F.mul(lam, lam), F.mul(tr, lam)), det)
        return [int(r) for r in lam[vals == 0]], tr, det

    def classify(self, m):
        """(tag, params, canonical representative matrix) of one matrix."""
        F = self.field
        m = tuple(int(x) for x in m)
        roots, tr, det = self._char_roots(m)
        if len(roots) == 2:
            l1, l2 = sorted(roots)
            return "split_regular", (l1, l2), (l1, 0, 0, l2)
        if len(roots) == 0:
            return "anisotropic", (det, tr), (0, int(F.neg(det)), 1, tr)
        lam = roots[0]
        if m == (lam, 0, 0, lam):
            return "central", (lam,), m
        if self.kind == "gl2":
            return "nonsemisimple", (lam,), (lam, 1, 0, lam)
        # SL2: the direction of the nilpotent part matters; the class of
        # (lam v; 0 lam) is detected by the square class of
        # det[N u, u] for N = m - lam and any u outside ker N
        a, b, c, d = m
        na, nb = int(F.sub(a, lam)), b
        nc, nd = c, int(F.sub(d, lam))
        for u in ((1, 0), (0, 1)):
            v = (int(F.add(F.mul(na, u[0]), F.mul(nb, u[1]))),
                 int(F.add(F.mul(nc, u[0]), F.mul(nd, u[1]))))
            if v != (0, 0):
                break
        delta = int(F.sub(F.mul(v[0], u[1]), F.mul(u[0], v[1])))
        variant = 1 if self.field.is_square_unit(delta) else self.eps_of_field()
        return "nonsemisimple", (lam, variant), (lam, variant, 0, lam)

    def eps_of_field(self):
        if self.q % 2 == 0:
            raise EvenQ("no non-square unit in even characteristic")
        for a in range(2, self.q):
            if not self.field.is_square_unit(a):
                return a
        raise VerificationFailed("no non-square found")

    def _canonical_classes(self, inv):
        allg = np.arange(self.n)
        mul = self._make_mul()
        seen = np.zeros(self.n, dtype=bool)
        flooded = []
        for x in range(self.n):
            if seen[x]:
                continue
            orbit = np.unique(mul(mul(allg, x), inv[allg]))
            seen[orbit] = True
            flooded.append(orbit)
        labeled = []
        for orbit in flooded:
            tag, params, rep = self.classify(self.elems[orbit[0]])
            rep_id = self.id_of(rep)
            if rep_id not in orbit:
                raise VerificationFailed(
                    f"canonical representative {rep} escaped its class")
            labeled.append((TAG_RANK[tag], params, tag, rep_id, orbit))
        labeled.sort(key=lambda t: (t[0], t[1]))
        self._class_labels = [(tag, params) for _, params, tag, _, _ in labeled]
        return [(rep_id, orbit) for _, _, _, rep_id, orbit in labeled]

    def _attach_class_data(self):
        out = []
        for (tag, params), (rep_id, members) in zip(self._class_labels,
                                                    self.view.classes):
            out.append(ConjClass(tag=tag, params=params,
                                 rep=self.mat_of(rep_id), rep_id=rep_id,
                                 size=len(members),
                                 centralizer_order=self.n // len(members)))
        return out

    def class_index_of(self, m):
        return int(self.view.class_of[self.id_of(m)])


def make_group(kind, field):
    return GroupCtx(kind, field)


def bruhat(ctx, g):
    """Bruhat decomposition of one element.

    Returns ("B", g) when the lower-left entry vanishes, otherwise
    ("BwB", b1, b2) with g = b1 w b2, w = (0 1; -1 0),
    b1 = (1 a/c; 0 1) and b2 = (-c -d; 0 b - ad/c); the product is
    re-multiplied and compared exactly.  g may be an element id or a
    length-4 matrix."""
    F = ctx.field
    if isinstance(g, (int, np.integer)):
        g = ctx.mat_of(g)
    a, b, c, d = (int(x) for x in g)
    if c == 0:
        return ("B", (a, b, c, d))
    ci = int(F.inv(c))
    b1 = (1, int(F.mul(a, ci)), 0, 1)
    b2 = (int(F.neg(c)), int(F.neg(d)), 0,
          int(F.sub(b, F.mul(F.mul(a, ci), d))))
    w = (0, 1, int(F.neg(1)), 0)
    back = ctx.mat_mul(ctx.mat_mul(np.array(b1), np.array(w)), np.array(b2))
    if tuple(int(x) for x in back) != (a, b, c, d):
        raise VerificationFailed(f"bruhat product mismatch at {g}")
    return ("BwB", b1, b2)


def sl2_split_test(slctx, g, glctx=None):
    """Whether the GL2 class of an SL2 element splits into two SL2
    classes, decided by the index of det(Z_GL2(g)) in F_q^*.

    Returns (splits, partner_id) where partner_id is the id of the
    conjugate by diag(eps, 1) when the class splits, else None."""
    if slctx.kind != "sl2":
        raise NotInGroup("split test needs an sl2 context")
    if slctx.q % 2 == 0:
        raise EvenQ("split test needs odd q")
    if glctx is None:
        glctx = slctx._gl_cache if hasattr(slctx, "_gl_cache") else None
        if glctx is None:
            glctx = GroupCtx("gl2", slctx.field)
            slctx._gl_cache = glctx
    if isinstance(g, (int, np.integer)):
        g = slctx.mat_of(g)
    m = np.asarray(g, dtype=np.int64)
    E = glctx.elems
    left = glctx.mat_mul(E, m)
    right = glctx.mat_mul(m, E)
    cent = E[np.all(left == right, axis=-1)]
    dets = np.unique(np.asarray(glctx.mat_det(cent)))
    image_size = len(dets)
    q = slctx.q
    n_classes = (q - 1) // image_size
    if n_classes not in (1, 2):
        raise VerificationFailed(f"centralizer determinant image size {image_size}")
    if n_classes == 1:
        return False, None
    eps = slctx.eps
    F = slctx.field
    s = np.array([eps, 0, 0, 1], dtype=np.int64)
    sinv = np.array([int(F.inv(eps)), 0, 0, 1], dtype=np.int64)
    partner = slctx.mat_mul(slctx.mat_mul(s, m), sinv)
    return True, slctx.id_of(tuple(int(x) for x in partner))
