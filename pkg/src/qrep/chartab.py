"""Assembly, verification and serialization of complete character
tables of GL2(F_q) and SL2(F_q).

Row order: Linear, SteinbergTwist, PrincipalSeries (by exponent pair),
SplitPrincipal+/-, Cuspidal (by smallest orbit exponent),
SplitCuspidal+/-.  Columns follow the canonical conjugacy-class order
of the group context (central, non-semisimple, split regular,
anisotropic, each sorted by parameters).

Every table is verified before it can be emitted: row count, exact
degree bookkeeping, both orthogonality relations, family counts and
degree multisets, positive integer degrees, and (at q = 3) a
root-of-unity decomposition of every entry.  A table that fails any
check raises VerificationFailed and is never serialized.
"""

import csv
import io
import itertools
import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from .config import get_tol
from .errors import EvenQ, IoError, SizeExceeded, VerificationFailed
from .ff import MultChar, make_ext, make_field
from .gl2 import GroupCtx
from .parabolic import (BorelChar, decompose_gl2, induced_character,
                        split_rho_pm)
from .repcore import ClassFunction, hom_dim
from .weil import gl2_cuspidal_family, sl2_cuspidal_family

SUPPORTED = {"gl2": (3, 5, 7), "sl2": (3, 5, 7, 9)}


@dataclass
class TableRow:
    family: str
    params: tuple
    values: np.ndarray

    @property
    def degree(self):
        return int(round(self.values[0].real))


@dataclass
class CharacterTable:
    kind: str
    q: int
    gctx: object
    rows: list = dc_field(default_factory=list)

    @property
    def matrix(self):
        return np.array([r.values for r in self.rows])


def _prime_power(q):
    p = 2
    while p * p <= q:
        if q % p == 0:
            k = 0
            qq = q
            while qq % p == 0:
                qq //= p
                k += 1
            if qq != 1:
                raise SizeExceeded(f"{q} is not a prime power")
            return p, k
        p += 1
    return q, 1


def _identity_first_check(gctx):
    if gctx.conj_classes[0].tag != "central" or \
            gctx.conj_classes[0].rep != (1, 0, 0, 1):
        raise VerificationFailed("identity class is not first")


def _gl2_rows(gctx, ectx):
    q = gctx.q
    F = gctx.field
    rows = []
    dets = np.asarray(gctx.mat_det(gctx.elems[gctx.view.reps]))
    for j in range(q - 1):
        chi = MultChar(F, j)
        rows.append(TableRow("Linear", (j,), chi.values[dets]))
    for j in range(q - 1):
        chi = MultChar(F, j)
        _, st = decompose_gl2(gctx, BorelChar(gctx, (chi, chi)))
        rows.append(TableRow("SteinbergTwist", (j,), st.values))
    for j1, j2 in itertools.combinations(range(q - 1), 2):
        b = BorelChar(gctx, (MultChar(F, j1), MultChar(F, j2)))
        rows.append(TableRow("PrincipalSeries", (j1, j2),
                             induced_character(gctx, b).values))
    fam = gl2_cuspidal_family(ectx, gctx)
    for (j, partner), f in sorted(fam, key=lambda t: t[0][0]):
        rows.append(TableRow("Cuspidal", (j, partner), f.values))
    return rows


def _sl2_rows(gctx, ectx):
    q = gctx.q
    F = gctx.field
    k = len(gctx.view.classes)
    rows = [TableRow("Linear", (0,), np.ones(k, dtype=complex))]
    triv = BorelChar(gctx, (MultChar(F, 0),))
    ind1 = induced_character(gctx, triv)
    st = ind1 - ClassFunction(gctx.view, np.ones(k, dtype=complex))
    if hom_dim(st, st) != 1:
        raise VerificationFailed("Steinberg is not irreducible")
    rows.append(TableRow("SteinbergTwist", (0,), st.values))
    for j in range(1, (q - 1) // 2):
        b = BorelChar(gctx, (MultChar(F, j),))
        rows.append(TableRow("PrincipalSeries", (j,),
                             induced_character(gctx, b).values))
    jq = (q - 1) // 2
    plus, minus = split_rho_pm(gctx, BorelChar(gctx, (MultChar(F, jq),)))
    rows.append(TableRow("SplitPrincipal", (jq, 1), plus.values))
    rows.append(TableRow("SplitPrincipal", (jq, -1), minus.values))
    fam = sl2_cuspidal_family(ectx, gctx)
    for j, f in sorted(fam["cuspidal"], key=lambda t: t[0]):
        rows.append(TableRow("Cuspidal", (j,), f.values))
    j0 = (q + 1) // 2
    rows.append(TableRow("SplitCuspidal", (j0, 1), fam["omega0"]["plus"].values))
    rows.append(TableRow("SplitCuspidal", (j0, -1), fam["omega0"]["minus"].values))
    return rows


def expected_family_counts(kind, q):
    if kind == "gl2":
        out = {"Linear": q - 1, "SteinbergTwist": q - 1,
               "PrincipalSeries": (q - 1) * (q - 2) // 2,
               "Cuspidal": (q * q - q) // 2}
    else:
        out = {"Linear": 1, "SteinbergTwist": 1,
               "PrincipalSeries": (q - 3) // 2, "SplitPrincipal": 2,
               "Cuspidal": (q - 1) // 2, "SplitCuspidal": 2}
    return {k: v for k, v in out.items() if v}


def expected_degrees(kind, q):
    if kind == "gl2":
        out = [1] * (q - 1) + [q] * (q - 1)
        out += [q + 1] * ((q - 1) * (q - 2) // 2)
        out += [q - 1] * ((q * q - q) // 2)
    else:
        out = [1, q] + [q + 1] * ((q - 3) // 2) + [(q + 1) // 2] * 2
        out += [q - 1] * ((q - 1) // 2) + [(q - 1) // 2] * 2
    return sorted(out)


def _root_of_unity_decomposable(z, d, order, roots_cache={}):
    """Whether z is a sum of exactly d roots of unity of the given
    order, within 1e-6; exhaustive multiset search."""
    if order not in roots_cache:
        roots_cache[order] = np.exp(2j * np.pi * np.arange(order) / order)
    roots = roots_cache[order]
    for combo in itertools.combinations_with_replacement(range(order), d):
        if abs(roots[list(combo)].sum() - z) < 1e-6:
            return True
    return False


def verify_table(table):
    """All structural checks; raises VerificationFailed on the first
    violation, returns a dict of check names -> max defect."""
    tol = get_tol()
    gctx = table.gctx
    _identity_first_check(gctx)
    k = len(gctx.view.classes)
    n = gctx.n
    A = table.matrix
    out = {}

    if A.shape != (k, k):
        raise VerificationFailed(f"{A.shape[0]} rows for {k} classes")

    degs = A[:, 0]
    if np.max(np.abs(degs.imag)) > tol or \
            np.max(np.abs(degs.real - np.round(degs.real))) > tol or \
            np.min(degs.real) < 0.5:
        raise VerificationFailed("degrees are not positive integers")
    degrees = [int(round(x)) for x in degs.real]
    if sum(d * d for d in degrees) != n:
        raise VerificationFailed(f"sum of squared degrees != {n}")
    out["degree_sum"] = 0.0

    sizes = gctx.view.sizes
    gram = (A * sizes) @ A.conj().T / n
    d1 = float(np.max(np.abs(gram - np.eye(k))))
    if d1 > tol:
        raise VerificationFailed(f"row orthonormality defect {d1}")
    out["row_orthogonality"] = d1

    col = A.T.conj() @ A  # col[c, c'] = sum_i conj(chi_i(c)) chi_i(c')
    want = np.diag(n / sizes).astype(complex)
    d2 = float(np.max(np.abs(col - want)))
    if d2 > tol:
        raise VerificationFailed(f"column orthogonality defect {d2}")
    out["column_orthogonality"] = d2

    counts = {}
    for r in table.rows:
        counts[r.family] = counts.get(r.family, 0) + 1
    if counts != expected_family_counts(table.kind, table.q):
        raise VerificationFailed(f"family counts {counts}")
    if sorted(degrees) != expected_degrees(table.kind, table.q):
        raise VerificationFailed(f"degree multiset {sorted(degrees)}")
    out["families"] = 0.0

    if table.q == 3:
        order = int(np.lcm(gctx.field.p, table.q ** 2 - 1))
        for r in table.rows:
            for z in r.values:
                if not _root_of_unity_decomposable(complex(z), r.degree, order):
                    raise VerificationFailed(
                        f"{z} is not a sum of {r.degree} roots of unity")
        out["root_of_unity"] = 0.0
    return out


def build_table(kind, q):
    if kind not in SUPPORTED:
        raise VerificationFailed(f"unknown group kind {kind!r}")
    if q % 2 == 0:
        raise EvenQ("q must be odd")
    if q not in SUPPORTED[kind]:
        raise SizeExceeded(f"{kind} tables support q in {SUPPORTED[kind]}")
    p, kdeg = _prime_power(q)
    F = make_field(p, kdeg)
    gctx = GroupCtx(kind, F)
    ectx = make_ext(F)
    rows = _gl2_rows(gctx, ectx) if kind == "gl2" else _sl2_rows(gctx, ectx)
    table = CharacterTable(kind=kind, q=q, gctx=gctx, rows=rows)
    verify_table(table)
    return table


# --- serialization ---

def _snap(x):
    # serialization only: suppress float dust on values that verification
    # has already pinned to within 1e-8 of exact integers
    r = round(x)
    return float(r) if abs(x - r) < 1e-9 else x


def _sig12(x):
    return float(f"{_snap(x):.12g}")


def _class_label(c):
    return f"{c.tag}({','.join(str(p) for p in c.params)})"


def _row_label(r):
    return f"{r.family}({','.join(str(p) for p in r.params)})"


def table_to_json_obj(table):
    classes = []
    for c in table.gctx.conj_classes:
        a, b, cc, d = c.rep
        classes.append({"tag": c.tag, "rep": [[a, b], [cc, d]],
                        "size": c.size, "centralizer": c.centralizer_order})
    irr = []
    for r in table.rows:
        irr.append({"family": r.family, "params": list(r.params),
                    "degree": r.degree,
                    "values": [[_sig12(z.real), _sig12(z.imag)]
                               for z in r.values]})
    return {"group": table.kind, "q": table.q,
            "classes": classes, "irreducibles": irr}


def _fmt_complex(z):
    return f"{_snap(z.real):.12g}{_snap(z.imag):+.12g}j"


def emit(table, fmt, sink):
    """Serialize a verified table as json or csv to a path or file
    object.  The table is re-verified first; emitting an unverifiable
    table is impossible."""
    verify_table(table)
    if fmt == "json":
        text = json.dumps(table_to_json_obj(table), indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["irreducible"] +
                   [_class_label(c) for c in table.gctx.conj_classes])
        for r in table.rows:
            w.writerow([_row_label(r)] + [_fmt_complex(z) for z in r.values])
        text = buf.getvalue()
    else:
        raise IoError(f"unknown format {fmt!r}")
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        try:
            with open(sink, "w") as fh:
                fh.write(text)
        except OSError as e:
            raise IoError(str(e))
    return text
