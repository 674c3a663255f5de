"""Heisenberg groups, Stone-von-Neumann, the Weil representation, and
cuspidal character extraction."""

import numpy as np
import pytest

from qrep import (
    CuspidalModule,
    EvenExponent,
    GroupMismatch,
    MultChar,
    NormOneChar,
    NotPrimitive,
    SizeExceeded,
    averaging_check,
    cuspidal_module,
    fourier_intertwines,
    gl2_cuspidal_family,
    heisenberg_from_ext,
    heisenberg_group,
    heisenberg_rep,
    inner_product,
    make_ext,
    make_field,
    make_group,
    pi_omega_character,
    sl2_cuspidal_family,
    svn_check,
    symplectic_defect,
    verify_ordinary,
    weil_matrix,
)

RNG = np.random.default_rng(20070714)


# ---------------------------------------------------------------------------
# Heisenberg groups


def test_heisenberg_group_law_and_commutators():
    h = heisenberg_group((3, 4))
    assert h.nH == 12 * 12 * 12
    # [ (x,0,0), (0,c,0) ] is central with phase -<c,x>
    for _ in range(40):
        x = int(RNG.integers(h.nG))
        c = int(RNG.integers(h.nG))
        h1 = int(h.encode(x, 0, 0))
        h2 = int(h.encode(0, c, 0))
        lhs = h.h_mul(h1, h2)
        e = int(h.pair_exp(c, x))
        rhs = h.h_mul(h.h_mul(h2, h1), h.encode(0, 0, (-e) % h.m))
        assert int(lhs) == int(rhs)


def test_heisenberg_center_is_central():
    h = heisenberg_group((5,))
    z = h.encode(0, 0, 2)
    hs = np.arange(h.nH)
    assert np.array_equal(h.h_mul(z, hs), h.h_mul(hs, z))


def test_heisenberg_inverses():
    h = heisenberg_group((2, 2))
    inv = h.h_inv_array()
    hs = np.arange(h.nH)
    assert np.all(h.h_mul(hs, inv[hs]) == 0)
    assert np.all(h.h_mul(inv[hs], hs) == 0)


def test_symplectic_presentation_is_isomorphic():
    # to_symplectic intertwines h_mul with symplectic_mul (odd exponent)
    h = heisenberg_group((3, 9))
    pairs = RNG.integers(h.nH, size=(200, 2))
    a, b = pairs[:, 0], pairs[:, 1]
    lhs = h.to_symplectic(h.h_mul(a, b))
    rhs = h.symplectic_mul(h.to_symplectic(a), h.to_symplectic(b))
    assert np.array_equal(np.asarray(lhs), np.asarray(rhs))
    assert symplectic_defect(heisenberg_group((3, 3))) == 0  # exhaustive


def test_symplectic_needs_odd_exponent():
    h = heisenberg_group((2,))
    with pytest.raises(EvenExponent):
        h.symplectic_mul(0, 1)


def test_symplectic_defect_sampled_path():
    h = heisenberg_from_ext(make_ext(make_field(3, 2)))  # |H| = 81^2 * 3
    d = symplectic_defect(h, max_pairs=1000, sample=500, seed=1)
    assert d == 0
    with pytest.raises(SizeExceeded):
        symplectic_defect(h, max_pairs=1000)


def test_stone_von_neumann_small_panel():
    for orders in ((2,), (3,), (4,), (2, 2)):
        assert svn_check(heisenberg_group(orders)) is True
    with pytest.raises(SizeExceeded):
        svn_check(heisenberg_group((17,)))


def test_fourier_transform_intertwines_translation_and_modulation():
    for orders in ((2,), (3,), (4,), (2, 2), (3, 4)):
        assert fourier_intertwines(heisenberg_group(orders)) < 1e-10
    E = make_ext(make_field(3))
    assert fourier_intertwines(heisenberg_from_ext(E)) < 1e-10


def test_canonical_model_center_acts_by_tautological_character():
    h = heisenberg_group((4,))
    rep = heisenberg_rep(h)
    for z in range(4):
        zeta = np.exp(2j * np.pi * z / 4)
        img = rep.images[int(h.encode(0, 0, z))]
        assert np.max(np.abs(img - zeta * np.eye(4))) < 1e-12


# ---------------------------------------------------------------------------
# the Weil representation


def test_weil_matrices_are_unitary_and_multiplicative():
    E = make_ext(make_field(3))
    ctx = make_group("sl2", E.base)
    n = E.ext.q
    # exhaustive multiplicativity at q = 3
    mats = [weil_matrix(E, ctx.mat_of(g)) for g in range(ctx.view.n)]
    for g in range(ctx.view.n):
        M = mats[g]
        assert np.max(np.abs(M @ M.conj().T - np.eye(n))) < 1e-10
    pairs = RNG.integers(ctx.view.n, size=(150, 2))
    for a, b in pairs:
        c = int(ctx.view.mul(int(a), int(b)))
        assert np.max(np.abs(mats[a] @ mats[b] - mats[c])) < 1e-9


def test_weil_matrix_cell_shapes():
    E = make_ext(make_field(5))
    # lower-unipotent images multiply by psi(N(x)): diagonal
    L = weil_matrix(E, (1, 0, 1, 1))
    assert L.shape == (25, 25)
    assert np.max(np.abs(L - np.diag(np.diag(L)))) < 1e-12
    # b != 0 lands in the dense cell: every entry has modulus 1/q
    U = weil_matrix(E, (1, 1, 0, 1))
    assert np.max(np.abs(np.abs(U) - 1 / 5)) < 1e-12


def test_weil_weyl_image_is_a_scaled_fourier_kernel():
    E = make_ext(make_field(3))
    F = E.base
    w = (0, 1, int(F.neg(1)), 0)
    M = weil_matrix(E, w)
    # every entry has modulus 1/q and column 0 is constant
    assert np.max(np.abs(np.abs(M) - 1 / 3)) < 1e-12
    assert np.max(np.abs(M[:, 0] - M[0, 0])) < 1e-12


def test_ordinary_relations_all_pairs_q3():
    E = make_ext(make_field(3))
    out = verify_ordinary(E, mode="all")
    assert out["mode"] == "all"
    assert out["pairs"] == 24 * 24
    assert out["max_defect"] < 1e-10
    assert out["word_defect"] < 1e-10
    assert out["norm_defect"] < 1e-10


def test_ordinary_relations_sampled_q7():
    E = make_ext(make_field(7))
    out = verify_ordinary(E, mode="sampled", sample=300)
    assert out["pairs"] >= 300
    assert out["max_defect"] < 1e-10


def test_averaging_recovers_the_special_apportionment():
    for p in (3, 5):
        E = make_ext(make_field(p))
        out = averaging_check(E)
        assert out["nu_vs_rho"] < 1e-10
        assert out["rho_vs_normalized"] < 1e-10


# ---------------------------------------------------------------------------
# cuspidal modules and characters


def test_cuspidal_module_dimension_and_equivariance():
    E = make_ext(make_field(5))
    om = NormOneChar(E, 1)
    mod = CuspidalModule(E, om)
    assert mod.dim == 4
    assert mod.basis.shape == (25, 4)
    # columns are supported on disjoint norm fibers
    support = mod.basis != 0
    assert np.all(support.sum(axis=1) <= 1)


def test_cuspidal_module_rejects_bad_data():
    E = make_ext(make_field(3))
    with pytest.raises(NotPrimitive):
        CuspidalModule(E, NormOneChar(E, 0))
    with pytest.raises(NotPrimitive):
        CuspidalModule(E, MultChar(E.ext, 4))  # 4 = q+1 factors through norm
    with pytest.raises(GroupMismatch):
        CuspidalModule(E, MultChar(E.base, 1))


def test_gl2_cuspidal_value_at_nonsemisimple_class():
    E = make_ext(make_field(3))
    gl = make_group("gl2", E.base)
    om = MultChar(E.ext, 1)
    f = pi_omega_character(cuspidal_module(E, om), gl)
    assert abs(f.values[0] - 2) < 1e-9  # degree q - 1
    for c_i, c in enumerate(gl.conj_classes):
        if c.tag == "nonsemisimple":
            a = c.params[0]
            want = -om.values[int(E.embed[a])]
            assert abs(f.values[c_i] - want) < 1e-9
        elif c.tag == "central":
            a = c.params[0]
            want = (E.q - 1) * om.values[int(E.embed[a])]
            assert abs(f.values[c_i] - want) < 1e-9
        elif c.tag == "split_regular":
            assert abs(f.values[c_i]) < 1e-9


def test_gl2_cuspidal_family_census():
    E = make_ext(make_field(3))
    gl = make_group("gl2", E.base)
    fam = gl2_cuspidal_family(E, gl)
    assert len(fam) == 3  # (q^2 - q)/2
    assert sorted(orbit for orbit, _ in fam) == [(1, 3), (2, 6), (5, 7)]
    for _, f in fam:
        assert abs(inner_product(f, f) - 1) < 1e-9
        assert abs(f.values[0] - 2) < 1e-9


def test_gl2_cuspidal_operator_independent_of_fiber_choice():
    # E_a f(x) = omega(a~) f(a~ x) for any preimage a~ of a under the
    # norm: on the full space the choices differ, but they agree on
    # W_omega because omega(y) f(y x) = f(x) for norm-one y
    E = make_ext(make_field(3))
    ext = E.ext
    om = MultChar(ext, 1)
    mod = cuspidal_module(E, om)
    eye = np.eye(ext.q, dtype=complex)
    for a in range(1, 3):
        fiber = np.flatnonzero(np.asarray(E.norm) == a)
        assert len(fiber) == 4  # q + 1 preimages
        restricted = []
        for atil in fiber:
            perm = np.asarray(ext.mul(int(atil), np.arange(ext.q)))
            op = complex(om.values[int(atil)]) * eye[perm]
            restricted.append(mod.restrict(op))
        for other in restricted[1:]:
            assert np.max(np.abs(other - restricted[0])) < 1e-12


def test_sl2_cuspidal_family_census_and_omega0_split():
    E = make_ext(make_field(5))
    sl = make_group("sl2", E.base)
    out = sl2_cuspidal_family(E, sl)
    assert len(out["cuspidal"]) == 2  # (q-1)/2
    for j, f in out["cuspidal"]:
        assert abs(f.values[0] - 4) < 1e-9
        assert abs(inner_product(f, f) - 1) < 1e-9
    om0 = out["omega0"]
    chi0 = om0["character"]
    assert abs(inner_product(chi0, chi0) - 2) < 1e-9
    for half in (om0["plus"], om0["minus"]):
        assert abs(half.values[0] - 2) < 1e-9  # degree (q-1)/2
        assert abs(inner_product(half, half) - 1) < 1e-9
    s = om0["plus"] + om0["minus"]
    assert np.max(np.abs(s.values - chi0.values)) < 1e-9


def test_sl2_cuspidal_anisotropic_values():
    # at an anisotropic class with ext eigenvalue z (norm one), the
    # cuspidal character takes the value -(omega(z) + omega(1/z))
    E = make_ext(make_field(5))
    ext = E.ext
    sl = make_group("sl2", E.base)
    om = NormOneChar(E, 1)
    f = pi_omega_character(cuspidal_module(E, om), sl)
    lam = np.arange(ext.q)
    for c_i, c in enumerate(sl.conj_classes):
        if c.tag != "anisotropic":
            continue
        det_i, tr_i = c.params
        vals = ext.add(ext.sub(ext.mul(lam, lam), ext.mul(tr_i, lam)), det_i)
        roots = lam[np.asarray(vals) == 0]
        assert len(roots) == 2
        z = int(roots[0])
        zq = int(E.frob[z])  # = 1/z on the norm-one circle
        want = -(om.values[z] + om.values[zq])
        assert abs(f.values[c_i] - want) < 1e-9


def test_sl2_cuspidal_values_at_split_and_unipotent_classes():
    E = make_ext(make_field(5))
    sl = make_group("sl2", E.base)
    om = NormOneChar(E, 2)
    f = pi_omega_character(cuspidal_module(E, om), sl)
    for c_i, c in enumerate(sl.conj_classes):
        if c.tag == "split_regular":
            assert abs(f.values[c_i]) < 1e-9
        elif c.tag == "nonsemisimple" and c.params[0] == 1:
            assert abs(f.values[c_i] - (-1)) < 1e-9


def test_pi_omega_group_kind_must_match_module_kind():
    E = make_ext(make_field(3))
    sl = make_group("sl2", E.base)
    with pytest.raises(GroupMismatch):
        pi_omega_character(cuspidal_module(E, MultChar(E.ext, 1)), sl)
