"""Parabolic induction: principal series characters, intertwiners,
the rho+/- splitting, and the Hecke kernel calculus."""

import itertools

import numpy as np
import pytest

from qrep import (
    BorelChar,
    CharMismatch,
    GroupMismatch,
    MultChar,
    NotSplitting,
    build_induced_rep,
    decompose_gl2,
    delta_kernels,
    delta_relation_defect,
    epsilon_swap_defect,
    induced_character,
    inner_product,
    intertwiner_dim,
    intertwiner_idempotents,
    make_field,
    make_group,
    predicted_intertwiner_dim,
    rep_character,
    split_rho_pm,
)
from qrep.parabolic import convolve, sl2_generators, two_dim_commutant_projectors


def _closed_form(ctx, chi1, chi2):
    """Induced character values from the textbook counting argument:
    (q+1) chi1 chi2 (a) at central a, chi1 chi2 (a) at the nonsemisimple
    classes, chi1(a)chi2(b) + chi1(b)chi2(a) at split diag(a,b), and 0
    at anisotropic classes."""
    F = ctx.field
    vals = []
    for c in ctx.conj_classes:
        if c.tag == "central":
            a = c.params[0]
            vals.append((ctx.q + 1) * chi1(a) * chi2(a))
        elif c.tag == "nonsemisimple":
            a = c.params[0]
            vals.append(chi1(a) * chi2(a))
        elif c.tag == "split_regular":
            a, b = c.params
            vals.append(chi1(a) * chi2(b) + chi1(b) * chi2(a))
        else:
            vals.append(0.0)
    return np.array(vals, dtype=complex)


def test_gl2_principal_series_values_match_closed_form():
    for q in (3, 5):
        ctx = make_group("gl2", make_field(q))
        F = ctx.field
        for j1, j2 in itertools.product(range(q - 1), repeat=2):
            chi1, chi2 = MultChar(F, j1), MultChar(F, j2)
            got = induced_character(ctx, BorelChar(ctx, (chi1, chi2)))
            assert np.max(np.abs(got.values - _closed_form(ctx, chi1, chi2))) < 1e-9


def test_sl2_principal_series_values_match_closed_form():
    # the torus of SL2 is diag(a, 1/a) and the inducing datum is a
    # single character chi(a); the split-class value is the Weyl orbit
    # sum chi(a) + chi(1/a)
    ctx = make_group("sl2", make_field(5))
    F = ctx.field
    for j in range(4):
        chi = MultChar(F, j)
        got = induced_character(ctx, BorelChar(ctx, (chi,)))
        vals = []
        for c in ctx.conj_classes:
            if c.tag == "central":
                vals.append((ctx.q + 1) * chi(c.params[0]))
            elif c.tag == "nonsemisimple":
                vals.append(chi(c.params[0]))
            elif c.tag == "split_regular":
                a, b = c.params  # b = 1/a
                vals.append(chi(a) + chi(b))
            else:
                vals.append(0.0)
        assert np.max(np.abs(got.values - np.array(vals))) < 1e-9


def test_intertwiner_dims_match_weyl_orbit_prediction():
    for kind, q in (("sl2", 5), ("gl2", 3)):
        ctx = make_group(kind, make_field(q))
        F = ctx.field
        nchars = 1 if kind == "sl2" else 2
        for js in itertools.product(range(q - 1), repeat=nchars):
            for ks in itertools.product(range(q - 1), repeat=nchars):
                b1 = BorelChar(ctx, tuple(MultChar(F, j) for j in js))
                b2 = BorelChar(ctx, tuple(MultChar(F, k) for k in ks))
                assert intertwiner_dim(ctx, b1, b2) == \
                    predicted_intertwiner_dim(b1, b2)


def test_predicted_dim_cases():
    ctx = make_group("gl2", make_field(7))
    F = ctx.field
    mk = lambda a, b: BorelChar(ctx, (MultChar(F, a), MultChar(F, b)))
    assert predicted_intertwiner_dim(mk(1, 2), mk(1, 2)) == 1
    assert predicted_intertwiner_dim(mk(1, 2), mk(2, 1)) == 1  # Weyl pair
    assert predicted_intertwiner_dim(mk(3, 3), mk(3, 3)) == 2
    assert predicted_intertwiner_dim(mk(1, 2), mk(1, 3)) == 0


def test_equal_pair_decomposes_into_det_twist_and_steinberg():
    ctx = make_group("gl2", make_field(5))
    F = ctx.field
    chi = MultChar(F, 2)
    linear, steinberg = decompose_gl2(ctx, BorelChar(ctx, (chi, chi)))
    assert abs(linear.values[0] - 1) < 1e-9
    assert abs(steinberg.values[0] - 5) < 1e-9
    dets = ctx.mat_det(ctx.elems[ctx.view.reps])
    assert np.max(np.abs(linear.values - chi.values[np.asarray(dets)])) < 1e-9
    assert abs(inner_product(linear, steinberg)) < 1e-9
    with pytest.raises(CharMismatch):
        decompose_gl2(ctx, BorelChar(ctx, (MultChar(F, 1), MultChar(F, 2))))


def test_matrix_model_realizes_the_induced_character():
    ctx = make_group("sl2", make_field(3))
    chi = MultChar(ctx.field, 1)
    bchar = BorelChar(ctx, (chi,))
    rep = build_induced_rep(ctx, bchar)
    assert rep.images.shape[1] == ctx.q + 1
    got = rep_character(rep)
    want = induced_character(ctx, bchar)
    assert np.max(np.abs(got.values - want.values)) < 1e-8


def test_quadratic_induced_splits_into_two_halves():
    for q in (3, 5):
        ctx = make_group("sl2", make_field(q))
        chi = MultChar(ctx.field, (q - 1) // 2)
        bchar = BorelChar(ctx, (chi,))
        plus, minus = split_rho_pm(ctx, bchar)
        ind = induced_character(ctx, bchar)
        assert abs(plus.values[0] - (q + 1) / 2) < 1e-8
        assert abs(minus.values[0] - (q + 1) / 2) < 1e-8
        assert np.max(np.abs((plus + minus).values - ind.values)) < 1e-8
        assert abs(inner_product(plus, plus) - 1) < 1e-8
        assert abs(inner_product(plus, minus)) < 1e-8
        assert epsilon_swap_defect(ctx, plus, minus) < 1e-8


def test_rho_pm_frozen_values_at_q3():
    # at q = 3 the halves take values (1 +- i sqrt(3)) / 2 on the
    # unipotent classes; plus is the one with positive imaginary part
    # at the class of (1 1; 0 1)
    ctx = make_group("sl2", make_field(3))
    chi = MultChar(ctx.field, 1)
    plus, minus = split_rho_pm(ctx, BorelChar(ctx, (chi,)))
    u = ctx.class_index_of((1, 1, 0, 1))
    v = ctx.class_index_of((1, 2, 0, 1))
    root = 0.5 + np.sqrt(3) / 2 * 1j
    assert abs(plus.values[u] - root) < 1e-8
    assert abs(plus.values[v] - np.conj(root)) < 1e-8
    assert abs(minus.values[u] - np.conj(root)) < 1e-8


def test_delta_kernels_support_and_normalization():
    ctx = make_group("sl2", make_field(5))
    chi = MultChar(ctx.field, 2)  # quadratic
    d1, dw = delta_kernels(ctx, BorelChar(ctx, (chi,)))
    q = ctx.q
    assert np.count_nonzero(d1) == q * (q - 1)
    assert np.count_nonzero(dw) == q * q * (q - 1)
    assert d1[ctx.id_of((1, 0, 0, 1))] == 1
    assert dw[ctx.w_id()] == 1
    assert np.max(np.abs(d1) * np.abs(dw)) == 0  # disjoint supports


def test_delta_kernels_require_self_dual_character():
    ctx = make_group("sl2", make_field(5))
    with pytest.raises(CharMismatch):
        delta_kernels(ctx, BorelChar(ctx, (MultChar(ctx.field, 1),)))
    g3 = make_group("gl2", make_field(3))
    with pytest.raises(CharMismatch):
        delta_kernels(g3, BorelChar(g3, (MultChar(g3.field, 0),
                                         MultChar(g3.field, 1))))


def test_hecke_relations_for_the_quadratic_character():
    for q in (3, 5, 7):
        ctx = make_group("sl2", make_field(q))
        chi = MultChar(ctx.field, (q - 1) // 2)
        assert delta_relation_defect(ctx, BorelChar(ctx, (chi,))) < 1e-9


def test_hecke_relations_reject_other_characters():
    ctx = make_group("sl2", make_field(5))
    F = ctx.field
    # trivial character: Delta_w * Delta_w picks up an extra Delta_w
    # term, so the pure two-term identity is deliberately not offered
    with pytest.raises(CharMismatch):
        delta_relation_defect(ctx, BorelChar(ctx, (MultChar(F, 0),)))
    with pytest.raises(CharMismatch):
        delta_relation_defect(ctx, BorelChar(ctx, (MultChar(F, 1),)))
    g3 = make_group("gl2", make_field(3))
    with pytest.raises(GroupMismatch):
        delta_relation_defect(g3, BorelChar(g3, (MultChar(g3.field, 1),
                                                 MultChar(g3.field, 1))))


def test_trivial_character_convolution_has_the_extra_term():
    # documents why the trivial character is excluded: at q = 3,
    # Delta_w * Delta_w = q^2(q-1) Delta_1 + 2(q-1)^2 Delta_w
    ctx = make_group("sl2", make_field(3))
    chi = MultChar(ctx.field, 0)
    d1, dw = delta_kernels(ctx, BorelChar(ctx, (chi,)))
    got = convolve(ctx, dw, dw)
    assert np.max(np.abs(got - (18 * d1 + 12 * dw))) < 1e-9


def test_idempotents_of_the_rank_two_hecke_algebra():
    # kappa records whether chi(-1) = -1, which happens iff q = 3 mod 4
    for q, want_kappa in ((3, 1), (5, 0), (7, 1)):
        ctx = make_group("sl2", make_field(q))
        chi = MultChar(ctx.field, (q - 1) // 2)
        (c1, cw), (c1m, cwm), kappa, defect = \
            intertwiner_idempotents(ctx, BorelChar(ctx, (chi,)))
        assert kappa == want_kappa
        assert defect < 1e-9
        assert abs(c1 - 1 / (2 * q * (q - 1))) < 1e-15
        assert abs(cw - (1j ** kappa) * c1 / np.sqrt(q)) < 1e-15
        assert cwm == -cw


def test_irreducible_principal_series_has_no_splitting():
    # chi of order 4: I(chi) is irreducible, its commutant is scalars
    ctx = make_group("sl2", make_field(5))
    chi = MultChar(ctx.field, 1)
    rep = build_induced_rep(ctx, BorelChar(ctx, (chi,)))
    gens = sl2_generators(ctx)
    with pytest.raises(NotSplitting):
        two_dim_commutant_projectors([rep.images[g] for g in gens])
