from dataclasses import replace

import numpy as np
import pytest

from helpers import ENNEPER, constant_gauge, jet_gauge, make_chart, padded
from lcsurf.fixtures import hyperbolic_cylinder, padded_cylinder
from lcsurf.invariants import (
    FUNDAMENTAL_KEYS,
    RESIDUAL_KEYS,
    STRUCTURE_KEYS,
    ResidualReport,
    _willmore_lhs,
    compute_invariants,
    point_residuals,
    residual_fundamental,
    residual_structure,
    section3_residuals,
    willmore_residual,
)
from lcsurf.jets import JetOrderError
from lcsurf.pipeline import canonical_frame, remix_normal_frame

CYL = hyperbolic_cylinder()
ENN = make_chart("enneper", "R", 3, ENNEPER, domain=(-0.5, 0.5, -0.5, 0.5))
IDENTITY_KEYS = STRUCTURE_KEYS + FUNDAMENTAL_KEYS


def _inv(chart, base, order=8):
    f = canonical_frame(chart, base, order)
    return f, compute_invariants(f)


@pytest.mark.parametrize("base", [(0.0, 0.0), (0.3, -0.2), (-0.9, 0.75)])
def test_cylinder_closed_form(base):
    f, inv = _inv(CYL, base)
    assert inv.psi.value == pytest.approx(-0.25, abs=1e-12)
    assert abs(inv.Omega[0].value) == pytest.approx(0.5, abs=1e-12)
    assert abs(inv.phi[0].value) < 1e-12
    assert abs(inv.A[0][0].value) < 1e-12
    assert f.omega.value == pytest.approx(0, abs=1e-12)
    assert f.K.value == pytest.approx(0, abs=1e-12)
    assert inv.phi_norm_sq == pytest.approx(0, abs=1e-20)
    assert inv.quartic == pytest.approx(-0.25, abs=1e-12)


def test_cylinder_residuals_and_separate_sides():
    f, inv = _inv(CYL, (0.3, -0.2))
    res = point_residuals(f, inv)
    assert set(RESIDUAL_KEYS) <= set(res)
    for k in STRUCTURE_KEYS:
        assert res[k] <= 1e-8, k
    for k in FUNDAMENTAL_KEYS:
        assert res[k] <= 1e-7, k
    # the psi_zbar identity: both sides vanish separately
    assert abs(inv.psi.dzb().value) < 1e-12
    e2w = np.exp(2 * f.omega.value)
    rhs = 0.5 * e2w * inv.K.dz().value - sum(
        inv.raise_index(inv.Omega)[a].value * np.conj(inv.phi[a].value) for a in range(inv.n_normal)
    )
    assert abs(rhs) < 1e-12


def test_ricci_equation_trivial_in_n3():
    f, inv = _inv(ENN, (0.2, 0.1))
    A = inv.A[0][0]
    assert abs(A.value) < 1e-14
    assert abs((A.dzb() - A.conj().dz()).value) < 1e-14


def test_willmore_cylinder_is_one_sixteenth():
    for base in [(0.0, 0.0), (0.5, -0.5)]:
        f, inv = _inv(CYL, base)
        assert willmore_residual(f, inv) == pytest.approx([1 / 16])


def test_willmore_linear_in_omega_scale():
    f, inv = _inv(CYL, (0.1, 0.2))
    for eps in (1e-3, 0.1, -0.2):
        bent = replace(inv, Omega=tuple((1 + eps) * o for o in inv.Omega))
        assert willmore_residual(f, bent)[0] == pytest.approx((1 + eps) / 16, rel=1e-10)


def test_maximal_enneper_is_willmore():
    # a maximal surface is Willmore; its form does not vanish
    f, inv = _inv(ENN, (0.3, -0.2))
    assert max(willmore_residual(f, inv)) < 1e-10
    assert inv.phi_euclid > 0.1


def test_corrupted_psi_harness():
    f, inv = _inv(CYL, (0.2, -0.4))
    delta = 1e-3
    bent = replace(inv, psi=inv.psi + delta)
    s22 = residual_structure(f, bent)["S2.2"]
    Yzb = inv.Yz.conj().value
    expected = delta * np.exp(-2 * f.omega.value) * np.max(np.abs(Yzb))
    assert s22 == pytest.approx(expected, rel=1e-8)
    assert residual_structure(f, inv)["S2.2"] < 1e-12


def test_f26_is_twice_imaginary_part():
    rng = np.random.default_rng(3)
    for base in [(0.3, -0.2), (-0.1, 0.4)]:
        f = canonical_frame(ENN, base)
        f = remix_normal_frame(f, constant_gauge(f.signs, rng))
        inv = compute_invariants(f)
        lhs = _willmore_lhs(inv)
        twice_im = max(2 * abs(np.imag(t.value)) for t in lhs)
        assert residual_fundamental(f, inv)["F2.6"] == pytest.approx(twice_im, abs=1e-13)


def test_gauge_invariance_n4_pointwise_gauge():
    chart = make_chart("enn4", "R", 4, padded(ENNEPER, 1), domain=(-0.5, 0.5, -0.5, 0.5))
    base = (0.3, -0.2)
    f0, inv0 = _inv(chart, base, 9)
    r0 = point_residuals(f0, inv0)
    moved = 0.0
    for seed in range(3):
        f1 = remix_normal_frame(f0, jet_gauge(f0.signs, base, 9, seed))
        inv1 = compute_invariants(f1)
        r1 = point_residuals(f1, inv1)
        assert inv1.phi_norm_sq == pytest.approx(inv0.phi_norm_sq, abs=1e-8)
        assert inv1.quartic == pytest.approx(inv0.quartic, abs=1e-8)
        for k in IDENTITY_KEYS:
            assert abs(r1[k] - r0[k]) <= 1e-8, k
        moved = max(moved, max(abs(a.value - b.value) for a, b in zip(inv0.phi, inv1.phi)))
    assert moved >= 1e-2


def test_ricci_quadratic_term_in_n5():
    # a non-abelian normal connection only exists for n >= 5
    for coords in (padded(["sinh(u)", "v", "cosh(u)"], 2), padded(ENNEPER, 2)):
        chart = make_chart("pad5", "R", 5, coords, domain=(-0.5, 0.5, -0.5, 0.5))
        base = (0.3, -0.2)
        f0 = canonical_frame(chart, base, 9)
        f1 = remix_normal_frame(f0, jet_gauge(f0.signs, base, 9, 1))
        inv1 = compute_invariants(f1)
        assert max(abs(inv1.A[0][1].value), abs(inv1.A[1][2].value)) > 1e-2
        res = point_residuals(f1, inv1)
        for k in IDENTITY_KEYS:
            assert res[k] <= 1e-8, k


def test_coordinate_rescaling_covariance():
    a = 1.7
    scaled = [c.replace("u", "(a*u)").replace("v", "(a*v)") for c in ENNEPER]
    chart_a = make_chart("enn_a", "R", 3, scaled, domain=(-0.3, 0.3, -0.3, 0.3), consts=[("a", a)])
    p = (0.3, -0.2)
    f, inv = _inv(ENN, p)
    fa, inva = _inv(chart_a, (p[0] / a, p[1] / a))
    assert inva.psi.value == pytest.approx(a**2 * inv.psi.value, rel=1e-9)
    assert abs(inva.Omega[0].value) == pytest.approx(a**2 * abs(inv.Omega[0].value), rel=1e-9)
    assert np.exp(2 * fa.omega.value) == pytest.approx(a**2 * np.exp(2 * f.omega.value), rel=1e-9)
    r = section3_residuals(f, inv)["R3.1c"]
    ra = section3_residuals(fa, inva)["R3.1c"]
    assert abs(r - ra) <= 1e-8


def test_section3_on_cylinder():
    f, inv = _inv(CYL, (0.4, 0.4))
    s3 = section3_residuals(f, inv)
    for k in ("R3.1a", "R3.1b", "R3.1c", "R3.3"):
        assert s3[k] <= 1e-8, k
    # R3.4 is not an identity: both members equal 5/16 on the cylinder
    assert s3["R3.4a"] == pytest.approx(5 / 16)
    assert s3["R3.4b"] == pytest.approx(5 / 16)
    assert s3["R3.4"] == max(s3["R3.4a"], s3["R3.4b"])


def test_section3_on_form_carrying_surface():
    f, inv = _inv(ENN, (0.3, -0.2))
    s3 = section3_residuals(f, inv)
    assert s3["R3.1a"] > 1e-3  # not an identity once the form is present


def test_residual_report_reduction():
    rows = [((0.0, 0.0), dict.fromkeys(RESIDUAL_KEYS, 1e-3)), ((1.0, 0.5), dict.fromkeys(RESIDUAL_KEYS, 2e-3))]
    rep = ResidualReport.from_points(rows)
    assert rep.values["S2.2"] == 2e-3 and rep.argmax["S2.2"] == (1.0, 0.5)
    assert rep.max_of(STRUCTURE_KEYS) == 2e-3


def test_residuals_need_order_seven():
    f = canonical_frame(ENN, (0.1, 0.1), 6)
    inv = compute_invariants(f)
    with pytest.raises(JetOrderError, match="order >= 7"):
        residual_fundamental(f, inv)


def test_padded_cylinder_invariants_match_native():
    f3, inv3 = _inv(CYL, (0.3, 0.3))
    f4, inv4 = _inv(padded_cylinder(), (0.3, 0.3))
    assert inv4.psi.value == pytest.approx(inv3.psi.value)
    assert inv4.quartic == pytest.approx(inv3.quartic)
    assert inv4.phi_norm_sq == pytest.approx(0, abs=1e-20)
