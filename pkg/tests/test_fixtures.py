from pathlib import Path

import numpy as np
import pytest
import sympy as sp

from lcsurf.dsl import format_chart, load_chart, parse_chart
from lcsurf.fixtures import CATALOG, antidesitter_torus, build, desitter_product, write_fixture_files
from lcsurf.invariants import FUNDAMENTAL_KEYS, STRUCTURE_KEYS

SHIPPED = Path(__file__).resolve().parent.parent / "fixtures"
u, v = sp.symbols("u v", real=True)


def _sym(chart):
    ns = {"u": u, "v": v, "pi": sp.pi}
    ns.update({k: sp.nsimplify(val) for k, val in chart.constants})
    return [sp.sympify(s.replace("^", "**"), locals=ns) for s in chart.sources]


@pytest.mark.parametrize(
    "ctor,r,eta,target",
    [
        (desitter_product, 0.5, (1, 1, 1, -1), 1),
        (desitter_product, 2.0, (1, 1, 1, -1), 1),
        (antidesitter_torus, -0.25, (1, 1, -1, -1), -1),
        (antidesitter_torus, -0.5, (1, 1, -1, -1), -1),
    ],
)
def test_product_charts_lie_on_quadric(ctor, r, eta, target):
    x = _sym(ctor(r))
    q = sum(e * xi**2 for e, xi in zip(eta, x))
    assert sp.simplify(q.rewrite(sp.exp) - target) == 0


@pytest.mark.parametrize("r", [0.0, -1.0, float("nan")])
def test_desitter_rejects(r):
    with pytest.raises(ValueError):
        desitter_product(r)


@pytest.mark.parametrize("r", [0.0, -0.6, 0.25])
def test_antidesitter_rejects(r):
    with pytest.raises(ValueError):
        antidesitter_torus(r)


def test_antidesitter_admits_endpoint():
    assert antidesitter_torus(-0.5).n == 3


@pytest.mark.parametrize("key", list(CATALOG))
def test_chart_files_round_trip_and_match_shipped(key, tmp_path):
    chart, _ = build(key)
    text = format_chart(chart)
    assert parse_chart(text) == chart
    assert format_chart(parse_chart(text)) == text
    assert (SHIPPED / f"{key}.chart").read_text(encoding="utf-8") == text
    assert load_chart(SHIPPED / f"{key}.chart") == chart


def test_write_fixture_files(tmp_path):
    paths = write_fixture_files(tmp_path)
    assert sorted(p.name for p in paths) == sorted(f"{k}.chart" for k in CATALOG)


@pytest.mark.parametrize("key", list(CATALOG))
def test_expectations_hold(key, catalog_runs):
    chart, exp, an = catalog_runs[key]
    rep = an.classification
    assert rep.branch == exp.branch
    if exp.essential_rank is not None:
        assert rep.essential_rank == exp.essential_rank
    if an.residuals is None:
        return
    assert an.residuals.max_of(STRUCTURE_KEYS) <= exp.structure_bound
    assert an.residuals.max_of(FUNDAMENTAL_KEYS) <= exp.fundamental_bound
    cf = exp.closed_form
    for p in an.points:
        s = p.sample
        if "psi" in cf:
            assert s.psi == pytest.approx(cf["psi"], abs=1e-10)
        if "omega" in cf:
            assert s.omega == pytest.approx(cf["omega"], abs=1e-10)
        if "K" in cf:
            assert s.K == pytest.approx(cf["K"], abs=1e-10)


def test_plane_fails_everywhere(catalog_runs):
    an = catalog_runs["plane_control"][2]
    assert not an.points and len(an.failures) == 81
    assert {f.kind for f in an.failures} == {"conformally degenerate"}


def test_graph_control_carries_the_form(catalog_runs):
    rep = catalog_runs["graph_control"][2].classification
    assert rep.phi_max > 1.0
    assert np.isfinite(rep.psi_max)
