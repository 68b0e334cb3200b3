import json
import math

import numpy as np
import pytest

import wulff


def test_norms():
    assert wulff.AnisoNorm.euclidean()([3.0, 4.0]) == pytest.approx(5.0)
    assert wulff.AnisoNorm.rnorm(4.0)([1.0, 1.0]) == pytest.approx(2 ** 0.25)
    e = wulff.AnisoNorm.ellipse(2.0, 1.0)
    assert e.polar([1.0, 1.0]) == pytest.approx(math.sqrt(1.25))
    assert e.kappa() == pytest.approx(2 * math.pi)
    assert e.identity_violation(2000) < 1e-8


def test_beta_and_radial():
    pp = wulff.ProblemParams(3, 2.0, 2.0, 3.0 / 16.0)
    assert wulff.solve_beta(pp) == pytest.approx(0.25, abs=1e-12)
    sol = wulff.RadialSolution.solve(pp)
    r = np.linspace(0.01, 1.0, 100)
    np.testing.assert_allclose(sol.V(r), sol.phi(r), atol=1e-12)
    assert sol.v(np.array([math.exp(-1.0)]))[0] == pytest.approx(0.25)
    assert sol.residual(list(r)) < 1e-8
    assert sol.membership().passed
    with pytest.raises(wulff.WulffError):
        wulff.solve_beta(wulff.ProblemParams(3, 2.0, 2.0, 0.25))


def test_second_solution_rejected():
    u2 = wulff.RadialSolution.second_solution(wulff.ProblemParams(3, 2.0, 1.8, 0.0))
    assert not u2.membership().passed


def test_rearrangement():
    values = np.array([-2.0, 1.0, -1.0, 0.0])
    measures = np.array([0.25, 0.3, 0.2, 0.25])
    prof = wulff.decreasing_rearrangement(values, measures)
    np.testing.assert_array_equal(prof(np.array([0.1, 0.3, 0.8])), [2.0, 1.0, 0.0])
    assert wulff.distribution_function(values, measures, 0.5) == pytest.approx(0.75)
    assert wulff.marcinkiewicz_norm(np.full(4, 2.0), np.full(4, 0.25), 2.0) == pytest.approx(2.0)


def test_v_star_and_hardy():
    pp = wulff.ProblemParams(3, 2.0, 2.0, 3.0 / 16.0)
    kappa = 4 * math.pi / 3
    vs = wulff.RadialSolution.solve(pp).v_star(kappa)
    assert vs(0.5) == pytest.approx(math.log(kappa / 0.5) / 12, rel=1e-9)
    q = wulff.hardy_quotient_radial(lambda r: 1 - r, lambda r: -1.0, 3, 2.0, 1.0)
    assert q == pytest.approx(1.0, rel=1e-10)


def test_cli_beta(tmp_path):
    cfg = tmp_path / "beta.json"
    cfg.write_text(json.dumps({"N": 3, "p": 2, "q": 2, "lambda": 0.1875}))
    assert wulff.run_cli(["beta", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 0
    out = json.loads((tmp_path / "out" / "beta.json").read_text())
    assert out["beta"] == pytest.approx(0.25)
