import math
from pathlib import Path

import pytest

subgeom = pytest.importorskip("subgeom")

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def test_rate_closed_form():
    phi = subgeom.PhiSpec(beta=1.0, alpha=0.5)
    assert subgeom.rate_r(phi, 0.5, 6) == pytest.approx(2.5)
    assert subgeom.big_h(phi, 4.0) == pytest.approx(2.0)
    assert subgeom.big_h_inv(phi, 2.0) == pytest.approx(4.0)
    assert subgeom.delta_k(phi, 0.5, 6) == pytest.approx(0.1)


def test_young_pair():
    pair = subgeom.make_pair(0.5)
    assert pair.psi1(4.0) * pair.psi2(4.0) == pytest.approx(8.0)
    assert subgeom.check_young(pair, 64) <= 0.0


def test_certify_and_constants():
    spec = subgeom.load_chain_spec(str(FIXTURES / "two_state.json"))
    cert = subgeom.certify(spec)
    assert cert["eps_nu"] == pytest.approx(0.7)
    assert cert["b_v"] == pytest.approx(0.8)

    constants = subgeom.theorem_constants(spec)
    assert constants["c_star"] == pytest.approx(1.0 / 0.7)
    assert constants["c"] > 0.0
    assert math.isfinite(constants["c"])


def test_verify_drift_suite():
    spec = subgeom.load_chain_spec(str(FIXTURES / "two_state.json"))
    result = subgeom.verify(spec, suite="drift")
    assert result["all_pass"]
    assert result["csv"].startswith("check_id,chain_id,pair,lhs,tail,rhs")


def test_simulate_deterministic():
    spec = subgeom.load_chain_spec(str(FIXTURES / "two_state.json"))
    a = subgeom.simulate(spec, 0, 1, replicates=2000, seed=5, threads=1)
    b = subgeom.simulate(spec, 0, 1, replicates=2000, seed=5, threads=4)
    assert a["tau"]["mean"] == b["tau"]["mean"]
    # tau is geometric with success probability eps_nu = 0.7.
    assert a["tau"]["mean"] == pytest.approx(1.0 / 0.7, rel=0.05)


def test_certify_failure_raises():
    bad = """{"schema_version":1,"kernels":[[[0.7,0.3],[0.4,0.6]]],
      "v":[1.0,1.0],"set_c":[0],"alpha":0.0,"beta":0.5}"""
    spec = subgeom.parse_chain_spec(bad)
    with pytest.raises(subgeom.CertifyError):
        subgeom.certify(spec)
