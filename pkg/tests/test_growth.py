import math

import numpy as np
import pytest

from conseq_lab.growth import (NoCertificate, aitken, bound_report, critical_beta,
                               dominant_root, durand_kerner, lower_bound_closed, poly1_coeffs,
                               poly_bounds, rho_estimate, upper_bound_block, verify_mineq)


def test_rho_of_123_matches_known_constant():
    # the avoidance probability of 123 decays like (3*sqrt(3)/(2*pi))^n
    assert rho_estimate("123").value == pytest.approx(3 * math.sqrt(3) / (2 * math.pi), abs=1e-9)


def test_rho_reverse_invariant_and_ordering():
    assert rho_estimate("132").value == pytest.approx(rho_estimate("231").value, abs=1e-12)
    assert rho_estimate("132").value < rho_estimate("123").value
    assert rho_estimate("12").value == 0.0
    with pytest.raises(ValueError):
        rho_estimate("132", 4)


def test_aitken_is_exact_on_geometric_tail():
    seq = [2 + 0.5**n for n in range(6)]
    assert aitken(seq)[-1] == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("coeffs", [[1, -6, 11, -6], [1, 0, 0, 1], [2, -1, 0.5, -3, 1]])
def test_durand_kerner_agrees_with_numpy(coeffs):
    ours = np.sort_complex(durand_kerner(coeffs))
    ref = np.sort_complex(np.roots(coeffs))
    assert np.allclose(ours, ref, atol=1e-9)


def test_small_beta_root_tends_to_one():
    r = dominant_root(poly1_coeffs(1e-8, 5), (0.8, 1.0))
    assert r.real and r.modulus == pytest.approx(1.0, abs=1e-7)


def test_large_beta_makes_root_complex():
    m = 6
    crit = float(critical_beta(m))
    assert not dominant_root(poly1_coeffs(2 * crit, m)).real
    assert dominant_root(poly1_coeffs(crit / 2, m), ((m - 1) / m, 1.0)).real


def test_poly_bounds_residuals_small():
    pb = poly_bounds("132", 4)
    assert max(pb.lower.residual, pb.upper.residual) <= 1e-10
    assert pb.rho_u >= rho_estimate("132").value


def test_certificate_below_lower_root():
    pb = poly_bounds("132", 10)
    cert = lower_bound_closed("132", 10)
    assert cert.delta <= pb.rho_l
    assert pb.lower.real


def test_block_bound_and_mineq():
    for v in ("123", "132"):
        assert upper_bound_block(v, 2) >= rho_estimate(v).value - 1e-6
        assert verify_mineq(v, 2, range(1, 4)).holds


def test_bound_report_shape():
    rep = bound_report("123", 10)
    obj = rep.to_json_obj()
    assert {b["source"] for b in obj["bounds"]} >= {"block", "poly1", "poly2"}
    # the block and poly2 upper bounds hold; the poly1 root sits above rho
    assert [b["source"] for b in rep.violations()] == ["poly1"]


def test_no_certificate_raises():
    assert issubclass(NoCertificate, ValueError)
