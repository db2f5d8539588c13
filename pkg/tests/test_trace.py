import math

import numpy as np
import pytest

from conftest import zero_q_problem
from retarded_sl import index_spectrum, trace_partial_sum, trace_report, trace_rhs, trace_term
from retarded_sl.trace import build_report, trace_constants, trace_partial_sums, _neumaier_cumsum


def unperturbed_spectrum(n_max):
    roots = [0.0] * 4 + [float(k) for k in range(1, n_max)] + [float(-k) for k in range(1, n_max)]
    return index_spectrum(sorted(roots), n_max)


@pytest.fixture(scope="module")
def shipped_report(shipped, shipped_spectrum):
    return build_report(shipped, shipped_spectrum)


def test_zero_potential_constants():
    p = zero_q_problem(a1=0.0, a1p=1.0)
    c, d = trace_constants(p)
    assert (c, d) == (-1.0, 0.0)
    assert trace_rhs(p) == pytest.approx(2 / math.pi - 1, rel=1e-15)


def test_d_constant_is_exact_ratio(shipped):
    shipped2 = shipped.with_coefficients(a2=0.3, a2p=1.7)
    assert trace_constants(shipped2)[1] == 0.3 / 1.7


def test_unperturbed_roots_give_zero_sums():
    p = zero_q_problem(a1p=0.0)
    spec = unperturbed_spectrum(12)
    assert np.all(trace_partial_sums(p, spec, 12) == 0.0)


def test_term_without_correction():
    p = zero_q_problem(a1p=0.0)
    roots = sorted([-0.2, -0.1, 0.1, 0.2] + [k + 0.01 * k for k in range(1, 6)] + [-k - 0.02 for k in range(1, 6)])
    spec = index_spectrum(roots, 6)
    for n in range(1, 7):
        expected = spec.mu(-n) ** 2 + spec.mu(n) ** 2 - 2 * (n - 1) ** 2
        assert trace_term(p, spec, n) == pytest.approx(expected, rel=1e-14)
    assert trace_term(p, spec, 1) == pytest.approx(2 * 0.2**2)


def test_terms_start_at_one(shipped, shipped_spectrum):
    with pytest.raises(ValueError):
        trace_term(shipped, shipped_spectrum, 0)


def test_partial_sums_telescope(shipped, shipped_spectrum):
    sums = trace_partial_sums(shipped, shipped_spectrum, 40)
    for n in (1, 2, 17, 40):
        assert sums[n] - sums[n - 1] == pytest.approx(trace_term(shipped, shipped_spectrum, n), abs=1e-12)
    assert trace_partial_sum(shipped, shipped_spectrum, 40) == sums[40]


def test_compensated_sum():
    vals = [1e16, 1.0, -1e16] * 3
    assert _neumaier_cumsum(vals)[-1] == 3.0


def test_shipped_terms_decay(shipped, shipped_spectrum):
    terms = {n: trace_term(shipped, shipped_spectrum, n) for n in range(10, 41)}
    assert all(np.isfinite(list(terms.values())))
    k_fit = max(abs(terms[n]) * n**2 for n in range(10, 21))
    assert all(abs(terms[n]) <= 2 * k_fit / n**2 for n in range(20, 41))


def test_report_layout(shipped_report):
    r = shipped_report
    assert r.n_max == 40
    assert len(r.partial_sums) == 39 and len(r.residuals) == 39
    assert len(r.decay_ratios) == 19
    assert r.residual_at(40) == r.partial_sums[-1] - r.rhs
    assert r.decay_ratio(20) == pytest.approx(r.decay_ratios[-1])
    assert r.c_const == pytest.approx(-1.0)
    assert r.d_const == 1.0


def test_shipped_report_flags_plateau(shipped_report):
    notes = [w for w in shipped_report.warnings if w.startswith("residual plateau")]
    assert len(notes) == 1
    # the offset settles near 4C/pi, here -4/pi
    assert shipped_report.limit_estimate == pytest.approx(-4 / math.pi, abs=0.01)


def test_report_needs_ten_terms(shipped):
    with pytest.raises(ValueError):
        trace_report(shipped, 5)


def test_pqrs_at_n_is_reported(shipped, shipped_spectrum):
    r = build_report(shipped, shipped_spectrum, at="n")
    assert r.pqrs_at == "n"
    assert np.all(np.isfinite(r.residuals))
