import math

import numpy as np
import pytest

from polymc import binom, complexity_report, r_tilde


def exhaustive_r_tilde(d_tilde, q):
    o = 0
    while math.comb(o + q, q) < d_tilde:
        o += 1
    return o


class TestBinom:
    def test_small_values(self):
        assert binom(6, 4) == 15
        assert binom(8, 6) == 28
        assert binom(14, 12) == 91

    def test_b_larger_than_a_is_zero(self):
        assert binom(3, 5) == 0

    def test_exact_for_large_arguments(self):
        # arbitrary-precision integers: no wrapping ever
        assert binom(200, 100) == math.comb(200, 100)
        assert binom(200, 100) > 2**195

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            binom(-1, 2)
        with pytest.raises(ValueError):
            binom(2, -1)


class TestRTilde:
    def test_reference_values(self):
        assert r_tilde(73, 3) == 6
        assert r_tilde(84, 3) == 6
        assert r_tilde(252, 3) == 10

    def test_trivial_feature_rank(self):
        for q in range(1, 6):
            assert r_tilde(1, q) == 0

    def test_matches_exhaustive_scan(self, rng):
        for _ in range(300):
            d_tilde = int(rng.integers(1, 50_000))
            q = int(rng.integers(1, 7))
            assert r_tilde(d_tilde, q) == exhaustive_r_tilde(d_tilde, q)

    def test_bracket_property(self):
        for q in range(1, 6):
            fq = math.factorial(q)
            for d_tilde in range(1, 10_001):
                rt = r_tilde(d_tilde, q)
                bound = (fq * d_tilde) ** (1.0 / q)
                assert bound - q <= rt <= bound + 1e-9

    def test_validation(self):
        with pytest.raises(ValueError):
            r_tilde(0, 3)
        with pytest.raises(ValueError):
            r_tilde(5, 0)


class TestComplexityReport:
    def test_override_example(self):
        report = complexity_report(m=20, n=200, q=3, d_tilde=73)
        assert report.r_tilde == 6
        assert report.mnp_phi == 14 * 73 + 200 * 6 == 2222
        assert report.sampling_lower_bound == pytest.approx(0.5555)
        assert report.mnp_linear is None

    def test_generic_bound_examples(self):
        # single manifold: d=3, order-2 map, q=3
        single = complexity_report(m=100, n=500, d=3, alpha=2, q=3, k=1)
        assert single.d_tilde == 84 and single.r_tilde == 6
        # three manifolds triple the feature rank
        triple = complexity_report(m=100, n=500, d=3, alpha=2, q=3, k=3)
        assert triple.d_tilde == 252 and triple.r_tilde == 10

    def test_minimality_invariant(self, rng):
        for _ in range(100):
            m = int(rng.integers(5, 60))
            n = int(rng.integers(5, 500))
            q = int(rng.integers(1, 5))
            d_tilde = int(rng.integers(1, 300))
            report = complexity_report(m=m, n=n, q=q, d_tilde=d_tilde)
            rt = report.r_tilde
            effective = report.d_tilde
            assert effective == min(d_tilde, binom(m + q, q), n)
            assert binom(rt + q, q) >= effective
            assert rt == 0 or binom(rt - 1 + q, q) < effective
            assert report.mnp_phi == (m - rt) * effective + n * rt
            assert 0.0 < report.sampling_lower_bound <= 1.0

    def test_bound_clamped_to_one(self):
        report = complexity_report(m=4, n=4, q=2, d_tilde=4)
        assert report.sampling_lower_bound == 1.0

    def test_feature_count_caps_d_tilde(self):
        # d_tilde never exceeds C(m+q, q) or n
        report = complexity_report(m=3, n=7, d=2, alpha=4, q=3, k=1)
        assert report.d_tilde == min(binom(2 + 12, 12), binom(6, 3), 7) == 7

    def test_linear_count_on_reference_triples(self):
        # feature-space parameter counts beat data-space counts on the
        # reference configurations
        for d, alpha, q, k in [(3, 2, 3, 1), (3, 2, 3, 3), (2, 4, 3, 1)]:
            report = complexity_report(m=100, n=2000, d=d, alpha=alpha, q=q, k=k)
            assert report.mnp_linear is not None
            assert report.mnp_phi <= report.mnp_linear

    def test_requires_d_alpha_or_override(self):
        with pytest.raises(ValueError):
            complexity_report(m=10, n=20, q=3)
        with pytest.raises(ValueError):
            complexity_report(m=10, n=20, q=3, d_tilde=0)
