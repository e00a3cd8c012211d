import math

import numpy as np
import pytest

from ripscale.metrics import (
    MatchingProblem,
    bottleneck,
    bottleneck_bruteforce,
    wasserstein,
    wasserstein_bruteforce,
)

from .diagram_utils import dg, random_diagram

SQRT2 = math.sqrt(2.0)
SQRT5 = math.sqrt(5.0)


class TestHandWorkedExamples:
    def test_identical_diagrams(self):
        d = dg(1, [(1.0, 2.0), (0.5, 0.75), (0.25, math.inf)])
        assert bottleneck(d, d) == 0.0
        assert wasserstein(d, d, p=1.0) == 0.0
        assert wasserstein(d, d, p=2.0) == 0.0

    def test_single_loop_shifted(self):
        d1 = dg(1, [(1.0, SQRT2)])
        d2 = dg(1, [(2.0, SQRT5)])
        # matching both loops to the diagonal beats the direct match
        assert bottleneck(d1, d2) == pytest.approx((SQRT2 - 1.0) / 2.0, abs=1e-12)

    def test_loop_of_doubled_square(self):
        d1 = dg(1, [(1.0, SQRT2)])
        d2 = dg(1, [(2.0, 2.0 * SQRT2)])
        assert bottleneck(d1, d2) == pytest.approx(SQRT2 - 1.0, abs=1e-12)
        assert wasserstein(d1, d2, p=1.0) == pytest.approx(
            3.0 * (SQRT2 - 1.0) / 2.0, abs=1e-12
        )

    def test_components_of_doubled_square(self):
        d1 = dg(0, [(0.0, 1.0)] * 3 + [(0.0, math.inf)])
        d2 = dg(0, [(0.0, 2.0)] * 3 + [(0.0, math.inf)])
        assert bottleneck(d1, d2) == pytest.approx(1.0, abs=1e-12)
        assert wasserstein(d1, d2, p=1.0) == pytest.approx(3.0, abs=1e-12)

    def test_empty_vs_single_pair(self):
        d1 = dg(0, [])
        d2 = dg(0, [(1.0, 3.0)])
        assert bottleneck(d1, d2) == pytest.approx(1.0, abs=1e-12)
        assert wasserstein(d1, d2, p=1.0) == pytest.approx(1.0, abs=1e-12)

    def test_both_empty(self):
        assert bottleneck(dg(2, []), dg(2, [])) == 0.0
        assert wasserstein(dg(2, []), dg(2, []), p=2.0) == 0.0


class TestEssentialPairs:
    def test_shifted_infinite_birth(self):
        d1 = dg(0, [(0.0, math.inf)])
        d2 = dg(0, [(0.5, math.inf)])
        assert bottleneck(d1, d2) == pytest.approx(0.5, abs=0)
        assert wasserstein(d1, d2, p=1.0) == pytest.approx(0.5, abs=0)

    def test_multiple_infinite_pairs_match_in_birth_order(self):
        d1 = dg(1, [(0.0, math.inf), (2.0, math.inf)])
        d2 = dg(1, [(1.0, math.inf), (3.0, math.inf)])
        assert bottleneck(d1, d2) == pytest.approx(1.0, abs=0)
        assert wasserstein(d1, d2, p=1.0) == pytest.approx(2.0, abs=0)
        assert wasserstein(d1, d2, p=2.0) == pytest.approx(SQRT2, rel=1e-15)

    def test_infinite_count_mismatch_is_infinite_distance(self):
        d1 = dg(0, [(0.0, math.inf)])
        d2 = dg(0, [])
        assert bottleneck(d1, d2) == math.inf
        assert wasserstein(d1, d2, p=1.0) == math.inf

    def test_essential_and_finite_parts_combine(self):
        d1 = dg(0, [(0.0, 1.0), (0.0, math.inf)])
        d2 = dg(0, [(0.0, 1.2), (0.7, math.inf)])
        assert bottleneck(d1, d2) == pytest.approx(0.7, abs=1e-12)
        assert wasserstein(d1, d2, p=1.0) == pytest.approx(0.9, abs=1e-12)


class TestValidation:
    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            bottleneck(dg(0, []), dg(1, []))
        with pytest.raises(ValueError):
            wasserstein(dg(0, []), dg(1, []))
        with pytest.raises(ValueError):
            bottleneck_bruteforce(dg(0, []), dg(1, []))
        with pytest.raises(ValueError):
            wasserstein_bruteforce(dg(0, []), dg(1, []))

    def test_p_below_one_rejected(self):
        d = dg(0, [(0.0, 1.0)])
        with pytest.raises(ValueError):
            wasserstein(d, d, p=0.5)
        with pytest.raises(ValueError):
            wasserstein_bruteforce(d, d, p=0.5)
        with pytest.raises(ValueError):
            wasserstein(d, d, p=math.inf)

    def test_bruteforce_cap(self):
        big = dg(0, [(0.0, 1.0)] * 7)
        with pytest.raises(ValueError):
            bottleneck_bruteforce(big, big)
        with pytest.raises(ValueError):
            wasserstein_bruteforce(big, big)


class TestMatchingProblem:
    def test_shape_and_blocks(self):
        d1 = dg(0, [(0.0, 2.0), (1.0, 3.0)])
        d2 = dg(0, [(0.5, 1.5)])
        prob = MatchingProblem.from_diagrams(d1, d2)
        assert prob.n_left == 2 and prob.n_right == 1
        assert prob.costs.shape == (3, 3)
        # real-to-real block is the L-infinity ground distance
        assert prob.costs[0, 0] == pytest.approx(0.5)
        # each real point's diagonal column costs its own half-persistence
        assert np.allclose(prob.costs[0, 1:], 1.0)
        assert np.allclose(prob.costs[1, 1:], 1.0)
        # diagonal slots see d2's half-persistence, slot-to-slot is free
        assert prob.costs[2, 0] == pytest.approx(0.5)
        assert np.all(prob.costs[2, 1:] == 0.0)

    def test_costs_finite_nonnegative(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            prob = MatchingProblem.from_diagrams(
                random_diagram(rng, 1, n_infinite=1),
                random_diagram(rng, 1, n_infinite=1),
            )
            n = prob.n_left + prob.n_right
            assert prob.costs.shape == (n, n)
            assert np.all(np.isfinite(prob.costs))
            assert np.all(prob.costs >= 0.0)

    def test_infinite_pairs_excluded_from_matrix(self):
        d = dg(0, [(0.0, 1.0), (0.0, math.inf)])
        prob = MatchingProblem.from_diagrams(d, d)
        assert prob.n_left == prob.n_right == 1


class TestAgainstBruteForce:
    def test_random_pairs_agree(self):
        rng = np.random.default_rng(555)
        for _ in range(200):
            n_inf = int(rng.integers(0, 3))
            d1 = random_diagram(rng, 1, max_finite=4, n_infinite=n_inf)
            d2 = random_diagram(rng, 1, max_finite=4, n_infinite=n_inf)
            assert bottleneck(d1, d2) == pytest.approx(
                bottleneck_bruteforce(d1, d2), abs=1e-9
            )
            for p in (1.0, 2.0):
                assert wasserstein(d1, d2, p) == pytest.approx(
                    wasserstein_bruteforce(d1, d2, p), abs=1e-9
                )

    def test_bruteforce_hand_example(self):
        d1 = dg(1, [(1.0, SQRT2)])
        d2 = dg(1, [(2.0, 2.0 * SQRT2)])
        assert bottleneck_bruteforce(d1, d2) == pytest.approx(SQRT2 - 1.0, abs=1e-12)
        assert wasserstein_bruteforce(d1, d2, 1.0) == pytest.approx(
            3.0 * (SQRT2 - 1.0) / 2.0, abs=1e-12
        )


class TestMetricProperties:
    def _triples(self, n):
        rng = np.random.default_rng(909)
        for _ in range(n):
            yield (
                random_diagram(rng, 0, max_finite=4, n_infinite=1),
                random_diagram(rng, 0, max_finite=4, n_infinite=1),
                random_diagram(rng, 0, max_finite=4, n_infinite=1),
            )

    def test_symmetry_is_exact(self):
        for a, b, _ in self._triples(50):
            assert bottleneck(a, b) == bottleneck(b, a)
            assert wasserstein(a, b, 1.0) == wasserstein(b, a, 1.0)
            assert wasserstein(a, b, 2.0) == wasserstein(b, a, 2.0)

    def test_identity(self):
        for a, _, _ in self._triples(20):
            assert bottleneck(a, a) == 0.0
            assert wasserstein(a, a, 1.0) == 0.0

    def test_triangle_inequality(self):
        for a, b, c in self._triples(50):
            assert bottleneck(a, c) <= bottleneck(a, b) + bottleneck(b, c) + 1e-9
            for p in (1.0, 2.0):
                assert (
                    wasserstein(a, c, p)
                    <= wasserstein(a, b, p) + wasserstein(b, c, p) + 1e-9
                )

    def test_metric_ordering(self):
        # d_B <= W_p, and W_p is non-increasing in p
        for a, b, _ in self._triples(50):
            db = bottleneck(a, b)
            w1 = wasserstein(a, b, 1.0)
            w15 = wasserstein(a, b, 1.5)
            w2 = wasserstein(a, b, 2.0)
            assert db <= w2 + 1e-9
            assert db <= w1 + 1e-9
            assert w2 <= w15 + 1e-9
            assert w15 <= w1 + 1e-9
