import numpy as np
import pytest

from otbounds import (
    CapacityError,
    DiscreteMeasure,
    DomainError,
    NormKind,
    enumerate_transport_cost,
    exact_transport_cost,
    exact_transport_cost_1d,
)
from otbounds.oracle import integerize_weights


def random_measure(rng, size, d, scale=1.0):
    pts = rng.normal(scale=scale, size=(size, d))
    return DiscreteMeasure.from_arrays(pts, rng.dirichlet(np.ones(size)))


class TestExactTransport:
    def test_identity(self):
        rng = np.random.default_rng(0)
        mu = random_measure(rng, 5, 2)
        cost, plan = exact_transport_cost(mu, mu, 2, NormKind.EUCLIDEAN)
        assert cost == pytest.approx(0.0, abs=1e-15)
        plan.check_marginals(mu, mu)

    def test_two_diracs(self):
        mu = DiscreteMeasure.from_arrays([[0.0, 0.0]], [1.0])
        nu = DiscreteMeasure.from_arrays([[3.0, 4.0]], [1.0])
        cost, _ = exact_transport_cost(mu, nu, 2, NormKind.EUCLIDEAN)
        assert cost == pytest.approx(25.0, rel=1e-12)

    def test_classic_2x2(self):
        mu = DiscreteMeasure.from_arrays([[0.0], [1.0]], [0.5, 0.5])
        nu = DiscreteMeasure.from_arrays([[0.0], [2.0]], [0.5, 0.5])
        cost, _ = exact_transport_cost(mu, nu, 1, NormKind.MAX)
        assert cost == pytest.approx(0.5, rel=1e-12)

    def test_agrees_with_enumeration(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            m, n, d = rng.integers(1, 5), rng.integers(1, 5), rng.integers(1, 4)
            mu = random_measure(rng, m, d)
            nu = random_measure(rng, n, d)
            p = float(rng.choice([0.5, 1, 2]))
            norm = NormKind.MAX if rng.random() < 0.5 else NormKind.EUCLIDEAN
            c1, plan = exact_transport_cost(mu, nu, p, norm)
            c2 = enumerate_transport_cost(mu, nu, p, norm)
            assert c1 == pytest.approx(c2, rel=1e-10, abs=1e-12)
            plan.check_marginals(mu, nu, tol=1e-11)

    def test_metric_sandwich(self):
        rng = np.random.default_rng(2)
        for _ in range(20)[:20]:
            d = int(rng.integers(2, 5))
            mu = random_measure(rng, 8, d)
            nu = random_measure(rng, 9, d)
            p = float(rng.choice([1, 2]))
            c_max, _ = exact_transport_cost(mu, nu, p, NormKind.MAX)
            c_euc, _ = exact_transport_cost(mu, nu, p, NormKind.EUCLIDEAN)
            assert c_max <= c_euc + 1e-10
            assert c_euc <= d ** (p / 2) * c_max + 1e-10

    def test_scaling(self):
        rng = np.random.default_rng(3)
        mu = random_measure(rng, 6, 2)
        nu = random_measure(rng, 7, 2)
        for alpha in [0.5, 3.0]:
            mu_s = DiscreteMeasure(points=alpha * mu.points, weights=mu.weights)
            nu_s = DiscreteMeasure(points=alpha * nu.points, weights=nu.weights)
            c, _ = exact_transport_cost(mu, nu, 2, NormKind.EUCLIDEAN)
            cs, _ = exact_transport_cost(mu_s, nu_s, 2, NormKind.EUCLIDEAN)
            assert cs == pytest.approx(alpha ** 2 * c, rel=1e-10)

    def test_triangle(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            mu = random_measure(rng, 5, 2)
            nu = random_measure(rng, 6, 2)
            rho = random_measure(rng, 4, 2)
            for p in [1.0, 2.0]:
                ab, _ = exact_transport_cost(mu, nu, p, NormKind.EUCLIDEAN)
                ac, _ = exact_transport_cost(mu, rho, p, NormKind.EUCLIDEAN)
                cb, _ = exact_transport_cost(rho, nu, p, NormKind.EUCLIDEAN)
                assert ab ** (1 / p) <= ac ** (1 / p) + cb ** (1 / p) + 1e-9

    def test_capacity_cap(self):
        pts = np.arange(4000, dtype=float)[:, None]
        w = np.full(4000, 1 / 4000)
        mu = DiscreteMeasure(points=pts, weights=w)
        with pytest.raises(CapacityError):
            exact_transport_cost(mu, mu, 1, NormKind.MAX)

    def test_normalization_error(self):
        mu = DiscreteMeasure(points=np.array([[0.0]]), weights=np.array([0.9]))
        nu = DiscreteMeasure(points=np.array([[1.0]]), weights=np.array([1.0]))
        with pytest.raises(DomainError):
            exact_transport_cost(mu, nu, 1, NormKind.MAX)


class TestFastPath1d:
    def test_examples(self):
        mu = DiscreteMeasure.from_arrays([[0.0], [1.0]], [0.5, 0.5])
        nu = DiscreteMeasure.from_arrays([[0.0], [2.0]], [0.5, 0.5])
        assert exact_transport_cost_1d(mu, nu, 1) == pytest.approx(0.5, rel=1e-12)
        nu2 = DiscreteMeasure.from_arrays([[0.5], [1.5]], [0.5, 0.5])
        assert exact_transport_cost_1d(mu, nu2, 2) == pytest.approx(0.25, rel=1e-12)
        assert exact_transport_cost_1d(mu, mu, 2) == 0.0

    def test_agrees_with_solver(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            mu = random_measure(rng, int(rng.integers(1, 25)), 1)
            nu = random_measure(rng, int(rng.integers(1, 25)), 1)
            p = float(rng.choice([1, 2]))
            c1 = exact_transport_cost_1d(mu, nu, p)
            c2, _ = exact_transport_cost(mu, nu, p, NormKind.MAX)
            assert c1 == pytest.approx(c2, rel=1e-10, abs=1e-12)

    def test_p_below_one_falls_back(self):
        rng = np.random.default_rng(6)
        mu = random_measure(rng, 5, 1)
        nu = random_measure(rng, 5, 1)
        c1 = exact_transport_cost_1d(mu, nu, 0.5)
        c2, _ = exact_transport_cost(mu, nu, 0.5, NormKind.MAX)
        assert c1 == pytest.approx(c2, rel=1e-12)


class TestIntegerize:
    def test_exact_rationals(self):
        s, t, lcm = integerize_weights(
            np.array([0.25, 0.75]), np.array([1 / 3, 1 / 3, 1 / 3])
        )
        assert s.sum() == lcm == t.sum()
        assert s[0] * 4 == lcm and t[0] * 3 == lcm

    def test_irrational_fallback_sums_match(self):
        rng = np.random.default_rng(7)
        w1 = rng.dirichlet(np.ones(13))
        w2 = rng.dirichlet(np.ones(17))
        s, t, lcm = integerize_weights(w1, w2)
        assert s.sum() == lcm == t.sum()
        assert np.abs(s / lcm - w1).max() < 1e-9
