import cmath
import math

import numpy as np
import pytest

from digonbound import partition
from digonbound.errors import ConfigurationError, DomainError
from digonbound.partition import (
    BoundaryAnchorSet,
    HeightVector,
    make_strip_map,
    q_eval,
    residue_check,
    solve_deltas,
    strip_map_dlog,
    strip_map_eval,
)
from conftest import random_config

PI = math.pi


def config(thetas, alphas):
    return solve_deltas(BoundaryAnchorSet(thetas), HeightVector(alphas))


class TestSolveDeltas:
    def test_single_anchor(self):
        cfg = config((0.0,), (1.0,))
        assert cfg.deltas[0] == pytest.approx(PI, abs=1e-12)

    def test_symmetric_pair(self):
        cfg = config((0.0, PI), (0.5, 0.5))
        assert cfg.deltas[0] == pytest.approx(PI / 2, abs=1e-12)
        assert cfg.deltas[1] == pytest.approx(3 * PI / 2, abs=1e-12)

    def test_asymmetric_pair(self):
        # P(z) = z^2 + z + 1, roots at the primitive cube roots of unity
        cfg = config((0.0, PI), (0.75, 0.25))
        assert cfg.deltas[0] == pytest.approx(2 * PI / 3, abs=1e-12)
        assert cfg.deltas[1] == pytest.approx(4 * PI / 3, abs=1e-12)

    def test_polynomial_coefficients(self):
        coeffs = partition._zero_polynomial((0.0, PI), (0.5, 0.5))
        assert np.allclose(coeffs, [1, 0, 1], atol=1e-14)
        coeffs = partition._zero_polynomial((0.0, PI), (0.75, 0.25))
        assert np.allclose(coeffs, [1, 1, 1], atol=1e-14)

    def test_gap_sum_is_pi(self, rng):
        for _ in range(25):
            cfg = random_config(rng)
            total = sum(d - t for d, t in zip(cfg.deltas, cfg.thetas))
            assert total == pytest.approx(PI, abs=1e-10)

    def test_interlacing(self, rng):
        for _ in range(25):
            cfg = random_config(rng)
            n = cfg.n
            for k in range(n):
                gap_next = (cfg.thetas[(k + 1) % n] - cfg.thetas[k]) % (2 * PI)
                if n == 1:
                    gap_next = 2 * PI
                assert -1e-12 <= cfg.deltas[k] - cfg.thetas[k] <= gap_next + 1e-12

    def test_height_continuity(self, rng):
        # nudging alpha by 1e-6 moves each delta by O(1e-5), labels intact
        for _ in range(10):
            cfg = random_config(rng, min_gap=0.3, floor=0.1)
            n = cfg.n
            if n == 1:
                continue
            alphas = np.asarray(cfg.alphas)
            bump = np.zeros(n)
            bump[0], bump[-1] = 1e-6, -1e-6
            cfg2 = config(cfg.thetas, tuple(alphas + bump))
            moves = [abs(d2 - d1) for d1, d2 in zip(cfg.deltas, cfg2.deltas)]
            assert max(moves) < 1e-4

    def test_zero_height_drops_anchor(self):
        cfg = config((0.0, 2.0, 4.0), (0.5, 0.0, 0.5))
        assert cfg.n == 2
        assert cfg.thetas == (0.0, 4.0)
        ref = config((0.0, 4.0), (0.5, 0.5))
        assert cfg.deltas == pytest.approx(ref.deltas, abs=1e-12)

    def test_invalid_inputs(self):
        with pytest.raises(ConfigurationError):
            BoundaryAnchorSet((1.0, 0.5))  # not increasing
        with pytest.raises(ConfigurationError):
            HeightVector((0.5, 0.4))  # does not sum to 1
        with pytest.raises(ConfigurationError):
            HeightVector((1.5, -0.5))
        with pytest.raises(ConfigurationError):
            solve_deltas(BoundaryAnchorSet((0.0, 1.0)), HeightVector((1.0,)))


class TestResidues:
    def test_symmetric_exact(self):
        res = residue_check(config((0.0, PI), (0.5, 0.5)))
        assert max(res) < 1e-12

    def test_asymmetric_exact(self):
        res = residue_check(config((0.0, PI), (0.75, 0.25)))
        assert max(res) < 1e-12

    def test_single_anchor_exact(self):
        res = residue_check(config((0.0,), (1.0,)))
        assert max(res) < 1e-15

    def test_residue_values_real_positive(self, rng):
        cfg = random_config(rng, n=4)
        taus = cfg.anchors.points
        for j, tau in enumerate(taus):
            r = np.prod(tau - cfg.zeros) / (tau * np.prod(tau - np.delete(taus, j)))
            assert abs(r.imag) < 1e-10
            assert r.real > 0


class TestPartialFraction:
    def test_identity_at_random_points(self, rng):
        for _ in range(20):
            cfg = random_config(rng)
            taus = cfg.anchors.points
            for _ in range(50):
                r = rng.choice([rng.uniform(0.2, 0.85), rng.uniform(1.2, 2.5)])
                zeta = r * cmath.exp(1j * rng.uniform(0, 2 * PI))
                lhs = np.prod(zeta - cfg.zeros) / np.prod(zeta - taus)
                rhs = 1.0 + 2.0 * sum(
                    a * t / (zeta - t) for a, t in zip(cfg.alphas, taus)
                )
                assert abs(lhs - rhs) < 1e-10


class TestQEval:
    def test_zero_of_differential(self):
        cfg = config((0.0, PI), (0.5, 0.5))
        assert abs(q_eval(cfg, 1j)) < 1e-14

    def test_value_at_half(self):
        cfg = config((0.0, PI), (0.5, 0.5))
        expected = (1 / (4 * PI**2)) * (100 / 9)
        assert q_eval(cfg, 0.5).real == pytest.approx(expected, rel=1e-12)
        assert abs(q_eval(cfg, 0.5).imag) < 1e-14

    def test_circle_is_trajectory(self):
        cfg = config((0.0, PI), (0.5, 0.5))
        assert partition.circle_trajectory_value(cfg, PI / 4) > 0

    def test_circle_trajectory_random_configs(self, rng):
        for _ in range(10):
            cfg = random_config(rng)
            t = rng.uniform(0, 2 * PI)
            # keep clear of poles and zeros where the value crosses 0
            if min(abs(t - x) % (2 * PI) for x in cfg.thetas + cfg.deltas) < 0.1:
                continue
            assert partition.circle_trajectory_value(cfg, t) > 0

    def test_pole_rejected(self):
        cfg = config((0.0,), (1.0,))
        with pytest.raises(DomainError):
            q_eval(cfg, 0.0)
        with pytest.raises(DomainError):
            q_eval(cfg, 1.0 + 0j)


class TestStripMap:
    def test_single_anchor_closed_form(self):
        # g(z) = -z/(z-1)^2; on the circle g(e^{it}) = 1/(4 sin^2(t/2))
        cfg = config((0.0,), (1.0,))
        sm = make_strip_map(cfg, 0)
        assert sm.kappa == pytest.approx(PI, abs=1e-12)
        assert strip_map_eval(sm, cmath.exp(1j * PI)) == pytest.approx(0.25, abs=1e-12)
        assert strip_map_eval(sm, 1j) == pytest.approx(0.5, abs=1e-12)

    def test_symmetric_pair_closed_form(self):
        # exponents (-2, -2): g_0(e^{it}) = 1/(4 sin^2 t) on the arc through 1
        cfg = config((0.0, PI), (0.5, 0.5))
        sm = make_strip_map(cfg, 0)
        for t in (0.4, -0.7, 1.2):
            val = strip_map_eval(sm, cmath.exp(1j * t))
            assert val.imag == pytest.approx(0.0, abs=1e-10)
            assert val.real == pytest.approx(1 / (4 * math.sin(t) ** 2), rel=1e-10)

    def test_boundary_arc_lands_on_positive_axis(self, rng):
        for _ in range(5):
            cfg = random_config(rng, n=3, min_gap=0.4)
            for j in range(cfg.n):
                sm = make_strip_map(cfg, j)
                lo = cfg.deltas[(j - 1) % cfg.n] % (2 * PI)
                span = (cfg.deltas[j] - lo) % (2 * PI)
                for frac in (0.2, 0.45, 0.7, 0.9):
                    t = lo + span * frac
                    if abs((t - cfg.thetas[j]) % (2 * PI)) < 1e-9:
                        continue
                    val = strip_map_eval(sm, cmath.exp(1j * t))
                    assert abs(val.imag) < 1e-8 * max(1.0, abs(val))
                    assert val.real > 0

    def test_origin_exponent_and_unit_leading_coefficient(self, rng):
        cfg = random_config(rng, n=2, min_gap=0.5)
        j = 0
        sm = make_strip_map(cfg, j)
        aj = cfg.alphas[j]
        s = 1e-3
        val = strip_map_eval(sm, s * cmath.exp(1j * cfg.thetas[j]))
        assert abs(val) / s ** (1 / aj) == pytest.approx(1.0, rel=1e-2)

    def test_tracked_branch_matches_analytic_log_derivative(self, rng):
        cfg = config((0.0, PI), (0.75, 0.25))
        for j in range(2):
            sm = make_strip_map(cfg, j)
            for _ in range(5):
                rad = rng.uniform(0.3, 0.8)
                t = cfg.thetas[j] + rng.uniform(-0.2, 0.2)
                z = rad * cmath.exp(1j * t)
                h = 1e-6
                g_p = strip_map_eval(sm, z + h)
                g_m = strip_map_eval(sm, z - h)
                g_0 = strip_map_eval(sm, z)
                numeric = (g_p - g_m) / (2 * h * g_0)
                analytic = strip_map_dlog(sm, z)
                assert abs(numeric - analytic) <= 1e-6 * max(1.0, abs(analytic))

    def test_log_derivative_squares_to_differential(self, rng):
        # (g'/g)^2 = (2 pi / alpha_j)^2 Q, the defining transfer relation
        for _ in range(5):
            cfg = random_config(rng, n=3, min_gap=0.4)
            for j in range(cfg.n):
                sm = make_strip_map(cfg, j)
                z = rng.uniform(0.2, 0.9) * cmath.exp(
                    1j * (cfg.thetas[j] + rng.uniform(-0.1, 0.1))
                )
                lhs = strip_map_dlog(sm, z) ** 2
                rhs = (2 * PI / cfg.alphas[j]) ** 2 * q_eval(cfg, z)
                assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(rhs))


class TestSerialization:
    def test_json_round_trip(self):
        cfg = config((0.0, PI), (0.75, 0.25))
        obj = cfg.to_json_obj()
        assert set(obj) == {"theta", "alpha", "delta", "A", "residuals"}
        assert obj["A"] == pytest.approx(1 / (4 * PI**2))
        back = partition.config_from_json_obj(obj)
        assert back.deltas == pytest.approx(cfg.deltas, abs=1e-15)
