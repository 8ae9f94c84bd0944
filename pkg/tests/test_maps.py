import cmath
import math

import pytest

from digonbound import maps
from digonbound.errors import DomainError, RangeError
from conftest import random_interior


def koebe(z):
    return z / (1 - z) ** 2


class TestPick:
    def test_quarter_at_half(self):
        # k(w) = (1/4) k(1/2) = 1/2 gives w^2 - 4w + 1 = 0, in-disk root 2 - sqrt(3)
        assert maps.Pick(0.25).eval(0.5) == pytest.approx(2 - math.sqrt(3), abs=1e-12)

    @pytest.mark.parametrize("alpha", [0.1, 0.25, 0.5, 0.9, 1.0])
    def test_fixes_origin(self, alpha):
        assert maps.Pick(alpha).eval(0j) == 0

    @pytest.mark.parametrize("alpha", [0.1, 0.3, 0.7, 1.0])
    def test_derivative_at_origin_is_alpha(self, alpha):
        assert maps.Pick(alpha).deriv(0j) == pytest.approx(alpha, abs=1e-15)

    def test_koebe_transfer_identity(self, rng):
        # k(P(zeta)) = alpha * k(zeta) everywhere in the disk
        for _ in range(100):
            alpha = rng.uniform(0.05, 1.0)
            z = random_interior(rng, 0.95)
            p = maps.Pick(alpha).eval(z)
            assert abs(koebe(p) - alpha * koebe(z)) <= 1e-12 * max(1.0, abs(koebe(z)))

    def test_printed_radical_formula_on_positive_radius(self, rng):
        # the closed form 4az/(1-z+sqrt((1-z)^2+4az))^2 is branch-safe on (0,1)
        for _ in range(50):
            alpha = rng.uniform(0.05, 1.0)
            x = rng.uniform(0.01, 0.99)
            printed = 4 * alpha * x / (1 - x + math.sqrt((1 - x) ** 2 + 4 * alpha * x)) ** 2
            assert maps.Pick(alpha).eval(x) == pytest.approx(printed, abs=1e-12)

    def test_inverse_on_slit_rejected(self):
        p = maps.Pick(0.25)
        assert p.slit_tip == pytest.approx(-0.25 / (1 + math.sqrt(0.75)) ** 2)
        with pytest.raises(RangeError):
            p.inverse_eval(-0.5)  # between -1 and the slit tip

    def test_inverse_of_forward(self):
        p = maps.Pick(0.25)
        assert p.inverse_eval(2 - math.sqrt(3)) == pytest.approx(0.5, abs=1e-12)


class TestMoebius:
    def test_normalization(self):
        b = maps.b_normalized(0.5)
        assert b.eval(0j) == pytest.approx(-0.5, abs=1e-15)
        assert b.eval(1.0) == pytest.approx(1.0, abs=1e-15)

    def test_base_zero_is_identity(self, rng):
        b = maps.b_normalized(0j)
        for _ in range(10):
            z = random_interior(rng)
            assert b.eval(z) == pytest.approx(z, abs=1e-15)

    def test_imaginary_base(self):
        b = maps.b_normalized(0.5j)
        assert abs(b.eval(0.5j)) < 1e-14
        assert abs(b.eval(1.0) - 1.0) < 1e-14

    def test_boundary_derivative_modulus(self):
        # |B'(1)| = (1-|z|^2)/|1-z|^2
        b = maps.b_normalized(0.5)
        assert abs(b.deriv(1.0)) == pytest.approx(3.0, abs=1e-13)

    def test_derivative_at_zero(self):
        assert abs(maps.b_normalized(0.5).deriv(0j)) == pytest.approx(0.75, abs=1e-15)

    def test_circle_to_circle(self, rng):
        for _ in range(100):
            z = random_interior(rng, 0.9)
            b = maps.b_normalized(z)
            t = rng.uniform(0, 2 * math.pi)
            assert abs(abs(b.eval(cmath.exp(1j * t))) - 1.0) <= 1e-12

    def test_inverse_examples(self):
        b = maps.b_normalized(0.5)
        assert b.inverse_eval(0j) == pytest.approx(0.5, abs=1e-14)
        assert b.inverse_eval(1.0) == pytest.approx(1.0, abs=1e-14)


class TestComposition:
    def test_chain_rule_example(self):
        t = maps.Automorphism(-0.5, 0.0)  # (z + 0.5)/(1 + 0.5 z)
        tt = t.then(t)
        d = tt.deriv(0j)
        assert d == pytest.approx(0.36, abs=1e-14)
        # cross-check: T.T is an automorphism sending 0 to T(0.5) = 0.8
        assert abs(d) == pytest.approx(1 - abs(t.eval(0.5)) ** 2, abs=1e-14)

    def test_derivative_matches_finite_differences(self, rng):
        exprs = [
            maps.Pick(0.3),
            maps.compose(maps.b_normalized(0.2 + 0.1j), maps.Pick(0.6)),
            maps.compose(
                maps.Automorphism(0.1 - 0.2j, 0.7),
                maps.Pick(0.5),
                maps.Inverse(maps.b_normalized(0.3j)),
            ),
        ]
        h = 1e-6
        for expr in exprs:
            for _ in range(20):
                z = random_interior(rng, 0.6)
                fd = (expr.eval(z + h) - expr.eval(z - h)) / (2 * h)
                fd_i = (expr.eval(z + 1j * h) - expr.eval(z - 1j * h)) / (2j * h)
                d = expr.deriv(z)
                assert abs(fd - d) <= 1e-8 * max(1.0, abs(d))
                assert abs(fd_i - d) <= 1e-8 * max(1.0, abs(d))

    def test_inverse_round_trip(self, rng):
        expr = maps.compose(
            maps.b_normalized(0.4 - 0.1j),
            maps.Pick(0.45),
            maps.Inverse(maps.b_normalized(-0.2 + 0.3j)),
        )
        for _ in range(50):
            z = random_interior(rng, 0.8)
            w = expr.eval(z)
            assert abs(expr.inverse_eval(w) - z) <= 1e-10

    def test_domain_error_outside_disk(self):
        with pytest.raises(DomainError):
            maps.Pick(0.5).eval(1.5)
        with pytest.raises(DomainError):
            maps.b_normalized(1.2)


class TestFixedAnchors:
    def test_automorphism_fixing_anchor(self, rng):
        for _ in range(20):
            a = random_interior(rng, 0.8)
            angle = rng.uniform(0, 2 * math.pi)
            auto = maps.automorphism_fixing(a, angle)
            eta = cmath.exp(1j * angle)
            assert abs(auto.eval(eta) - eta) <= 1e-13

    def test_boundary_fixed_derivative_real_positive(self, rng):
        for _ in range(20):
            a = random_interior(rng, 0.8)
            angle = rng.uniform(0, 2 * math.pi)
            auto = maps.automorphism_fixing(a, angle)
            d = auto.deriv(cmath.exp(1j * angle))
            closed = maps.boundary_fixed_derivative(auto, angle)
            assert d.imag == pytest.approx(0.0, abs=1e-12)
            assert d.real == pytest.approx(closed, abs=1e-12)
            assert closed > 0


class TestSerialization:
    def test_round_trip(self, rng):
        expr = maps.compose(
            maps.b_normalized(0.25 - 0.5j),
            maps.Pick(0.375),
            maps.Inverse(maps.Automorphism(0.1j, 1.25)),
        )
        back = maps.expr_from_json(expr.to_json())
        for _ in range(20):
            z = random_interior(rng)
            assert abs(back.eval(z) - expr.eval(z)) <= 1e-15

    def test_node_kinds(self):
        obj = maps.compose(
            maps.b_normalized(0.5), maps.Pick(0.25), maps.Inverse(maps.b_normalized(0j))
        ).to_json_obj()
        assert [n["kind"] for n in obj] == ["moebius", "pick", "inverse"]
        assert obj[0]["base"] == {"re": 0.5, "im": 0.0}

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            maps.expr_from_json('{"kind": "mystery"}')
