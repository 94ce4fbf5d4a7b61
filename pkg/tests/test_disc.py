"""Tests for composition operators on the disc and the boundary survey."""

import numpy as np
import pytest

from extremalmaps import (BlaschkeProduct, DiscCompositionOp, InvalidZero,
                          NotBoundary, NotUnimodular, OutsideDisc,
                          blaschke_eval, boundary_extremality_check,
                          comp_op_adjoint_on_evaluation, comp_op_apply)

RNG = np.random.default_rng(55)


def random_blaschke(rng, degree):
    zeros = []
    for _ in range(degree):
        r = 0.9 * np.sqrt(rng.random())
        zeros.append(r * np.exp(2j * np.pi * rng.random()))
    phase = np.exp(2j * np.pi * rng.random())
    return BlaschkeProduct(phase=phase, zeros=tuple(zeros))


class TestBlaschkeProduct:
    def test_zero_inside_required(self):
        with pytest.raises(InvalidZero):
            BlaschkeProduct(zeros=(1.0,))
        with pytest.raises(InvalidZero):
            BlaschkeProduct(zeros=(0.5, 1.2j))

    def test_phase_must_be_unimodular(self):
        with pytest.raises(NotUnimodular):
            BlaschkeProduct(phase=2.0)

    def test_vanishes_at_its_zeros(self):
        b = random_blaschke(RNG, 4)
        for a in b.zeros:
            assert abs(blaschke_eval(b, a)) < 1e-12

    def test_unimodular_on_circle(self):
        b = random_blaschke(RNG, 5)
        for t in np.linspace(0.0, 2 * np.pi, 17):
            assert abs(abs(blaschke_eval(b, np.exp(1j * t))) - 1.0) < 1e-12

    def test_moebius_at_origin(self):
        b = BlaschkeProduct(zeros=(0.25 + 0.1j,))
        assert blaschke_eval(b, 0.0) == pytest.approx(-(0.25 + 0.1j))

    def test_outside_disc_raises(self):
        b = random_blaschke(RNG, 2)
        with pytest.raises(OutsideDisc):
            blaschke_eval(b, 1.5)

    def test_array_and_scalar_agree(self):
        b = random_blaschke(RNG, 3)
        pts = 0.7 * np.exp(1j * np.linspace(0, 2 * np.pi, 9))
        arr = blaschke_eval(b, pts)
        for z, w in zip(pts, arr):
            assert blaschke_eval(b, complex(z)) == pytest.approx(w)

    def test_degree(self):
        assert random_blaschke(RNG, 4).degree == 4
        assert BlaschkeProduct().degree == 0


class TestApply:
    def test_matches_pointwise_composition(self):
        op = DiscCompositionOp(multiplier=random_blaschke(RNG, 2),
                               symbol=random_blaschke(RNG, 3))
        coeffs = RNG.standard_normal(5) + 1j * RNG.standard_normal(5)
        pts = 0.8 * np.exp(1j * np.linspace(0.1, 6.0, 7))
        got = comp_op_apply(op, coeffs, pts)
        for z, val in zip(pts, got):
            f_at = sum(c * blaschke_eval(op.symbol, complex(z)) ** n
                       for n, c in enumerate(coeffs))
            want = blaschke_eval(op.multiplier, complex(z)) * f_at
            assert val == pytest.approx(want)

    def test_degree_cap(self):
        op = DiscCompositionOp(multiplier=random_blaschke(RNG, 1),
                               symbol=random_blaschke(RNG, 1))
        with pytest.raises(ValueError):
            comp_op_apply(op, np.ones(258), np.array([0.0]))

    def test_points_must_stay_in_disc(self):
        op = DiscCompositionOp(multiplier=random_blaschke(RNG, 1),
                               symbol=random_blaschke(RNG, 1))
        with pytest.raises(OutsideDisc):
            comp_op_apply(op, np.ones(3), np.array([2.0]))

    def test_callable_multiplier(self):
        # symbol (z - 0)/(1 - 0) is the identity, so this is plain weighting
        op = DiscCompositionOp(multiplier=lambda z: (1.0 + z) / 2.0,
                               symbol=BlaschkeProduct(zeros=(0.0,)))
        got = comp_op_apply(op, np.array([0.0, 1.0]), np.array([0.5]))
        assert got[0] == pytest.approx(0.75 * 0.5)


class TestAdjointOnEvaluation:
    def test_blaschke_pair_pulls_back_extremally(self):
        op = DiscCompositionOp(multiplier=random_blaschke(RNG, 2),
                               symbol=random_blaschke(RNG, 4))
        for t in (0.0, 1.0, 2.5):
            zeta = np.exp(1j * t)
            out = comp_op_adjoint_on_evaluation(op, zeta)
            assert abs(abs(out.weight) - 1.0) < 1e-12
            assert abs(abs(out.point) - 1.0) < 1e-12
            assert out.weight == pytest.approx(blaschke_eval(op.multiplier, zeta))
            assert out.point == pytest.approx(blaschke_eval(op.symbol, zeta))

    def test_interior_point_rejected(self):
        op = DiscCompositionOp(multiplier=BlaschkeProduct(),
                               symbol=BlaschkeProduct())
        with pytest.raises(NotBoundary):
            comp_op_adjoint_on_evaluation(op, 0.5)

    def test_averaging_multiplier_fails_off_the_special_point(self):
        op = DiscCompositionOp(multiplier=lambda z: (1.0 + z) / 2.0,
                               symbol=BlaschkeProduct())
        # at zeta = 1 the multiplier happens to be unimodular
        out = comp_op_adjoint_on_evaluation(op, 1.0)
        assert out.weight == pytest.approx(1.0)
        with pytest.raises(NotUnimodular):
            comp_op_adjoint_on_evaluation(op, -1.0)
        with pytest.raises(NotUnimodular):
            comp_op_adjoint_on_evaluation(op, 1j)


class TestBoundarySurvey:
    def test_blaschke_ops_accepted(self):
        for _ in range(5):
            op = DiscCompositionOp(multiplier=random_blaschke(RNG, 3),
                                   symbol=random_blaschke(RNG, 6))
            rep = boundary_extremality_check(op)
            assert rep.accepted
            assert rep.deviation <= 1e-10
            assert rep.grid == 4096

    def test_averaging_multiplier_rejected_at_pi(self):
        op = DiscCompositionOp(multiplier=lambda z: (1.0 + z) / 2.0,
                               symbol=random_blaschke(RNG, 2))
        rep = boundary_extremality_check(op)
        assert not rep.accepted
        assert rep.deviation == pytest.approx(1.0)
        assert abs(rep.worst_t - np.pi) < 1e-3
        assert rep.multiplier_deviation == pytest.approx(1.0)
        assert rep.symbol_deviation <= 1e-10

    def test_grid_parameter(self):
        op = DiscCompositionOp(multiplier=BlaschkeProduct(),
                               symbol=BlaschkeProduct())
        rep = boundary_extremality_check(op, grid=16)
        assert rep.accepted
        assert rep.grid == 16
        with pytest.raises(ValueError):
            boundary_extremality_check(op, grid=0)
