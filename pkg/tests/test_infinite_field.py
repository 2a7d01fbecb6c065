import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maglattice import Lattice, constants
from maglattice.exceptions import ConfigError, DomainError
from maglattice.field_models import BiasField, InfiniteLatticeField, LatticeParams
from maglattice.field_models.infinite import (INFINITE_AS_PRINTED, clamped_fraction, evaluate_infinite,
                                              evaluate_infinite_grid, field_gradient, field_hessian,
                                              radicand_grid, surface_induction)
from maglattice.lattice_support._fieldcreator import FieldModelCreator
from maglattice.lattice_support.minima import strict_grid_minima

ALPHA = 1e-6
TAU = 2e-6
PARAMS = LatticeParams(ALPHA, ALPHA, TAU, 1.4e5)
DEFAULT_BIAS = BiasField(0.0, 0.0, -5e-3)


def radicand_terms(params, bias, point):
    """ Each term of the radicand, written out with scalar math. """
    x, y, z = point
    beta = math.pi / params.alpha_h
    B_o = constants.mu0 * params.M_z / math.pi
    u = B_o * (1.0 - math.exp(-beta * params.tau)) * math.exp(-beta * abs(z - params.symmetry_plane_z - params.tau))
    cx, cy = math.cos(beta * x), math.cos(beta * y)
    return (bias.bx ** 2, bias.by ** 2, bias.bz ** 2,
            2.0 * u * u * cx * cy,
            2.0 * u * (bias.bx + bias.bz) * cx,
            2.0 * u * (bias.by + bias.bz) * cy)


def test_surface_induction():
    assert surface_induction(LatticeParams(ALPHA, ALPHA, TAU, 0.0)) == 0.0
    assert surface_induction(PARAMS) == pytest.approx(0.056, rel=1e-3)
    assert surface_induction(LatticeParams(ALPHA, ALPHA, TAU, math.pi / constants.mu0)) == pytest.approx(1.0)


def test_no_magnetization_gives_the_bias():
    params = LatticeParams(ALPHA, ALPHA, TAU, 0.0)
    value = evaluate_infinite(params, BiasField(0.0, 0.0, 0.01), (0.0, 0.0, 3e-6))
    assert value.magnitude == pytest.approx(0.01, rel=1e-15)
    assert not value.radicand_clamped


def test_far_above_the_film_only_the_bias_remains():
    value = evaluate_infinite(PARAMS, DEFAULT_BIAS, (0.3 * ALPHA, -0.2 * ALPHA, TAU + 20 * ALPHA))
    assert value.magnitude == pytest.approx(DEFAULT_BIAS.magnitude, rel=1e-8)


def test_field_vanishes_between_holes_without_bias():
    value = evaluate_infinite(PARAMS, BiasField(), (0.5 * ALPHA, 0.0, TAU))
    assert value.magnitude == pytest.approx(0.0, abs=1e-6 * surface_induction(PARAMS))
    assert not value.radicand_clamped


def test_field_on_the_film_surface_above_a_hole():
    value = evaluate_infinite(PARAMS, BiasField(), (0.0, 0.0, TAU))
    expected = math.sqrt(2.0) * surface_induction(PARAMS) * (1.0 - math.exp(-math.pi * TAU / ALPHA))
    assert value.magnitude == pytest.approx(expected, rel=1e-12)
    assert not value.radicand_clamped


@settings(max_examples=100, deadline=None)
@given(x=st.floats(-5e-6, 5e-6), y=st.floats(-5e-6, 5e-6), height=st.floats(0.0, 10e-6),
       alpha=st.floats(0.2e-6, 5e-6), tau=st.floats(0.1e-6, 5e-6), M_z=st.floats(0.0, 1e6),
       bx=st.floats(-0.05, 0.05), by=st.floats(-0.05, 0.05), bz=st.floats(-0.05, 0.05))
def test_radicand_matches_the_closed_form(x, y, height, alpha, tau, M_z, bx, by, bz):
    params = LatticeParams(alpha, alpha, tau, M_z)
    bias = BiasField(bx, by, bz)
    point = (x, y, tau + height)
    terms = radicand_terms(params, bias, point)
    computed = float(radicand_grid(params, bias, [point])[0])
    assert abs(computed - math.fsum(terms)) <= 1e-12 * (sum(abs(t) for t in terms) + 1e-300)


def test_radicand_factors_around_the_bias():
    bias = BiasField(1e-3, -2e-3, -5e-3)
    point = (0.3 * ALPHA, 0.1 * ALPHA, TAU + 1.2 * ALPHA)
    beta = PARAMS.beta
    u = PARAMS.B_o * (1.0 - math.exp(-beta * TAU)) * math.exp(-beta * (point[2] - TAU))
    cx, cy = math.cos(beta * point[0]), math.cos(beta * point[1])
    p, q = bias.bx + bias.bz, bias.by + bias.bz
    factored = bias.bx ** 2 + bias.by ** 2 + bias.bz ** 2 - 2 * p * q + 2 * (u * cx + q) * (u * cy + p)
    assert float(radicand_grid(PARAMS, bias, [point])[0]) == pytest.approx(factored, rel=1e-10)


def test_lattice_is_periodic():
    rng = np.random.default_rng(7)
    points = np.column_stack([rng.uniform(-ALPHA, ALPHA, 50), rng.uniform(-ALPHA, ALPHA, 50),
                              rng.uniform(TAU + 1.5 * ALPHA, TAU + 3 * ALPHA, 50)])
    base, _ = evaluate_infinite_grid(PARAMS, DEFAULT_BIAS, points)
    for shift in ((2 * ALPHA, 0.0, 0.0), (0.0, 2 * ALPHA, 0.0)):
        shifted, _ = evaluate_infinite_grid(PARAMS, DEFAULT_BIAS, points + np.array(shift))
        np.testing.assert_allclose(shifted, base, rtol=1e-12)


def test_swapping_x_and_y_is_exact_when_bx_equals_by():
    bias = BiasField(2e-3, 2e-3, -5e-3)
    for x, y in ((0.1e-6, 0.7e-6), (-0.45e-6, 0.3e-6), (1.3e-6, -0.2e-6)):
        a = evaluate_infinite(PARAMS, bias, (x, y, 4e-6))
        b = evaluate_infinite(PARAMS, bias, (y, x, 4e-6))
        assert a.magnitude == b.magnitude


def test_negative_radicand_is_clamped():
    value = evaluate_infinite(PARAMS, BiasField(), (ALPHA, 0.0, TAU + 0.5 * ALPHA))
    assert value.radicand < 0
    assert value.radicand_clamped
    assert value.magnitude == 0.0


def test_points_inside_the_film_are_rejected():
    with pytest.raises(DomainError):
        evaluate_infinite(PARAMS, DEFAULT_BIAS, (0.0, 0.0, TAU - 1e-9))


def test_unequal_hole_and_spacing_sizes_are_rejected():
    with pytest.raises(DomainError, match='alpha_h == alpha_s'):
        LatticeParams(1e-6, 1.5e-6, TAU, 1.4e5)


def test_as_printed_variant_differs_only_with_a_bias():
    point = (0.2 * ALPHA, 0.4 * ALPHA, TAU + 1.5 * ALPHA)
    default = evaluate_infinite(PARAMS, DEFAULT_BIAS, point)
    printed = evaluate_infinite(PARAMS, DEFAULT_BIAS, point, INFINITE_AS_PRINTED)
    assert default.magnitude != pytest.approx(printed.magnitude, rel=1e-3)
    no_bias = BiasField()
    assert evaluate_infinite(PARAMS, no_bias, point).magnitude == \
        evaluate_infinite(PARAMS, no_bias, point, INFINITE_AS_PRINTED).magnitude


def test_gradient_and_hessian_vanish_for_a_uniform_field():
    params = LatticeParams(ALPHA, ALPHA, TAU, 0.0)
    bias = BiasField(0.0, 0.0, 0.01)
    point = (0.1e-6, 0.2e-6, 4e-6)
    assert np.all(field_gradient(params, bias, point) == 0.0)
    assert np.all(field_hessian(params, bias, point).matrix == 0.0)


def test_gradient_is_odd_under_x_reflection():
    bias = BiasField()
    point = np.array([0.2 * ALPHA, 0.0, TAU + ALPHA])
    mirrored = point * np.array([-1.0, 1.0, 1.0])
    forward = field_gradient(PARAMS, bias, point)
    backward = field_gradient(PARAMS, bias, mirrored)
    assert backward[0] == pytest.approx(-forward[0], rel=1e-9)
    assert backward[1:] == pytest.approx(forward[1:], rel=1e-9, abs=1e-6)


def test_hessian_agrees_with_differenced_gradient():
    point = np.array([0.3 * ALPHA, -0.2 * ALPHA, TAU + 1.6 * ALPHA])
    hessian = field_hessian(PARAMS, DEFAULT_BIAS, point).matrix
    delta = 1e-3 * ALPHA
    columns = [(field_gradient(PARAMS, DEFAULT_BIAS, point + delta * e)
                - field_gradient(PARAMS, DEFAULT_BIAS, point - delta * e)) / (2 * delta) for e in np.eye(3)]
    differenced = np.array(columns).T
    np.testing.assert_allclose(hessian, differenced, rtol=0, atol=1e-4 * np.max(np.abs(hessian)))


def test_derivatives_are_undefined_at_clamped_points():
    with pytest.raises(DomainError):
        field_gradient(PARAMS, BiasField(), (ALPHA, 0.0, TAU + 0.5 * ALPHA))


def test_default_region_is_clamp_free_for_moderate_bias():
    field = InfiniteLatticeField(PARAMS, BiasField(0.0, 0.0, -0.05 * PARAMS.B_o))
    region = field.default_region()
    points = region.points((17, 17, 17))
    assert clamped_fraction(PARAMS, field.bias, points) == 0.0
    assert clamped_fraction(PARAMS, DEFAULT_BIAS, points) == 0.0


def test_default_configuration_has_no_strict_minima():
    """ The radicand factors around the bias, so the analytic lattice has no isolated minima of |B|. """
    field = InfiniteLatticeField(PARAMS, DEFAULT_BIAS)
    lattice = Lattice(field=field, grid=(17, 17, 17), threads=1)
    assert lattice.find_minima() == []

    region = field.default_region()
    dims = (41, 41, 41)
    values = field.magnitude(region.points(dims)).reshape(41, 41, 41)
    assert len(strict_grid_minima(values)) == 0


def test_with_bias_and_with_magnetization_copy_the_model():
    field = InfiniteLatticeField(PARAMS, DEFAULT_BIAS)
    assert field.with_bias(BiasField(0.0, 0.0, 1e-3)).bias.bz == 1e-3
    assert field.with_magnetization(7e4).magnetization == 7e4
    assert field.magnetization == 1.4e5


def test_model_names_and_aliases():
    creator = FieldModelCreator()
    assert creator.model_name('Analytic') == 'infinite'
    assert creator.model_name('infinite_lattice') == 'infinite'
    assert creator.model_name('As Printed') == 'infinite_as_printed'
    assert creator.model_name('hole-array') == 'finite'
    with pytest.raises(ConfigError, match='not a supported field model'):
        creator.model_name('dipole')
    lattice = Lattice('infinite-as-printed', PARAMS, DEFAULT_BIAS, threads=1)
    assert lattice.field.name == INFINITE_AS_PRINTED
    with pytest.raises(ConfigError, match='FiniteLatticeSpec'):
        Lattice('finite', PARAMS)
