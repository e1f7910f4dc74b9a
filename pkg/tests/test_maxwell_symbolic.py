"""Tests for the symbolic Carrollian Maxwell equations on ℝ³×ℝ×."""

import numpy as np
import pytest

from pycarroll.checks.generators import random_scalar
from pycarroll.forms import Form, Monomial, wedge
from pycarroll.hodge import hodge_star
from pycarroll.maxwell import symbolic
from pycarroll.maxwell.symbolic import (
    EMFieldSymbolic,
    FieldConfigError,
    FormulationMismatch,
    assemble_field_strength,
    base_differential_of,
    duality,
    field_strength_residual,
    flat_space,
    local_maxwell_residual,
    maxwell_residual,
    plane_wave,
    rescale_time,
    star_field_strength,
    vector_residuals_at_zero,
    wave_residual,
)
from pycarroll.scalar_field import ScalarExpr, structurally_equal
from tests.common import fixed_samples, t, x

TOLERANCE = 1e-9


@pytest.fixture
def wave() -> EMFieldSymbolic:
    return plane_wave((0, 0, 1), (1, 0, 0))


def test_assembly_examples():
    dx, dy = Form.dx(3, 0), Form.dx(3, 1)
    magnetic = assemble_field_strength(EMFieldSymbolic([0, 0, 0], [0, 0, 1]))
    assert magnetic == wedge(dx, dy)
    electric = assemble_field_strength(EMFieldSymbolic([1, 0, 0], [0, 0, 0]))
    assert electric == wedge(Form.theta(3), dx)
    assert assemble_field_strength(EMFieldSymbolic.zero()).is_zero


def test_assembled_form_splits_into_fields():
    f = EMFieldSymbolic([x(1), 0, t()], [0, x(0), 0])
    field_strength = assemble_field_strength(f)
    assert field_strength.degree == 2
    # θ∧dz carries E_z, dx∧dz carries −B_y
    assert field_strength.coefficient(Monomial((2,), True)) == -t()
    assert field_strength.coefficient(Monomial((0, 2))) == -x(0)


def test_constant_fields_solve_maxwell():
    result = maxwell_residual(EMFieldSymbolic([1, -2, 0.5], [0, 3, 1]), fixed_samples(3))
    assert result.vanishes(TOLERANCE)
    assert result.consistent


def test_plane_wave_solves_maxwell(wave):
    assert wave.b[0].is_zero and wave.b[2].is_zero
    assert structurally_equal(wave.b[1], -wave.e[0])
    result = maxwell_residual(wave, fixed_samples(3))
    assert result.form_residual < TOLERANCE
    assert result.vector_residual < TOLERANCE
    assert result.consistent


def test_non_solution_is_flagged():
    result = maxwell_residual(EMFieldSymbolic([0, 0, 0], [0, 0, x(0)]), fixed_samples(3))
    assert not result.vanishes(TOLERANCE)
    assert result.consistent
    assert result.witness is not None
    assert structurally_equal(result.ampere[1], -1)
    assert set(result.vector_components()) == {
        "div_b",
        "div_e",
        "faraday_x",
        "faraday_y",
        "faraday_z",
        "ampere_x",
        "ampere_y",
        "ampere_z",
    }


def test_plane_wave_normalised_amplitude():
    f = plane_wave((3, 0, 4), (0, 2, 0), normalize=True)
    assert maxwell_residual(f, fixed_samples(3)).vanishes(TOLERANCE)
    assert f.e[0].is_zero and f.e[2].is_zero
    assert f.b[1].is_zero


@pytest.mark.parametrize(
    "k, e0",
    [((0, 0, 1), (0, 0, 1)), ((0, 0, 0), (1, 0, 0)), ((1, 0), (0, 1, 0))],
)
def test_plane_wave_rejects(k, e0):
    with pytest.raises(FieldConfigError):
        plane_wave(k, e0)


def test_duality_examples(wave):
    twice = duality(duality(wave))
    assert twice == wave.map(lambda c: -c)
    assert structurally_equal(duality(wave).energy_density(), wave.energy_density())
    assert maxwell_residual(duality(wave), fixed_samples(3)).vanishes(TOLERANCE)


def test_star_field_strength_matches_hodge_star(wave):
    expected = hodge_star(assemble_field_strength(wave), flat_space())
    difference = star_field_strength(wave) - expected
    assert difference.vanishes_on(fixed_samples(3), TOLERANCE)


def test_local_system_implies_maxwell_for_static_field():
    static = EMFieldSymbolic([x(1), x(0), 0], [0, 0, 2])
    assert local_maxwell_residual(static, fixed_samples(3)).residual < TOLERANCE
    assert maxwell_residual(static, fixed_samples(3)).vanishes(TOLERANCE)
    d_magnetic, d_electric = base_differential_of(static)
    assert d_magnetic.is_zero and d_electric.is_zero


def test_local_system_is_stronger_than_maxwell(wave):
    local = local_maxwell_residual(wave, fixed_samples(3))
    assert local.residual > 0.1
    assert set(local.forms()) == {"dB", "dE", "d*B", "d*E"}
    assert maxwell_residual(wave, fixed_samples(3)).vanishes(TOLERANCE)


def test_field_strength_residual(wave):
    residual, _ = field_strength_residual(
        assemble_field_strength(wave), flat_space(), fixed_samples(3)
    )
    assert residual < TOLERANCE


@pytest.mark.parametrize("factor", [2.0, -0.5])
def test_time_rescaling_preserves_solutions(wave, factor):
    rescaled = rescale_time(wave, factor)
    assert maxwell_residual(rescaled, fixed_samples(3)).vanishes(TOLERANCE)


def test_time_rescaling_rejects_zero(wave):
    with pytest.raises(FieldConfigError):
        rescale_time(wave, 0)


def test_plane_wave_solves_wave_equation(wave):
    assert wave_residual(wave, fixed_samples(3)) < TOLERANCE
    assert wave_residual(EMFieldSymbolic([0, 0, 0], [0, 0, x(0) ** 2]), fixed_samples(3)) > 0.5


def test_vector_residuals_at_zero_section(wave):
    values = vector_residuals_at_zero(EMFieldSymbolic([x(0), 0, 0], [0, 0, t()]), (0.2, 0.1, 0.0))
    assert len(values) == 8
    assert values["div_e"] == 1.0
    assert values["faraday_z"] == 0.0
    with pytest.raises(FieldConfigError):
        vector_residuals_at_zero(wave, (0.0, 0.0, 0.0))


def test_parse_field():
    f = EMFieldSymbolic.parse(["cos(x3 - ln(t))", "0", "0"], ["0", "-cos(x3 - ln(t))", "0"])
    assert maxwell_residual(f, fixed_samples(3)).vanishes(TOLERANCE)
    with pytest.raises(FieldConfigError):
        EMFieldSymbolic([0, 0], [0, 0, 0])


@pytest.mark.parametrize("seed", range(40))
def test_formulations_agree_on_random_fields(seed):
    rng = np.random.default_rng(seed)
    f = EMFieldSymbolic(
        [random_scalar(rng, 3) for _ in range(3)], [random_scalar(rng, 3) for _ in range(3)]
    )
    result = maxwell_residual(f, fixed_samples(3))
    assert result.consistent
    assert (result.form_residual < TOLERANCE) == (result.vector_residual < TOLERANCE)


@pytest.mark.parametrize("seed", range(10))
def test_formulations_agree_on_random_plane_waves(seed):
    rng = np.random.default_rng(seed)
    k = np.zeros(3)
    while not k.any():
        k = rng.integers(-2, 3, size=3).astype(float)
    e0 = np.zeros(3)
    while not e0.any():
        e0 = np.cross(k, rng.integers(-2, 3, size=3).astype(float))
    f = plane_wave(k, e0)
    if seed % 2:
        f = duality(f)
    result = maxwell_residual(f, fixed_samples(3))
    assert result.consistent
    assert result.vanishes(TOLERANCE)


def test_disagreeing_formulations_raise(monkeypatch):
    zero = ScalarExpr(0)
    monkeypatch.setattr(
        symbolic, "vector_residuals", lambda _f: (zero, (zero,) * 3, zero, (zero,) * 3)
    )
    f = EMFieldSymbolic([0, 0, 0], [0, 0, x(0)])
    with pytest.raises(FormulationMismatch) as err:
        maxwell_residual(f, fixed_samples(3))
    assert err.value.vector_residual == 0.0
    assert err.value.form_residual > TOLERANCE

    result = maxwell_residual(f, fixed_samples(3), strict=False)
    assert not result.consistent
    assert not result.vanishes(TOLERANCE)
