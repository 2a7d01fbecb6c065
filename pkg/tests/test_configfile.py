import json
import os

import pytest

import maglattice
from maglattice.atoms import SPECIES
from maglattice.configfile import config_hash, dump_config, emit_config, load_config, parse_config
from maglattice.exceptions import ConfigError
from maglattice.field_models import BiasField, FiniteLatticeSpec, LatticeParams
from maglattice.traps import Tolerances

CONFIG_DIRECTORY = os.path.join(os.path.dirname(maglattice.__file__), 'configs')
SHIPPED = sorted(name for name in os.listdir(CONFIG_DIRECTORY) if name.endswith('.json'))

MINIMAL = {
    'model': 'infinite',
    'lattice': {'alpha': 1e-6, 'tau': 2e-6, 'M_z': 1.4e5},
}


def minimal(**changes):
    document = json.loads(json.dumps(MINIMAL))
    document.update(changes)
    return document


def test_every_shipped_configuration_loads():
    assert len(SHIPPED) == 3
    for name in SHIPPED:
        settings = load_config(os.path.join(CONFIG_DIRECTORY, name))
        assert settings.species is SPECIES['K40']


def test_shipped_finite_configuration():
    settings = load_config(os.path.join(CONFIG_DIRECTORY, 'finite_4x4.json'))
    assert settings.model == 'finite'
    assert settings.geometry == FiniteLatticeSpec(1, 4, 1e-6, 1e-6, 2e-6, 1.4e5, film_orientation=-1)
    assert settings.bias == BiasField(0.0, 0.0, -1.5e-2)
    assert settings.grid == (37, 37, 13)
    assert len(settings.sweep.values) == 9
    assert settings.sweep.values[-1] == pytest.approx(-0.03)


def test_film_orientation_is_a_sign():
    device = {'n_holes': 2, 'alpha': 1e-6, 'tau': 2e-6, 'M_z': 1.4e5}
    assert parse_config({'model': 'finite', 'device': device}).geometry.film_orientation == 1
    with pytest.raises(ConfigError, match='film_orientation must be 1 or -1'):
        parse_config({'model': 'finite', 'device': dict(device, film_orientation=0)})


def test_defaults_are_materialized():
    settings = parse_config(minimal())
    assert settings.geometry == LatticeParams(1e-6, 1e-6, 2e-6, 1.4e5)
    assert settings.bias == BiasField()
    assert settings.species is SPECIES['K40']
    assert settings.region.x == (-1e-6, 1e-6)
    assert settings.region.z == pytest.approx((3.5e-6, 5.5e-6), rel=1e-12)
    assert settings.grid == (9, 9, 9)
    assert settings.tolerances == Tolerances.for_scales(1e-6, settings.geometry.B_o)
    assert settings.chi == 0.0
    assert settings.field_map.grid == (64, 64, 1)
    assert settings.field_map.region.z == pytest.approx((4.5e-6, 4.5e-6), rel=1e-12)
    assert settings.sweep is None
    assert settings.sweep_plan() is None


def test_sweep_plan_uses_the_analysis_region():
    settings = parse_config(minimal(sweep={'values': [0.0, -1e-3]}, chi=0.5))
    plan = settings.sweep_plan()
    assert plan.bias_axis == 'z'
    assert plan.values == (0.0, -1e-3)
    assert plan.chi == 0.5
    assert plan.region == settings.region
    assert plan.grid == settings.grid


def test_unknown_key_reports_its_line(tmp_path):
    document = minimal(bias={'bx': 0.0, 'colour': 1.0})
    path = tmp_path / 'bad.json'
    text = json.dumps(document, indent=2)
    path.write_text(text)
    line = text[:text.index('"colour"')].count('\n') + 1
    with pytest.raises(ConfigError, match=fr"unknown key 'colour'.*\(line {line}\)"):
        load_config(str(path))


def test_unequal_alphas_are_rejected_for_the_analytic_model():
    document = minimal(lattice={'alpha_h': 1e-6, 'alpha_s': 1.5e-6, 'tau': 2e-6, 'M_z': 1.4e5})
    with pytest.raises(ConfigError, match='alpha_h == alpha_s'):
        parse_config(document)


def test_lengths_in_microns_are_caught():
    with pytest.raises(ConfigError, match='outside'):
        parse_config(minimal(lattice={'alpha': 1.0, 'tau': 2e-6, 'M_z': 1.4e5}))


def test_coarse_grid_is_rejected():
    with pytest.raises(ConfigError, match='points per period'):
        parse_config(minimal(grid=[5, 5, 5]))


def test_strong_field_seekers_are_rejected():
    species = {'name': 'K40-low', 'mass': SPECIES['K40'].mass, 'g_F': 2.0 / 9.0, 'm_F': -4.5}
    with pytest.raises(ConfigError, match='weak-field seeker'):
        parse_config(minimal(species=species))


def test_unknown_species_name():
    with pytest.raises(ConfigError):
        parse_config(minimal(species='Rb87'))


def test_model_block_mismatch():
    with pytest.raises(ConfigError, match='takes a "device" block'):
        parse_config(minimal(model='finite'))
    with pytest.raises(ConfigError, match='not "device"'):
        parse_config(minimal(device={'n_holes': 2, 'alpha': 1e-6, 'tau': 2e-6, 'M_z': 1.4e5}))
    with pytest.raises(ConfigError, match='model must be one of'):
        parse_config(minimal(model='dipole'))


def test_region_inside_the_film_is_rejected():
    region = {'x': [-1e-6, 1e-6], 'y': [-1e-6, 1e-6], 'z': [1e-6, 3e-6]}
    with pytest.raises(ConfigError, match='film surface'):
        parse_config(minimal(region=region))


def test_sweep_takes_values_or_a_range():
    with pytest.raises(ConfigError, match='either values or start/stop/steps'):
        parse_config(minimal(sweep={'values': [0.0], 'start': 0.0}))
    with pytest.raises(ConfigError):
        parse_config(minimal(sweep={'values': [0.0, -1e-3, 0.0]}))


def test_tolerances_must_be_positive():
    with pytest.raises(ConfigError, match='outside'):
        parse_config(minimal(tolerances={'grad_tol': 0.0}))
    settings = parse_config(minimal(tolerances={'max_iters': 50}))
    assert settings.tolerances.max_iters == 50


def test_unreadable_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError, match='cannot read'):
        load_config(str(tmp_path / 'missing.json'))
    path = tmp_path / 'broken.json'
    path.write_text('{\n  "model": "infinite",\n}\n')
    with pytest.raises(ConfigError, match=r'invalid JSON.*\(line 3\)'):
        load_config(str(path))


@pytest.mark.parametrize('name', SHIPPED)
def test_effective_configuration_parses_back_to_itself(name, tmp_path):
    settings = load_config(os.path.join(CONFIG_DIRECTORY, name))
    assert parse_config(emit_config(settings)) == settings

    path = dump_config(settings, str(tmp_path / 'effective.json'))
    reloaded = load_config(path)
    assert reloaded == settings
    assert config_hash(reloaded) == config_hash(settings)


def test_hash_depends_on_the_settings():
    assert config_hash(parse_config(minimal())) == config_hash(parse_config(minimal()))
    assert config_hash(parse_config(minimal())) != config_hash(parse_config(minimal(bias={'bz': -1e-3})))
