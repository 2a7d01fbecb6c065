"""
Run configuration: a single JSON document, validated into a `Config` with
every default filled in. `emit_config` turns a Config back into the document
that reproduces it, which is what each run echoes next to its results.
"""
import hashlib
import json
import math
from dataclasses import dataclass

from . import config
from .atoms import AtomSpecies, get_species
from .exceptions import ConfigError, DomainError
from .field_models.infinite import INFINITE, INFINITE_AS_PRINTED, BiasField, InfiniteLatticeField, LatticeParams
from .field_models.prisms import FiniteLatticeField, FiniteLatticeSpec
from .lattice_support._base import default_grid
from .lattice_support.sweep import SweepPlan
from .traps import Region, Tolerances

FINITE = 'finite'
MODELS = (INFINITE, INFINITE_AS_PRINTED, FINITE)

# sanity ranges
MAX_LENGTH = 1e-2           # m
MAX_POSITION = 1.0          # m
MAX_MAGNETIZATION = 1e7     # A/m
MAX_BIAS = 10.0             # T
MAX_MASS = 1e-22            # kg

_TOP_KEYS = ('model', 'lattice', 'device', 'bias', 'species', 'region', 'grid', 'tolerances', 'chi',
             'field_map', 'sweep')
_LATTICE_KEYS = ('alpha', 'alpha_h', 'alpha_s', 'tau', 'M_z', 'symmetry_plane_z')
_DEVICE_KEYS = ('m_blocks', 'n_holes', 'alpha', 'alpha_h', 'alpha_s', 'tau', 'M_z', 'wall_margin',
                'block_gap', 'film_top_z', 'finite_chip', 'film_orientation')
_BIAS_KEYS = ('bx', 'by', 'bz')
_SPECIES_KEYS = ('name', 'mass', 'g_F', 'm_F')
_REGION_KEYS = ('x', 'y', 'z')
_TOLERANCE_KEYS = ('grad_tol', 'merge_radius', 'band_z_tolerance', 'zero_field_tol', 'max_iters')
_FIELD_MAP_KEYS = ('region', 'grid')
_SWEEP_KEYS = ('axis', 'values', 'start', 'stop', 'steps')


@dataclass(frozen=True)
class FieldMapSettings:
    region: Region
    grid: tuple


@dataclass(frozen=True)
class SweepSettings:
    axis: str
    values: tuple


@dataclass(frozen=True)
class Config:
    model: str
    geometry: object
    bias: BiasField
    species: AtomSpecies
    region: Region
    grid: tuple
    tolerances: Tolerances
    chi: float
    field_map: FieldMapSettings
    sweep: SweepSettings = None

    def sweep_plan(self):
        """ The configured sweep over the analysis region and grid, or None. """
        if self.sweep is None:
            return None
        return SweepPlan(self.sweep.axis, self.sweep.values, self.chi, self.region, self.grid)


class _Reader:
    """ Validation helpers that know where in the source text a key lives. """

    def __init__(self, text, source):
        self.text = text or ''
        self.source = source

    def fail(self, message, key=None):
        line = self.line_of(key) if key is not None else None
        where = f' (line {line})' if line else ''
        raise ConfigError(f'{self.source}: {message}{where}')

    def line_of(self, key):
        index = self.text.find(f'"{key}"')
        if index < 0:
            return None
        return self.text.count('\n', 0, index) + 1

    def block(self, value, path, allowed):
        if not isinstance(value, dict):
            self.fail(f'{path} must be an object, got {type(value).__name__}', path.rsplit('.', 1)[-1])
        for key in value:
            if key not in allowed:
                self.fail(f"unknown key '{key}' in {path}; expected one of {', '.join(allowed)}", key)
        return value

    def number(self, block, path, key, low=-math.inf, high=math.inf, default=None, open_low=False):
        if key not in block:
            if default is None:
                self.fail(f'{path}.{key} is required', path.rsplit('.', 1)[-1])
            return default
        value = block[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            self.fail(f'{path}.{key} must be a finite number, got {value!r}', key)
        value = float(value)
        if value > high or value < low or (open_low and value == low):
            bracket = '(' if open_low else '['
            self.fail(f'{path}.{key}={value!r} is outside {bracket}{low}, {high}]', key)
        return value

    def length(self, block, path, key, default=None):
        value = self.number(block, path, key, 0.0, MAX_LENGTH, default, open_low=True)
        return value

    def integer(self, block, path, key, low, high, default=None):
        if key not in block:
            if default is None:
                self.fail(f'{path}.{key} is required', path.rsplit('.', 1)[-1])
            return default
        value = block[key]
        if isinstance(value, bool) or not isinstance(value, int) or not low <= value <= high:
            self.fail(f'{path}.{key} must be an integer in [{low}, {high}], got {value!r}', key)
        return value


def _alpha_pair(reader, block, path):
    if 'alpha' in block:
        if 'alpha_h' in block or 'alpha_s' in block:
            reader.fail(f'{path}.alpha cannot be combined with alpha_h or alpha_s', 'alpha')
        alpha = reader.length(block, path, 'alpha')
        return alpha, alpha
    return reader.length(block, path, 'alpha_h'), reader.length(block, path, 'alpha_s')


def _parse_lattice(reader, block):
    block = reader.block(block, 'lattice', _LATTICE_KEYS)
    alpha_h, alpha_s = _alpha_pair(reader, block, 'lattice')
    if alpha_h != alpha_s:
        reader.fail(f'the infinite model requires alpha_h == alpha_s, got alpha_h={alpha_h!r} m and '
                    f'alpha_s={alpha_s!r} m; use model "finite" for unequal sizes', 'alpha_s')
    return LatticeParams(
        alpha_h=alpha_h, alpha_s=alpha_s,
        tau=reader.length(block, 'lattice', 'tau'),
        M_z=reader.number(block, 'lattice', 'M_z', 0.0, MAX_MAGNETIZATION),
        symmetry_plane_z=reader.number(block, 'lattice', 'symmetry_plane_z', -MAX_POSITION, MAX_POSITION, 0.0))


def _film_orientation(reader, block):
    value = block.get('film_orientation', 1)
    if isinstance(value, bool) or value not in (1, -1):
        reader.fail(f'device.film_orientation must be 1 or -1, got {value!r}', 'film_orientation')
    return int(value)


def _parse_device(reader, block):
    block = reader.block(block, 'device', _DEVICE_KEYS)
    alpha_h, alpha_s = _alpha_pair(reader, block, 'device')
    finite_chip = block.get('finite_chip', False)
    if not isinstance(finite_chip, bool):
        reader.fail(f'device.finite_chip must be true or false, got {finite_chip!r}', 'finite_chip')
    pitch = alpha_h + alpha_s
    return FiniteLatticeSpec(
        m_blocks=reader.integer(block, 'device', 'm_blocks', 1, 64, 1),
        n_holes=reader.integer(block, 'device', 'n_holes', 1, 256),
        alpha_h=alpha_h, alpha_s=alpha_s,
        tau=reader.length(block, 'device', 'tau'),
        M_z=reader.number(block, 'device', 'M_z', 0.0, MAX_MAGNETIZATION),
        wall_margin=reader.length(block, 'device', 'wall_margin', 2.0 * pitch),
        block_gap=reader.length(block, 'device', 'block_gap', pitch),
        film_top_z=reader.number(block, 'device', 'film_top_z', -MAX_POSITION, MAX_POSITION, 0.0),
        finite_chip=finite_chip,
        film_orientation=_film_orientation(reader, block))


def _parse_bias(reader, block):
    block = reader.block(block, 'bias', _BIAS_KEYS)
    return BiasField(*(reader.number(block, 'bias', key, -MAX_BIAS, MAX_BIAS, 0.0) for key in _BIAS_KEYS))


def _parse_species(reader, value):
    if isinstance(value, str):
        try:
            return get_species(value)
        except ConfigError as error:
            reader.fail(str(error), 'species')
    block = reader.block(value, 'species', _SPECIES_KEYS)
    name = block.get('name')
    if not isinstance(name, str) or not name:
        reader.fail('species.name must be a non-empty string', 'species')
    mass = reader.number(block, 'species', 'mass', 0.0, MAX_MASS, open_low=True)
    g_F = reader.number(block, 'species', 'g_F')
    m_F = reader.number(block, 'species', 'm_F')
    if not m_F * g_F > 0:
        reader.fail(f'species {name!r} must be a weak-field seeker (m_F * g_F > 0), '
                    f'got m_F={m_F!r}, g_F={g_F!r}', 'm_F')
    return AtomSpecies(name=name, mass=mass, g_F=g_F, m_F=m_F)


def _parse_region(reader, value, path):
    block = reader.block(value, path, _REGION_KEYS)
    bounds = {}
    for axis in _REGION_KEYS:
        pair = block.get(axis)
        if (not isinstance(pair, list) or len(pair) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in pair)):
            reader.fail(f'{path}.{axis} must be a [low, high] pair of numbers in metres', axis)
        if not all(math.isfinite(v) and abs(v) <= MAX_POSITION for v in pair) or pair[0] > pair[1]:
            reader.fail(f'{path}.{axis}={pair!r} must satisfy low <= high within ±{MAX_POSITION} m', axis)
        bounds[axis] = (float(pair[0]), float(pair[1]))
    return Region(**bounds)


def _parse_grid(reader, value, path, minimum):
    if (not isinstance(value, list) or len(value) != 3
            or any(isinstance(n, bool) or not isinstance(n, int) for n in value)
            or not all(minimum <= n <= config.MAX_GRID_POINTS_PER_AXIS for n in value)):
        reader.fail(f'{path} must be three integers in [{minimum}, {config.MAX_GRID_POINTS_PER_AXIS}], '
                    f'got {value!r}', path.rsplit('.', 1)[-1])
    return tuple(value)


def _check_resolution(reader, region, grid, period, path):
    largest = period / config.POINTS_PER_PERIOD
    for axis, spacing in zip('xyz', region.spacing(grid)):
        if spacing > largest * (1.0 + 1e-9):
            reader.fail(f'{path} spacing along {axis} is {spacing!r} m, coarser than '
                        f'{config.POINTS_PER_PERIOD} points per period ({largest!r} m)', path)


def _parse_tolerances(reader, value, defaults):
    block = reader.block(value, 'tolerances', _TOLERANCE_KEYS)
    values = {key: reader.number(block, 'tolerances', key, 0.0, default=getattr(defaults, key), open_low=True)
              for key in _TOLERANCE_KEYS if key != 'max_iters'}
    values['max_iters'] = reader.integer(block, 'tolerances', 'max_iters', 1, 100000, defaults.max_iters)
    return Tolerances(**values)


def _parse_sweep(reader, value):
    block = reader.block(value, 'sweep', _SWEEP_KEYS)
    axis = block.get('axis', 'z')
    if axis not in _REGION_KEYS:
        reader.fail(f'sweep.axis must be one of x, y, z, got {axis!r}', 'axis')
    if 'values' in block:
        if any(key in block for key in ('start', 'stop', 'steps')):
            reader.fail('sweep takes either values or start/stop/steps, not both', 'values')
        values = block['values']
        if not isinstance(values, list) or not values:
            reader.fail('sweep.values must be a non-empty list of tesla values', 'values')
        values = tuple(reader.number({'v': v}, 'sweep.values', 'v', -MAX_BIAS, MAX_BIAS) for v in values)
    else:
        start = reader.number(block, 'sweep', 'start', -MAX_BIAS, MAX_BIAS)
        stop = reader.number(block, 'sweep', 'stop', -MAX_BIAS, MAX_BIAS)
        steps = reader.integer(block, 'sweep', 'steps', 1, 10000)
        values = SweepPlan.from_range(axis, start, stop, steps).values
    try:
        SweepPlan(axis, values)
    except ConfigError as error:
        reader.fail(str(error), 'sweep')
    return SweepSettings(axis=axis, values=values)


def _model_field(model, geometry, bias):
    if model == FINITE:
        return FiniteLatticeField(geometry, bias)
    return InfiniteLatticeField(geometry, bias, model)


def parse_config(document, text=None, source='<config>'):
    """
    Validate a decoded configuration document.

    :param document: dict decoded from JSON
    :param text: the source text, used to report line numbers
    :param source: name used in error messages
    :return: Config
    """
    reader = _Reader(text, source)
    reader.block(document, 'config', _TOP_KEYS)
    model = document.get('model')
    if model not in MODELS:
        reader.fail(f'model must be one of {", ".join(MODELS)}, got {model!r}', 'model')

    expected, other = ('device', 'lattice') if model == FINITE else ('lattice', 'device')
    if other in document:
        reader.fail(f'model "{model}" takes a "{expected}" block, not "{other}"', other)
    if expected not in document:
        reader.fail(f'model "{model}" requires a "{expected}" block', 'model')
    try:
        if model == FINITE:
            geometry = _parse_device(reader, document['device'])
        else:
            geometry = _parse_lattice(reader, document['lattice'])
        bias = _parse_bias(reader, document.get('bias', {}))
    except DomainError as error:
        reader.fail(str(error), expected)

    field = _model_field(model, geometry, bias)
    species = _parse_species(reader, document.get('species', 'K40'))

    region = _parse_region(reader, document['region'], 'region') if 'region' in document \
        else field.default_region()
    clearance = field.film_top + 2.0 * config.HESSIAN_STEP_FACTOR * field.length_scale
    if region.z[0] < clearance:
        reader.fail(f'region.z starts at {region.z[0]!r} m, below the film surface clearance {clearance!r} m',
                    'region')
    if not all(low < high for low, high in region.bounds):
        reader.fail('region must have a non-zero extent along every axis', 'region')
    if 'grid' in document:
        grid = _parse_grid(reader, document['grid'], 'grid', 3)
    else:
        grid = default_grid(region, field.period)
    _check_resolution(reader, region, grid, field.period, 'grid')

    defaults = Tolerances.for_scales(field.length_scale, field.field_scale)
    tolerances = _parse_tolerances(reader, document.get('tolerances', {}), defaults)

    chi = reader.number(document, 'config', 'chi', 0.0, 1e6, 0.0)
    if chi > 0 and not field.field_scale > 0:
        reader.fail('chi > 0 needs a non-zero film magnetization', 'chi')

    field_map_block = reader.block(document.get('field_map', {}), 'field_map', _FIELD_MAP_KEYS)
    if 'region' in field_map_block:
        map_region = _parse_region(reader, field_map_block['region'], 'field_map.region')
    else:
        middle = 0.5 * (region.z[0] + region.z[1])
        map_region = region.with_axis('z', (middle, middle))
    if map_region.z[0] <= field.film_top:
        reader.fail('field_map.region must lie above the film surface', 'field_map')
    map_grid = _parse_grid(reader, field_map_block['grid'], 'field_map.grid', 1) \
        if 'grid' in field_map_block else (64, 64, 1)

    sweep = _parse_sweep(reader, document['sweep']) if 'sweep' in document else None

    return Config(model=model, geometry=geometry, bias=bias, species=species, region=region, grid=grid,
                  tolerances=tolerances, chi=chi, field_map=FieldMapSettings(map_region, map_grid), sweep=sweep)


def load_config(path):
    """
    Read and validate a JSON configuration file.

    :param path: str - file path
    :return: Config with every default materialized
    """
    try:
        with open(path, encoding='utf-8') as handle:
            text = handle.read()
    except OSError as error:
        raise ConfigError(f'{path}: cannot read configuration: {error.strerror or error}') from error
    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        raise ConfigError(f'{path}: invalid JSON: {error.msg} (line {error.lineno})') from error
    return parse_config(document, text, str(path))


def _geometry_document(model, geometry):
    if model == FINITE:
        return 'device', {
            'm_blocks': geometry.m_blocks, 'n_holes': geometry.n_holes,
            'alpha_h': geometry.alpha_h, 'alpha_s': geometry.alpha_s, 'tau': geometry.tau,
            'M_z': geometry.M_z, 'wall_margin': geometry.wall_margin, 'block_gap': geometry.block_gap,
            'film_top_z': geometry.film_top_z, 'finite_chip': geometry.finite_chip,
            'film_orientation': geometry.film_orientation}
    return 'lattice', {
        'alpha_h': geometry.alpha_h, 'alpha_s': geometry.alpha_s, 'tau': geometry.tau,
        'M_z': geometry.M_z, 'symmetry_plane_z': geometry.symmetry_plane_z}


def _region_document(region):
    return {axis: list(bounds) for axis, bounds in zip(_REGION_KEYS, region.bounds)}


def emit_config(settings):
    """
    The JSON-ready document of a Config; `parse_config` of the result gives
    an equal Config.

    :param settings: Config
    :return: dict
    """
    key, geometry = _geometry_document(settings.model, settings.geometry)
    document = {
        'model': settings.model,
        key: geometry,
        'bias': {'bx': settings.bias.bx, 'by': settings.bias.by, 'bz': settings.bias.bz},
        'species': {'name': settings.species.name, 'mass': settings.species.mass,
                    'g_F': settings.species.g_F, 'm_F': settings.species.m_F},
        'region': _region_document(settings.region),
        'grid': list(settings.grid),
        'tolerances': {name: getattr(settings.tolerances, name) for name in _TOLERANCE_KEYS},
        'chi': settings.chi,
        'field_map': {'region': _region_document(settings.field_map.region),
                      'grid': list(settings.field_map.grid)},
    }
    if settings.sweep is not None:
        document['sweep'] = {'axis': settings.sweep.axis, 'values': list(settings.sweep.values)}
    return document


def config_hash(settings):
    """ SHA-256 of the canonical JSON of the effective configuration. """
    canonical = json.dumps(emit_config(settings), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


def dump_config(settings, path):
    """ Write the effective configuration as indented JSON. """
    with open(path, 'w', encoding='utf-8', newline='\n') as handle:
        json.dump(emit_config(settings), handle, indent=2, sort_keys=True)
        handle.write('\n')
    return path
