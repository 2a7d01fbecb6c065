"""
Finite hole-array device built from uniformly magnetized rectangular prisms.

A uniformly magnetized infinite film has no external field, so a film with
holes is the superposition of one oppositely magnetized plug per hole. The
field of each plug comes from magpylib's closed-form cuboid; plugs are
accumulated here in a fixed order with compensated sums.

``film_orientation`` picks the film's magnetization direction. With the film
along +z the plugs carry -M_z and their field above a hole points along -z;
with the film along -z the hole field points along +z, and a bias along -z
cancels it on each hole axis.
"""
import math
from dataclasses import dataclass, replace

import magpylib as magpy
import numpy as np

from .. import config, constants
from ..exceptions import DomainError
from ..traps import Region
from ._differences import central_gradient
from .infinite import BiasField

# distance below which a point counts as touching a prism
BOUNDARY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PrismSpec:
    center: tuple
    half_extents: tuple
    magnetization: tuple

    def __post_init__(self):
        object.__setattr__(self, 'center', tuple(float(v) for v in self.center))
        object.__setattr__(self, 'half_extents', tuple(float(v) for v in self.half_extents))
        object.__setattr__(self, 'magnetization', tuple(float(v) for v in self.magnetization))
        if len(self.center) != 3 or len(self.half_extents) != 3 or len(self.magnetization) != 3:
            raise DomainError('PrismSpec center, half_extents and magnetization need three components each')
        if not all(math.isfinite(v) and v > 0 for v in self.half_extents):
            raise DomainError(f'PrismSpec.half_extents must be positive, got {self.half_extents!r}')

    @property
    def volume(self):
        a, b, c = self.half_extents
        return 8.0 * a * b * c


@dataclass(frozen=True)
class FiniteLatticeSpec:
    """
    m x m blocks of n x n square holes.

    Holes of side ``alpha_h`` sit on a pitch of ``alpha_h + alpha_s`` inside a
    block; neighbouring blocks are separated by a wall of width ``block_gap``
    between their outer holes. ``wall_margin`` is the unpatterned border around
    the whole array and only matters in ``finite_chip`` mode, where the film
    itself is given a finite footprint. ``film_orientation`` is +1 for a
    film magnetized along +z and -1 for one magnetized along -z.
    """
    m_blocks: int
    n_holes: int
    alpha_h: float
    alpha_s: float
    tau: float
    M_z: float
    wall_margin: float = None
    block_gap: float = None
    film_top_z: float = 0.0
    finite_chip: bool = False
    film_orientation: int = 1

    def __post_init__(self):
        for name in ('m_blocks', 'n_holes'):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise DomainError(f'FiniteLatticeSpec.{name} must be an integer >= 1, got {value!r}')
            object.__setattr__(self, name, int(value))
        pitch = self.alpha_h + self.alpha_s
        if self.wall_margin is None:
            object.__setattr__(self, 'wall_margin', 2.0 * pitch)
        if self.block_gap is None:
            object.__setattr__(self, 'block_gap', pitch)
        for name in ('alpha_h', 'alpha_s', 'tau', 'wall_margin', 'block_gap'):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f'FiniteLatticeSpec.{name} must be a positive finite length, got {value!r}')
        if not (math.isfinite(self.M_z) and self.M_z >= 0):
            raise DomainError(f'FiniteLatticeSpec.M_z must be finite and >= 0, got {self.M_z!r}')
        if not math.isfinite(self.film_top_z):
            raise DomainError(f'FiniteLatticeSpec.film_top_z must be finite, got {self.film_top_z!r}')
        if isinstance(self.film_orientation, bool) or self.film_orientation not in (1, -1):
            raise DomainError(f'FiniteLatticeSpec.film_orientation must be 1 or -1, '
                              f'got {self.film_orientation!r}')
        object.__setattr__(self, 'film_orientation', int(self.film_orientation))

    @property
    def pitch(self):
        return self.alpha_h + self.alpha_s

    @property
    def B_o(self):
        return constants.mu0 * self.M_z / math.pi

    @property
    def block_width(self):
        """ Edge-to-edge width of one block of holes. """
        return self.n_holes * self.alpha_h + (self.n_holes - 1) * self.alpha_s

    @property
    def array_width(self):
        return self.m_blocks * self.block_width + (self.m_blocks - 1) * self.block_gap


def hole_coordinates(spec):
    """ Sorted hole-centre coordinates along one axis; the layout is separable in x and y. """
    block_pitch = spec.block_width + spec.block_gap
    coordinates = []
    for block in range(spec.m_blocks):
        block_center = (block - (spec.m_blocks - 1) / 2.0) * block_pitch
        for hole in range(spec.n_holes):
            coordinates.append(block_center + (hole - (spec.n_holes - 1) / 2.0) * spec.pitch)
    return coordinates


def hole_centers(spec):
    """ Row-major (x, y) hole centres: rows in y, x fastest. """
    coordinates = hole_coordinates(spec)
    return [(x, y) for y in coordinates for x in coordinates]


def build_hole_array(spec):
    """
    One plug per hole, magnetized against the film, in row-major layout
    order: (0, 0, -M_z) for a film along +z. In ``finite_chip`` mode a slab
    carrying the film magnetization and covering the array and its wall
    margin comes first.

    :param spec: FiniteLatticeSpec
    :return: list of PrismSpec
    """
    film = spec.film_orientation * spec.M_z
    half_height = spec.tau / 2.0
    z_center = spec.film_top_z - half_height
    prisms = []
    if spec.finite_chip:
        half_width = spec.array_width / 2.0 + spec.wall_margin
        prisms.append(PrismSpec((0.0, 0.0, z_center), (half_width, half_width, half_height),
                                (0.0, 0.0, film)))
    half_hole = spec.alpha_h / 2.0
    for x, y in hole_centers(spec):
        prisms.append(PrismSpec((x, y, z_center), (half_hole, half_hole, half_height),
                                (0.0, 0.0, -film)))
    return prisms


def _prism_terms(centers, half_extents, magnetizations, points):
    """ Per-prism B in tesla, shape (P, N, 3). """
    relative = points[None, :, :] - centers[:, None, :]
    inside = np.all(np.abs(relative) <= half_extents[:, None, :] + BOUNDARY_TOLERANCE, axis=2)
    if np.any(inside):
        prism_index, point_index = np.argwhere(inside)[0]
        raise DomainError(
            f'point {tuple(points[point_index])!r} lies inside or on prism #{prism_index}; '
            'the external field is undefined there')
    count, n_points = len(centers), len(points)
    # one vectorised call: every (prism, point) pair is its own row
    field = magpy.getB(
        sources='Cuboid',
        observers=np.tile(points, (count, 1)),
        dimension=np.repeat(2.0 * half_extents, n_points, axis=0),
        position=np.repeat(centers, n_points, axis=0),
        polarization=np.repeat(constants.mu0 * magnetizations, n_points, axis=0))
    return np.asarray(field, dtype=float).reshape(count, n_points, 3)


def _prism_arrays(prisms):
    centers = np.array([p.center for p in prisms], dtype=float).reshape(-1, 3)
    half_extents = np.array([p.half_extents for p in prisms], dtype=float).reshape(-1, 3)
    magnetizations = np.array([p.magnetization for p in prisms], dtype=float).reshape(-1, 3)
    return centers, half_extents, magnetizations


def prism_field(prism, point):
    """
    External B of one prism.

    :param prism: PrismSpec
    :param point: (x, y, z) in metres, outside the prism
    :return: numpy array (Bx, By, Bz) in tesla
    """
    points = np.asarray(point, dtype=float).reshape(1, 3)
    return _prism_terms(*_prism_arrays([prism]), points)[0, 0]


def _compensated_sum(terms):
    """ Neumaier summation over the first axis, in index order. """
    total = np.zeros(terms.shape[1:])
    compensation = np.zeros(terms.shape[1:])
    for term in terms:
        running = total + term
        compensation += np.where(np.abs(total) >= np.abs(term),
                                 (total - running) + term,
                                 (term - running) + total)
        total = running
    return total + compensation


def field_of_prisms(prisms, bias, points):
    """
    Vector field of a prism list plus bias on an (N, 3) array of points.

    Points are processed in fixed-size chunks and prisms are accumulated in
    list order, so results do not depend on how callers split their work.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    result = np.empty(points.shape)
    bias_vector = bias.as_array()
    if not prisms:
        result[:] = 0.0 + bias_vector
        return result
    arrays = _prism_arrays(prisms)
    for start in range(0, len(points), config.CHUNK_SIZE):
        chunk = points[start:start + config.CHUNK_SIZE]
        result[start:start + len(chunk)] = _compensated_sum(_prism_terms(*arrays, chunk)) + bias_vector
    return result


@dataclass(frozen=True)
class FiniteFieldValue:
    b: tuple
    magnitude: float


def evaluate_finite(spec, bias, point):
    """
    B and |B| of the device at one point.

    :param spec: FiniteLatticeSpec
    :param bias: BiasField
    :param point: (x, y, z) in metres, outside every prism
    :return: FiniteFieldValue
    """
    b = field_of_prisms(build_hole_array(spec), bias, [point])[0]
    return FiniteFieldValue(b=tuple(float(v) for v in b), magnitude=float(np.linalg.norm(b)))


def row_profile(spec, bias, y, z, xs):
    """ |B| along x at a fixed row (y, z). """
    xs = np.asarray(xs, dtype=float)
    points = np.column_stack([xs, np.full(xs.shape, float(y)), np.full(xs.shape, float(z))])
    return np.linalg.norm(field_of_prisms(build_hole_array(spec), bias, points), axis=1)


def divergence_and_curl(vector_field, point, step):
    """
    Central-difference divergence and curl of a vector field.

    :param vector_field: callable mapping (N, 3) points to (N, 3) vectors
    :return: (divergence, curl) with curl a length-3 array
    """
    jacobian = np.empty((3, 3))
    for component in range(3):
        jacobian[component] = central_gradient(lambda p: vector_field(p)[:, component], point, step)
    divergence = np.trace(jacobian)
    curl = np.array([jacobian[2, 1] - jacobian[1, 2],
                     jacobian[0, 2] - jacobian[2, 0],
                     jacobian[1, 0] - jacobian[0, 1]])
    return divergence, curl


class FiniteLatticeField:
    """ `FieldModel` over a finite hole array. """
    name = 'finite'

    def __init__(self, spec, bias=None):
        self.spec = spec
        self.bias = bias if bias is not None else BiasField()
        self.prisms = tuple(build_hole_array(spec))

    def __repr__(self):
        return f'FiniteLatticeField({self.spec!r}, {self.bias!r})'

    @property
    def length_scale(self):
        return self.spec.alpha_h

    @property
    def period(self):
        return self.spec.pitch

    @property
    def field_scale(self):
        return self.spec.B_o if self.spec.M_z > 0 else self.bias.magnitude

    @property
    def magnetization(self):
        return self.spec.M_z

    @property
    def film_top(self):
        return self.spec.film_top_z

    def vector(self, points):
        return field_of_prisms(self.prisms, self.bias, points)

    def magnitude(self, points):
        return np.linalg.norm(self.vector(points), axis=1)

    def clamped(self, points):
        return np.zeros(len(np.atleast_2d(points)), dtype=bool)

    def default_region(self):
        half = self.spec.array_width / 2.0 + self.spec.pitch / 2.0
        top = self.spec.film_top_z
        alpha = self.spec.alpha_h
        return Region(x=(-half, half), y=(-half, half), z=(top + 0.25 * alpha, top + 3.25 * alpha))

    def with_bias(self, bias):
        return FiniteLatticeField(self.spec, bias)

    def with_magnetization(self, M_z):
        return FiniteLatticeField(replace(self.spec, M_z=M_z), self.bias)
