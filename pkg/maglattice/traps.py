"""Records produced by trap analysis, and the search region and tolerances that shape it."""
import math
from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np

from . import config
from .exceptions import ConfigError

SearchStats = namedtuple('SearchStats', 'seeds, converged, dropped_iters, dropped_escape, dropped_other, merged')

Analysis = namedtuple('Analysis', 'sites, bands, barriers, gaps')

AXES = {'x': 0, 'y': 1, 'z': 2}


@dataclass(frozen=True)
class Region:
    """ Axis-aligned box; each axis is a (low, high) pair in metres. """
    x: tuple
    y: tuple
    z: tuple

    def __post_init__(self):
        for name in AXES:
            bounds = tuple(float(v) for v in getattr(self, name))
            if len(bounds) != 2 or not all(math.isfinite(v) for v in bounds) or bounds[0] > bounds[1]:
                raise ConfigError(f'region.{name} must be a finite [low, high] pair, got {getattr(self, name)!r}')
            object.__setattr__(self, name, bounds)

    @property
    def bounds(self):
        return (self.x, self.y, self.z)

    @property
    def lower(self):
        return np.array([self.x[0], self.y[0], self.z[0]])

    @property
    def upper(self):
        return np.array([self.x[1], self.y[1], self.z[1]])

    def axes(self, dims):
        return tuple(np.linspace(low, high, int(n)) for (low, high), n in zip(self.bounds, dims))

    def spacing(self, dims):
        return np.array([(high - low) / (n - 1) if n > 1 else 0.0
                         for (low, high), n in zip(self.bounds, dims)])

    def points(self, dims):
        """ Grid points as an (nx*ny*nz, 3) array, x fastest. """
        xs, ys, zs = self.axes(dims)
        z, y, x = np.meshgrid(zs, ys, xs, indexing='ij')
        return np.column_stack([x.ravel(), y.ravel(), z.ravel()])

    def boundary_points(self, dims):
        """ Grid points lying on any of the six faces. """
        points = self.points(dims)
        on_face = np.zeros(len(points), dtype=bool)
        for axis, (low, high) in enumerate(self.bounds):
            on_face |= (points[:, axis] == low) | (points[:, axis] == high)
        return points[on_face]

    def contains(self, point, margin=0.0):
        point = np.asarray(point, dtype=float)
        return bool(np.all(point >= self.lower + margin) and np.all(point <= self.upper - margin))

    def with_axis(self, axis, bounds):
        values = {'x': self.x, 'y': self.y, 'z': self.z}
        values[axis] = bounds
        return Region(**values)


@dataclass(frozen=True)
class Tolerances:
    grad_tol: float
    merge_radius: float
    band_z_tolerance: float
    zero_field_tol: float
    max_iters: int = config.MAX_ITERS

    def __post_init__(self):
        for name in ('grad_tol', 'merge_radius', 'band_z_tolerance', 'zero_field_tol'):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f'tolerances.{name} must be positive, got {value!r}')
        if isinstance(self.max_iters, bool) or int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ConfigError(f'tolerances.max_iters must be a positive integer, got {self.max_iters!r}')

    @classmethod
    def for_scales(cls, length, field_scale):
        """ Default tolerances for a lattice with feature size ``length`` and field ``field_scale``. """
        if not field_scale > 0:
            field_scale = 1.0
        return cls(grad_tol=config.GRAD_TOL_FACTOR * field_scale / length,
                   merge_radius=config.MERGE_RADIUS_FACTOR * length,
                   band_z_tolerance=config.BAND_Z_TOLERANCE_FACTOR * length,
                   zero_field_tol=config.ZERO_FIELD_FACTOR * field_scale,
                   max_iters=config.MAX_ITERS)


@dataclass(frozen=True)
class TrapSite:
    """
    A non-zero local minimum of |B|.

    ``zero_field`` marks a minimum where |B| vanishes; atoms held there are
    lost to spin flips.
    """
    position: tuple
    b_min: float
    hessian_eigenvalues: tuple
    hessian_axes: tuple
    band_index: int = 0
    zero_field: bool = False

    @property
    def x(self):
        return self.position[0]

    @property
    def y(self):
        return self.position[1]

    @property
    def z(self):
        return self.position[2]

    def sort_key(self):
        return (self.position[2], self.position[1], self.position[0])

    def distance_to(self, other):
        return math.dist(self.position, other.position)


@dataclass(frozen=True)
class Band:
    index: int
    sites: tuple
    z_centroid: float
    b_floor: float


@dataclass(frozen=True)
class BandGap:
    lower_band: int
    upper_band: int
    gap: float
    vertical_barrier: float
    vertical_pair: tuple = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class BarrierResult:
    """
    Saddle between two sites. ``path`` is the arc length along the
    site_a -> saddle -> site_b polyline and ``profile`` the |B| sampled there.
    ``below_site`` marks a saddle lower than one of the sites.
    """
    site_a: TrapSite
    site_b: TrapSite
    delta_b: float
    saddle_position: tuple
    saddle_b: float
    same_site: bool = False
    below_site: bool = False
    path: tuple = field(default=(), compare=False, repr=False)
    profile: tuple = field(default=(), compare=False, repr=False)


def outward_trend(sites, axis='x', center=0.0, value='b_min'):
    """
    One site quantity ordered by distance from ``center`` along one axis.

    :param value: 'b_min', or a coordinate name ('x', 'y', 'z') to follow site positions
    :return: (distances, values) as numpy arrays, nearest first
    """
    index = AXES[axis]
    if value != 'b_min' and value not in AXES:
        raise ConfigError(f"value must be 'b_min' or one of {sorted(AXES)}, got {value!r}")
    ordered = sorted(sites, key=lambda site: (abs(site.position[index] - center), site.sort_key()))
    distances = np.array([abs(site.position[index] - center) for site in ordered])
    if value == 'b_min':
        return distances, np.array([site.b_min for site in ordered])
    return distances, np.array([site.position[AXES[value]] for site in ordered])


def is_monotone_over_outer_half(values):
    """ True when ``values`` never decrease over their outer half. """
    values = np.asarray(values, dtype=float)
    outer = values[len(values) // 2:] if len(values) > 1 else values
    return bool(np.all(np.diff(outer) >= 0))
