import math

import numpy as np
from joblib import Parallel, delayed

from .. import config
from ..exceptions import ConfigError
from ..field_models._differences import central_gradient, central_hessian
from ..field_models.infinite import hessian_info
from ..logger import Logger
from ._field import Field


class Base(Field):

    def __init__(self, root):
        """
        Base class with the field model and the evaluation primitives every
        analysis builds on.
        :param root: the main Lattice class
        """
        super().__init__(root)
        self.log = Logger.get_logger()

    def magnitude_at(self, points):
        """
        |B| at an (N, 3) array of points.

        Large sets are split into fixed-size chunks and evaluated on worker
        threads; the result does not depend on the thread count.

        :return: numpy array of N values in tesla
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if len(points) <= config.CHUNK_SIZE:
            return np.asarray(self.field.magnitude(points), dtype=float)
        chunks = [points[start:start + config.CHUNK_SIZE]
                  for start in range(0, len(points), config.CHUNK_SIZE)]
        results = Parallel(n_jobs=self._n_jobs(), prefer='threads')(
            delayed(self.field.magnitude)(chunk) for chunk in chunks)
        return np.concatenate([np.asarray(result, dtype=float) for result in results])

    def gradient_at(self, point):
        """ Central-difference gradient of |B| in T/m. """
        step = self.field.length_scale * config.GRADIENT_STEP_FACTOR
        return central_gradient(self.field.magnitude, point, step)

    def hessian_at(self, point):
        """
        Symmetrized central-difference Hessian of |B| in T/m².

        :return: HessianInfo(matrix, eigenvalues ascending, axes)
        """
        step = self.field.length_scale * config.HESSIAN_STEP_FACTOR
        return hessian_info(central_hessian(self.field.magnitude, point, step))

    def clamped_fraction(self, points):
        """ Fraction of ``points`` at which the field model clamped its result. """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if len(points) == 0:
            return 0.0
        return float(np.count_nonzero(self.field.clamped(points))) / len(points)

    def _value(self, point):
        return float(self.field.magnitude(np.asarray(point, dtype=float).reshape(1, 3))[0])

    def _n_jobs(self):
        threads = self._root.threads
        if threads is None:
            threads = config.THREADS
        if threads is None or threads == '':
            return -1
        try:
            threads = int(threads)
        except (TypeError, ValueError) as error:
            raise ConfigError(f'thread count must be a positive integer, got {threads!r}') from error
        if threads < 1:
            raise ConfigError(f'thread count must be a positive integer, got {threads!r}')
        return threads

    def _check_grid(self, region, dims, minimum=1, resolve_period=True):
        """
        Reject grids that are too large, or too coarse to resolve one
        lattice period with POINTS_PER_PERIOD points when ``resolve_period``.
        """
        dims = tuple(dims)
        if len(dims) != 3:
            raise ConfigError(f'grid needs three dimensions, got {dims!r}')
        for axis, n in zip('xyz', dims):
            if isinstance(n, bool) or int(n) != n or not minimum <= n <= config.MAX_GRID_POINTS_PER_AXIS:
                raise ConfigError(f'grid.{axis}={n!r} must be an integer in '
                                  f'[{minimum}, {config.MAX_GRID_POINTS_PER_AXIS}]')
        if not resolve_period:
            return tuple(int(n) for n in dims)
        largest = self.field.period / config.POINTS_PER_PERIOD
        for axis, spacing in zip('xyz', region.spacing(dims)):
            if spacing > largest * (1.0 + 1e-9):
                raise ConfigError(
                    f'grid spacing {spacing!r} m along {axis} is coarser than {config.POINTS_PER_PERIOD} '
                    f'points per period ({largest!r} m)')
        return tuple(int(n) for n in dims)


def default_grid(region, period, per_period=config.POINTS_PER_PERIOD):
    """ Smallest grid with ``per_period`` points per period on each non-degenerate axis. """
    return tuple(max(1, int(math.ceil((high - low) * per_period / period - 1e-9)) + 1) if high > low else 1
                 for low, high in region.bounds)
