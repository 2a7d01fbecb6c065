import itertools
import math

import numpy as np
from joblib import Parallel, delayed
from scipy import ndimage
from scipy.optimize import minimize_scalar

from .. import config
from ..exceptions import ConfigError, DomainError
from ..traps import SearchStats, TrapSite
from ._base import Base

CONVERGED = 'converged'
ZERO_FIELD = 'zero-field'
ESCAPED = 'escaped'
MAX_ITERS = 'max-iters'
STALLED = 'stalled'

_NEIGHBOURS = [offset for offset in itertools.product((-1, 0, 1), repeat=3) if offset != (0, 0, 0)]


def strict_grid_minima(values, excluded=None):
    """
    Interior grid points strictly lower than all 26 neighbours.

    :param values: array shaped (nz, ny, nx)
    :param excluded: optional boolean mask of the same shape
    :return: (k, 3) array of (iz, iy, ix) indices in C order
    """
    nz, ny, nx = values.shape
    if min(values.shape) < 3:
        return np.empty((0, 3), dtype=int)
    core = values[1:-1, 1:-1, 1:-1]
    mask = np.isfinite(core)
    if excluded is not None:
        mask &= ~excluded[1:-1, 1:-1, 1:-1]
    for dz, dy, dx in _NEIGHBOURS:
        mask &= core < values[1 + dz:nz - 1 + dz, 1 + dy:ny - 1 + dy, 1 + dx:nx - 1 + dx]
    return np.argwhere(mask) + 1


def clamped_sites(points, clamped):
    """
    One zero-field site per face-connected patch of clamped grid points, placed
    on the patch point nearest the patch centroid. |B| is zero over the whole
    patch, so the site has b_min = 0 and no curvature.

    :param points: (nx*ny*nz, 3) grid points, x fastest
    :param clamped: boolean array shaped (nz, ny, nx)
    :return: list of TrapSite flagged zero_field
    """
    labels, count = ndimage.label(clamped)
    labels = labels.ravel()
    sites = []
    for label in range(1, count + 1):
        members = points[labels == label]
        centroid = members.mean(axis=0)
        nearest = members[int(np.argmin(np.linalg.norm(members - centroid, axis=1)))]
        sites.append(TrapSite(position=tuple(float(c) for c in nearest), b_min=0.0,
                              hessian_eigenvalues=(0.0, 0.0, 0.0),
                              hessian_axes=((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)),
                              zero_field=True))
    return sites


class Minima(Base):

    def find_minima(self, region=None, grid=None):
        """
        Locate the local minima of |B| inside ``region``.

        Every strict 26-neighbour minimum of the grid seeds a refinement:
        damped Newton steps while the Hessian is positive definite,
        coordinate descent otherwise. Seeds that leave the region or run out
        of iterations are dropped with a warning. Converged points closer than
        the merge radius are merged, keeping the lowest. Grid points where the
        analytic radicand was clamped never seed a refinement; each connected
        patch of them is reported as one zero-field site instead.

        Statistics of the last search are kept in ``search_stats``.

        :param region: Region, defaults to the lattice region
        :param grid: (nx, ny, nz), defaults to the lattice grid
        :return: list of TrapSite sorted by (z, y, x)
        """
        region = region or self._root.region
        grid = self._check_grid(region, grid or self._root.grid)
        self._check_region(region)
        points = region.points(grid)
        nx, ny, nz = grid
        values = self.magnitude_at(points).reshape(nz, ny, nx)
        clamped = self.field.clamped(points).reshape(nz, ny, nx)
        if np.any(clamped):
            self.log.warning(f'{np.count_nonzero(clamped) / clamped.size:.2%} of the search grid '
                             'had a clamped radicand; each clamped patch is reported as one zero-field site')
        seeds = [points[np.ravel_multi_index((iz, iy, ix), (nz, ny, nx))]
                 for iz, iy, ix in strict_grid_minima(values, clamped)]
        self.log.info(f'{len(seeds)} seeds on a {nx}x{ny}x{nz} grid')

        spacing = region.spacing(grid)
        outcomes = Parallel(n_jobs=self._n_jobs(), prefer='threads')(
            delayed(self._refine)(seed, spacing, region) for seed in seeds)

        counts = {CONVERGED: 0, ZERO_FIELD: 0, ESCAPED: 0, MAX_ITERS: 0, STALLED: 0}
        candidates = []
        for seed, (point, value, status) in zip(seeds, outcomes):
            counts[status] += 1
            if status in (ESCAPED, MAX_ITERS, STALLED):
                self.log.warning(f'dropped seed at {tuple(seed)!r}: {status}')
                continue
            site = self._make_site(point, value, status == ZERO_FIELD)
            if site is None:
                counts[STALLED] += 1
                continue
            candidates.append(site)

        candidates.extend(clamped_sites(points, clamped))
        sites, merged = self._merge(candidates)
        zero_field = [site for site in sites if site.zero_field]
        if zero_field:
            self.log.warning(f'{len(zero_field)} zero-field site(s) found; atoms there are not '
                             'protected against spin flips')
        self._root.search_stats = SearchStats(
            seeds=len(seeds), converged=counts[CONVERGED] + counts[ZERO_FIELD],
            dropped_iters=counts[MAX_ITERS], dropped_escape=counts[ESCAPED],
            dropped_other=counts[STALLED], merged=merged)
        self.log.info(f'{len(sites)} sites ({merged} merged, {counts[MAX_ITERS]} over max_iters, '
                      f'{counts[ESCAPED]} escaped)')
        return sites

    def _check_region(self, region):
        lowest = self.field.film_top + 2.0 * config.HESSIAN_STEP_FACTOR * self.field.length_scale
        if region.z[0] < lowest:
            raise ConfigError(f'search region starts at z={region.z[0]!r} m, below the film '
                              f'surface clearance {lowest!r} m')

    def _refine(self, seed, spacing, region):
        """
        Walk a seed downhill until the gradient or the field vanishes.

        :return: (point, |B|, status)
        """
        tolerances = self._root.tolerances
        margin = 1e-6 * self.field.length_scale
        point = np.array(seed, dtype=float)
        value = math.nan
        try:
            value = self._value(point)
            for iteration in range(tolerances.max_iters):
                if value < tolerances.zero_field_tol:
                    return point, value, ZERO_FIELD
                gradient = self.gradient_at(point)
                if np.linalg.norm(gradient) < tolerances.grad_tol:
                    return point, value, CONVERGED
                candidate, candidate_value = self._newton_step(point, value, gradient, spacing, region)
                if candidate is None:
                    candidate, candidate_value = self._coordinate_descent(point, value, spacing, region)
                if candidate is None:
                    return point, value, STALLED
                point, value = candidate, candidate_value
                if not region.contains(point, margin):
                    return point, value, ESCAPED
                self.log.debug(f'seed {tuple(seed)!r} iteration {iteration}: |B|={value!r}')
        except DomainError:
            return point, value, ESCAPED
        return point, value, MAX_ITERS

    def _newton_step(self, point, value, gradient, spacing, region):
        hessian = self.hessian_at(point)
        if hessian.eigenvalues[0] <= 0:
            return None, None
        step = -np.linalg.solve(hessian.matrix, gradient)
        # no axis moves further than one grid spacing
        limit = np.where(spacing > 0, spacing, self.field.length_scale)
        scale = np.max(np.abs(step) / limit)
        if scale > 1:
            step = step / scale
        for _ in range(10):
            candidate = point + step
            if region.contains(candidate):
                candidate_value = self._value(candidate)
                if candidate_value <= value and not np.array_equal(candidate, point):
                    return candidate, candidate_value
            step = step / 2
        return None, None

    def _coordinate_descent(self, point, value, spacing, region):
        """ One bounded line search per axis, in units of the length scale. """
        length = self.field.length_scale
        best, best_value = point.copy(), value
        for axis in range(3):
            reach = spacing[axis] if spacing[axis] > 0 else length
            low = max(region.lower[axis], best[axis] - reach)
            high = min(region.upper[axis], best[axis] + reach)
            if high <= low:
                continue
            origin = best.copy()

            def along(t, origin=origin, axis=axis):
                trial = origin.copy()
                trial[axis] = t * length
                return self._value(trial)

            result = minimize_scalar(along, bounds=(low / length, high / length), method='bounded',
                                     options={'xatol': 1e-10})
            if result.fun < best_value:
                best = origin.copy()
                best[axis] = result.x * length
                best_value = float(result.fun)
        if best_value < value:
            return best, best_value
        return None, None

    def _make_site(self, point, value, zero_field):
        hessian = self.hessian_at(point)
        if hessian.eigenvalues[0] <= 0:
            self.log.warning(f'converged point {tuple(point)!r} is not a minimum '
                             f'(eigenvalues {hessian.eigenvalues!r})')
            return None
        return TrapSite(position=tuple(float(c) for c in point), b_min=float(value),
                        hessian_eigenvalues=hessian.eigenvalues, hessian_axes=hessian.axes,
                        zero_field=zero_field)

    def _merge(self, candidates):
        """ Greedy merge by ascending b_min; returns (sites sorted by (z, y, x), merged count). """
        radius = self._root.tolerances.merge_radius
        kept = []
        for site in sorted(candidates, key=lambda s: (s.b_min,) + s.sort_key()):
            if all(site.distance_to(other) > radius for other in kept):
                kept.append(site)
        return sorted(kept, key=TrapSite.sort_key), len(candidates) - len(kept)
