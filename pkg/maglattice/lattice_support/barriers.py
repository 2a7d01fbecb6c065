import numpy as np
from joblib import Parallel, delayed

from .. import config
from ..traps import BarrierResult, TrapSite
from ._base import Base

# transverse search reach, as a fraction of the site separation
TRANSVERSE_REACH = 0.25


def transverse_basis(direction):
    """ Two unit vectors completing ``direction`` to a right-handed orthonormal frame. """
    helper = np.zeros(3)
    helper[int(np.argmin(np.abs(direction)))] = 1.0
    first = np.cross(direction, helper)
    first /= np.linalg.norm(first)
    return first, np.cross(direction, first)


def line_bounds(point, vector, region, low, high):
    """ Range of t in [low, high] keeping point + t * vector inside ``region``. """
    for axis in range(3):
        if vector[axis] == 0:
            continue
        ends = sorted(((region.lower[axis] - point[axis]) / vector[axis],
                       (region.upper[axis] - point[axis]) / vector[axis]))
        low, high = max(low, ends[0]), min(high, ends[1])
    return low, high


class Barriers(Base):

    def barrier_between(self, site_a, site_b):
        """
        Height of the saddle separating two sites.

        |B| is sampled on the straight segment between the sites and its
        maximum seeds an alternating search: maximize along the segment
        direction, then minimize along each transverse direction, until the
        point stops moving or SADDLE_ROUNDS is reached. The search always
        runs from the lower (z, y, x) site, so swapping the arguments gives
        the same height.

        A saddle that ends up below one of the sites means one of them is not
        a minimum of this field; the result is flagged ``below_site`` and its
        height clamped to zero.

        :param site_a: TrapSite
        :param site_b: TrapSite
        :return: BarrierResult, with ``same_site`` set and zero height when
            the sites are closer than the merge radius
        """
        if site_a.distance_to(site_b) <= self._root.tolerances.merge_radius:
            self.log.warning(f'sites {site_a.position!r} and {site_b.position!r} coincide; '
                             'reporting a zero barrier')
            return BarrierResult(site_a=site_a, site_b=site_b, delta_b=0.0,
                                 saddle_position=site_a.position, saddle_b=site_a.b_min, same_site=True)
        first, second = sorted((site_a, site_b), key=TrapSite.sort_key)
        saddle, saddle_b = self._saddle(np.array(first.position), np.array(second.position))
        floor = max(site_a.b_min, site_b.b_min)
        below_site = saddle_b < floor
        if below_site:
            self.log.warning(f'saddle between {site_a.position!r} and {site_b.position!r} lies '
                             f'{floor - saddle_b!r} T below the higher site; are both sites minima?')
        path, profile = self._path_profile(np.array(site_a.position), saddle, np.array(site_b.position))
        return BarrierResult(site_a=site_a, site_b=site_b, delta_b=max(0.0, saddle_b - floor),
                             saddle_position=tuple(float(c) for c in saddle), saddle_b=saddle_b,
                             below_site=below_site, path=path, profile=profile)

    def barriers_between(self, pairs):
        """
        `barrier_between` for many site pairs on worker threads.

        :param pairs: iterable of (TrapSite, TrapSite)
        :return: list of BarrierResult in the order of ``pairs``
        """
        pairs = list(pairs)
        if len(pairs) < 2:
            return [self.barrier_between(a, b) for a, b in pairs]
        return Parallel(n_jobs=self._n_jobs(), prefer='threads')(
            delayed(self.barrier_between)(a, b) for a, b in pairs)

    def _saddle(self, start, end):
        vector = end - start
        length = np.linalg.norm(vector)
        direction = vector / length
        region = self._root.region

        fractions = np.linspace(0.0, 1.0, config.BARRIER_SAMPLES)
        samples = start + fractions[:, None] * vector
        values = self.magnitude_at(samples)
        index = int(np.argmax(values))
        point, value = samples[index].copy(), float(values[index])
        window = fractions[1]

        for _ in range(config.SADDLE_ROUNDS):
            previous = point.copy()
            point, value = self._line_search(point, value, vector, region, -window, window, maximize=True)
            for axis in transverse_basis(direction):
                point, value = self._line_search(point, value, axis * length, region,
                                                 -TRANSVERSE_REACH, TRANSVERSE_REACH, maximize=False)
            if np.linalg.norm(point - previous) <= config.SADDLE_TOLERANCE * length:
                break
        return point, value

    def _line_search(self, point, value, vector, region, low, high, maximize):
        """
        Bracketing search for the extremum of |B| along ``point + t * vector``.

        Each pass evaluates LINE_SAMPLES candidates in one batch and narrows
        the bracket to the neighbours of the best one, down to
        SADDLE_TOLERANCE in t.
        """
        low, high = line_bounds(point, vector, region, low, high)
        if high <= low:
            return point, value
        sign = -1.0 if maximize else 1.0
        best_t, best = 0.0, sign * value
        while True:
            ts = np.linspace(low, high, config.LINE_SAMPLES)
            scores = sign * self.magnitude_at(point + ts[:, None] * vector)
            k = int(np.argmin(scores))
            if scores[k] < best:
                best_t, best = float(ts[k]), float(scores[k])
            if high - low <= config.SADDLE_TOLERANCE:
                break
            low, high = ts[max(k - 1, 0)], ts[min(k + 1, len(ts) - 1)]
        if best_t == 0.0:
            return point, value
        return point + best_t * vector, sign * best

    def _path_profile(self, start, saddle, end):
        legs = config.BARRIER_SAMPLES // 2
        fractions = np.linspace(0.0, 1.0, legs)
        first = start + fractions[:, None] * (saddle - start)
        second = saddle + fractions[1:, None] * (end - saddle)
        first_length = np.linalg.norm(saddle - start)
        path = np.concatenate([fractions * first_length,
                               first_length + fractions[1:] * np.linalg.norm(end - saddle)])
        profile = self.magnitude_at(np.concatenate([first, second]))
        return tuple(float(s) for s in path), tuple(float(b) for b in profile)
