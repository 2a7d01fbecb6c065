import math
from dataclasses import replace

from ..traps import Band, BandGap, TrapSite
from .barriers import Barriers


def nearest_neighbours(sites):
    """
    Unordered index pairs (i, j), i < j, joining each site to its nearest
    other site; ties go to the lower (z, y, x) partner.
    """
    pairs = set()
    for i, site in enumerate(sites):
        others = [j for j in range(len(sites)) if j != i]
        if not others:
            continue
        j = min(others, key=lambda k: (site.distance_to(sites[k]),) + sites[k].sort_key())
        pairs.add((min(i, j), max(i, j)))
    return sorted(pairs)


class Bands(Barriers):

    def classify_bands(self, sites):
        """
        Group sites into bands by height.

        Sites are sorted by z and a new band starts wherever two consecutive
        heights differ by more than ``band_z_tolerance``. Band 0 is the one
        nearest the film.

        :param sites: iterable of TrapSite
        :return: list of Band, whose sites carry their band_index
        """
        ordered = sorted(sites, key=TrapSite.sort_key)
        if not ordered:
            return []
        tolerance = self._root.tolerances.band_z_tolerance
        groups = [[ordered[0]]]
        for previous, site in zip(ordered, ordered[1:]):
            if site.z - previous.z > tolerance:
                groups.append([])
            groups[-1].append(site)
        bands = []
        for index, group in enumerate(groups):
            members = tuple(replace(site, band_index=index) for site in group)
            bands.append(Band(index=index, sites=members,
                              z_centroid=math.fsum(site.z for site in members) / len(members),
                              b_floor=min(site.b_min for site in members)))
        self.log.info(f'{len(bands)} band(s) from {len(ordered)} site(s)')
        return bands

    def in_band_barriers(self, bands):
        """
        Barrier between every site and its nearest neighbour inside the same band.
        Pairs are measured on worker threads and reported in a fixed order.

        :param bands: list of Band
        :return: list of BarrierResult, band by band
        """
        pairs = [(band.sites[i], band.sites[j]) for band in bands for i, j in nearest_neighbours(band.sites)]
        return self.barriers_between(pairs)

    def band_gaps(self, bands):
        """
        Field gap between each pair of adjacent bands, and the barrier between
        the two most nearly vertically aligned sites across them.

        :param bands: list of Band ordered by index
        :return: list of BandGap, empty for fewer than two bands
        """
        gaps = []
        for lower, upper in zip(bands, bands[1:]):
            pair = min(((a, b) for a in lower.sites for b in upper.sites),
                       key=lambda ab: (math.hypot(ab[0].x - ab[1].x, ab[0].y - ab[1].y),
                                       abs(ab[0].z - ab[1].z)) + ab[0].sort_key() + ab[1].sort_key())
            barrier = self.barrier_between(*pair)
            gaps.append(BandGap(lower_band=lower.index, upper_band=upper.index,
                                gap=abs(upper.b_floor - lower.b_floor),
                                vertical_barrier=barrier.delta_b, vertical_pair=pair))
        return gaps
