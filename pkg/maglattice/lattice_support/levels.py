import math

import numpy as np

from .. import constants
from ..atoms import (TrapCharacterization, bound_level_count, joule_to_kilohertz, joule_to_microkelvin,
                     trap_depth, trap_frequencies, wkb_transmission)
from .bands import Bands


class Levels(Bands):

    def characterize(self, analysis=None, species=None):
        """
        Trap frequencies, depth, bound levels and tunnelling for every site
        of an analysis. Barriers already in the analysis are reused.

        :param analysis: Analysis, a fresh `analyze()` when omitted
        :param species: AtomSpecies, defaults to the lattice species
        :return: list of TrapCharacterization sorted by site (z, y, x)
        """
        analysis = analysis or self._root.analyze()
        escape_floor = self._escape_floor()
        known = barrier_index(analysis.barriers)
        results = [self.characterize_site(site, analysis.bands, species, escape_floor, known)
                   for band in analysis.bands for site in band.sites]
        return sorted(results, key=lambda result: result.site.sort_key())

    def characterize_site(self, site, bands, species=None, escape_floor=None, barriers=None):
        """
        Single-site trap physics.

        The depth is the lower of the barrier to the nearest in-band
        neighbour and the lowest |B| on the region boundary, both measured
        from the site's own minimum. Tunnelling is estimated from the
        zero-point energy of the softest axis towards the nearest site of the
        band below, or the nearest in-band neighbour for band 0.

        :param site: TrapSite carrying its band_index
        :param bands: list of Band the site belongs to
        :param species: AtomSpecies, defaults to the lattice species
        :param escape_floor: lowest boundary |B|, computed when omitted
        :param barriers: dict from `barrier_index`; pairs missing from it are measured
        :return: TrapCharacterization
        """
        species = species or self._root.species
        if escape_floor is None:
            escape_floor = self._escape_floor()
        barriers = barriers if barriers is not None else {}
        omegas = trap_frequencies(species, site)

        neighbour = self._nearest(site, bands[site.band_index].sites)
        neighbour_barrier = self._barrier(site, neighbour, barriers) if neighbour is not None else None
        barrier_height = neighbour_barrier.delta_b if neighbour_barrier is not None else math.inf
        depth = trap_depth(species, barrier_height, escape_floor - site.b_min)
        levels = tuple(bound_level_count(depth, omega) if omega > 0 else 0 for omega in omegas)

        partner, barrier = neighbour, neighbour_barrier
        if site.band_index > 0:
            partner = self._nearest(site, bands[site.band_index - 1].sites)
            barrier = self._barrier(site, partner, barriers) if partner is not None else None
        transmission = math.nan
        if barrier is not None and not barrier.same_site:
            potential = species.mu * (np.array(barrier.profile) - site.b_min)
            energy = 0.5 * constants.hbar * min(omegas)
            transmission = wkb_transmission(species, barrier.path, potential, energy)

        return TrapCharacterization(site=site, omegas=omegas, depth=depth,
                                    depth_microkelvin=joule_to_microkelvin(depth),
                                    depth_kilohertz=joule_to_kilohertz(depth),
                                    bound_levels=levels, tunnel_transmission=transmission,
                                    tunnel_partner=partner)

    def _barrier(self, site, other, barriers):
        key = frozenset((site.position, other.position))
        if key not in barriers:
            barriers[key] = self.barrier_between(site, other)
        return barriers[key]

    def _escape_floor(self):
        """ Lowest |B| on the analysis region boundary. """
        return float(np.min(self.magnitude_at(self._root.region.boundary_points(self._root.grid))))

    @staticmethod
    def _nearest(site, candidates):
        others = [other for other in candidates if other.position != site.position]
        if not others:
            return None
        return min(others, key=lambda other: (site.distance_to(other),) + other.sort_key())


def barrier_index(barriers):
    """ BarrierResults keyed by the unordered pair of site positions. """
    return {frozenset((barrier.site_a.position, barrier.site_b.position)): barrier for barrier in barriers}
