"""
Single-particle trap physics for weak-field-seeking atoms: Zeeman potential,
harmonic frequencies, bound-level counts and WKB tunnelling.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from . import constants
from .exceptions import ConfigError, NumericalError

MIN_PROFILE_SAMPLES = 64


@dataclass(frozen=True)
class AtomSpecies:
    name: str
    mass: float
    g_F: float
    m_F: float

    def __post_init__(self):
        if not (math.isfinite(self.mass) and self.mass > 0):
            raise ValueError(f'{self.name}: mass must be positive, got {self.mass!r}')
        if not (math.isfinite(self.mu) and self.mu >= 0):
            raise ValueError(f'{self.name}: m_F * g_F must be >= 0 for a trappable state, '
                             f'got m_F={self.m_F!r}, g_F={self.g_F!r}')

    @property
    def mu(self):
        """ Magnetic moment m_F g_F mu_B in J/T. """
        return self.m_F * self.g_F * constants.muB


SPECIES = {
    'K40': AtomSpecies('K40', 39.964 * constants.amu, 2.0 / 9.0, 4.5),
    'Li6': AtomSpecies('Li6', 6.015 * constants.amu, 2.0 / 3.0, 1.5),
}

_SPECIES_ALIASES = {
    'k40': 'K40', '40k': 'K40', 'potassium-40': 'K40', 'potassium40': 'K40',
    'li6': 'Li6', '6li': 'Li6', 'lithium-6': 'Li6', 'lithium6': 'Li6',
}


def get_species(name):
    """
    Look up a built-in species by name or alias (case-insensitive).

    :param name: str - e.g. 'K40', '40K', 'lithium-6'
    :return: AtomSpecies
    """
    key = _SPECIES_ALIASES.get(str(name).strip().lower())
    if key is None:
        raise ConfigError(f'unknown species {name!r}, expected one of {sorted(SPECIES)} or an inline definition')
    return SPECIES[key]


@dataclass(frozen=True)
class TrapCharacterization:
    site: object
    omegas: tuple
    depth: float
    depth_microkelvin: float
    depth_kilohertz: float
    bound_levels: tuple
    tunnel_transmission: float = math.nan
    tunnel_partner: object = field(default=None, compare=False, repr=False)


def zeeman_energy(species, b):
    """ U = mu |B| in joules. """
    if b < 0:
        raise ValueError(f'field magnitude must be >= 0, got {b!r}')
    return species.mu * b


def trap_frequencies(species, site):
    """
    Harmonic angular frequencies along the site's principal axes.

    :return: (w1, w2, w3) in rad/s
    """
    eigenvalues = site.hessian_eigenvalues
    if any(not value > 0 for value in eigenvalues):
        raise NumericalError(f'site at {site.position!r} has non-positive curvature {eigenvalues!r}')
    return tuple(math.sqrt(species.mu * value / species.mass) for value in eigenvalues)


def bound_level_count(depth, omega):
    """ Number of harmonic levels (n + 1/2) hbar omega strictly below ``depth``. """
    if depth < 0:
        raise ValueError(f'depth must be >= 0, got {depth!r}')
    if not omega > 0:
        raise ValueError(f'omega must be > 0, got {omega!r}')
    return max(0, math.ceil(depth / (constants.hbar * omega) - 0.5))


def wkb_transmission(species, path, potential, energy):
    """
    Semiclassical transmission exp(-2 int kappa ds) through a sampled barrier.

    :param species: AtomSpecies - supplies the mass
    :param path: arc-length coordinates in metres, increasing
    :param potential: U(s) in joules at each coordinate
    :param energy: particle energy in joules
    :return: float - 1.0 when no sample lies above ``energy``
    """
    path = np.asarray(path, dtype=float)
    potential = np.asarray(potential, dtype=float)
    if len(path) != len(potential):
        raise ValueError(f'path and potential differ in length ({len(path)} != {len(potential)})')
    if len(path) < MIN_PROFILE_SAMPLES:
        raise ValueError(f'a barrier profile needs at least {MIN_PROFILE_SAMPLES} samples, got {len(path)}')
    if energy < 0:
        raise ValueError(f'energy must be >= 0, got {energy!r}')
    excess = np.maximum(potential - energy, 0.0)
    if not np.any(excess > 0):
        return 1.0
    kappa = np.sqrt(2.0 * species.mass * excess) / constants.hbar
    return math.exp(-2.0 * trapezoid(kappa, path))


def trap_depth(species, barrier_delta_b, escape_delta_b):
    """ mu times the lower of the neighbour barrier and the region escape height, in joules. """
    return species.mu * max(0.0, min(barrier_delta_b, escape_delta_b))


def joule_to_microkelvin(energy):
    return energy / constants.kB * 1e6


def microkelvin_to_joule(temperature):
    return temperature * 1e-6 * constants.kB


def joule_to_kilohertz(energy):
    return energy / constants.h * 1e-3


def kilohertz_to_joule(frequency):
    return frequency * 1e3 * constants.h
