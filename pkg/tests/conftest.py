import numpy as np
import pytest

from maglattice import Lattice
from maglattice.field_models import BiasField
from maglattice.traps import Region, TrapSite

MICRON = 1e-6


class SyntheticField:
    """
    Closed-form |B| landscape for exercising the search code.

    |B| = hypot(|bias|, (M_z / reference_M) * landscape(points)), so the bias
    always adds in quadrature and a zero bias returns the landscape unchanged.
    """
    name = 'synthetic'

    def __init__(self, landscape, region, bias=None, M_z=1.0, reference_M=1.0, length_scale=MICRON,
                 period=2 * MICRON, field_scale=1e-3, film_top=-10 * MICRON):
        self.landscape = landscape
        self.region = region
        self.bias = bias or BiasField()
        self.M_z = M_z
        self.reference_M = reference_M
        self.length_scale = length_scale
        self.period = period
        self.field_scale = field_scale
        self.film_top = film_top

    @property
    def magnetization(self):
        return self.M_z

    def magnitude(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        values = self.landscape(points)
        if self.M_z != self.reference_M:
            values = values * (self.M_z / self.reference_M)
        return np.hypot(self.bias.magnitude, values)

    def clamped(self, points):
        return np.zeros(len(np.atleast_2d(points)), dtype=bool)

    def default_region(self):
        return self.region

    def with_bias(self, bias):
        return SyntheticField(self.landscape, self.region, bias, self.M_z, self.reference_M, self.length_scale,
                              self.period, self.field_scale, self.film_top)

    def with_magnetization(self, M_z):
        return SyntheticField(self.landscape, self.region, self.bias, M_z, self.reference_M, self.length_scale,
                              self.period, self.field_scale, self.film_top)


def bowl(b0, curvatures, center):
    curvatures = np.asarray(curvatures, dtype=float)
    center = np.asarray(center, dtype=float)
    return lambda p: b0 + 0.5 * np.sum(curvatures * (p - center) ** 2, axis=1)


def double_well(b0, height, a, stiffness):
    """ Two wells at x = +-a with a barrier ``height`` between them, harmonic in y and z. """
    k = height / a ** 4
    return lambda p: b0 + k * (p[:, 0] ** 2 - a ** 2) ** 2 + 0.5 * stiffness * (p[:, 1] ** 2 + p[:, 2] ** 2)


def two_layers(b0, height, a, stiffness, tilt):
    """ Double wells in x and in z: four sites in two layers, the upper one raised by the tilt. """
    k = height / a ** 4
    return lambda p: (b0 + k * (p[:, 0] ** 2 - a ** 2) ** 2 + 0.5 * stiffness * p[:, 1] ** 2
                      + k * (p[:, 2] ** 2 - a ** 2) ** 2 + tilt * p[:, 2])


def make_site(position, b_min=1e-4, eigenvalues=(1e8, 1e8, 1e8), band_index=0):
    return TrapSite(position=tuple(float(c) for c in position), b_min=b_min,
                    hessian_eigenvalues=tuple(eigenvalues),
                    hessian_axes=((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)),
                    band_index=band_index)


WELL_REGION = Region(x=(-2 * MICRON, 2 * MICRON), y=(-MICRON, MICRON), z=(-MICRON, MICRON))
WELL_GRID = (17, 9, 9)


@pytest.fixture
def bowl_lattice():
    center = (0.13 * MICRON, -0.07 * MICRON, 0.21 * MICRON)
    region = Region(x=(-MICRON, MICRON), y=(-MICRON, MICRON), z=(-MICRON, MICRON))
    field = SyntheticField(bowl(1e-4, (1e8, 2e8, 4e8), center), region)
    return Lattice(field=field, threads=1)


@pytest.fixture
def well_lattice():
    field = SyntheticField(double_well(1e-4, 5e-5, MICRON, 2e8), WELL_REGION)
    return Lattice(field=field, grid=WELL_GRID, threads=1)


@pytest.fixture
def layered_lattice():
    region = Region(x=(-2 * MICRON, 2 * MICRON), y=(-MICRON, MICRON), z=(-2 * MICRON, 2 * MICRON))
    field = SyntheticField(two_layers(1e-4, 5e-5, MICRON, 2e8, 10.0), region)
    return Lattice(field=field, grid=(17, 9, 17), threads=1)
