"""
Analytic field magnitude above an infinite periodic array of square holes in
a perpendicularly magnetized film.

    |B|² = bx² + by² + bz²
           + 2 u² cos(βx) cos(βy)
           + 2 u [(bx + bz) cos(βx) + (by + bz) cos(βy)]

    u  = B_o (1 - exp(-βτ)) exp(-β|z - τ|)
    B_o = μ0 M_z / π,   β = π / α

with z measured from the symmetry plane. The ``'infinite-as-printed'`` model
multiplies the bias cross term by an extra factor B_o, as the formula is
usually quoted; it is dimensionally inconsistent and kept only for comparison.

A negative radicand is clamped to zero and flagged.
"""
import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from .. import config, constants
from ..exceptions import DomainError
from ..traps import Region
from ._differences import central_gradient, central_hessian

INFINITE = 'infinite'
INFINITE_AS_PRINTED = 'infinite-as-printed'
MODELS = (INFINITE, INFINITE_AS_PRINTED)

HessianInfo = namedtuple('HessianInfo', 'matrix, eigenvalues, axes')


def _require_positive(owner, **values):
    for name, value in values.items():
        if not (math.isfinite(value) and value > 0):
            raise DomainError(f'{owner}.{name} must be a positive finite length, got {value!r}')


@dataclass(frozen=True)
class BiasField:
    """ Uniform external field in tesla. """
    bx: float = 0.0
    by: float = 0.0
    bz: float = 0.0

    def __post_init__(self):
        for name in ('bx', 'by', 'bz'):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f'BiasField.{name} must be finite, got {value!r}')

    @property
    def magnitude(self):
        return math.sqrt(self.bx ** 2 + self.by ** 2 + self.bz ** 2)

    def as_array(self):
        return np.array([self.bx, self.by, self.bz], dtype=float)

    def with_component(self, axis, value):
        """
        Copy of this bias with one component replaced.

        :param axis: str - 'x', 'y' or 'z'
        :param value: float - tesla
        :return: BiasField
        """
        components = {'x': 'bx', 'y': 'by', 'z': 'bz'}
        if axis not in components:
            raise ValueError(f'bias axis must be one of x, y, z, got {axis!r}')
        values = {'bx': self.bx, 'by': self.by, 'bz': self.bz}
        values[components[axis]] = float(value)
        return BiasField(**values)


@dataclass(frozen=True)
class LatticeParams:
    """
    Geometry and magnetization of the infinite lattice.

    The analytic model is only valid for equal hole and spacing sizes, so
    ``alpha_h`` and ``alpha_s`` must match. ``B_o`` and ``beta`` are derived on
    every access.
    """
    alpha_h: float
    alpha_s: float
    tau: float
    M_z: float
    symmetry_plane_z: float = 0.0

    def __post_init__(self):
        _require_positive('LatticeParams', alpha_h=self.alpha_h, alpha_s=self.alpha_s, tau=self.tau)
        if not (math.isfinite(self.M_z) and self.M_z >= 0):
            raise DomainError(f'LatticeParams.M_z must be finite and >= 0, got {self.M_z!r}')
        if not math.isfinite(self.symmetry_plane_z):
            raise DomainError(f'LatticeParams.symmetry_plane_z must be finite, got {self.symmetry_plane_z!r}')
        if self.alpha_h != self.alpha_s:
            raise DomainError(
                f'the analytic lattice requires alpha_h == alpha_s, got alpha_h={self.alpha_h!r} '
                f'and alpha_s={self.alpha_s!r}; use the finite model for unequal sizes')

    @property
    def alpha(self):
        return self.alpha_h

    @property
    def B_o(self):
        return surface_induction(self)

    @property
    def beta(self):
        return math.pi / self.alpha

    @property
    def period(self):
        return 2.0 * self.alpha

    @property
    def film_top(self):
        return self.symmetry_plane_z + self.tau


@dataclass(frozen=True)
class FieldValue:
    magnitude: float
    radicand_clamped: bool
    radicand: float


def surface_induction(params):
    """ B_o = mu0 M_z / pi in tesla. Accepts anything with an ``M_z`` attribute. """
    return constants.mu0 * params.M_z / math.pi


def _check_model(model):
    if model not in MODELS:
        raise ValueError(f'unknown analytic model {model!r}, expected one of {MODELS}')


def radicand_grid(params, bias, points, model=INFINITE):
    """
    The expression under the square root, before clamping, for an (N, 3)
    array of points. Negative values within RADICAND_ROUNDOFF of the size of
    the terms come back as 0.
    """
    _check_model(model)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    x, y = points[:, 0], points[:, 1]
    height = points[:, 2] - params.symmetry_plane_z
    if np.any(height < params.tau):
        lowest = float(np.min(points[:, 2]))
        raise DomainError(
            f'the analytic lattice is defined only for z >= {params.film_top!r} m, got z={lowest!r}')
    B_o = params.B_o
    beta = params.beta
    film = 1.0 - math.exp(-beta * params.tau)
    cos_x = np.cos(beta * x)
    cos_y = np.cos(beta * y)
    cross = B_o ** 2 if model == INFINITE_AS_PRINTED else B_o
    periodic = 2.0 * B_o ** 2 * film ** 2 * np.exp(-2.0 * beta * np.abs(height - params.tau))
    coupling = 2.0 * cross * film * np.exp(-beta * np.abs(height - params.tau))
    uniform = bias.bx ** 2 + bias.by ** 2 + bias.bz ** 2
    radicand = (uniform + periodic * (cos_x * cos_y)
                + coupling * ((bias.bx + bias.bz) * cos_x + (bias.by + bias.bz) * cos_y))
    scale = uniform + periodic + coupling * (abs(bias.bx + bias.bz) + abs(bias.by + bias.bz))
    noise = (radicand < 0) & (radicand >= -config.RADICAND_ROUNDOFF * scale)
    return np.where(noise, 0.0, radicand)


def evaluate_infinite_grid(params, bias, points, model=INFINITE):
    """
    Vectorised companion of `evaluate_infinite`.

    :return: (magnitudes, clamped) - two arrays of length N
    """
    radicand = radicand_grid(params, bias, points, model)
    clamped = radicand < 0
    return np.sqrt(np.where(clamped, 0.0, radicand)), clamped


def evaluate_infinite(params, bias, point, model=INFINITE):
    """
    Field magnitude at one point.

    :param params: LatticeParams
    :param bias: BiasField
    :param point: (x, y, z) in metres, z >= symmetry_plane_z + tau
    :param model: 'infinite' or 'infinite-as-printed'
    :return: FieldValue
    """
    radicand = float(radicand_grid(params, bias, [point], model)[0])
    clamped = radicand < 0
    return FieldValue(magnitude=math.sqrt(0.0 if clamped else radicand),
                      radicand_clamped=clamped, radicand=radicand)


def clamped_fraction(params, bias, points, model=INFINITE):
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if len(points) == 0:
        return 0.0
    return float(np.count_nonzero(radicand_grid(params, bias, points, model) < 0)) / len(points)


def hessian_info(matrix):
    """
    Ascending eigenvalues and matching unit axes of a symmetric 3x3 matrix.
    Each axis is signed so that its largest component is positive.
    """
    eigenvalues, vectors = np.linalg.eigh(matrix)
    axes = []
    for k in range(3):
        vector = vectors[:, k]
        if vector[np.argmax(np.abs(vector))] < 0:
            vector = -vector
        axes.append(tuple(float(c) for c in vector))
    return HessianInfo(matrix=matrix, eigenvalues=tuple(float(v) for v in eigenvalues), axes=tuple(axes))


def _magnitude_func(params, bias, model):
    return lambda points: evaluate_infinite_grid(params, bias, points, model)[0]


def field_gradient(params, bias, point, model=INFINITE):
    """ Central-difference gradient of |B| in T/m with step alpha * 1e-5. """
    if evaluate_infinite(params, bias, point, model).radicand_clamped:
        raise DomainError(f'gradient is undefined at the clamped point {tuple(point)!r}')
    step = params.alpha * config.GRADIENT_STEP_FACTOR
    return central_gradient(_magnitude_func(params, bias, model), point, step)


def field_hessian(params, bias, point, model=INFINITE):
    """ Symmetrized central-difference Hessian of |B| in T/m² with step alpha * 1e-3. """
    if evaluate_infinite(params, bias, point, model).radicand_clamped:
        raise DomainError(f'Hessian is undefined at the clamped point {tuple(point)!r}')
    step = params.alpha * config.HESSIAN_STEP_FACTOR
    return hessian_info(central_hessian(_magnitude_func(params, bias, model), point, step))


class InfiniteLatticeField:
    """ `FieldModel` over the analytic lattice. """

    def __init__(self, params, bias=None, model=INFINITE):
        _check_model(model)
        self.params = params
        self.bias = bias if bias is not None else BiasField()
        self.name = model

    def __repr__(self):
        return f'InfiniteLatticeField({self.params!r}, {self.bias!r}, model={self.name!r})'

    @property
    def length_scale(self):
        return self.params.alpha

    @property
    def period(self):
        return self.params.period

    @property
    def field_scale(self):
        return self.params.B_o if self.params.M_z > 0 else self.bias.magnitude

    @property
    def magnetization(self):
        return self.params.M_z

    @property
    def film_top(self):
        return self.params.film_top

    def magnitude(self, points):
        return evaluate_infinite_grid(self.params, self.bias, points, self.name)[0]

    def clamped(self, points):
        return evaluate_infinite_grid(self.params, self.bias, points, self.name)[1]

    def default_region(self):
        alpha = self.params.alpha
        top = self.params.film_top
        return Region(x=(-alpha, alpha), y=(-alpha, alpha), z=(top + 1.5 * alpha, top + 3.5 * alpha))

    def with_bias(self, bias):
        return InfiniteLatticeField(self.params, bias, self.name)

    def with_magnetization(self, M_z):
        params = LatticeParams(self.params.alpha_h, self.params.alpha_s, self.params.tau,
                               M_z, self.params.symmetry_plane_z)
        return InfiniteLatticeField(params, self.bias, self.name)
