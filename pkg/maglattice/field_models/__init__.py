from typing import Protocol

import numpy as np

from .infinite import BiasField, FieldValue, HessianInfo, InfiniteLatticeField, LatticeParams
from .prisms import FiniteLatticeField, FiniteLatticeSpec, PrismSpec


class FieldModel(Protocol):
    """
    Protocol every field source must implement to be analysed by a `Lattice`.

    Lengths are in metres and fields in tesla. Models are immutable: the
    ``with_*`` methods return new models.
    """
    name: str
    bias: BiasField

    @property
    def length_scale(self) -> float:
        """
        Characteristic feature size (the hole size). Tolerances and
        finite-difference steps are expressed in this unit.
        """
        ...

    @property
    def period(self) -> float:
        """
        Lattice period, used to validate grid densities.
        """
        ...

    @property
    def field_scale(self) -> float:
        """
        Characteristic field, normally B_o. Gradient and zero-field
        tolerances are expressed in this unit.
        """
        ...

    @property
    def magnetization(self) -> float:
        """
        Film magnetization M_z in A/m.
        """
        ...

    @property
    def film_top(self) -> float:
        """
        Height of the film surface; analysis regions must lie above it.
        """
        ...

    def magnitude(self, points: np.ndarray) -> np.ndarray:
        """
        |B| at an (N, 3) array of points.

        :return: numpy array of N values in tesla
        """
        ...

    def clamped(self, points: np.ndarray) -> np.ndarray:
        """
        Boolean mask of points where the model had to clamp its result.
        """
        ...

    def default_region(self):
        """
        Analysis region used when the caller supplies none.

        :return: Region
        """
        ...

    def with_bias(self, bias: BiasField) -> 'FieldModel':
        """
        Same model under another bias field.
        """
        ...

    def with_magnetization(self, M_z: float) -> 'FieldModel':
        """
        Same model with another film magnetization.
        """
        ...
