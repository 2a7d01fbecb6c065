import math
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from ..exceptions import ConfigError
from ._base import Base


def effective_magnetization(M_z, chi, bias_z, B_o):
    """
    Film magnetization reduced linearly by the bias: M_z max(0, 1 - chi |bias_z| / B_o).
    chi = 0 leaves M_z untouched.
    """
    if chi < 0:
        raise ValueError(f'chi must be >= 0, got {chi!r}')
    if chi == 0:
        return M_z
    if not B_o > 0:
        raise ValueError(f'B_o must be positive when chi > 0, got {B_o!r}')
    return M_z * max(0.0, 1.0 - chi * abs(bias_z) / B_o)


@dataclass(frozen=True)
class SweepPlan:
    """ Bias values to visit along one axis. Region and grid default to the lattice's own. """
    bias_axis: str
    values: tuple
    chi: float = 0.0
    region: object = None
    grid: tuple = None

    def __post_init__(self):
        if self.bias_axis not in ('x', 'y', 'z'):
            raise ConfigError(f'sweep.axis must be one of x, y, z, got {self.bias_axis!r}')
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ConfigError('sweep.values must not be empty')
        if not all(math.isfinite(v) for v in values):
            raise ConfigError(f'sweep.values must be finite, got {values!r}')
        steps = np.diff(values)
        if len(values) > 1 and not (np.all(steps > 0) or np.all(steps < 0)):
            raise ConfigError(f'sweep.values must be strictly monotone, got {values!r}')
        if not (math.isfinite(self.chi) and self.chi >= 0):
            raise ConfigError(f'chi must be >= 0, got {self.chi!r}')
        object.__setattr__(self, 'values', values)
        if self.grid is not None:
            object.__setattr__(self, 'grid', tuple(self.grid))

    @classmethod
    def from_range(cls, bias_axis, start, stop, steps, chi=0.0, region=None, grid=None):
        return cls(bias_axis, tuple(np.linspace(start, stop, int(steps))), chi, region, grid)


@dataclass(frozen=True)
class SweepRecord:
    bias_value: float
    effective_M_z: float
    site_count: int
    band_count: int
    zero_field_count: int
    mean_delta_b: float
    min_delta_b: float
    band_gaps: tuple
    min_b_min: float


def sweep_record(bias_value, effective_M_z, analysis):
    """ Summarize one analysis; statistics of empty populations are NaN. """
    deltas = [barrier.delta_b for barrier in analysis.barriers]
    return SweepRecord(
        bias_value=float(bias_value),
        effective_M_z=float(effective_M_z),
        site_count=len(analysis.sites),
        band_count=len(analysis.bands),
        zero_field_count=sum(1 for site in analysis.sites if site.zero_field),
        mean_delta_b=math.fsum(deltas) / len(deltas) if deltas else math.nan,
        min_delta_b=min(deltas) if deltas else math.nan,
        band_gaps=tuple(gap.gap for gap in analysis.gaps),
        min_b_min=min(site.b_min for site in analysis.sites) if analysis.sites else math.nan)


class Sweep(Base):

    def run_bias_sweep(self, plan):
        """
        Re-run the full analysis at every bias value of ``plan``.

        At each value the bias component is replaced, the film magnetization
        is reduced by `effective_magnetization`, and the lattice is searched,
        banded and its barriers measured. Values run concurrently; records come
        back in plan order. A value without sites gives a record with
        site_count 0.

        :param plan: SweepPlan
        :return: list of SweepRecord
        """
        self.log.info(f'sweeping bias {plan.bias_axis} over {len(plan.values)} value(s), chi={plan.chi!r}')
        jobs = self._n_jobs()
        inner_threads = 1 if len(plan.values) > 1 and jobs != 1 else self._root.threads
        return Parallel(n_jobs=jobs, prefer='threads')(
            delayed(self._sweep_step)(plan, value, inner_threads) for value in plan.values)

    def _sweep_step(self, plan, value, threads):
        base = self.field
        bias = base.bias.with_component(plan.bias_axis, value)
        M_eff = effective_magnetization(base.magnetization, plan.chi, bias.bz, base.field_scale)
        field = base.with_bias(bias)
        if plan.chi > 0:
            field = field.with_magnetization(M_eff)
        lattice = self._root.spawn(field, region=plan.region, grid=plan.grid, threads=threads)
        record = sweep_record(value, M_eff, lattice.analyze())
        self.log.info(f'bias {plan.bias_axis}={value!r} T: {record.site_count} site(s), '
                      f'mean barrier {record.mean_delta_b!r} T')
        return record
