from dataclasses import dataclass, field

import numpy as np

from ._base import Base, default_grid

X_FASTEST = 'x-fastest'


@dataclass(frozen=True)
class GridExport:
    """ |B| sampled on a region grid; ``values`` has nx*ny*nz entries, x fastest. """
    region: object
    dims: tuple
    ordering: str
    values: tuple = field(repr=False)
    clamped_fraction: float = 0.0

    def __post_init__(self):
        nx, ny, nz = self.dims
        if len(self.values) != nx * ny * nz:
            raise ValueError(f'{len(self.values)} values do not fill a {nx}x{ny}x{nz} grid')

    def points(self):
        return self.region.points(self.dims)

    def as_array(self):
        """ Values reshaped to (nz, ny, nx). """
        nx, ny, nz = self.dims
        return np.array(self.values).reshape(nz, ny, nx)


class FieldMap(Base):

    def field_map(self, region=None, dims=None):
        """
        Sample |B| over a region grid for plotting.

        :param region: Region, defaults to a 64 x 64 slice through the middle
            of the analysis region
        :param dims: (nx, ny, nz)
        :return: GridExport
        """
        if region is None:
            region = self._root.region
            middle = 0.5 * (region.z[0] + region.z[1])
            region = region.with_axis('z', (middle, middle))
            dims = dims or (64, 64, 1)
        dims = dims or default_grid(region, self.field.period)
        dims = self._check_grid(region, dims, resolve_period=False)
        points = region.points(dims)
        self.log.info(f'field map over {dims[0]}x{dims[1]}x{dims[2]} points')
        values = self.magnitude_at(points)
        fraction = self.clamped_fraction(points)
        if fraction > 0:
            self.log.warning(f'{fraction:.2%} of the field map had a clamped radicand')
        return GridExport(region=region, dims=dims, ordering=X_FASTEST,
                          values=tuple(float(v) for v in values), clamped_fraction=fraction)

    def row_profile(self, y, z, xs):
        """ |B| along x at a fixed (y, z). """
        xs = np.asarray(xs, dtype=float)
        return self.magnitude_at(np.column_stack([xs, np.full(xs.shape, float(y)), np.full(xs.shape, float(z))]))
