import csv
import json
import math
import os

from .. import __version__
from ..exceptions import OutputError
from ..logger import Logger
from ._field import Field

FORMATS = ('csv', 'json')


def format_number(value):
    """ Locale-independent text for a CSV cell; floats keep 17 significant digits. """
    if isinstance(value, (bool, int)):
        return str(int(value))
    return format(float(value), '.17g')


def _json_number(value):
    if isinstance(value, (bool, int)):
        return value
    value = float(value)
    return value if math.isfinite(value) else None


class Export(Field):

    def __init__(self, root):
        super().__init__(root)
        self.log = Logger.get_logger()

    def set_output_directory(self, path=None, append=True):
        """
        Sets the directory where result files are written.

        ``path`` can be an absolute path or relative path from the current
        output_directory. If the directory does not exist, it will be
        created.

        ``append`` is set to True by default and will append to current path and
        normalise it, where False will overwrite the path attribute.

        Will return the previous path to be stored and re-set if needed.

        :param path: str - the path to append or set
        :param append: bool - True will add / False will replace
        :return: str - previous path
        """
        previous = self._root.output_directory
        if path is not None:
            path = os.path.normpath(os.path.join(previous, path)) if append else path
            path = os.path.abspath(path)
            self.log.info(f'Setting output directory from {previous} to {path}')
            self._root.output_directory = path
        return previous

    def write_sites(self, sites, fmt='csv'):
        """
        Site table, rows sorted by (z, y, x).

        :return: str - the file's full path
        """
        sites = sorted(sites, key=lambda site: site.sort_key())
        if fmt == 'json':
            return self._write_json('sites.json', {'sites': [
                {'position_m': [_json_number(c) for c in site.position], 'b_min_T': _json_number(site.b_min),
                 'hessian_eigenvalues_T_m2': [_json_number(v) for v in site.hessian_eigenvalues],
                 'hessian_axes': [[_json_number(c) for c in axis] for axis in site.hessian_axes],
                 'band': site.band_index, 'zero_field': site.zero_field}
                for site in sites]})
        return self._write_csv(
            'sites.csv', ['x_m', 'y_m', 'z_m', 'b_min_T', 'lam1', 'lam2', 'lam3', 'band'],
            [list(site.position) + [site.b_min] + list(site.hessian_eigenvalues) + [site.band_index]
             for site in sites], fmt)

    def write_bands(self, bands, gaps, fmt='csv'):
        """
        Band table and band gaps. CSV output is split into bands.csv and band_gaps.csv.

        :return: list of str - the files' full paths
        """
        if fmt == 'json':
            return [self._write_json('bands.json', {
                'bands': [{'band': band.index, 'z_centroid_m': _json_number(band.z_centroid),
                           'b_floor_T': _json_number(band.b_floor), 'site_count': len(band.sites)}
                          for band in bands],
                'band_gaps': [{'lower_band': gap.lower_band, 'upper_band': gap.upper_band,
                               'gap_T': _json_number(gap.gap),
                               'vertical_barrier_T': _json_number(gap.vertical_barrier)}
                              for gap in gaps]})]
        return [
            self._write_csv('bands.csv', ['band', 'z_centroid_m', 'b_floor_T', 'site_count'],
                            [[band.index, band.z_centroid, band.b_floor, len(band.sites)] for band in bands], fmt),
            self._write_csv('band_gaps.csv', ['lower_band', 'upper_band', 'gap_T', 'vertical_barrier_T'],
                            [[gap.lower_band, gap.upper_band, gap.gap, gap.vertical_barrier] for gap in gaps], fmt),
        ]

    def write_barriers(self, barriers, fmt='csv'):
        """ One row per barrier: the two sites, the saddle and its height. """
        rows = [[barrier.site_a.band_index] + list(barrier.site_a.position) + list(barrier.site_b.position)
                + list(barrier.saddle_position)
                + [barrier.saddle_b, barrier.delta_b, barrier.same_site, barrier.below_site]
                for barrier in barriers]
        header = ['band', 'a_x_m', 'a_y_m', 'a_z_m', 'b_x_m', 'b_y_m', 'b_z_m',
                  'saddle_x_m', 'saddle_y_m', 'saddle_z_m', 'saddle_b_T', 'delta_b_T', 'same_site', 'below_site']
        if fmt == 'json':
            return self._write_json('barriers.json', {'barriers': [
                {key: (value if isinstance(value, bool) else _json_number(value))
                 for key, value in zip(header, row)} for row in rows]})
        return self._write_csv('barriers.csv', header, rows, fmt)

    def write_levels(self, characterizations, fmt='csv'):
        """ Per-site trap physics; the only report with non-SI convenience columns. """
        header = ['x_m', 'y_m', 'z_m', 'band', 'b_min_T', 'omega1_rad_s', 'omega2_rad_s', 'omega3_rad_s',
                  'depth_J', 'depth_uK', 'depth_kHz', 'levels1', 'levels2', 'levels3', 'tunnel_T']
        rows = [list(item.site.position) + [item.site.band_index, item.site.b_min] + list(item.omegas)
                + [item.depth, item.depth_microkelvin, item.depth_kilohertz] + list(item.bound_levels)
                + [item.tunnel_transmission]
                for item in characterizations]
        if fmt == 'json':
            return self._write_json('levels.json', {'levels': [
                {key: _json_number(value) for key, value in zip(header, row)} for row in rows]})
        return self._write_csv('levels.csv', header, rows, fmt)

    def write_sweep(self, records, fmt='csv'):
        """ One row per plan value; band gaps are joined with ';'. """
        header = ['bias_T', 'effective_M_z_A_m', 'site_count', 'band_count', 'zero_field_count',
                  'mean_delta_b_T', 'min_delta_b_T', 'min_b_min_T', 'band_gaps_T']
        if fmt == 'json':
            return self._write_json('sweep.json', {'sweep': [
                {'bias_T': _json_number(r.bias_value), 'effective_M_z_A_m': _json_number(r.effective_M_z),
                 'site_count': r.site_count, 'band_count': r.band_count, 'zero_field_count': r.zero_field_count,
                 'mean_delta_b_T': _json_number(r.mean_delta_b), 'min_delta_b_T': _json_number(r.min_delta_b),
                 'min_b_min_T': _json_number(r.min_b_min), 'band_gaps_T': [_json_number(g) for g in r.band_gaps]}
                for r in records]})
        rows = [[r.bias_value, r.effective_M_z, r.site_count, r.band_count, r.zero_field_count,
                 r.mean_delta_b, r.min_delta_b, r.min_b_min, ';'.join(format_number(g) for g in r.band_gaps)]
                for r in records]
        return self._write_csv('sweep.csv', header, rows, fmt)

    def write_field_map(self, grid_export, fmt='csv'):
        """ Field map, x fastest, with the region and dims declared in the header. """
        points = grid_export.points()
        nx, ny, nz = grid_export.dims
        if fmt == 'json':
            return self._write_json('field_map.json', {
                'region_m': [list(bounds) for bounds in grid_export.region.bounds],
                'dims': [nx, ny, nz], 'ordering': grid_export.ordering,
                'clamped_fraction': grid_export.clamped_fraction,
                'values_T': [_json_number(v) for v in grid_export.values]})
        comments = [f'dims={nx},{ny},{nz} ordering={grid_export.ordering} '
                    f'clamped_fraction={format_number(grid_export.clamped_fraction)}']
        rows = [list(point) + [value] for point, value in zip(points, grid_export.values)]
        return self._write_csv('field_map.csv', ['x_m', 'y_m', 'z_m', 'b_T'], rows, fmt, comments)

    def write_effective_config(self, document):
        """ The fully materialized configuration that produced this run. """
        return self._write_json('effective_config.json', {'config': document})

    def discard_outputs(self):
        """
        Remove every file written through this lattice, e.g. after a failed run.

        :return: list of str - removed paths
        """
        removed = []
        while self._root.written_files:
            path = self._root.written_files.pop()
            if os.path.exists(path):
                os.remove(path)
                removed.append(path)
        if removed:
            self.log.info(f'Removed {len(removed)} partial output file(s)')
        return removed

    def _header(self):
        return f'maglattice {__version__} config_sha256={self._root.config_hash}'

    def _write_csv(self, filename, header, rows, fmt, comments=()):
        if fmt != 'csv':
            raise OutputError(f'unsupported output format {fmt!r}, expected one of {FORMATS}')
        path = self._get_output_path(filename)
        try:
            with open(path, 'w', newline='', encoding='utf-8') as handle:
                handle.write(f'# {self._header()}\n')
                for comment in comments:
                    handle.write(f'# {comment}\n')
                writer = csv.writer(handle, lineterminator='\n')
                writer.writerow(header)
                for row in rows:
                    writer.writerow([value if isinstance(value, str) else format_number(value) for value in row])
        except OSError as error:
            raise OutputError(f'Failed to write {path}: {error}') from error
        self.log.info(f'Saving {len(rows)} row(s) to {path}')
        return path

    def _write_json(self, filename, payload):
        path = self._get_output_path(filename)
        document = {'version': __version__, 'config_sha256': self._root.config_hash}
        document.update(payload)
        try:
            with open(path, 'w', encoding='utf-8', newline='\n') as handle:
                json.dump(document, handle, indent=2, sort_keys=True, allow_nan=False)
                handle.write('\n')
        except (OSError, ValueError) as error:
            raise OutputError(f'Failed to write {path}: {error}') from error
        self.log.info(f'Saving {path}')
        return path

    def _get_output_path(self, filename):
        path = os.path.join(self._root.output_directory, filename)
        self._create_directory(path)
        self._root.written_files.append(path)
        return path

    def _create_directory(self, path):
        target_dir = os.path.dirname(path)
        if not os.path.exists(target_dir):
            self.log.info(f'Creating new directory to store results at {target_dir}')
            try:
                os.makedirs(target_dir)
            except OSError as error:
                raise OutputError(f'Failed to create {target_dir}: {error}') from error
