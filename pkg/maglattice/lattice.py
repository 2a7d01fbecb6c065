import os

from . import config
from .atoms import SPECIES
from .configfile import config_hash
from .exceptions import ConfigError
from .logger import Logger
from .traps import Analysis, Tolerances, TrapSite
from .lattice_support._base import default_grid
from .lattice_support._fieldcreator import FieldModelCreator
from .lattice_support.bands import Bands
from .lattice_support.barriers import Barriers
from .lattice_support.export import Export
from .lattice_support.fieldmap import FieldMap
from .lattice_support.levels import Levels
from .lattice_support.minima import Minima
from .lattice_support.sweep import Sweep


class Lattice:
    """
    Magnetic lattice analyzer
    Uses FieldModelCreator to build a field model and mixins for support
    functionality found in ./lattice_support.

    === FieldModelCreator ===

    FieldModelCreator, found in ./lattice_support/_fieldcreator.py, builds
    the field model named by the first argument, "model=", from a geometry
    and a bias field. The analytic infinite lattice is the default.

    Supported models: 'infinite', 'infinite-as-printed', 'finite'. Names are
    case insensitive and aliases such as 'analytic' or 'hole array' are
    available. See _fieldcreator.py -> "model_name" for all aliases.

    Lattice.__init__() arguments:
        :param model: A string naming the field model.
        :param geometry: LatticeParams for the analytic models,
            FiniteLatticeSpec for the finite one.
        :param bias: BiasField, zero when omitted.
        :param field: an already built object following the FieldModel
            protocol; ``model`` and ``geometry`` are ignored when given.
        :param region: Region searched for traps, the model's default otherwise.
        :param grid: (nx, ny, nz) search grid, 8 points per period otherwise.
        :param tolerances: Tolerances, scaled from the model otherwise.
        :param species: AtomSpecies used by the trap physics, K40 otherwise.
        :param threads: worker threads, all cores when None.

    Examples:

    -   analytic lattice:
            lattice = Lattice('infinite', LatticeParams(1e-6, 1e-6, 2e-6, 1.4e5),
                              BiasField(0, 0, -5e-3))

    -   from a configuration file:
            lattice = Lattice.from_config(load_config('configs/finite_4x4.json'))
            analysis = lattice.analyze()

    === Available methods ===

    A lattice instance will have all the methods not pre-fixed with an
    underscore (_) defined in the following classes/files:

        _____CLASS_NAME_________|____FILE_NAME______________|___HIERARCHY_____
            Field               |   _field.py               |   root
            Base                |   _base.py                |   internal
            Barriers            |   barriers.py             |   leaf
            Bands               |   bands.py                |   leaf
            Export              |   export.py               |   leaf
            FieldMap            |   fieldmap.py             |   leaf
            Levels              |   levels.py               |   leaf
            Minima              |   minima.py               |   leaf
            Sweep               |   sweep.py                |   leaf
    """

    def __init__(self, model='infinite', geometry=None, bias=None, field=None, region=None, grid=None,
                 tolerances=None, species=None, threads=None):
        self.log = Logger.get_logger()
        if field is None:
            if geometry is None:
                raise ConfigError('a Lattice needs either a geometry or a field model')
            field = FieldModelCreator().create_field(model, geometry, bias)
        self.field = field
        self.region = region or field.default_region()
        self.grid = tuple(grid) if grid is not None else default_grid(self.region, field.period)
        self.tolerances = tolerances or Tolerances.for_scales(field.length_scale, field.field_scale)
        self.species = species or SPECIES['K40']
        self.threads = threads
        self.output_directory = os.path.abspath(config.DEFAULT_OUTPUT_DIRECTORY)
        self.config_hash = 'none'
        self.search_stats = None
        self.written_files = []
        libraries = [
            Bands(self),
            Barriers(self),
            Export(self),
            FieldMap(self),
            Levels(self),
            Minima(self),
            Sweep(self),
        ]
        self.get_attributes(libraries)

    def __repr__(self):
        return f'Lattice({self.field!r}, region={self.region!r}, grid={self.grid!r})'

    @classmethod
    def from_config(cls, settings, threads=None):
        """
        Build a lattice from a loaded configuration.

        :param settings: Config from `maglattice.configfile.load_config`
        :param threads: worker threads, see `Lattice`
        :return: Lattice
        """
        lattice = cls(settings.model, settings.geometry, settings.bias, region=settings.region,
                      grid=settings.grid, tolerances=settings.tolerances, species=settings.species,
                      threads=threads)
        lattice.config_hash = config_hash(settings)
        return lattice

    def spawn(self, field, region=None, grid=None, threads=None):
        """
        A lattice over another field model that shares this one's region,
        grid, tolerances, species and output settings.
        """
        child = Lattice(field=field, region=region or self.region, grid=grid or self.grid,
                        tolerances=self.tolerances, species=self.species,
                        threads=threads if threads is not None else self.threads)
        child.config_hash = self.config_hash
        child.output_directory = self.output_directory
        return child

    def analyze(self):
        """
        The standard pipeline: find the sites, group them into bands, measure
        the in-band barriers and the gaps between bands.

        :return: Analysis(sites, bands, barriers, gaps); sites carry their band
            index and are sorted by (z, y, x)
        """
        sites = self.find_minima()
        bands = self.classify_bands(sites)
        barriers = self.in_band_barriers(bands)
        gaps = self.band_gaps(bands)
        sites = sorted((site for band in bands for site in band.sites), key=TrapSite.sort_key)
        return Analysis(sites=sites, bands=bands, barriers=barriers, gaps=gaps)

    def get_attributes(self, libraries):
        """
        Will parse every method in ``libraries`` and append those that
        don't start with an underscore (_) to `self`.

        All methods defined in ``libraries`` that start with an underscore are
        considered `helper methods` to `core methods` and should not be used
        directly by `self`, hence, are omitted.

        This also applied to attributes.
        """
        for library in libraries:
            for name, value in self.get_members(library):
                if not hasattr(self, name) and not name.startswith('_'):
                    # avoid overwriting existing attributes and exclude _named attributes
                    setattr(self, name, value)

    def get_members(self, library):
        """Get the name:value pairs of the methods in the instance provided."""
        for name in dir(library):
            yield name, getattr(library, name)
