from ..exceptions import ConfigError
from ..field_models.infinite import INFINITE, INFINITE_AS_PRINTED, BiasField, InfiniteLatticeField, LatticeParams
from ..field_models.prisms import FiniteLatticeField, FiniteLatticeSpec
from ..logger import Logger


class FieldModelCreator:
    """
    Solely responsible for creating a field model from a model name, its
    geometry and a bias field. Used in lattice.py.

    Usage: field = FieldModelCreator().create_field(model, geometry, bias)
    """

    def __init__(self):
        self.log = Logger.get_logger()

    def model_name(self, model):
        mapper = {
            'infinite': [d.join(words)
                         for d in (' ', '-', '_', '')
                         for words in (('infinite',), ('analytic',), ('infinite', 'lattice'))],
            'infinite_as_printed': [d.join(words)
                                    for d in (' ', '-', '_', '')
                                    for words in (('infinite', 'as', 'printed'), ('as', 'printed'))],
            'finite': [d.join(words)
                       for d in (' ', '-', '_', '')
                       for words in (('finite',), ('prisms',), ('hole', 'array'))],
        }
        name = str(model).strip().lower()
        for key, value in mapper.items():
            if name in value:
                return key

        raise ConfigError(f'`{model}` is not a supported field model.\n'
                          f'Available: {list(mapper.keys())}')

    def create_field(self, model, geometry, bias=None):
        """
        Main function that will make the field model
        :param model: A string naming the model, e.g. 'infinite' or 'finite'
        :param geometry: LatticeParams for the analytic models,
            FiniteLatticeSpec for the finite one
        :param bias: BiasField, zero when omitted
        :return: FieldModel
        """
        creation_method = self.get_creation_method(model)
        return creation_method(geometry, bias if bias is not None else BiasField())

    def get_creation_method(self, model):
        return getattr(self, f'create_{self.model_name(model)}')

    def create_infinite(self, geometry, bias):
        self._expect(geometry, LatticeParams, INFINITE)
        return InfiniteLatticeField(geometry, bias, INFINITE)

    def create_infinite_as_printed(self, geometry, bias):
        self._expect(geometry, LatticeParams, INFINITE_AS_PRINTED)
        self.log.warning('using the as-printed bias cross term (B_o squared); '
                         'results are not dimensionally consistent')
        return InfiniteLatticeField(geometry, bias, INFINITE_AS_PRINTED)

    def create_finite(self, geometry, bias):
        self._expect(geometry, FiniteLatticeSpec, 'finite')
        self.log.info(f'building {geometry.m_blocks}x{geometry.m_blocks} blocks of '
                      f'{geometry.n_holes}x{geometry.n_holes} holes')
        return FiniteLatticeField(geometry, bias)

    @staticmethod
    def _expect(geometry, kind, model):
        if not isinstance(geometry, kind):
            raise ConfigError(f'model `{model}` needs a {kind.__name__} geometry, '
                              f'got {type(geometry).__name__}')
