from ..logger import Logger


class Field:
    """
    self._root is the 'Lattice' class and self.field refers to
    self._root.field, the field model every library analyses.
    """

    def __init__(self, root):
        """
        The root class which holds the field model.
        :param root: the main Lattice class
        """
        self._root = root
        self.log = Logger.get_logger()

    @property
    def field(self):
        """
        `root` function argument is an instance of Lattice.
        :return: FieldModel
        """
        return self._root.field
