__version__ = '0.1.0'

from maglattice.lattice import Lattice
