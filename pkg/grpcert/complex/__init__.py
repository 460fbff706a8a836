# Import the exact integer algebra.
from .integer_matrix import *
from .lattice import *
from .chain import *

# Import the resolutions and the projectivity certificates.
from .resolution import *
from .tate import *
from .spherical import *
