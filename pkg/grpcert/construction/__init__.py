# Import the report type.
from .report import *

# Import the sphere products and the isotropy rank reduction.
from .isotropy import *

# Import the constructions.
from .rank3 import *
from .abelian import *
from .amalgam import *
