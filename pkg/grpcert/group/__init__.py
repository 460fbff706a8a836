# Import the group constructors.
from .finite_group import *
from .catalog import *

# Import the subgroup structure.
from .subgroups import *
from .structure import *
