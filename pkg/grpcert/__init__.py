# Import the groups and their subgroup structure.
from .group import *

# Import the characters.
from .character import *

# Import the constructions.
from .construction import *

# Import the chain complexes.
from .complex import *
