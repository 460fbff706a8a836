# Import the group spec language.
from .group_spec import *

# Import the command line.
from .cli import *
