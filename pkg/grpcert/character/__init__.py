# Import the exact value types.
from .cyclotomic import *
from .class_function import *

# Import the character table and the fixed point predicates.
from .table import *
from .fixed_points import *
from .dimension import *
