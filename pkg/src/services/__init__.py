from .utils import *
from .coordinate_operations import *
