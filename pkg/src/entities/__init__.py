from .sparse_model import *
from .geometry import *
from .depth import *
from .warp import *
from .pairs import *
from .metrics import *
from .scenes import *
from .params import *
