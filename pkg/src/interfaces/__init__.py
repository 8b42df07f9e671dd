from .sources import *
