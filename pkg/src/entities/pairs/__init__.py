from .image_meta import ImageMeta
from .placement import Placement
from .pair_record import PairRecord, PAIR_COLUMNS
