from .mining_exceptions import *
from .covisibility import Covisibility
from .timestamp_parser import TimestampParser
from .metadata_loader import MetadataLoader
from .image_resizer import ImageResizer
from .pair_miner import PairMiner
from .pair_filter import PairFilter
from .holdout_splitter import HoldoutSplitter
from .pair_table import PairTable
