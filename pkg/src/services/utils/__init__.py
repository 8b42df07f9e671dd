from .constants import Constants
from .logger import Logger, execution_time_logger
from .pipeline_exceptions import PipelineError, ConfigError

from .files_manager import *
from .crawler_constants import ConstantsCrawler
