from .model_exceptions import *
from .model_format import ModelFormat, detect_model_format
from .binary_model_codec import BinaryModelCodec
from .text_model_codec import TextModelCodec
from .model_validator import ModelValidator, ValidationReport
from .model_reader import ModelReader
from .model_writer import ModelWriter
from .keypoints_io import KeypointsIO
from .keypoints_masker import KeypointsMasker
