from .stage_params import (
    AlignmentParams,
    MiningParams,
    WarpParams,
    SplitParams,
    SubcategoryRules,
    ClientParams,
)
from .pipeline_config import PipelineConfig
