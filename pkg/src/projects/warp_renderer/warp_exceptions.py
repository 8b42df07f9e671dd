from src.services.utils.pipeline_exceptions import PipelineError


class WarpError(PipelineError):
    pass


class DimensionMismatchError(WarpError):
    pass


class EmptyDepthWarpError(WarpError):
    pass
