from src.services.utils.pipeline_exceptions import PipelineError


class MetricsError(PipelineError):
    pass


class ImageShapeMismatchError(MetricsError):
    pass


class EmptyMaskError(MetricsError):
    pass


class ImageTooSmallError(MetricsError):
    pass


class NoInteriorWindowError(MetricsError):
    pass
