from src.services.utils.pipeline_exceptions import PipelineError


class GeometryError(PipelineError):
    pass


class NonFiniteInputError(GeometryError):
    pass


class NonPositiveDepthError(GeometryError):
    pass


class UndistortionError(GeometryError):
    """ Iterative undistortion did not converge within the iteration limit. """


class EmptyDepthError(GeometryError):
    pass


class DegenerateGravityError(GeometryError):
    pass


class OrbitSamplingError(GeometryError):
    pass


class InvalidParameterError(GeometryError):
    pass


class EmptyModelError(GeometryError):
    pass
