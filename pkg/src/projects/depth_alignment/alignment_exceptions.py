from src.services.utils.pipeline_exceptions import PipelineError


class AlignmentError(PipelineError):
    pass


class UnregisteredImageError(AlignmentError):
    pass


class NoObservationsError(AlignmentError):
    pass


class TooFewCorrespondencesError(AlignmentError):
    pass


class DegenerateSampleError(AlignmentError):
    """ Every correspondence has the same monocular depth, no hypothesis can be formed. """


class NoConsensusError(AlignmentError):
    pass


class NonPositiveScaleError(AlignmentError):
    pass


class MonoDepthFormatError(AlignmentError):
    pass
