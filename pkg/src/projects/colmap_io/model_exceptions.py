from src.services.utils.pipeline_exceptions import PipelineError


class ModelError(PipelineError):
    pass


class MissingModelFileError(ModelError):
    pass


class MixedModelFormatError(ModelError):
    pass


class TruncatedStreamError(ModelError):
    pass


class UnknownCameraModelError(ModelError):
    pass


class ModelParseError(ModelError):
    """ Malformed text record or invalid field value. """


class DanglingReferenceError(ModelError):
    def __init__(self, message: str, offending_ids: dict[str, list] | None = None) -> None:
        self.offending_ids: dict[str, list] = offending_ids or {}
        super().__init__(message)


class ModelWriteError(ModelError):
    pass


class KeypointFormatError(ModelError):
    pass


class MaskingParameterError(ModelError):
    pass
