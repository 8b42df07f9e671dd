from src.services.utils.pipeline_exceptions import PipelineError


class MiningError(PipelineError):
    pass


class MissingMetadataError(MiningError):
    pass


class MetadataFormatError(MiningError):
    pass


class ResizeError(MiningError):
    pass


class MissingScoreError(MiningError):
    pass


class SplitError(MiningError):
    pass
