class PipelineError(Exception):
    """ Base class for every data error raised by the pipeline (CLI exit status 1). """
    exit_code: int = 1

    def __init__(self, message: str) -> None:
        self.message: str = message
        super().__init__(self.message)


class ConfigError(PipelineError):
    """ Invalid configuration or arguments (CLI exit status 2). """
    exit_code: int = 2
