from src.services.utils.pipeline_exceptions import PipelineError, ConfigError


class CrawlerError(PipelineError):
    pass


class EndpointError(CrawlerError):
    """ Request failed, retries included. """


class MalformedResponseError(CrawlerError):
    pass


class UnresolvedLabelError(CrawlerError):
    pass


class FixtureError(CrawlerError):
    pass


class TraversalRulesError(CrawlerError):
    pass


class MissingUserAgentError(ConfigError):
    pass
