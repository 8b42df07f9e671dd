from pathlib import Path
from typing import Any

import dotenv

from src.entities import PipelineConfig
from src.services.utils import Constants, ConstantsCrawler, ConfigError, Logger


logger = Logger("ConfigLoader")


class ConfigLoader:
    @staticmethod
    def crawler_defaults() -> PipelineConfig:
        """ Built-in defaults with the editable crawler constants filled in. """
        return PipelineConfig(
            excluded_keywords=ConstantsCrawler.EXCLUDED_KEYWORDS,
            user_agent=ConstantsCrawler.USER_AGENT,
            commons_api_url=ConstantsCrawler.COMMONS_API_URL,
            wikidata_api_url=ConstantsCrawler.WIKIDATA_API_URL,
            wikidata_sparql_url=ConstantsCrawler.WIKIDATA_SPARQL_URL,
            max_concurrency=ConstantsCrawler.MAX_CONCURRENCY,
            max_retries=ConstantsCrawler.MAX_RETRIES,
            backoff_base_sec=ConstantsCrawler.BACKOFF_BASE_SEC,
            timeout_sec=ConstantsCrawler.TIMEOUT_SEC,
        )

    @classmethod
    def load_config(
            cls,
            config_path: Path | None = None,
            overrides: dict[str, Any] | None = None,
    ) -> PipelineConfig:
        """
        Defaults, then the key=value file (the bundled default file when no path is
        given), then CLI overrides. Unknown keys and bad values raise ConfigError.
        """
        if config_path is None and Constants.path.DEFAULT_PIPELINE_CONFIG_FILE.exists():
            config_path = Constants.path.DEFAULT_PIPELINE_CONFIG_FILE

        file_values: dict[str, str] = {}
        if config_path is not None:
            if not Path(config_path).is_file():
                raise ConfigError(f"Config file not found: {config_path}")
            file_values = {
                key: ("" if value is None else value)
                for key, value in dotenv.dotenv_values(config_path).items()
            }
            logger.debug(f"Loaded {len(file_values)} config values from {config_path}")

        try:
            base: PipelineConfig = cls.crawler_defaults()
            config: PipelineConfig = PipelineConfig.from_mapping(file_values, base=base)
            return PipelineConfig.from_mapping(
                {key: value for key, value in (overrides or {}).items() if value is not None}, base=config)

        except KeyError as e:
            raise ConfigError(str(e.args[0]) if e.args else str(e))
        except ValueError as e:
            raise ConfigError(str(e))

    @staticmethod
    def parse_assignments(assignments: list[str] | None) -> dict[str, str]:
        """ 'key=value' strings of repeated --set flags. """
        values: dict[str, str] = {}
        for assignment in assignments or []:
            key, separator, value = assignment.partition("=")
            if not separator or not key.strip():
                raise ConfigError(f"Expected key=value, got {assignment!r}.")
            values[key.strip()] = value.strip()
        return values
