from pathlib import Path

from .constants import Constants
from .files_manager import FileReader
from .logger import Logger


logger = Logger("CrawlerConstants")


__all__: list[str] = [
    "ConstantsCrawler",
]


def _load_constants_from_json(folder_path: Path, file_name: str) -> dict:
    try:
        return FileReader.read_json_file(
            folder_path=folder_path,
            file_name=file_name,
        ) or {}

    except Exception as e:
        logger.error(f"Failed to load constants from JSON file: {e}")
        return {}


_crawler_constants: dict = _load_constants_from_json(
    folder_path=Constants.path.CONSTANTS_DATA_PATH,
    file_name=Constants.file_names.CRAWLER_DEFAULTS_JSON_FILE,
)

_client_constants: dict = _crawler_constants.get("client", {})


class ConstantsCrawler:
    """ Editable crawler defaults from data/constants/crawler_defaults.json. """
    GLAM_CLASS_LABELS: tuple[str, ...] = tuple(
        label.lower() for label in _crawler_constants.get("glam_class_labels", [])
    )
    EXCLUDED_KEYWORDS: tuple[str, ...] = tuple(
        keyword.lower() for keyword in _crawler_constants.get("excluded_keywords", [])
    )

    USER_AGENT: str = _client_constants.get("user_agent", "")
    COMMONS_API_URL: str = _client_constants.get("commons_api_url", "https://commons.wikimedia.org/w/api.php")
    WIKIDATA_API_URL: str = _client_constants.get("wikidata_api_url", "https://www.wikidata.org/w/api.php")
    WIKIDATA_SPARQL_URL: str = _client_constants.get("wikidata_sparql_url", "https://query.wikidata.org/sparql")
    MAX_CONCURRENCY: int = int(_client_constants.get("max_concurrency", 2))
    MAX_RETRIES: int = int(_client_constants.get("max_retries", 5))
    BACKOFF_BASE_SEC: float = float(_client_constants.get("backoff_base_sec", 1.0))
    TIMEOUT_SEC: float = float(_client_constants.get("timeout_sec", 30.0))

    # Status codes that are retried with backoff
    RETRY_STATUS_CODES: frozenset[int] = frozenset({429, 500, 502, 503, 504})
