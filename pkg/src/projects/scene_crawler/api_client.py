import hashlib
import json
import random
import threading
import time
from pathlib import Path
from typing import Callable

import requests

from src.entities import ClientParams
from src.services.utils import ConstantsCrawler, Logger
from .crawler_exceptions import EndpointError, MalformedResponseError, MissingUserAgentError


logger = Logger("ApiClient")


class ApiClient:
    """
    Polite HTTP client of the public catalog and knowledge-graph endpoints: a
    descriptive user agent, at most max_concurrency requests in flight, exponential
    backoff with jitter on 429/5xx and an on-disk JSON cache keyed by request URL.
    """

    def __init__(
            self,
            params: ClientParams,
            cache_dir: Path | None = None,
            session: requests.Session | None = None,
            sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        if not params.user_agent.strip():
            raise MissingUserAgentError("A descriptive user agent is required for live requests.")

        self.params: ClientParams = params
        self.cache_dir: Path | None = cache_dir
        self.session: requests.Session = session or requests.Session()
        self.session.headers.update({"User-Agent": params.user_agent})
        self._sleep: Callable[[float], None] = sleep
        self._semaphore: threading.BoundedSemaphore = threading.BoundedSemaphore(max(1, params.max_concurrency))

    @staticmethod
    def request_url(url: str, params: dict[str, str] | None = None) -> str:
        """ Fully encoded request URL, the cache key. """
        return requests.Request("GET", url, params=params or {}).prepare().url

    def get_json(self, url: str, params: dict[str, str] | None = None) -> dict:
        request_url: str = self.request_url(url, params)

        cached: dict | None = self._read_cache(request_url)
        if cached is not None:
            return cached

        response: requests.Response = self._get(request_url)
        try:
            data: dict = response.json()
        except ValueError:
            raise MalformedResponseError(f"Non-JSON response from {request_url}.")

        self._write_cache(request_url, data)
        return data

    def get_bytes(self, url: str) -> bytes:
        return self._get(url).content

    def _get(self, request_url: str) -> requests.Response:
        for attempt in range(self.params.max_retries + 1):
            try:
                with self._semaphore:
                    response: requests.Response = self.session.get(request_url, timeout=self.params.timeout_sec)

            except (requests.ConnectionError, requests.Timeout) as e:
                failure: str = str(e)

            else:
                if response.status_code == 200:
                    return response
                if response.status_code not in ConstantsCrawler.RETRY_STATUS_CODES:
                    raise EndpointError(f"HTTP {response.status_code} from {request_url}.")
                failure = f"HTTP {response.status_code}"

            if attempt == self.params.max_retries:
                break

            delay: float = self.params.backoff_base_sec * 2 ** attempt + random.uniform(0, self.params.backoff_base_sec)
            logger.warning(f"{failure} from {request_url}; retry {attempt + 1} in {delay:.2f} sec")
            self._sleep(delay)

        raise EndpointError(f"Giving up on {request_url} after {self.params.max_retries} retries ({failure}).")

    def _cache_path(self, request_url: str) -> Path | None:
        if self.cache_dir is None:
            return None
        return self.cache_dir / f"{hashlib.sha256(request_url.encode('utf-8')).hexdigest()}.json"

    def _read_cache(self, request_url: str) -> dict | None:
        cache_path: Path | None = self._cache_path(request_url)
        if cache_path is None or not cache_path.exists():
            return None
        try:
            return json.loads(cache_path.read_text(encoding="utf-8"))
        except ValueError:
            logger.warning(f"Ignoring corrupt cache entry {cache_path}")
            return None

    def _write_cache(self, request_url: str, data: dict) -> None:
        cache_path: Path | None = self._cache_path(request_url)
        if cache_path is None:
            return

        cache_path.parent.mkdir(parents=True, exist_ok=True)
        # Write-then-rename keeps concurrent writers of the same key idempotent
        temp_path: Path = cache_path.with_suffix(f".{threading.get_ident()}.tmp")
        temp_path.write_text(json.dumps(data, sort_keys=True), encoding="utf-8")
        temp_path.replace(cache_path)
