from src.entities import CategoryRecord, ClientParams, EntityRecord, FileRecord
from src.services.utils import Logger
from .api_client import ApiClient
from .crawler_exceptions import MalformedResponseError


logger = Logger("LiveSources")


INSTANCE_OF: str = "P31"
SUBCLASS_OF: str = "P279"
COMMONS_CATEGORY: str = "P373"

CATEGORY_NAMESPACE: int = 14
FILE_NAMESPACE: int = 6

_CATEGORY_PREFIX: str = "Category:"
_FILE_PREFIX: str = "File:"
_ENTITY_URI_PREFIX: str = "http://www.wikidata.org/entity/"


def _strip_prefix(title: str, prefix: str) -> str:
    return title[len(prefix):] if title.startswith(prefix) else title


class WikidataGraphSource:
    """ Knowledge-graph access through the entity API and the SPARQL endpoint. """

    def __init__(self, client: ApiClient, params: ClientParams) -> None:
        self.client: ApiClient = client
        self.params: ClientParams = params

    def entity(self, entity_id: str) -> EntityRecord | None:
        data: dict = self.client.get_json(self.params.wikidata_api_url, {
            "action": "wbgetentities",
            "ids": entity_id,
            "props": "labels|aliases|claims|sitelinks",
            "languages": "en",
            "sitefilter": "commonswiki",
            "format": "json",
        })

        try:
            raw: dict = data["entities"][entity_id]
        except (KeyError, TypeError):
            raise MalformedResponseError(f"Entity response for {entity_id} has no entity record.")
        if "missing" in raw:
            return None

        claims: dict = raw.get("claims", {})
        category: str | None = next(iter(self._claim_values(claims, COMMONS_CATEGORY)), None)
        if category is None:
            sitelink: str | None = raw.get("sitelinks", {}).get("commonswiki", {}).get("title")
            if sitelink and sitelink.startswith(_CATEGORY_PREFIX):
                category = _strip_prefix(sitelink, _CATEGORY_PREFIX)

        return EntityRecord(
            entity_id=entity_id,
            label=raw.get("labels", {}).get("en", {}).get("value", ""),
            aliases=tuple(alias["value"] for alias in raw.get("aliases", {}).get("en", [])),
            instance_of=tuple(self._claim_values(claims, INSTANCE_OF)),
            subclass_of=tuple(self._claim_values(claims, SUBCLASS_OF)),
            commons_category=category,
        )

    def direct_instances(self, class_id: str) -> list[str]:
        return self._query_items(f"SELECT ?item WHERE {{ ?item wdt:{INSTANCE_OF} wd:{class_id} . }}")

    def direct_subclasses(self, class_id: str) -> list[str]:
        return self._query_items(f"SELECT ?item WHERE {{ ?item wdt:{SUBCLASS_OF} wd:{class_id} . }}")

    def _query_items(self, query: str) -> list[str]:
        data: dict = self.client.get_json(self.params.wikidata_sparql_url, {"query": query, "format": "json"})
        try:
            bindings: list[dict] = data["results"]["bindings"]
            uris: list[str] = [binding["item"]["value"] for binding in bindings]
        except (KeyError, TypeError):
            raise MalformedResponseError(f"Malformed SPARQL response for query {query!r}.")
        return sorted({_strip_prefix(uri, _ENTITY_URI_PREFIX) for uri in uris})

    @staticmethod
    def _claim_values(claims: dict, property_id: str) -> list[str]:
        values: list[str] = []
        for claim in claims.get(property_id, []):
            value = claim.get("mainsnak", {}).get("datavalue", {}).get("value")
            if isinstance(value, dict) and "id" in value:
                values.append(value["id"])
            elif isinstance(value, str):
                values.append(value)
        return values


class CommonsCatalogSource:
    """ Media-catalog access through the action API. """

    def __init__(self, client: ApiClient, params: ClientParams) -> None:
        self.client: ApiClient = client
        self.params: ClientParams = params

    def category(self, title: str) -> CategoryRecord | None:
        subcategories: list[str] = []
        files: list[str] = []
        request: dict[str, str] = {
            "action": "query",
            "list": "categorymembers",
            "cmtitle": f"{_CATEGORY_PREFIX}{title}",
            "cmtype": "subcat|file",
            "cmlimit": "max",
            "format": "json",
        }

        while True:
            data: dict = self.client.get_json(self.params.commons_api_url, request)
            if "error" in data:
                return None
            try:
                members: list[dict] = data["query"]["categorymembers"]
            except (KeyError, TypeError):
                raise MalformedResponseError(f"Malformed category listing for {title!r}.")

            for member in members:
                if member.get("ns") == CATEGORY_NAMESPACE:
                    subcategories.append(_strip_prefix(member["title"], _CATEGORY_PREFIX))
                elif member.get("ns") == FILE_NAMESPACE:
                    files.append(_strip_prefix(member["title"], _FILE_PREFIX))

            if "continue" not in data:
                break
            request = {**request, **data["continue"]}

        return CategoryRecord(
            title=title,
            entity_id=self.category_entity(title),
            subcategories=tuple(subcategories),
            files=tuple(files),
        )

    def category_entity(self, title: str) -> str | None:
        page: dict | None = self._page({"titles": f"{_CATEGORY_PREFIX}{title}", "prop": "pageprops",
                                        "ppprop": "wikibase_item"})
        if page is None:
            return None
        return page.get("pageprops", {}).get("wikibase_item")

    def file(self, title: str) -> FileRecord | None:
        page: dict | None = self._page({"titles": f"{_FILE_PREFIX}{title}", "prop": "imageinfo",
                                        "iiprop": "url|timestamp|extmetadata"})
        if page is None or not page.get("imageinfo"):
            return None

        info: dict = page["imageinfo"][0]
        extmetadata: dict = info.get("extmetadata", {})
        metadata: dict[str, str] = {
            key: str(extmetadata[key]["value"])
            for key in ("DateTimeOriginal", "DateTime", "Artist")
            if key in extmetadata
        }
        if info.get("timestamp"):
            metadata["upload_timestamp"] = str(info["timestamp"])

        return FileRecord(
            title=title,
            url=info.get("url", ""),
            license=extmetadata.get("LicenseShortName", {}).get("value") or None,
            metadata=metadata,
        )

    def _page(self, request: dict[str, str]) -> dict | None:
        data: dict = self.client.get_json(self.params.commons_api_url, {
            "action": "query", "format": "json", **request})
        try:
            pages: dict = data["query"]["pages"]
        except (KeyError, TypeError):
            raise MalformedResponseError(f"Malformed page query response for {request.get('titles')!r}.")

        page: dict = next(iter(pages.values()), {})
        return None if "missing" in page or not page else page
