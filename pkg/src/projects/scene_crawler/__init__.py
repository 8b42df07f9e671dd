from .crawler_exceptions import *
from .api_client import ApiClient
from .live_sources import WikidataGraphSource, CommonsCatalogSource
from .fixture_sources import FixtureGraphSource, FixtureCatalogSource
from .scene_identifier import SceneIdentifier
from .scene_filters import SceneFilters, NO_CLASSES_FLAG
from .subcategory_traverser import SubcategoryTraverser
from .manifest_builder import ManifestBuilder, MISSING_LICENSE_FLAG
from .manifest_fetcher import ManifestFetcher
from .scene_crawler import SceneCrawler
