import argparse
from typing import Any

from src.entities import ImageManifestEntry, PipelineConfig, SceneCategory
from src.interfaces import PCatalogSource, PKnowledgeGraphSource
from src.services.utils import ConfigError, Constants, FileReader, FileWriter
from src.projects.scene_crawler import (
    ApiClient,
    CommonsCatalogSource,
    FixtureCatalogSource,
    FixtureGraphSource,
    ManifestFetcher,
    SceneCrawler,
    WikidataGraphSource,
)


class CrawlerCommands:
    @staticmethod
    def live_client(config: PipelineConfig) -> ApiClient:
        return ApiClient(config.client, cache_dir=Constants.path.CACHE_DIR_PATH)

    @classmethod
    def open_sources(
            cls,
            args: argparse.Namespace,
            config: PipelineConfig,
    ) -> tuple[PKnowledgeGraphSource, PCatalogSource]:
        """ Fixture sources with --fixtures, otherwise the live endpoints. """
        if args.fixtures is not None:
            if not args.fixtures.is_dir():
                raise ConfigError(f"Fixture directory not found: {args.fixtures}")
            return FixtureGraphSource(args.fixtures), FixtureCatalogSource(args.fixtures)

        client: ApiClient = cls.live_client(config)
        return WikidataGraphSource(client, config.client), CommonsCatalogSource(client, config.client)

    @classmethod
    def identify(cls, args: argparse.Namespace, config: PipelineConfig) -> dict[str, Any]:
        class_ids: list[str] = [class_id.strip() for class_id in args.classes.split(",") if class_id.strip()]
        graph, catalog = cls.open_sources(args, config)

        scenes: list[SceneCategory] = SceneCrawler.crawl_scenes(class_ids, graph, catalog, config.subcategory_rules(()))
        FileWriter.write_jsonl_file([scene.to_dict() for scene in scenes], args.out)
        return {"classes": len(class_ids), "scenes": len(scenes)}

    @classmethod
    def manifest(cls, args: argparse.Namespace, config: PipelineConfig) -> dict[str, Any]:
        scenes: list[SceneCategory] = [
            SceneCategory.from_dict(record) for record in FileReader.read_jsonl_file(args.scenes)]
        _, catalog = cls.open_sources(args, config)

        manifests: dict[str, list[ImageManifestEntry]] = SceneCrawler.build_manifests(
            scenes, catalog, args.include_unlicensed)
        records: list[dict] = [
            {"scene": category, **entry.to_dict()}
            for category in sorted(manifests)
            for entry in manifests[category]
        ]
        FileWriter.write_jsonl_file(records, args.out)
        return {"scenes": len(manifests), "entries": len(records)}

    @classmethod
    def fetch(cls, args: argparse.Namespace, config: PipelineConfig) -> dict[str, Any]:
        entries: list[ImageManifestEntry] = [
            ImageManifestEntry.from_dict(record) for record in FileReader.read_jsonl_file(args.manifest)]
        return ManifestFetcher.fetch_manifest(entries, args.out, cls.live_client(config))
