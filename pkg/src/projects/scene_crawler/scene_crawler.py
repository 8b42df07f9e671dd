from dataclasses import replace

from src.entities import ImageManifestEntry, SceneCategory, SubcategoryNode, SubcategoryRules
from src.interfaces import PCatalogSource, PKnowledgeGraphSource
from src.services.utils import Logger, execution_time_logger
from .manifest_builder import ManifestBuilder
from .scene_filters import SceneFilters
from .scene_identifier import SceneIdentifier
from .subcategory_traverser import SubcategoryTraverser


logger = Logger("SceneCrawler")


class SceneCrawler:
    @staticmethod
    @execution_time_logger
    def crawl_scenes(
            class_ids: list[str],
            graph: PKnowledgeGraphSource,
            catalog: PCatalogSource,
            rules: SubcategoryRules,
            glam_labels: tuple[str, ...] | None = None,
    ) -> list[SceneCategory]:
        """ identify -> cyclic link filter -> GLAM filter -> subcategory traversal of every kept scene. """
        candidates: list[SceneCategory] = SceneIdentifier.identify_scenes(class_ids, graph)
        candidates = SceneFilters.cyclic_link_filter(candidates, graph, catalog)
        if glam_labels is None:
            candidates = SceneFilters.glam_filter(candidates, graph)
        else:
            candidates = SceneFilters.glam_filter(candidates, graph, glam_labels)

        scenes: list[SceneCategory] = []
        for scene in candidates:
            scene_rules: SubcategoryRules = replace(
                rules, name_substrings=SubcategoryTraverser.name_substrings_for(scene, graph))
            tree = SubcategoryTraverser.recurse_subcategories(scene, catalog, scene_rules)
            scenes.append(scene.with_subcategories(tree))
        return scenes

    @staticmethod
    def build_manifests(
            scenes: list[SceneCategory],
            catalog: PCatalogSource,
            include_unlicensed: bool = False,
    ) -> dict[str, list[ImageManifestEntry]]:
        """ Manifest per scene category; scenes without a traversed tree get the root category only. """
        manifests: dict[str, list[ImageManifestEntry]] = {}
        for scene in scenes:
            tree = scene.subcategories or SubcategoryNode(title=scene.commons_category, depth=0)
            manifests[scene.commons_category] = ManifestBuilder.build_manifest(tree, catalog, include_unlicensed)
            logger.info(f"{scene.commons_category}: {len(manifests[scene.commons_category])} manifest entries")
        return manifests
