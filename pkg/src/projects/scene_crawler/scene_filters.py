from src.entities import EntityRecord, SceneCategory
from src.interfaces import PCatalogSource, PKnowledgeGraphSource
from src.services.utils import ConstantsCrawler, Logger
from .crawler_exceptions import UnresolvedLabelError


logger = Logger("SceneFilters")


NO_CLASSES_FLAG: str = "no_classes"


class SceneFilters:
    @staticmethod
    def has_cyclic_link(
            candidate: SceneCategory,
            graph: PKnowledgeGraphSource,
            catalog: PCatalogSource,
    ) -> bool:
        """ category -> entity -> category must come back to the candidate's own category and entity. """
        linked_entity_id: str | None = catalog.category_entity(candidate.commons_category)
        if linked_entity_id != candidate.entity_id:
            return False

        entity: EntityRecord | None = graph.entity(linked_entity_id)
        return entity is not None and entity.commons_category == candidate.commons_category

    @classmethod
    def cyclic_link_filter(
            cls,
            candidates: list[SceneCategory],
            graph: PKnowledgeGraphSource,
            catalog: PCatalogSource,
    ) -> list[SceneCategory]:
        kept: list[SceneCategory] = [
            candidate for candidate in candidates if cls.has_cyclic_link(candidate, graph, catalog)]
        logger.info(f"Cyclic link filter kept {len(kept)} of {len(candidates)} candidates")
        return kept

    @staticmethod
    def glam_filter(
            candidates: list[SceneCategory],
            graph: PKnowledgeGraphSource | None = None,
            glam_labels: tuple[str, ...] = ConstantsCrawler.GLAM_CLASS_LABELS,
    ) -> list[SceneCategory]:
        """
        Drops candidates whose classes are all GLAM classes; a candidate without any
        class is kept and flagged. Missing labels are resolved through the graph.
        """
        glam: set[str] = {label.lower() for label in glam_labels}
        kept: list[SceneCategory] = []

        for candidate in candidates:
            labels: tuple[str, ...] = candidate.class_labels
            if len(labels) != len(candidate.class_ids) or not all(labels):
                labels = tuple(SceneFilters._resolve_label(class_id, graph) for class_id in candidate.class_ids)

            if not labels:
                kept.append(candidate.with_flag(NO_CLASSES_FLAG))
            elif not all(label.lower() in glam for label in labels):
                kept.append(candidate)

        logger.info(f"GLAM filter kept {len(kept)} of {len(candidates)} candidates")
        return kept

    @staticmethod
    def _resolve_label(class_id: str, graph: PKnowledgeGraphSource | None) -> str:
        entity: EntityRecord | None = graph.entity(class_id) if graph is not None else None
        if entity is None or not entity.label:
            raise UnresolvedLabelError(f"Cannot resolve the label of class {class_id}.")
        return entity.label
