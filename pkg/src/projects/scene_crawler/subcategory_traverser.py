from src.entities import CategoryRecord, EntityRecord, SceneCategory, SubcategoryNode, SubcategoryRules
from src.interfaces import PCatalogSource, PKnowledgeGraphSource
from src.services.utils import Logger
from .crawler_exceptions import TraversalRulesError


logger = Logger("SubcategoryTraverser")


class SubcategoryTraverser:
    @staticmethod
    def name_substrings_for(scene: SceneCategory, graph: PKnowledgeGraphSource) -> tuple[str, ...]:
        """ Category name, entity label and aliases, de-duplicated in that order. """
        entity: EntityRecord | None = graph.entity(scene.entity_id)
        names: list[str] = [scene.commons_category]
        if entity is not None:
            names.extend([entity.label, *entity.aliases])

        unique: dict[str, None] = {name.strip(): None for name in names if name and name.strip()}
        return tuple(unique)

    @staticmethod
    def enters(title: str, rules: SubcategoryRules) -> bool:
        """ No excluded keyword and at least one name substring, both case-insensitive. """
        lowered: str = title.lower()
        if any(keyword.lower() in lowered for keyword in rules.excluded_keywords):
            return False
        return any(name.lower() in lowered for name in rules.name_substrings)

    @classmethod
    def recurse_subcategories(
            cls,
            root: SceneCategory,
            catalog: PCatalogSource,
            rules: SubcategoryRules,
    ) -> SubcategoryNode:
        """ Depth-first traversal from the scene's category down to rules.max_depth; no category is visited twice. """
        if not rules.name_substrings:
            raise TraversalRulesError(f"Scene {root.commons_category!r}: name substrings must not be empty.")
        if rules.max_depth < 0:
            raise TraversalRulesError(f"Maximum depth must be non-negative, got {rules.max_depth}.")

        visited: set[str] = {root.commons_category}
        tree: SubcategoryNode = cls._visit(root.commons_category, 0, catalog, rules, visited)
        logger.info(f"{root.commons_category}: {len(visited)} categories, depth {tree.max_depth}")
        return tree

    @classmethod
    def _visit(
            cls,
            title: str,
            depth: int,
            catalog: PCatalogSource,
            rules: SubcategoryRules,
            visited: set[str],
    ) -> SubcategoryNode:
        if depth == rules.max_depth:
            return SubcategoryNode(title=title, depth=depth)

        record: CategoryRecord | None = catalog.category(title)
        if record is None:
            logger.warning(f"Category {title!r} not found in the catalog")
            return SubcategoryNode(title=title, depth=depth)

        children: list[SubcategoryNode] = []
        for child_title in sorted(record.subcategories):
            if child_title in visited:
                continue
            if not cls.enters(child_title, rules):
                logger.debug(f"Skipped subcategory {child_title!r}")
                continue

            visited.add(child_title)
            children.append(cls._visit(child_title, depth + 1, catalog, rules, visited))

        return SubcategoryNode(title=title, depth=depth, children=tuple(children))
