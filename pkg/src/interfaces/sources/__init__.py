from .p_knowledge_graph_source import PKnowledgeGraphSource
from .p_catalog_source import PCatalogSource
