from .source_records import EntityRecord, CategoryRecord, FileRecord
from .scene_category import SceneCategory, SubcategoryNode
from .image_manifest_entry import ImageManifestEntry
