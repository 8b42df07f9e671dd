from .path_builder import PathBuilder
from .file_reader import FileReader, FileFormatError
from .file_writer import FileWriter

__all__: list[str] = [
    "PathBuilder",
    "FileReader",
    "FileFormatError",
    "FileWriter",
]
