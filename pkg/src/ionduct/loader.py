"""JSON/YAML document loading with source location tracking."""

import re
from pathlib import Path
from typing import Any

import yaml

from .utils.constants import ID_SEP_KEY
from .utils.exceptions import LoadError, SourceLocation
from .utils.types import PathLike

__all__ = ["Loader", "MetadataRegistry", "DOCUMENT_SUFFIXES"]

DOCUMENT_SUFFIXES = (".json", ".yaml", ".yml")

# JSON writes 5e-05 without a decimal point, which YAML 1.1 would read as a string
_JSON_FLOAT = re.compile(r"^[-+]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)[eE][-+]?[0-9]+$")


class MetadataRegistry:
    """Source locations of the mappings and sequences of a loaded document.

    Keys are ``::``-joined id paths (``design::stage::emitter``); the empty id
    is the document root.

    Example:
        ```python
        registry = MetadataRegistry()
        registry.register("design::stage", SourceLocation("design.json", 7, 5, "design::stage"))
        registry.get("design::stage").line  # 7
        ```
    """

    def __init__(self) -> None:
        self._locations: dict[str, SourceLocation] = {}

    def register(self, id_path: str, location: SourceLocation) -> None:
        self._locations[id_path] = location

    def get(self, id_path: str) -> SourceLocation | None:
        return self._locations.get(id_path)

    def __len__(self) -> int:
        return len(self._locations)

    def __contains__(self, id_path: str) -> bool:
        return id_path in self._locations


class _TrackingLoader(yaml.SafeLoader):
    """Safe YAML loader that records where each mapping and sequence starts."""

    def __init__(self, stream: Any, filepath: str, registry: MetadataRegistry) -> None:
        super().__init__(stream)
        self.filepath = filepath
        self.registry = registry
        self.id_path_stack: list[str] = []

    def _register(self, node: yaml.Node) -> None:
        if node.start_mark:
            current_id = ID_SEP_KEY.join(self.id_path_stack)
            self.registry.register(
                current_id,
                SourceLocation(
                    filepath=self.filepath,
                    line=node.start_mark.line + 1,
                    column=node.start_mark.column + 1,
                    id=current_id,
                ),
            )

    def construct_mapping(self, node, deep=False):
        self._register(node)
        mapping = {}
        for key_node, value_node in node.value:
            key = self.construct_object(key_node, deep=True)
            if key in mapping:
                raise LoadError(
                    f"Duplicate key '{key}'",
                    source_location=SourceLocation(self.filepath, key_node.start_mark.line + 1),
                )
            self.id_path_stack.append(str(key))
            mapping[key] = self.construct_object(value_node, deep=True)
            self.id_path_stack.pop()
        return mapping

    def construct_sequence(self, node, deep=False):
        self._register(node)
        sequence = []
        for index, child in enumerate(node.value):
            self.id_path_stack.append(str(index))
            sequence.append(self.construct_object(child, deep=True))
            self.id_path_stack.pop()
        return sequence


_TrackingLoader.add_implicit_resolver("tag:yaml.org,2002:float", _JSON_FLOAT, list("-+0123456789."))
_TrackingLoader.add_constructor("tag:yaml.org,2002:map", _TrackingLoader.construct_mapping)
_TrackingLoader.add_constructor("tag:yaml.org,2002:seq", _TrackingLoader.construct_sequence)


class Loader:
    """Load design and space documents with source location tracking.

    JSON is read through the YAML parser (JSON is a YAML subset), which gives
    line numbers for diagnostics in both formats.

    Example:
        ```python
        document, metadata = Loader().load_file("design.json")
        metadata.get("design::stage").line
        ```
    """

    def load_file(self, filepath: PathLike) -> tuple[dict[str, Any], MetadataRegistry]:
        """Load a single document.

        Args:
            filepath: Path to a ``.json``, ``.yaml`` or ``.yml`` file

        Returns:
            Tuple of (document, metadata_registry)

        Raises:
            LoadError: If the file is missing, has another extension, cannot be
                parsed or does not hold a mapping at the top level
        """
        path = Path(filepath)
        if path.suffix.lower() not in DOCUMENT_SUFFIXES:
            raise LoadError(f'Unknown file input: "{filepath}", must be one of {", ".join(DOCUMENT_SUFFIXES)}')
        if not path.is_file():
            raise LoadError(f'File not found: "{filepath}"')

        registry = MetadataRegistry()
        resolved = str(path.resolve())
        try:
            with open(path, encoding="utf-8") as stream:
                document = self.load_stream(stream, resolved, registry)
        except UnicodeDecodeError as e:
            raise LoadError(f'Cannot decode "{filepath}" as UTF-8 text: {e}') from e
        except yaml.reader.ReaderError as e:
            raise LoadError(f'Cannot parse "{filepath}": {e}') from e
        return document, registry

    @staticmethod
    def load_stream(stream: Any, filepath: str, registry: MetadataRegistry) -> dict[str, Any]:
        """Parse a document from an open stream, populating ``registry``."""
        loader = _TrackingLoader(stream, filepath, registry)
        try:
            document = loader.get_single_data()
        except yaml.MarkedYAMLError as e:
            mark = e.problem_mark or e.context_mark
            location = SourceLocation(filepath, mark.line + 1, mark.column + 1) if mark else None
            raise LoadError(f"Cannot parse document: {e.problem or e}", source_location=location) from e
        finally:
            loader.dispose()

        if document is None:
            return {}
        if not isinstance(document, dict):
            raise LoadError(
                f"Expected a mapping at the top level, got {type(document).__name__}",
                source_location=registry.get(""),
            )
        return document
