"""Base repository pattern implementation."""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Generic, TypeVar

T = TypeVar('T')


class BaseRepository(Generic[T], ABC):
    """Base repository reading and writing one kind of artifact as text files."""

    def __init__(self, encoding: str = "utf-8"):
        self.encoding = encoding

    @abstractmethod
    def serialize(self, entity: T) -> str:
        """Text form of an entity."""

    @abstractmethod
    def deserialize(self, text: str) -> T:
        """Entity from its text form."""

    def load(self, path: Path) -> T:
        return self.deserialize(Path(path).read_text(encoding=self.encoding))

    def save(self, entity: T, path: Path) -> Path:
        """Write the entity, creating parent directories."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.serialize(entity), encoding=self.encoding)
        return path
