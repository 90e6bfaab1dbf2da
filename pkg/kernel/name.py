from dataclasses import dataclass


@dataclass(frozen=True)
class Name:
    """Hierarchical identifier such as ``nat.rec`` or ``a.foo``."""

    segments: tuple

    def __post_init__(self):
        if not self.segments or any(not s for s in self.segments):
            raise ValueError(f"invalid name segments: {self.segments!r}")

    @staticmethod
    def parse(text: str) -> "Name":
        return Name(tuple(text.split(".")))

    def append(self, segment: str) -> "Name":
        return Name(self.segments + (segment,))

    def join(self, other: "Name") -> "Name":
        return Name(self.segments + other.segments)

    @property
    def last(self) -> str:
        return self.segments[-1]

    @property
    def prefix(self) -> "Name | None":
        if len(self.segments) == 1:
            return None
        return Name(self.segments[:-1])

    def has_prefix(self, other: "Name") -> bool:
        n = len(other.segments)
        return len(self.segments) > n and self.segments[:n] == other.segments

    def drop_prefix(self, other: "Name") -> "Name":
        return Name(self.segments[len(other.segments):])

    def __str__(self):
        return ".".join(self.segments)


def name(text: str) -> Name:
    return Name.parse(text)
