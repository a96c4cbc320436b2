"""The six uncoupled one-way model equations: three families, two directions."""

from dataclasses import dataclass

RIGHT = +1
LEFT = -1

TAGS = ("CH", "BBM", "KDV")


@dataclass(frozen=True)
class ModelFamily:
    """One of CH/BBM/KDV in right- (+) or left- (-) moving form."""

    tag: str
    direction: int = RIGHT

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown family tag {self.tag!r}; expected one of {TAGS}")
        if self.direction not in (RIGHT, LEFT):
            raise ValueError("direction must be +1 (right) or -1 (left)")

    @property
    def label(self) -> str:
        return self.tag + ("+" if self.direction == RIGHT else "-")

    @classmethod
    def parse(cls, text: str) -> "ModelFamily":
        text = text.strip()
        if text.endswith("+"):
            return cls(text[:-1], RIGHT)
        if text.endswith("-"):
            return cls(text[:-1], LEFT)
        return cls(text, RIGHT)

    @classmethod
    def pair(cls, tag: str) -> tuple["ModelFamily", "ModelFamily"]:
        """(right-moving, left-moving) pair of one family."""
        return cls(tag, RIGHT), cls(tag, LEFT)
