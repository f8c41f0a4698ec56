"""Shared exception types."""


class GraphFormatError(ValueError):
    """A graph, template, registry, or model file violates its format."""


class ResourceLimitError(RuntimeError):
    """An operation refused inputs beyond its documented desk-scale limits."""


class FormulaParseError(ValueError):
    """Formula text was rejected; `position` is the character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
