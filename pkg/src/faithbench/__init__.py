"""Faithfulness evaluation workbench for long-form multi-document summaries."""

__version__ = "0.1.0"


class SchemaError(ValueError):
    """Raised when an input file or record violates its schema or invariants."""

    def __init__(self, message, *, path=None, field=None):
        self.path = path
        self.field = field
        prefix = ""
        if path is not None:
            prefix += f"{path}: "
        if field is not None:
            prefix += f"field '{field}': "
        super().__init__(prefix + message)
