"""Exception types shared across the package."""


class StructureError(ValueError):
    """Input violates a structural contract (shape, dimension, Hermiticity)."""


class PreconditionError(StructureError):
    """An operation was called on input that fails its stated preconditions."""


class ExtractionError(RuntimeError):
    """Projector extraction produced numerically inconsistent results."""


class DegenerateSeedError(ValueError):
    """Seed state gives vanishing outcome probability, no verifier can be formed."""


class SchemaError(ValueError):
    """A model document is well-formed JSON but violates the expected schema."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class ModelParseError(ValueError):
    """A model document is not valid JSON."""
