"""Exception hierarchy for the audit toolkit.

Every error the library raises derives from :class:`AuditError` so the CLI
can map failures onto a machine-readable envelope with a stable ``error``
name (the class name) and exit nonzero.
"""


class AuditError(Exception):
    """Base class for all toolkit errors."""


# --- prompt space ---------------------------------------------------------

class MalformedConfig(AuditError):
    """Semantic configuration has no populated slot."""


class AxisMismatch(AuditError):
    """A descriptor was placed in a slot of a different axis."""


class MalformedTemplate(AuditError):
    """Template placeholders are missing, duplicated, or otherwise unusable."""


class ConfigCountMismatch(AuditError):
    """Declared lexicon/template/transcript counts differ from the actual lists."""


class InsufficientDescriptors(AuditError):
    """An axis holds fewer descriptors than polar selection requires."""


# --- ledger ---------------------------------------------------------------

class DuplicateSample(AuditError):
    """Two utterance records share (condition_id, sample_index)."""


class SchemaViolation(AuditError):
    """A wire record failed validation (bad field, range, or version)."""


class UnknownCondition(AuditError):
    """A condition id is absent from the ledger."""


# --- interaction engine ---------------------------------------------------

class InsufficientSamples(AuditError):
    """Too few samples per descriptor for tier stratification."""


# --- encoder bias ---------------------------------------------------------

class DimensionMismatch(AuditError):
    """Embedding vectors of different dimension were combined."""


class ZeroVector(AuditError):
    """An embedding vector has (near-)zero norm."""


class EmptyAnchorSet(AuditError):
    """A gender anchor set is empty."""


class DegenerateVariance(AuditError):
    """All word-level bias values are equal; effect size undefined."""


class EmptyEmbeddingFile(AuditError):
    """An embedding file holds no usable rows."""


# --- reports / pipeline ---------------------------------------------------

class IncompleteLedger(AuditError):
    """A ledger is missing enumerated conditions.

    Carries the missing condition ids in ``missing``.
    """

    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = tuple(missing)


class MissingStage1(AuditError):
    """Stage 2 analysis requested without the Stage 1 inputs it needs."""
