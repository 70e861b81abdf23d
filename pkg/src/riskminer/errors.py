"""Exception hierarchy.

Two families matter to callers: ``DataError`` (the input data violates a
contract) and ``ConfigError`` (the caller asked for something invalid).
Both derive from ``ValueError`` so plain ``except ValueError`` still works.
"""


class RiskMinerError(Exception):
    pass


class DataError(RiskMinerError, ValueError):
    pass


class ConfigError(RiskMinerError, ValueError):
    pass


# --- ingestion -------------------------------------------------------------

class MalformedRecord(DataError):
    def __init__(self, line, reason=""):
        self.line = line
        msg = f"malformed record at line {line}"
        super().__init__(f"{msg}: {reason}" if reason else msg)


class DuplicateId(DataError):
    def __init__(self, doc_id):
        self.doc_id = doc_id
        super().__init__(f"duplicate document id {doc_id!r}")


class EmptyText(DataError):
    def __init__(self, doc_id):
        self.doc_id = doc_id
        super().__init__(f"document {doc_id!r} has empty text")


class UnknownReportType(DataError):
    pass


class NonPositiveAsset(DataError):
    pass


# --- preprocessing / features ----------------------------------------------

class MissingLexicon(ConfigError):
    pass


class EmptyVocabulary(DataError):
    pass


class CorpusTooSmall(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class ZeroVector(DataError):
    pass


# --- topics ----------------------------------------------------------------

class EmptyDocument(DataError):
    def __init__(self, doc_id):
        self.doc_id = doc_id
        super().__init__(f"document {doc_id!r} has no in-vocabulary tokens")


class TopicOutOfRange(ConfigError, IndexError):
    pass


class IndexOutOfRange(ConfigError, IndexError):
    pass


# --- models ----------------------------------------------------------------

class NotADistribution(DataError):
    pass


class ShapeMismatch(DataError):
    pass


class EmptyClass(DataError):
    pass


class SingleClass(DataError):
    pass


class EmptySequence(DataError):
    def __init__(self, seq_id):
        self.seq_id = seq_id
        super().__init__(f"sequence {seq_id!r} is empty")


class SchemaVersionError(DataError):
    pass


# --- evaluation ------------------------------------------------------------

class BadRatios(ConfigError):
    pass


class TooFewSamples(DataError):
    pass


class BadK(ConfigError):
    pass


class LengthMismatch(DataError):
    pass


class UnknownLabel(DataError):
    pass


class EmptyMatrix(DataError):
    pass


class ConstantTarget(DataError):
    pass


class EmptySpace(ConfigError):
    pass


# --- finance ---------------------------------------------------------------

class NonPositiveDenominator(DataError):
    pass


class NonPositiveBase(DataError):
    pass


class UnmatchedCompany(DataError):
    pass
