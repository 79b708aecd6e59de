"""Exception hierarchy shared across the capture, storage and query layers."""


class ProfilerError(Exception):
    """Base class for all errors raised by this package."""


# --- event validation -------------------------------------------------------

class ValidationError(ProfilerError):
    """An event violates a type invariant or refers to unknown entities."""


class UnknownAgent(ValidationError):
    pass


class TimestampOutOfRange(ValidationError):
    pass


class NegativeDuration(ValidationError):
    pass


class LifecycleOrderViolation(ValidationError):
    pass


# --- capture session state --------------------------------------------------

class SessionStateError(ProfilerError):
    pass


class SessionAlreadyOpen(SessionStateError):
    pass


class SessionClosed(SessionStateError):
    pass


# --- snapshot files ---------------------------------------------------------

class SnapshotError(ProfilerError):
    pass


class UnorderedEvents(SnapshotError):
    """Event stream handed to the writer is not sorted by (timestamp, seq)."""


class CorruptSnapshot(SnapshotError):
    """Checksum mismatch, truncated file, or missing integrity record."""


class UnsupportedVersion(SnapshotError):
    pass


class MalformedRecord(SnapshotError):
    """A record line failed to parse; carries the 1-based line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


# --- queries and scenes -----------------------------------------------------

class QueryError(ProfilerError):
    pass


class EmptySnapshot(QueryError):
    pass


class InvalidRange(QueryError):
    pass


class InvalidBucket(QueryError):
    pass


class UnknownMessage(QueryError):
    pass


class InvalidViewport(ProfilerError):
    pass


# --- benchmark scenarios ----------------------------------------------------

class InvalidSpec(ProfilerError):
    """Scenario description is inconsistent or out of range."""
