"""Exception hierarchy shared across the store, query engine, tools and server."""


class KycGraphError(Exception):
    """Base class for all library errors."""


class SchemaError(KycGraphError):
    """A merge instruction violates the graph schema.

    ``index`` is the position of the offending instruction within its batch,
    or None when the violation is not batch-scoped.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class NotFoundError(KycGraphError):
    """A referenced node (or customer, account, ...) does not exist."""


class SnapshotFormatError(KycGraphError):
    """A snapshot file is malformed. ``line`` is 1-based within the file."""

    def __init__(self, message: str, path: str = "", line: int | None = None):
        super().__init__(message)
        self.path = path
        self.line = line


class QuerySyntaxError(KycGraphError):
    """Query text failed to lex or parse."""

    def __init__(self, message: str, line: int = 1, column: int = 1,
                 expected: tuple[str, ...] = ()):
        detail = f"{message} (line {line}, column {column})"
        if expected:
            detail += f"; expected one of: {', '.join(expected)}"
        super().__init__(detail)
        self.line = line
        self.column = column
        self.expected = expected


class UnsupportedFeatureError(QuerySyntaxError):
    """The query uses a construct outside the supported subset."""

    def __init__(self, feature: str, line: int = 1, column: int = 1):
        super().__init__(f"unsupported construct: {feature}", line, column)
        self.feature = feature


class UnboundVariableError(QuerySyntaxError):
    """A WHERE/RETURN expression references a variable no pattern binds."""


class MissingParameterError(KycGraphError):
    """Execution referenced a parameter the caller did not supply."""

    def __init__(self, name: str):
        super().__init__(f"missing query parameter: ${name}")
        self.name = name


class ReadOnlyError(KycGraphError):
    """A write clause was executed through a read-only handle."""


class ResourceLimitError(KycGraphError):
    """Execution exceeded the binding or row cap."""


class QueryExecutionError(KycGraphError):
    """A query failed at runtime for a reason other than the above."""


class TranslationError(KycGraphError):
    """text_to_cypher produced output that does not parse.

    Carries the raw model (or matcher) output for diagnosis.
    """

    def __init__(self, message: str, raw_output: str = ""):
        super().__init__(message)
        self.raw_output = raw_output


class UnsupportedQuestionError(KycGraphError):
    """The deterministic question matcher has no template for this question."""


class InvalidParamsError(KycGraphError):
    """A tool call carried parameters that fail the tool's schema.

    ``field`` is the dotted path of the failing parameter when known.
    """

    def __init__(self, message: str, field: str = ""):
        super().__init__(message)
        self.field = field


class TransportError(KycGraphError):
    """A remote LLM or RPC transport failed after retries."""


class BackendUnavailableError(KycGraphError):
    """A required backend (LLM transport, snapshot) is not available."""
