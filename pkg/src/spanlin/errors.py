"""Exception hierarchy.

Everything derives from :class:`SpanlinError` so the CLI can map input
problems and legality failures to distinct exit codes.
"""


class SpanlinError(Exception):
    pass


class InputError(SpanlinError, ValueError):
    """Malformed or unusable input (files, trees, tables)."""


class ParseError(InputError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class EmptyTreeError(InputError):
    pass


class StructureError(InputError):
    """A tree violates the structural contract of the operation."""


class FileFormatError(InputError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


class IllegalLinearizationError(SpanlinError, ValueError):
    """The sequence is not the linearization of any binary tree."""


class OracleRangeError(SpanlinError, ValueError):
    pass
