# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Errors
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Imported by every stage of the vtflow pipeline.
# Description: "Errors" defines the exception hierarchy of the package. Every error carries the process exit code that the command line interface returns when the error stops a pipeline.
# ---------------------------------------------------------------------------


class VtflowError(Exception):
    """Base class of every error raised by a vtflow stage."""

    exit_code = 1

    def __init__(self, message):
        super().__init__(message)
        self.message = message


class ScenarioParseError(VtflowError):
    """A scenario file line could not be parsed."""

    exit_code = 2

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f'line {line}, column {column}: {message}'
        super().__init__(message)
        self.line = line
        self.column = column


class UnknownKeyError(VtflowError):
    exit_code = 3


class InvariantError(VtflowError):
    """A scenario or data structure breaks a declared invariant (unresolved family, stability gate, ...)."""

    exit_code = 4


class CertificationError(VtflowError):
    """Target or domain certification failed; the failing reports are attached."""

    exit_code = 5

    def __init__(self, message, reports=None):
        super().__init__(message)
        self.reports = list(reports or [])


class FlowAbort(VtflowError):
    """The flow stopped before its horizon.

    'last_state' is the last state satisfying every MapState invariant, 'nodes' lists the
    offending grid nodes and 'frames' holds the frames recorded before the abort.
    """

    exit_code = 6

    def __init__(self, message, last_state=None, nodes=None, frames=None):
        super().__init__(message)
        self.last_state = last_state
        self.nodes = list(nodes or [])
        self.frames = list(frames or [])


class VerificationFailure(VtflowError):
    exit_code = 7

    def __init__(self, message, reports=None):
        super().__init__(message)
        self.reports = list(reports or [])
