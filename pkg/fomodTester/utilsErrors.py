"""
Exceptions raised by the tester package. Each carries the exit code the
command line interface reports for it.
"""

import logging

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)


class TesterError(Exception):
    """
    Base class for errors raised by fomodTester.
    """
    exit_code = 1


class ArgumentError(TesterError, ValueError):
    """
    Out-of-range vertex or port, mismatched sizes, malformed family or
    file contents.
    """
    exit_code = 2


class SentenceParseError(TesterError, ValueError):
    """
    A sentence failed to parse. ``position`` is the character offset of
    the offending token, or None when the problem is not positional.
    """
    exit_code = 2

    def __init__(self, message, position=None):
        if position is not None:
            message = message + ' (at position ' + str(position) + ')'
        super().__init__(message)
        self.position = position


class InputInconsistencyError(TesterError, ValueError):
    exit_code = 2


class NotInClassError(TesterError):
    """
    The input graph is not in the declared class C^c_d.
    """
    exit_code = 3

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class ResourceGuardError(TesterError):
    """
    A configured guard was exceeded.
    """
    exit_code = 4

    def __init__(self, guard, limit, message=''):
        text = 'Guard ' + str(guard) + ' exceeded (limit ' + str(limit) + ')'
        if message:
            text = text + ': ' + message
        super().__init__(text)
        self.guard = guard
        self.limit = limit


class InternalInvariantError(TesterError, AssertionError):
    exit_code = 1


def check_guard(value, limit, guard, message=''):
    """
    Raise ResourceGuardError if value is above limit.
    """
    if limit is not None and value > limit:
        logger.error('Guard ' + guard + ' exceeded: ' + str(value) + ' > ' + str(limit))
        raise ResourceGuardError(guard, limit, message)
    return value
