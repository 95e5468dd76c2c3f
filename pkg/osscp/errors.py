#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#


class OsscpError(Exception):
    """All errors thrown explicitly by this package will be OsscpError's."""
    pass


class DimensionMismatchError(OsscpError, ValueError):
    pass


class NonFiniteValueError(OsscpError, ValueError):
    pass


class ArgumentOutOfRangeError(OsscpError, ValueError):
    pass


class InvalidConfigError(OsscpError, ValueError):
    """raised when a configuration (file or override dict) does not follow the documented schema."""
    pass


class ConfigParseError(InvalidConfigError):
    def __init__(self, message, lineno=None, colno=None):
        super(ConfigParseError, self).__init__(message)
        self.lineno = lineno
        self.colno = colno


class UnknownScenarioError(OsscpError, KeyError):
    pass


class UnknownConstantError(OsscpError, TypeError):
    pass


class SubproblemFailedError(OsscpError, RuntimeError):
    """raised when a convex subproblem ends infeasible or unbounded.

    iteration and agent_id are None when the failure happened outside an engine loop."""
    def __init__(self, message, iteration=None, agent_id=None, status=None):
        super(SubproblemFailedError, self).__init__(message)
        self.iteration = iteration
        self.agent_id = agent_id
        self.status = status


class ProjectionInfeasibleError(SubproblemFailedError):
    pass
