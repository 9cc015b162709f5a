from enum import IntEnum


class ExitCode(IntEnum):
    SUCCESS = 0
    PARSE = 3
    VALIDATION = 4
    NUMERICAL = 5
    RESOURCE = 6
    EMPTY_RESULT = 7


class SolverError(Exception):
    exit_code = ExitCode.NUMERICAL


class ConfigParseError(SolverError):
    exit_code = ExitCode.PARSE

    def __init__(self, message, line=None, key=None):
        super().__init__(message)
        self.line = line
        self.key = key


class InvalidConfig(SolverError):
    exit_code = ExitCode.VALIDATION

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


class NumericalError(SolverError):
    exit_code = ExitCode.NUMERICAL

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class StateSpaceTooLarge(SolverError):
    exit_code = ExitCode.RESOURCE


class EmptyResult(SolverError):
    exit_code = ExitCode.EMPTY_RESULT


class ContractViolation(ValueError):
    pass
