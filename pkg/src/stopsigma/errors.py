"""Exception hierarchy shared by every module of the package."""


class StopSigmaError(Exception):
    """Base class for all errors raised by stopsigma."""


class EmptySpace(StopSigmaError, ValueError):
    pass


class MixedSpaces(StopSigmaError, ValueError):
    """Two objects that must live on one sample space do not."""


class NotAPartition(StopSigmaError, ValueError):
    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level


class NotASigmaAlgebra(StopSigmaError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class TooManyAtoms(StopSigmaError, ValueError):
    pass


class TimeNotOnAxis(StopSigmaError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class InvalidFiltration(StopSigmaError, ValueError):
    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


class NotAStoppingTime(StopSigmaError, ValueError):
    def __init__(self, check):
        super().__init__(str(check))
        self.check = check
        self.time = check.time


class BadConfig(StopSigmaError, ValueError):
    pass


class InstanceError(StopSigmaError, ValueError):
    """Problem with an instance file (format or content)."""


class ParseError(InstanceError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class UnknownLabel(InstanceError):
    def __init__(self, label, where):
        super().__init__(f"unknown outcome label {label!r} in {where}")
        self.label = label


class UnknownKey(InstanceError):
    pass


class NonRefining(InstanceError):
    def __init__(self, coarse_time, fine_time, block=None):
        msg = f"level {fine_time} does not refine level {coarse_time}"
        if block is not None:
            msg += f" (block {block})"
        super().__init__(msg)
        self.times = (coarse_time, fine_time)
        self.block = block
