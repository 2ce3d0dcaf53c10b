"""Exception types shared across the package."""


class GbsError(Exception):
    """Base class for every error raised by this package."""


class ZeroLabel(GbsError, ValueError):
    pass


class LabelTooLarge(GbsError, ValueError):
    pass


class BasisMismatch(GbsError, ValueError):
    pass


class DimensionMismatch(GbsError, ValueError):
    pass


class GraphSyntaxError(GbsError, SyntaxError):
    """Malformed graph text. ``lineno`` points at the offending line."""

    def __init__(self, message, lineno=None):
        super().__init__(message if lineno is None else f"line {lineno}: {message}")
        self.lineno = lineno


class DisconnectedGraph(GbsError, ValueError):
    pass


class ElementaryGroup(GbsError, ValueError):
    pass


class SignObstruction(GbsError, ValueError):
    pass


class BrokenPath(GbsError, ValueError):
    pass


class InvalidSlide(GbsError, ValueError):
    pass


class InvalidInduction(GbsError, ValueError):
    pass


class InvalidAMove(GbsError, ValueError):
    pass


class UnsupportedClass(GbsError, ValueError):
    pass


class InvalidSequence(GbsError, ValueError):
    pass


class ForbiddenEncountered(GbsError, ValueError):
    def __init__(self, case, index):
        super().__init__(f"forbidden pattern ({case}) at position {index}")
        self.case = case
        self.index = index


class NotMobile(GbsError, ValueError):
    pass
