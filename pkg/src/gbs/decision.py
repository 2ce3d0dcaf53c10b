"""Three-valued verdicts returned by the search-backed procedures."""

from dataclasses import dataclass, field
from typing import Any

YES = "yes"
NO = "no"
INCONCLUSIVE = "inconclusive"


@dataclass
class Decision:
    verdict: str
    witness: Any = None
    reason: str = ""
    info: dict = field(default_factory=dict)

    @property
    def yes(self):
        return self.verdict == YES

    @property
    def no(self):
        return self.verdict == NO

    @property
    def inconclusive(self):
        return self.verdict == INCONCLUSIVE

    def __bool__(self):
        raise TypeError("use .yes / .no / .inconclusive on a Decision")


def Yes(witness=None, reason="", **info):
    return Decision(YES, witness, reason, info)


def No(reason="", witness=None, **info):
    return Decision(NO, witness, reason, info)


def Inconclusive(reason="", **info):
    return Decision(INCONCLUSIVE, None, reason, info)


@dataclass(frozen=True)
class SearchBudget:
    """Knobs for the bounded searches.

    slack widens the exponent box used by label-reachability searches,
    max_path_len caps witness paths reported by the bounded cycle search,
    snm_cap caps the number of graphs collected while sliding non-mobile edges,
    max_states caps any single breadth-first exploration.
    """

    slack: int = 8
    max_path_len: int = 64
    snm_cap: int = 10_000
    max_states: int = 200_000
