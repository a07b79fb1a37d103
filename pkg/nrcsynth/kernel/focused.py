from nrcsynth.kernel.base import Checker
from nrcsynth.kernel.rules import FOCUSED_RULES, LOWERED_RULES
from nrcsynth.kernel.sequents import Sequent1


class FocusedChecker(Checker):
    """The focused one-sided calculus with its EL and maximality conditions."""

    def __init__(self):
        super().__init__(strict=True, allowed=FOCUSED_RULES,
                         sequent_type=Sequent1)


class LoweredChecker(Checker):
    """One-sided trees obtained by lowering two-sided proofs."""

    def __init__(self):
        super().__init__(strict=False, allowed=LOWERED_RULES,
                         sequent_type=Sequent1)


def check_focused(p):
    return FocusedChecker().check(p)


def check_lowered(p):
    return LoweredChecker().check(p)
