from .sequents import (
    Sequent1, Sequent2, RuleInstance, ProofTree, lower, loc, at, proof_size,
    node_at)
from .base import Checker, CheckReport
from .general import GeneralChecker, check_general, embed, lower_tree
from .focused import FocusedChecker, LoweredChecker, check_focused, \
    check_lowered
from .rules import expand
from .sides import PartitionedSequent, propagate_sides
