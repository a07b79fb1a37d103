from .syntax import (
    Pred, NegPred, FoEq, FoNeq, FoTop, FoBot, FoAnd, FoOr, FoForall, FoExists,
    FoSequent, FO_TOP, FO_BOT, fo_dual, fo_iff, fo_free_vars, fo_preds,
    fo_subst)
from .checker import FoRule, fo_check, fo_is_focused, fo_node
from .focusing import FoFocuser, fo_focus
from .pdepd import Pdepd, exists_rhs, pdepd_normal_form, pdepd_to_formula
from .collection import (
    FoCollectionGoal, FoCollection, FoCollector, fo_collect, fo_interpolate)
from .semantics import Structure, fo_satisfies
