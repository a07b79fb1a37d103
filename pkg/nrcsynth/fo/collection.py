"""Parameter collection for first-order proofs.

From an FO-focused proof of ⊢ ¬φ, ¬ψ, ∃y ∀z (λ ↔ ρ) with φ on the left and
ψ on the right, computes a side formula θ and a Pdepd D over the common
signature. Without a goal the same induction yields a Craig interpolant.
"""
from dataclasses import dataclass
import logging

from nrcsynth.errors import NotFocused, ShapeMismatch
from nrcsynth.fo.checker import fo_is_focused
from nrcsynth.fo.pdepd import (
    biconditional, bottom, exists_rhs, pdepd_to_formula, substitute_rhs)
from nrcsynth.fo.syntax import (
    FO_BOT, FO_TOP, FoAnd, FoEq, FoExists, FoForall, FoNeq, FoOr, fo_alpha_eq,
    fo_free_vars, fo_iff, fo_preds, fo_subst)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FoCollectionGoal:
    lam: object
    rho: object
    z: str
    y: str

    @property
    def left_params(self):
        return fo_free_vars(self.lam) - {self.z}

    @property
    def right_params(self):
        return fo_free_vars(self.rho) - {self.z, self.y}

    def instance(self, w):
        return FoForall(self.z, fo_iff(self.lam,
                                       fo_subst(self.rho, {self.y: w})))

    def formula(self):
        return FoExists(self.y, FoForall(self.z, fo_iff(self.lam, self.rho)))


@dataclass(frozen=True)
class FoCollection:
    theta: object
    pdepd: object = None

    def formula(self):
        return pdepd_to_formula(self.pdepd)

    @property
    def disjuncts(self):
        return self.pdepd.disjuncts


def _and(a, b):
    if a == FO_TOP:
        return b
    if b == FO_TOP:
        return a
    return FoAnd(a, b)


def _or(a, b):
    if a == FO_BOT:
        return b
    if b == FO_BOT:
        return a
    return FoOr(a, b)


class FoCollector:

    def __init__(self, goal=None, verify=True):
        self._goal = goal
        self._verify = verify

    @property
    def goal(self):
        return self._goal

    def run(self, p, sides):
        if not fo_is_focused(p):
            raise NotFocused('parameter collection needs an FO-focused proof')
        sides = tuple(sides)
        if len(sides) != len(p.conclusion):
            raise ShapeMismatch(f'{len(sides)} sides for '
                                f'{len(p.conclusion)} formulas')
        if self._goal is not None:
            goals = [i for i, s in enumerate(sides) if s == 'G']
            if len(goals) != 1 or not fo_alpha_eq(p.conclusion[goals[0]],
                                                  self._goal.formula()):
                raise ShapeMismatch('the goal must sit once on side G')
        elif 'G' in sides:
            raise ShapeMismatch('side G without a goal')
        theta, d = self.visit(p, sides)
        logger.debug('collected %d disjuncts', 0 if d is None
                     else len(d.disjuncts))
        return FoCollection(theta, d)

    # Bookkeeping.

    def _bottom(self):
        if self._goal is None:
            return None
        return bottom(self._goal.lam, self._goal.z)

    def _params(self, side):
        if self._goal is None:
            return frozenset()
        return (self._goal.left_params if side == 'L'
                else self._goal.right_params)

    def _part(self, seq, sides, side):
        return [f for f, s in zip(seq, sides) if s == side]

    def variables(self, seq, sides, side):
        return fo_free_vars(self._part(seq, sides, side)) | self._params(side)

    def predicates(self, seq, sides, side):
        preds = fo_preds(self._part(seq, sides, side))
        if self._goal is not None:
            preds |= fo_preds(self._goal.lam if side == 'L'
                              else self._goal.rho)
        return preds

    def _check(self, node, sides, theta, d):
        seq = node.conclusion
        common = (self.variables(seq, sides, 'L')
                  & self.variables(seq, sides, 'R'))
        preds = (self.predicates(seq, sides, 'L')
                 & self.predicates(seq, sides, 'R'))
        stray = fo_free_vars(theta) - common
        if d is not None:
            stray |= d.rhs_vars() - common
        if stray:
            raise ShapeMismatch(f'{sorted(stray)} are not common at '
                                f'{node.tag}')
        extra = fo_preds(theta) - preds
        if d is not None:
            extra |= d.rhs_preds() - preds
        if extra:
            raise ShapeMismatch(f'{sorted(n for n, _ in extra)} are not common '
                                f'predicates at {node.tag}')

    # Cases.

    def visit(self, node, sides):
        theta, d = self._case(node, sides)
        if self._verify:
            self._check(node, sides, theta, d)
        return theta, d

    def _case(self, node, sides):
        seq, rule = node.conclusion, node.rule
        tag = rule.rule
        if tag == 'Ax':
            i, j = rule.principal
            if sides[i] == sides[j]:
                return (FO_TOP if sides[i] == 'L' else FO_BOT), self._bottom()
            left = i if sides[i] == 'L' else j
            return seq[left], self._bottom()
        if tag == 'Top':
            (i,) = rule.principal
            return (FO_TOP if sides[i] == 'L' else FO_BOT), self._bottom()
        i = rule.principal[0] if rule.principal else None
        if i is not None and sides[i] == 'G':
            if tag != 'Exists':
                raise ShapeMismatch(f'{tag} applied to the goal')
            return self.goal_exists(node, sides)
        if tag in ('And', 'Or', 'Forall'):
            width = 2 if tag == 'Or' else 1
            spliced = sides[:i] + (sides[i],) * width + sides[i + 1:]
            results = [self.visit(q, spliced) for q in node.premises]
            if tag != 'And':
                return results[0]
            (t1, d1), (t2, d2) = results
            theta = _and(t1, t2) if sides[i] == 'L' else _or(t1, t2)
            return theta, self._join(d1, d2)
        if tag == 'Exists':
            return self.exists(node, sides)
        if tag == 'Ref':
            t = rule.term
            side = 'L' if t in self.variables(seq, sides, 'L') else 'R'
            return self.visit(node.premises[0], sides + (side,))
        if tag == 'Repl':
            return self.repl(node, sides)
        raise ShapeMismatch(f'unknown rule {tag}')

    def _join(self, d1, d2):
        if d1 is None:
            return None
        return d1 | d2

    def exists(self, node, sides):
        (i,) = node.rule.principal
        side = sides[i]
        t = node.rule.term
        theta, d = self.visit(node.premises[0], sides + (side,))
        if t in self.variables(node.conclusion, sides, side):
            return theta, d
        quantifier = FoExists if side == 'L' else FoForall
        if t in fo_free_vars(theta):
            theta = quantifier(t, theta)
        if d is not None:
            d = exists_rhs(d, t)
        return theta, d

    def repl(self, node, sides):
        i, j = node.rule.principal
        seq = node.conclusion
        neq = seq[i]
        theta, d = self.visit(node.premises[0], sides + (sides[j],))
        if sides[i] == sides[j]:
            return theta, d
        t, u = neq.l, neq.r
        # The literal sits on the side opposite to the disequality.
        other = sides[j]
        names = self.variables(seq, sides, other)
        if t not in names:
            return theta, d
        if u in names:
            if other == 'R':
                return _or(theta, FoNeq(t, u)), d
            return _and(theta, FoEq(t, u)), d
        theta = fo_subst(theta, {u: t})
        if d is not None:
            d = substitute_rhs(d, u, t)
        return theta, d

    def goal_exists(self, node, sides):
        """The forced ∀, ∧, ∨ backbone below an instance of the goal."""
        goal = self._goal
        seq = node.conclusion
        w = node.rule.term
        n = len(seq)
        (q,) = node.premises
        if not fo_alpha_eq(q.conclusion[n], goal.instance(w)):
            raise ShapeMismatch(f'{q.conclusion[n]} is not an instance of '
                                f'the goal')
        if q.rule.rule != 'Forall' or q.rule.principal != (n,):
            raise ShapeMismatch('the goal instance is not decomposed first')
        u = q.rule.term
        (q2,) = q.premises
        if q2.rule.rule != 'And' or q2.rule.principal != (n,):
            raise ShapeMismatch('the biconditional is not split next')
        results = []
        for branch, pair in zip(q2.premises, (('L', 'R'), ('R', 'L'))):
            if branch.rule.rule != 'Or' or branch.rule.principal != (n,):
                raise ShapeMismatch('an implication is not opened next')
            (leaf,) = branch.premises
            results.append(self.visit(leaf, sides + pair))
        (t1, d1), (t2, d2) = results
        if goal.z in fo_free_vars(t2):
            raise ShapeMismatch(f'{goal.z} is free in {t2}')
        defn = biconditional(goal.lam, goal.z, fo_subst(t2, {u: goal.z}))
        theta = FoForall(u, _or(t1, t2))
        d = exists_rhs(d1, u) | exists_rhs(d2, u) | defn
        left = self.variables(seq, sides, 'L')
        right = self.variables(seq, sides, 'R')
        if w in left and w not in right:
            theta = FoForall(w, theta)
            d = exists_rhs(d, w)
        return theta, d


def default_sides(p, goal=None):
    """⊢ ¬φ, ¬ψ[, G]: φ left, ψ right."""
    n = len(p.conclusion)
    if goal is None:
        assert n == 2
        return ('L', 'R')
    assert n == 3
    return ('L', 'R', 'G')


def fo_collect(p, goal, sides=None, verify=True):
    sides = sides or default_sides(p, goal)
    return FoCollector(goal, verify).run(p, sides)


def fo_interpolate(p, sides=None, verify=True):
    """A Craig interpolant θ with Γ_R ∨ θ and ¬θ ∨ Γ_L valid."""
    sides = sides or default_sides(p)
    return FoCollector(None, verify).run(p, sides).theta
