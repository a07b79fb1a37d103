"""Transforms of proofs whose conclusion carries a goal
∃r′ ∈_p o′. r ≡ r′: moving the goal one level down, turning the set
equivalence into a biconditional on a parameter, and projecting a product
goal on one component."""
import logging

from nrcsynth.errors import ShapeMismatch
from nrcsynth.kernel.focused import check_focused
from nrcsynth.kernel.sequents import Sequent1, ProofTree, RuleInstance, loc
from nrcsynth.syntax import (
    ExistsIn, ForallIn, MembershipAtom, SetType, alpha_key, all_names,
    fresh_var, goal_formula, iff_macro, member_macro, proj, subst)
from nrcsynth.transforms.base import (
    ProofRewriter, View, alignments, apply_rule, bounded_growth, build,
    new_index)
from nrcsynth.transforms.congruence import mem_context
from nrcsynth.transforms.focusing import Focuser
from nrcsynth.transforms.structural import (
    and_project, forall_invert, principal_index, tagged_principal, weaken)

logger = logging.getLogger(__name__)


def _check_goal(p, k, elem, path, anchor):
    goal = goal_formula(elem, path, anchor)
    if alpha_key(goal) != alpha_key(p.conclusion.delta[k]):
        raise ShapeMismatch(f'{p.conclusion.delta[k]} is not the goal {goal}')
    return goal


def focused_output(name, p, size_ceiling=200000):
    """p itself when focused, else p with its existential steps widened to
    maximal instances. A rebuilt goal block stops at the old path, which
    the new context may extend."""
    if check_focused(p):
        return p
    logger.debug('%s left a non-maximal instance, refocusing', name)
    return Focuser(size_ceiling).refocus(p)


def biconditional(a, r, w, avoid=frozenset()):
    """∀z∈a. (z ∈̂ r ↔ z ∈̂ w)."""
    names = set(avoid) | all_names([a, r, w])
    z = fresh_var('z', a.ty.elem, names)
    names.add(z.name)
    return ForallIn(z, a, iff_macro(member_macro(z, r, frozenset(names)),
                                    member_macro(z, w, frozenset(names))))


class GoalRewriter(ProofRewriter):
    """Tracks the goal and its partial instances under the tag 'goal'; the
    step completing an instance is handed to `complete`."""

    def __init__(self, avoid=()):
        super().__init__(avoid)

    def visit(self, node, view):
        i = tagged_principal(node, view)
        if i is None:
            return None
        if node.tag != 'Exists':
            raise ShapeMismatch(f'{node.tag} acts on the goal')
        rule, view = self.refresh(node, view, self.map_rule(node, view))
        rule, locs = self.relocate(node, view, rule)
        out_seq = view.sequent()
        (prem,) = node.premises
        (a,) = alignments(node)
        origin = ('new', node.rule.principal[0], 0)
        instance = prem.conclusion.delta[new_index(a, origin)]
        if isinstance(instance, ExistsIn):
            return self.emit(node, view, out_seq, rule, locs,
                             new_tags={origin: 'goal'})
        logger.debug('%s completes the goal with %s', type(self).__name__,
                     ', '.join(map(str, rule.witness)))
        return self.complete(node, view, out_seq, rule, locs)

    def complete(self, node, view, out_seq, rule, locs):
        raise NotImplementedError

    def backbone(self, node, view, branch):
        """Follows the forced decomposition of a completed instance
        r ≡ w: the And step on it, then the Forall step of the given branch.
        Returns (forall node, its view before the Forall) or, when the proof
        closes without the instance, (subproof, view) with None first."""
        (prem,) = node.premises
        (a,) = alignments(node)
        origin = ('new', node.rule.principal[0], 0)
        pv = self.skip_view(node, view, 0, a, {origin: ()})
        k = new_index(a, origin)
        if prem.tag != 'And' or principal_index(prem) != k:
            return None, prem, pv
        a2 = alignments(prem)[branch]
        part = ('new', prem.rule.principal[0], 0)
        pv = self.skip_view(prem, pv, branch, a2, {part: ()})
        above = prem.premises[branch]
        if above.tag != 'Forall' or \
                principal_index(above) != new_index(a2, part):
            return None, above, pv
        return above, None, pv

    def inverted(self, forall, view, v):
        """The view above the forced Forall step, its eigenvariable renamed
        to v."""
        (x,) = forall.rule.fresh
        (prem,) = forall.premises
        (a,) = alignments(forall)
        location = forall.rule.principal[0]
        sigma = {**view.sigma, x: v}
        body = prem.conclusion.delta[new_index(a, ('new', location, 0))]
        atom = prem.conclusion.theta[a.theta.index(('new', location, 'atom'))]
        new = {('new', location, 0): (subst(body, sigma),),
               ('new', location, 'atom'): subst(atom, sigma)}
        return prem, self.skip_view(forall, view, 0, a, new, sigma)


class MoveDown(GoalRewriter):

    def __init__(self, z):
        super().__init__(avoid=(z.name,))
        self._z = z

    def complete(self, node, view, out_seq, rule, locs):
        forall, closing, pv = self.backbone(node, view, 0)
        if forall is None:
            return self.rewrite(closing, pv)
        (e,) = apply_rule(out_seq, rule)
        prem, above = self.inverted(forall, pv, self._z)
        # The body z ∈̂ w is the instance of the moved goal.
        if not above.sequent().same_as(e.sequent(False)):
            raise ShapeMismatch('the moved instance does not line up')
        return ProofTree(out_seq, rule, (self.rewrite(prem, above),))


def move_down(p, k, elem, path, anchor, z=None, size_ceiling=200000):
    """From Θ ⊢ Δ, ∃r′∈_p o′. r ≡ r′ (at index k) to
    Θ, z∈r ⊢ Δ, ∃z′∈_{pm} o′. z ≡ z′."""
    _check_goal(p, k, elem, path, anchor)
    if not isinstance(elem.ty, SetType):
        raise ShapeMismatch(f'{elem} is not a set')
    if z is None:
        z = fresh_var('z', elem.ty.elem, p.names() | all_names([anchor]))
    goal = goal_formula(z, path + 'm', anchor)
    if not path:
        out = forall_invert(and_project(p, k, 1), k, z)
    else:
        view = View.identity(p.conclusion, tags={k: 'goal'}).with_(
            extra_theta=(MembershipAtom(z, elem),))
        view.delta[k] = (goal,)
        out = MoveDown(z).run(p, view)
    out = focused_output('move_down', out, size_ceiling)
    return bounded_growth('move_down', p, out)


def _member_index(p, v):
    return next(j for j, atom in enumerate(p.conclusion.theta)
                if atom.elem == v)


def close_biconditional(seq, inclusions, v, a):
    """Proves seq, whose last formula is ∀z∈a. (z ∈̂ r ↔ z ∈̂ w), from the
    proofs of Θ, v∈r ⊢ v ∈̂ w, Δ and Θ, v∈w ⊢ v ∈̂ r, Δ."""
    closed = []
    for q in inclusions:
        m = mem_context(q, _member_index(q, v))
        closed.append(weaken(m, extra_theta=(MembershipAtom(v, a),)))

    def leaf(k, s):
        if not closed[k].conclusion.same_as(s):
            raise ShapeMismatch('a biconditional branch does not line up')
        return closed[k]

    def last(s):
        return (loc('d', len(s.delta) - 1),)

    return build(seq, RuleInstance('Forall', last(seq), fresh=(v,)),
                 lambda _, s: build(s, RuleInstance('And', last(s)),
                                    lambda k, s2: build(
                                        s2, RuleInstance('Or', last(s2)),
                                        lambda _, s3: leaf(k, s3))))


class EquivToBiconditional(GoalRewriter):

    def __init__(self, a, avoid):
        super().__init__(avoid)
        self._a = a

    def complete(self, node, view, out_seq, rule, locs):
        (e,) = apply_rule(out_seq, rule)
        seq = e.sequent(False)
        names = set(self._avoid) | seq.names() | node.names()
        v = fresh_var('v', self._a.ty.elem, names)
        inclusions = []
        for branch in (0, 1):
            forall, closing, pv = self.backbone(node, view, branch)
            if forall is None:
                return self.rewrite(closing, pv)
            prem, above = self.inverted(forall, pv, v)
            inclusions.append(self.rewrite(prem, above))
        top = close_biconditional(seq, inclusions, v, self._a)
        return ProofTree(out_seq, rule, (top,))


def equiv_to_biconditional(p, k, elem, path, anchor, a,
                           size_ceiling=200000):
    """From Θ ⊢ Δ, ∃r′∈_p o′. r ≡ r′ to
    Θ ⊢ Δ, ∃r′∈_p o′. ∀z∈a. (z ∈̂ r ↔ z ∈̂ r′) for a fresh set variable a."""
    _check_goal(p, k, elem, path, anchor)
    if not isinstance(elem.ty, SetType) or a.ty != elem.ty:
        raise ShapeMismatch(f'{a} cannot range over the elements of {elem}')
    assert a.name not in p.names()
    goal = goal_formula(elem, path, anchor,
                        leaf=lambda w, names: biconditional(a, elem, w, names))
    seq = p.conclusion
    if path:
        view = View.identity(seq, tags={k: 'goal'})
        view.delta[k] = (goal,)
        avoid = p.names() | {a.name}
        out = EquivToBiconditional(a, avoid).run(p, view)
        return focused_output('equiv_to_biconditional', out, size_ceiling)
    names = p.names() | all_names([a, anchor])
    v = fresh_var('v', elem.ty.elem, names)
    inclusions = [forall_invert(and_project(p, k, i), k, v) for i in (1, 2)]
    delta = seq.delta[:k] + seq.delta[k + 1:] + (goal,)
    out = close_biconditional(Sequent1(seq.theta, delta), inclusions, v, a)
    return focused_output('equiv_to_biconditional', out, size_ceiling)


class ProjectGoal(GoalRewriter):

    def __init__(self, side):
        super().__init__()
        self._side = side

    def complete(self, node, view, out_seq, rule, locs):
        (prem,) = node.premises
        (a,) = alignments(node)
        origin = ('new', node.rule.principal[0], 0)
        projected = and_project(prem, new_index(a, origin), self._side)
        (e,) = apply_rule(out_seq, rule)
        pv = self.premise_view(node, view, 0, a, e, locs, rule)
        return ProofTree(out_seq, rule, (self.rewrite(projected, pv),))


def project_goal(p, k, elem, path, anchor, side, size_ceiling=200000):
    """From Θ ⊢ Δ, ∃r′∈_p o′. r ≡ r′ at a product type to the goal on
    component `side`: Θ ⊢ Δ, ∃r′∈_{p side} o′. π_side(r) ≡ r′."""
    _check_goal(p, k, elem, path, anchor)
    goal = goal_formula(proj(side, elem), path + str(side), anchor)
    if not path:
        return and_project(p, k, side)
    view = View.identity(p.conclusion, tags={k: 'goal'})
    view.delta[k] = (goal,)
    out = ProjectGoal(side).run(p, view)
    out = focused_output('project_goal', out, size_ceiling)
    return bounded_growth('project_goal', p, out)
