"""Craig interpolants from partitioned proofs.

For a node whose conclusion is split into Θ_L ⊢ Δ_L and Θ_R ⊢ Δ_R the
interpolant θ satisfies Θ_L ⊨ Δ_L, θ and Θ_R ⊨ Δ_R, ¬θ, and mentions only
variables free on both sides. Two-sided proofs are read through their
lowering, so a formula on the left of the turnstile contributes its dual.
"""
import logging

from nrcsynth.errors import NonCommonBoundUnrecoverable, PartitionMismatch
from nrcsynth.kernel.general import lower_tree
from nrcsynth.kernel.rules import instantiate, rewrite_sides
from nrcsynth.kernel.sequents import Sequent2
from nrcsynth.kernel.sides import PartitionedSequent, propagate_sides
from nrcsynth.syntax import (
    TOP, BOT, Var, EqUr, NeqUr, And, Or, ForallIn, ExistsIn, Proj1, Proj2,
    alpha_key, all_names, dual, formula_size, free_vars, fresh_var,
    replace_all, subst,
    term_vars)
from nrcsynth.transforms.structural import (
    eliminate_reflexivity, principal_index)

logger = logging.getLogger(__name__)


def side_constant(side):
    """θ for a node closed by a formula of the given side."""
    return BOT if side == 'L' else TOP


def conj(a, b):
    if a == TOP:
        return b
    if b == TOP:
        return a
    if BOT in (a, b):
        return BOT
    return And(a, b)


def disj(a, b):
    if a == BOT:
        return b
    if b == BOT:
        return a
    if TOP in (a, b):
        return TOP
    return Or(a, b)


def replace_term(f, target, repl):
    if isinstance(target, Var):
        return subst(f, {target: repl})
    return replace_all(f, target, repl)


class Interpolator:

    def __init__(self, verify_fv=True):
        self._verify_fv = verify_fv

    @property
    def verify_fv(self):
        return self._verify_fv

    def interpolate(self, p, part):
        """θ for p under the partition part of its conclusion."""
        if isinstance(p.conclusion, Sequent2):
            p, part = lower_tree(p), part.lowered()
        if part.sequent != p.conclusion:
            raise PartitionMismatch('the partition belongs to another sequent')
        if 'G' in part.delta:
            raise PartitionMismatch('interpolation takes no goal formula')
        p = eliminate_reflexivity(p)
        theta = self.visit(p, part)
        logger.debug('interpolant of size %d over %s', formula_size(theta),
                     sorted(v.name for v in free_vars(theta)))
        return theta

    def visit(self, node, part):
        premises = propagate_sides(node, part) if node.premises else []
        tag = node.tag
        if tag in ('Eq', 'Top'):
            theta = side_constant(part.delta[principal_index(node)])
        elif tag == 'Ax':
            theta = self.axiom(node, part)
        elif tag == 'And':
            t1, t2 = (self.visit(q, s) for q, s in zip(node.premises,
                                                        premises))
            if part.delta[principal_index(node)] == 'L':
                theta = disj(t1, t2)
            else:
                theta = conj(t1, t2)
        elif tag in ('Or', 'Forall', 'ProdBeta'):
            theta = self.visit(node.premises[0], premises[0])
        elif tag == 'ProdEta':
            (x,), (x1, x2) = node.rule.witness, node.rule.fresh
            inner = self.visit(node.premises[0], premises[0])
            theta = subst(inner, {x1: Proj1(x), x2: Proj2(x)})
        elif tag == 'Exists':
            theta = self.exists(node, part, premises[0])
        elif tag == 'Neq':
            theta = self.rewrite(node, part, premises[0])
        else:
            raise PartitionMismatch(f'no interpolant rule for {tag}')
        if self._verify_fv:
            stray = free_vars(theta) - part.common()
            if stray:
                raise NonCommonBoundUnrecoverable(
                    f'{theta} mentions {sorted(v.name for v in stray)} at '
                    f'a {tag} step')
        return theta

    def axiom(self, node, part):
        i, j = principal_index(node, 0), principal_index(node, 1)
        si, sj = part.delta[i], part.delta[j]
        if si == sj:
            return side_constant(si)
        left = i if si == 'L' else j
        return dual(node.conclusion.delta[left])

    def rewrite(self, node, part, above):
        """A rewrite whose disequality and rewritten formula may sit on
        different sides."""
        inner = self.visit(node.premises[0], above)
        i, j = principal_index(node, 0), principal_index(node, 1)
        atom_side, side = part.delta[i], part.delta[j]
        if atom_side == side:
            return inner
        src, dst = rewrite_sides(node.conclusion.delta[i], node.rule.side)
        if term_vars(dst) <= part.common():
            if atom_side == 'L':
                return conj(inner, EqUr(src, dst))
            return disj(inner, NeqUr(src, dst))
        return replace_term(inner, dst, src)

    def exists(self, node, part, above):
        """Witnesses private to the side without the instance are bound
        again, one at a time from the last."""
        theta = self.visit(node.premises[0], above)
        k = principal_index(node)
        side = part.delta[k]
        phi = node.conclusion.delta[k]
        chain = [phi]
        for w in node.rule.witness:
            instance, _ = instantiate(chain[-1], (w,))
            chain.append(instance)
        for level in reversed(range(len(node.rule.witness))):
            w = node.rule.witness[level]
            common = common_with(part, chain[level], side)
            if free_vars(theta) <= common:
                continue
            bound = witness_bound(part, w, side, common)
            names = all_names([theta]) | {v.name for v in common} | \
                all_names(list(node.conclusion.delta))
            x = fresh_var('x', w.ty, names)
            body = replace_term(theta, w, x)
            theta = ForallIn(x, bound, body) if side == 'L' else \
                ExistsIn(x, bound, body)
            logger.debug('bound the witness %s of %s in %s', w, phi, bound)
        return theta


def common_with(part, instance, side, left=frozenset(),
                right=frozenset()):
    """Variables common to both parts once instance joins the given side;
    left and right are extra variables each part is known to hold."""
    extra = free_vars(instance)
    left = left | part.free_vars('L') | \
        (extra if side == 'L' else frozenset())
    right = right | part.free_vars('R') | \
        (extra if side == 'R' else frozenset())
    return left & right


def witness_bound(part, w, side, common):
    """The leftmost context bound of w on the other side whose variables
    are common."""
    other = 'R' if side == 'L' else 'L'
    key = alpha_key(w)
    for atom, s in zip(part.sequent.theta, part.theta):
        if s not in (other, 'B') or alpha_key(atom.elem) != key:
            continue
        if free_vars(atom.container) <= common:
            return atom.container
    raise NonCommonBoundUnrecoverable(f'no common bound for {w}')


def interpolate(p, part, verify_fv=True):
    return Interpolator(verify_fv).interpolate(p, part)


def split_entailments(part, theta):
    """The two entailments θ must satisfy, as (premises, conclusions)
    pairs for the bounded oracle."""
    lowered = part.lowered()
    return ((lowered.atoms('L'), lowered.formulas('L') + [theta]),
            (lowered.atoms('R'), lowered.formulas('R') + [dual(theta)]))


__all__ = ['Interpolator', 'interpolate', 'split_entailments', 'conj', 'disj',
           'common_with', 'witness_bound', 'side_constant', 'PartitionedSequent']
