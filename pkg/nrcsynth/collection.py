"""Parameter collection.

From a focused proof of ΘL, ΘR ⊢ ΔL, ΔR, ∃y ∈_p r. ∀z∈c (λ(z) ↔ ρ(z, y))
build an NRC expression E and a formula θ over the common variables with

    ΘL ⊨ ΔL, θ ∨ {z∈c | λ(z)} ∈ E        ΘR ⊨ ΔR, ¬θ

The goal occurrence carries the side 'G' in the partition; λ belongs to
the left part and ρ, r to the right one.
"""
from dataclasses import dataclass
import logging

from nrcsynth.errors import (
    ForcedBackboneMissing, GoalShapeMismatch, NonCommonBoundUnrecoverable,
    NotFocused, PartitionMismatch)
from nrcsynth.instances import (
    BigUnion, Comprehension, EmptySet, Singleton, Union, evaluate,
    expr_free_vars, expr_names, expr_size, replace_expr, subst_expr,
    term_to_expr)
from nrcsynth.interpolation import (
    common_with, conj, disj, replace_term, side_constant, witness_bound)
from nrcsynth.kernel.focused import check_focused
from nrcsynth.kernel.rules import instantiate, node_alignments, rewrite_sides
from nrcsynth.kernel.sequents import Sequent1, loc, proof_size
from nrcsynth.kernel.sides import propagate_sides
from nrcsynth.oracle import bounded_valid
from nrcsynth.syntax import (
    BOT, EqUr, NeqUr, ExistsIn, ForallIn, Proj1, Proj2, SetType, Var,
    alpha_key, all_names, dual, formula_size, free_vars, fresh_var,
    goal_formula, iff_macro, subst, term_vars, type_at_path)
from nrcsynth.transforms.structural import principal_index

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CollectionGoal:
    """∃y ∈_path anchor. ∀z∈bound (lam(z) ↔ rho(z, y)).

    The path may end with projections, as goals projected on a product
    component do; y then stands for the projected position.
    """
    path: str
    anchor: object
    bound: object
    lam: object
    rho: object
    z: Var
    y: Var

    def __post_init__(self):
        if 'm' not in self.path:
            raise GoalShapeMismatch(f'{self.path!r} quantifies over nothing')
        if type_at_path(self.anchor.ty, self.path) != self.y.ty:
            raise GoalShapeMismatch(f'{self.y} does not sit at {self.path!r}')
        if self.bound.ty != SetType(self.z.ty):
            raise GoalShapeMismatch(f'{self.z} does not range over '
                                    f'{self.bound}')

    @property
    def left_vars(self):
        return (free_vars(self.lam) - {self.z}) | free_vars(self.bound)

    @property
    def right_vars(self):
        return ((free_vars(self.rho) - {self.z, self.y})
                | free_vars(self.anchor) | free_vars(self.bound))

    @property
    def common_vars(self):
        return self.left_vars & self.right_vars

    def formula(self):
        avoid = all_names([self.lam, self.rho, self.bound, self.z])

        def leaf(w, names):
            return ForallIn(self.z, self.bound,
                            iff_macro(self.lam, subst(self.rho, {self.y: w})))

        return goal_formula(self.y, self.path, self.anchor, stem=self.y.name,
                            leaf=leaf, avoid=avoid)

    def defined_set(self):
        """{z ∈ bound | lam(z)}, the set E has to contain."""
        return Comprehension(self.z, term_to_expr(self.bound), self.lam)


@dataclass(frozen=True)
class CollectionResult:
    expr: object
    theta: object

    @property
    def size(self):
        return expr_size(self.expr) + formula_size(self.theta)


def _union(a, b):
    if isinstance(a, EmptySet):
        return b
    if isinstance(b, EmptySet):
        return a
    return Union(a, b)


def _replace_in_expr(e, target, repl, avoid):
    """e with the term target replaced by the term repl."""
    if isinstance(target, Var):
        return subst_expr(e, {target: repl})
    tmp = fresh_var('u', target.ty, avoid | expr_names(e))
    return subst_expr(replace_expr(e, target, tmp), {tmp: repl})


class Collector:
    """Walks a focused proof carrying the goal and returns E and θ."""

    def __init__(self, verify_fv=True):
        self._verify_fv = verify_fv

    @property
    def verify_fv(self):
        return self._verify_fv

    def collect(self, p, goal, part):
        if not isinstance(p.conclusion, Sequent1):
            raise GoalShapeMismatch('collection reads one-sided proofs')
        report = check_focused(p)
        if not report:
            raise NotFocused(f'{report.condition} at {list(report.path)}: '
                             f'{report.message}')
        if part.sequent != p.conclusion:
            raise PartitionMismatch('the partition belongs to another sequent')
        goals = [k for k, s in enumerate(part.delta) if s == 'G']
        if len(goals) != 1:
            raise PartitionMismatch(f'{len(goals)} goal occurrences marked')
        (k,) = goals
        if alpha_key(p.conclusion.delta[k]) != alpha_key(goal.formula()):
            raise GoalShapeMismatch(
                f'{p.conclusion.delta[k]} is not {goal.formula()}')
        self._ty = goal.bound.ty
        result = self.visit(p, part, goal.left_vars, goal.right_vars)
        logger.debug('collected an expression of size %d and a formula of '
                     'size %d from %d nodes', expr_size(result.expr),
                     formula_size(result.theta), proof_size(p))
        return result

    def _empty(self):
        return EmptySet(SetType(self._ty))

    def _common(self, part, left, right):
        return (left | part.free_vars('L')) & (right | part.free_vars('R'))

    def visit(self, node, part, left, right):
        tag = node.tag
        side = None
        if node.rule.principal:
            side = part.delta[principal_index(node)]
        if side == 'G' and tag != 'Exists':
            raise GoalShapeMismatch(f'{tag} acts on the goal')
        if tag in ('Eq', 'Top'):
            result = CollectionResult(self._empty(), side_constant(side))
        elif tag == 'And':
            results = [self.visit(q, s, left, right) for q, s in
                       zip(node.premises, propagate_sides(node, part))]
            combine = disj if side == 'L' else conj
            result = CollectionResult(
                _union(results[0].expr, results[1].expr),
                combine(results[0].theta, results[1].theta))
        elif tag in ('Or', 'Forall', 'ProdBeta'):
            (above,) = propagate_sides(node, part)
            result = self.visit(node.premises[0], above, left, right)
        elif tag == 'ProdEta':
            result = self.product(node, part, left, right)
        elif tag == 'Exists' and side == 'G':
            result = self.goal_exists(node, part, left, right)
        elif tag == 'Exists':
            result = self.exists(node, part, left, right)
        elif tag == 'Neq':
            result = self.rewrite(node, part, left, right)
        else:
            raise GoalShapeMismatch(f'no collection rule for {tag}')
        if self._verify_fv:
            stray = (free_vars(result.theta) | expr_free_vars(result.expr)) \
                - self._common(part, left, right)
            if stray:
                raise NonCommonBoundUnrecoverable(
                    f'{sorted(v.name for v in stray)} escape at a {tag} step')
        return result

    def product(self, node, part, left, right):
        (x,), (x1, x2) = node.rule.witness, node.rule.fresh

        def split(names):
            return (names - {x}) | {x1, x2} if x in names else names

        (above,) = propagate_sides(node, part)
        inner = self.visit(node.premises[0], above, split(left), split(right))
        sigma = {x1: Proj1(x), x2: Proj2(x)}
        return CollectionResult(subst_expr(inner.expr, sigma),
                                subst(inner.theta, sigma))

    def rewrite(self, node, part, left, right):
        i, j = principal_index(node, 0), principal_index(node, 1)
        atom_side, side = part.delta[i], part.delta[j]
        if side == 'G':
            raise GoalShapeMismatch('a rewrite inside the goal')
        (above,) = propagate_sides(node, part)
        inner = self.visit(node.premises[0], above, left, right)
        if atom_side == side:
            return inner
        src, dst = rewrite_sides(node.conclusion.delta[i], node.rule.side)
        if term_vars(dst) <= self._common(part, left, right):
            if atom_side == 'L':
                return CollectionResult(inner.expr,
                                        conj(inner.theta, EqUr(src, dst)))
            return CollectionResult(inner.expr,
                                    disj(inner.theta, NeqUr(src, dst)))
        avoid = node.names()
        return CollectionResult(_replace_in_expr(inner.expr, dst, src, avoid),
                                replace_term(inner.theta, dst, src))

    def exists(self, node, part, left, right):
        """An instance outside the goal: a witness that is not common once
        the instance is gone is bound again by a common container."""
        (above,) = propagate_sides(node, part)
        result = self.visit(node.premises[0], above, left, right)
        k = principal_index(node)
        side = part.delta[k]
        phi = node.conclusion.delta[k]
        chain = [phi]
        for w in node.rule.witness:
            instance, _ = instantiate(chain[-1], (w,))
            chain.append(instance)
        theta, expr = result.theta, result.expr
        for level in reversed(range(len(node.rule.witness))):
            w = node.rule.witness[level]
            common = common_with(part, chain[level], side, left, right)
            if (free_vars(theta) | expr_free_vars(expr)) <= common:
                continue
            bound = witness_bound(part, w, side, common)
            names = node.names() | all_names([theta]) | expr_names(expr)
            x = fresh_var('x', w.ty, names)
            body = replace_term(theta, w, x)
            theta = ForallIn(x, bound, body) if side == 'L' else \
                ExistsIn(x, bound, body)
            expr = BigUnion(_replace_in_expr(expr, w, x, names), x,
                            term_to_expr(bound))
            logger.debug('bound the witness %s of %s in %s', w, phi, bound)
        return CollectionResult(expr, theta)

    # The goal.

    def goal_exists(self, node, part, left, right):
        (prem,) = node.premises
        (a,) = node_alignments(node)
        (above,) = propagate_sides(node, part)
        index = a.delta.index(('new', node.rule.principal[0], 0))
        instance = prem.conclusion.delta[index]
        if isinstance(instance, ExistsIn):
            return self.visit(prem, above, left, right)
        logger.debug('the goal is instantiated with %s',
                     ', '.join(map(str, node.rule.witness)))
        return self.complete(prem, above, index, left, right)

    def _closing(self, node, part):
        if node.tag not in ('Eq', 'Top'):
            return None
        side = part.delta[principal_index(node)]
        if side not in ('L', 'R'):
            raise GoalShapeMismatch(f'{node.tag} closes on the goal')
        return CollectionResult(self._empty(), side_constant(side))

    def _forced(self, node, part, tag, index):
        """The step the focused discipline forces on the instance at index,
        or a closing axiom elsewhere."""
        closed = self._closing(node, part)
        if closed is not None:
            return closed
        if node.tag != tag or principal_index(node) != index:
            raise ForcedBackboneMissing(
                f'expected {tag} on the goal instance, found {node.tag}')
        return None

    def complete(self, node, part, index, left, right):
        """∀x∈c (λ(x) ↔ ρ(x, w)) split into its two inclusions."""
        closed = self._forced(node, part, 'Forall', index)
        if closed is not None:
            return closed
        bound = node.conclusion.delta[index].bound
        (x,) = node.rule.fresh
        (a,) = node_alignments(node)
        (above,) = propagate_sides(node, part)
        body = a.delta.index(('new', loc('d', index), 0))
        conj_node = node.premises[0]
        closed = self._forced(conj_node, above, 'And', body)
        if closed is not None:
            return closed
        branches = []
        for b, (q, s, a2) in enumerate(zip(
                conj_node.premises, propagate_sides(conj_node, above),
                node_alignments(conj_node))):
            part_index = a2.delta.index(('new', loc('d', body), 0))
            branches.append(self.inclusion(q, s, part_index, b, left, right))
        (e1, t1), (e2, t2) = branches[1], branches[0]
        over = term_to_expr(bound)
        theta = conj(t1, t2)
        if theta != BOT:
            theta = ExistsIn(x, bound, theta)
        expr = Singleton(Comprehension(x, over, t2))
        inner = _union(e1, e2)
        if not isinstance(inner, EmptySet):
            expr = Union(expr, BigUnion(inner, x, over))
        return CollectionResult(expr, theta)

    def inclusion(self, node, part, index, branch, left, right):
        """One branch of the biconditional. Branch 0 is ¬λ ∨ ρ and branch 1
        is ¬ρ ∨ λ; λ goes to the left part and ρ to the right one."""
        closed = self._forced(node, part, 'Or', index)
        if closed is not None:
            return closed.expr, closed.theta
        (a,) = node_alignments(node)
        (above,) = propagate_sides(node, part)
        location = loc('d', index)
        first = a.delta.index(('new', location, 0))
        second = a.delta.index(('new', location, 1))
        delta = list(above.delta)
        delta[first], delta[second] = ('L', 'R') if branch == 0 else ('R', 'L')
        above = above.with_(delta=tuple(delta))
        result = self.visit(node.premises[0], above, left, right)
        return result.expr, result.theta


def collect(p, goal, part, verify_fv=True):
    return Collector(verify_fv).collect(p, goal, part)


def check_clauses(goal, part, result, bounds=None):
    """Bounded checks of ΘL ⊨ ΔL, θ ∨ Λ ∈ E and ΘR ⊨ ΔR, ¬θ for
    Λ = {z∈c | λ(z)}; returns the two verdicts."""
    defined = goal.defined_set()

    def contains(valuation):
        return evaluate(defined, valuation) in evaluate(result.expr, valuation)

    needed = expr_free_vars(defined) | expr_free_vars(result.expr)
    left = bounded_valid(part.atoms('L'), part.formulas('L') + [result.theta],
                         bounds, variables=needed, also=contains)
    right = bounded_valid(part.atoms('R'),
                          part.formulas('R') + [dual(result.theta)], bounds)
    return left, right
