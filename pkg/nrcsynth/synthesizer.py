"""Implicit to explicit definitions.

An implicit definition φ(ī, ā, o) comes with a witness: a proof of
φ(ī, ā, o), φ(ī, ā′, o′) ⊢ o ≡ o′ where the auxiliaries and the output are
primed in the second copy. Extraction recurses on the type of o; sets go
through parameter collection, whose candidate family is then filtered by an
interpolant.
"""
from dataclasses import dataclass, field, replace
import logging

from nrcsynth.collection import CollectionGoal, check_clauses, collect
from nrcsynth.errors import (
    ExtractionError, PreflightTooLarge, WitnessShapeMismatch)
from nrcsynth.instances import (
    BigUnion, Comprehension, GetT, PairE, Singleton, UnitE, VarE, atoms_expr,
    compose, evaluate, expr_free_vars, expr_names, expr_size, satisfies)
from nrcsynth.interpolation import Interpolator, split_entailments
from nrcsynth.kernel.focused import check_focused
from nrcsynth.kernel.general import lower_tree
from nrcsynth.kernel.sequents import Sequent1, Sequent2, proof_size
from nrcsynth.kernel.sides import PartitionedSequent
from nrcsynth.oracle import Bounds, bounded_valid, enumerate_valuations
from nrcsynth.syntax import (
    Pair, ProdType, SetType, UnitType, UrType, Var, all_names, dual, equiv,
    free_vars, fresh_name, fresh_var, goal_formula, member_macro, proj, subst)
from nrcsynth.transforms.base import index_of
from nrcsynth.transforms.focusing import Focuser
from nrcsynth.transforms.goals import (
    equiv_to_biconditional, move_down, project_goal)
from nrcsynth.transforms.normalize import beta_free, beta_normalize
from nrcsynth.transforms.structural import and_project, substitute_many

logger = logging.getLogger(__name__)


def primed(v):
    return Var(v.name + "'", v.ty)


@dataclass(frozen=True)
class ImplicitDefinition:
    phi: object
    inputs: tuple
    auxiliaries: tuple
    output: Var
    witness: object = None

    def __post_init__(self):
        object.__setattr__(self, 'inputs', tuple(self.inputs))
        object.__setattr__(self, 'auxiliaries', tuple(self.auxiliaries))
        allowed = set(self.inputs) | set(self.auxiliaries) | {self.output}
        stray = free_vars(self.phi) - allowed
        if stray:
            raise WitnessShapeMismatch(
                f'{sorted(v.name for v in stray)} are not declared')
        names = {v.name for v in allowed}
        clash = {primed(v).name for v in self.renamed} & names
        if clash:
            raise WitnessShapeMismatch(f'{sorted(clash)} are taken by the '
                                       'primed copy')

    @property
    def renamed(self):
        return self.auxiliaries + (self.output,)

    @property
    def renaming(self):
        return {v: primed(v) for v in self.renamed}

    @property
    def primed_vars(self):
        return frozenset(self.renaming.values())

    @property
    def phi_primed(self):
        return subst(self.phi, self.renaming)

    def goal(self):
        return equiv(self.output, primed(self.output))

    def sequent(self):
        """φ(ī,ā,o) ∧ φ(ī,ā′,o′) ⊢ o ≡ o′, lowered."""
        return Sequent1((), (dual(self.phi), dual(self.phi_primed),
                             self.goal()))

    def two_sided_sequent(self):
        return Sequent2((), (self.phi, self.phi_primed), (self.goal(),))

    def names(self):
        return all_names([self.phi, self.phi_primed]) | \
            {v.name for v in self.inputs + self.renamed}

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class ExplicitDefinition:
    expr: object
    for_type: object
    provenance: tuple = field(default=())

    @property
    def size(self):
        return expr_size(self.expr)


def partition(seq, defn, goal=None, goal_side='R'):
    """Splits seq by copy: occurrences mentioning a primed variable go
    right, the rest left; the goal at index `goal` gets goal_side."""
    right = defn.primed_vars

    def side(x):
        return 'R' if free_vars(x) & right else 'L'

    delta = [side(f) for f in seq.delta]
    if goal is not None:
        delta[goal] = goal_side
    return PartitionedSequent(seq, tuple(side(a) for a in seq.theta),
                              tuple(delta))


class Synthesizer:
    """Extracts NRC expressions from witnessed implicit definitions."""

    def __init__(self, debug=False, max_atoms=2, max_set_card=2,
                 ceiling=10**6, size_ceiling=200000, verify_fv=True):
        self._debug = debug
        self._bounds = Bounds(max_atoms=max_atoms, max_set_card=max_set_card,
                              ceiling=ceiling)
        self._focuser = Focuser(size_ceiling)
        self._verify_fv = verify_fv
        self._interpolator = Interpolator(verify_fv=verify_fv)
        self._trace = []

    @property
    def debug(self):
        return self._debug

    @property
    def bounds(self):
        return self._bounds

    @property
    def verify_fv(self):
        return self._verify_fv

    def extract(self, defn):
        self._trace = []
        p = self.prepare(defn)
        expr = self.define(defn, p)
        stray = expr_free_vars(expr) - set(defn.inputs)
        if stray:
            raise ExtractionError(
                f'the definition mentions {sorted(v.name for v in stray)}')
        logger.info('extracted a definition of %s of size %d from a witness '
                    'of %d nodes', defn.output, expr_size(expr),
                    proof_size(p))
        return ExplicitDefinition(expr, defn.output.ty, tuple(self._trace))

    def prepare(self, defn):
        """The witness as a lowered one-sided proof of defn.sequent()."""
        p = defn.witness
        if p is None:
            raise WitnessShapeMismatch(f'no witness for {defn.output}')
        if isinstance(p.conclusion, Sequent2):
            if not p.conclusion.same_as(defn.two_sided_sequent()):
                raise WitnessShapeMismatch(
                    f'the witness proves {p.conclusion}')
            p = lower_tree(p)
        if not p.conclusion.same_as(defn.sequent()):
            raise WitnessShapeMismatch(f'the witness proves {p.conclusion}')
        return p

    def _note(self, stage, target, expr):
        self._trace.append({'stage': stage, 'target': str(target),
                            'size': expr_size(expr), 'expr': str(expr)})
        logger.debug('%s for %s: %s', stage, target, expr)

    def define(self, defn, p):
        ty = defn.output.ty
        if isinstance(ty, UnitType):
            expr = UnitE()
            self._note('unit', defn.output, expr)
        elif isinstance(ty, UrType):
            expr = self.define_ur(defn, p)
        elif isinstance(ty, ProdType):
            expr = self.define_product(defn, p)
        elif isinstance(ty, SetType):
            expr = self.define_set(defn, p)
        else:
            raise WitnessShapeMismatch(f'{ty} is not a nested type')
        return expr

    def define_ur(self, defn, p):
        """The unique atom satisfying the interpolant, among the atoms of
        the inputs."""
        o = defn.output
        k = index_of(p.conclusion, defn.goal())
        part = partition(p.conclusion, defn, k)
        theta = self._interpolator.interpolate(p, part)
        self._verify_interpolant(part, theta)
        x = fresh_var('x', o.ty, defn.names() | all_names([theta]))
        kappa = subst(theta, {o: x})
        self._require_inputs(kappa, defn, x)
        expr = GetT(Comprehension(x, atoms_expr(defn.inputs), kappa))
        self._check_get(defn, expr)
        self._note('ur-interpolant', o, expr)
        return expr

    def define_product(self, defn, p):
        """Splits o into ⟨o1, o2⟩ and defines each half with the other one
        as an auxiliary."""
        o = defn.output
        names = p.names() | defn.names()
        first = Var(fresh_name(o.name + '_fst', names), o.ty.left)
        second = Var(fresh_name(o.name + '_snd', names), o.ty.right)
        sigma = {o: Pair(first, second),
                 primed(o): Pair(primed(first), primed(second))}
        split = beta_normalize(substitute_many(p, sigma))
        phi = beta_free(subst(defn.phi, {o: Pair(first, second)}))
        k = index_of(split.conclusion, beta_free(subst(defn.goal(), sigma)))
        halves = []
        for side, (half, other) in ((1, (first, second)),
                                    (2, (second, first))):
            q = and_project(split, k, side)
            sub = ImplicitDefinition(phi, defn.inputs,
                                     defn.auxiliaries + (other,), half, q)
            halves.append(self.define(sub, self.prepare(sub)))
        expr = PairE(*halves)
        self._note('product', o, expr)
        return expr

    def define_set(self, defn, p):
        """{z ∈ E | κ(z)} where E collects candidates for the elements of o
        and κ is an interpolant for membership."""
        o = defn.output
        k = index_of(p.conclusion, defn.goal())
        z = fresh_var('z', o.ty.elem, p.names() | defn.names())
        moved = move_down(p, k, o, '', primed(o), z,
                          self._focuser.size_ceiling)
        self._check_stage('move_down', moved)
        goal = goal_formula(z, 'm', primed(o))
        km = index_of(moved.conclusion, goal)
        candidates = self.collect_answers(defn, moved, km, z, 'm', primed(o))
        part = partition(moved.conclusion, defn, km)
        theta = self._interpolator.interpolate(moved, part)
        self._verify_interpolant(part, theta)
        self._require_inputs(theta, defn, z)
        expr = Comprehension(z, candidates, theta)
        self._note('set-filter', o, expr)
        return expr

    def collect_answers(self, defn, p, k, elem, path, anchor):
        """An expression over the inputs containing elem, from a proof whose
        goal at k is ∃elem′ ∈_path anchor. elem ≡ elem′."""
        ty = elem.ty
        if isinstance(ty, UrType):
            expr = atoms_expr(defn.inputs)
        elif isinstance(ty, UnitType):
            expr = Singleton(UnitE())
        elif isinstance(ty, ProdType):
            expr = self._product_answers(defn, p, k, elem, path, anchor)
        else:
            expr = self._set_answers(defn, p, k, elem, path, anchor)
        self._note('answers', elem, expr)
        return expr

    def _product_answers(self, defn, p, k, elem, path, anchor):
        parts = []
        for side in (1, 2):
            q = project_goal(p, k, elem, path, anchor, side,
                             self._focuser.size_ceiling)
            component = proj(side, elem)
            sub_path = path + str(side)
            kq = index_of(q.conclusion,
                          goal_formula(component, sub_path, anchor))
            parts.append(self.collect_answers(defn, q, kq, component,
                                              sub_path, anchor))
        names = expr_names(parts[0]) | expr_names(parts[1]) | defn.names()
        a = fresh_var('a', elem.ty.left, names)
        b = fresh_var('b', elem.ty.right, names | {a.name})
        pair = Singleton(PairE(VarE(a), VarE(b)))
        return BigUnion(BigUnion(pair, b, parts[1]), a, parts[0])

    def _set_answers(self, defn, p, k, elem, path, anchor):
        names = p.names() | defn.names() | all_names([elem, anchor])
        z = fresh_var('z', elem.ty.elem, names)
        moved = move_down(p, k, elem, path, anchor, z,
                          self._focuser.size_ceiling)
        self._check_stage('move_down', moved)
        km = index_of(moved.conclusion, goal_formula(z, path + 'm', anchor))
        inner = self.collect_answers(defn, moved, km, z, path + 'm', anchor)
        a = fresh_var('a', elem.ty, names | expr_names(inner))
        q = equiv_to_biconditional(p, k, elem, path, anchor, a,
                                   self._focuser.size_ceiling)
        self._check_stage('equiv_to_biconditional', q)
        avoid = q.names() | {a.name}
        v = fresh_var('v', elem.ty.elem, avoid)
        y = fresh_var('y', elem.ty, avoid | {v.name})
        goal = CollectionGoal(path, anchor, a, member_macro(v, elem),
                              member_macro(v, y), v, y)
        kg = index_of(q.conclusion, goal.formula())
        part = partition(q.conclusion, defn, kg, 'G')
        result = collect(q, goal, part, self._verify_fv)
        self._oracle('collection', lambda: check_clauses(goal, part, result,
                                                         self._bounds))
        self._note('collect', elem, result.expr)
        return compose(result.expr, a, inner)

    # Contract checks.

    def _require_inputs(self, f, defn, *extra):
        stray = free_vars(f) - set(defn.inputs) - set(extra)
        if stray:
            raise ExtractionError(
                f'interpolant mentions {sorted(v.name for v in stray)}')

    def _check_stage(self, name, p):
        """Goal transforms promise focused proofs."""
        if self._debug:
            report = check_focused(p)
            if not report:
                raise ExtractionError(f'{name} produced a rejected proof: '
                                      f'{report.message}')

    def _check_get(self, defn, expr):
        """Evaluates expr strictly on every bounded model of φ, so a get of a
        non-singleton raises NonSingletonGet instead of falling back."""
        if not self._debug:
            return
        variables = defn.inputs + defn.auxiliaries + (defn.output,)
        try:
            valuations = enumerate_valuations(variables, self._bounds)
            for valuation in valuations:
                if satisfies(defn.phi, valuation):
                    evaluate(expr, valuation, strict=True)
        except PreflightTooLarge:
            logger.debug('skipped the get check beyond the bounds')

    def _verify_interpolant(self, part, theta):
        self._oracle('interpolant', lambda: [
            bounded_valid(atoms, formulas, self._bounds)
            for atoms, formulas in split_entailments(part, theta)])

    def _oracle(self, stage, verdicts):
        """Runs the bounded checks of a stage in debug mode."""
        if not self._debug:
            return
        try:
            verdicts = verdicts()
        except PreflightTooLarge:
            logger.debug('skipped the %s check beyond the bounds', stage)
            return
        for verdict in verdicts:
            if not verdict:
                raise ExtractionError(
                    f'{stage} fails on {verdict.valuation}')


def extract(defn, **kwargs):
    return Synthesizer(**kwargs).extract(defn)
