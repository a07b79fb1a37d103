"""NRC expressions as Δ₀ input-output specifications, and the view
rewriting pipeline built on them.

An input-output specification of E(ī) is a formula Σ(ī, ā, o) that forces
o = E(ī) and is satisfied by the canonical auxiliaries. Closed
subexpressions get an auxiliary variable `_sub<k>` in post-order; the
bodies of big unions are unfolded into membership formulas in place.
"""
from dataclasses import dataclass, field
import logging

from nrcsynth.errors import NotCompositionFree, SizeBlowup, TypeMismatch
from nrcsynth.instances import (
    BigUnion, Comprehension, Difference, EmptySet, GetT, PairE, ProjE,
    Proj1E, Proj2E, Singleton, Union, UnitE, VarE, compose, evaluate,
    expand_comprehension, expr_children, expr_free_vars, expr_names,
    expr_size, expr_to_term, formula_to_expr, rebuild_expr, subst_expr,
    TRUE_SET)
from nrcsynth.synthesizer import ImplicitDefinition, extract
from nrcsynth.syntax import (
    And, BOT, ExistsIn, ForallIn, Or, ProdType, TOP, UNIT, UnitType, UrType,
    UnitVal, Var, EqUr, dual, equiv, free_vars, fresh_var, subst)

logger = logging.getLogger(__name__)


def _term(e):
    t = expr_to_term(e)
    if t is None and isinstance(e, GetT):
        raise NotCompositionFree(f'{e} has no input-output specification')
    return t


def _is_test(e):
    return e.ty == TRUE_SET and expr_to_term(e) is None


def is_composition_free(e):
    """Every big union ranges over a term or a Boolean test, every
    comprehension over a term."""
    if isinstance(e, Comprehension) and expr_to_term(e.over) is None:
        return False
    if (isinstance(e, BigUnion) and expr_to_term(e.over) is None
            and not _is_test(e.over)):
        return False
    return all(is_composition_free(c) for c in expr_children(e))


def _unit_body(s):
    return subst_expr(s.body, {s.var: UnitVal()})


class _Unfolder:
    """Membership, equivalence and bounded quantification over expressions.

    Every binder it introduces is fresh for the whole specification.
    """

    def __init__(self, avoid):
        self._names = set(avoid)

    def fresh(self, stem, ty):
        v = fresh_var(stem, ty, self._names)
        self._names.add(v.name)
        return v

    def component(self, e, side):
        if isinstance(e, PairE):
            return e.fst if side == 1 else e.snd
        if _term(e) is None:
            raise NotCompositionFree(f'cannot project {e}')
        return Proj1E(e) if side == 1 else Proj2E(e)

    def eq(self, a, b):
        ty = a.ty
        if ty != b.ty:
            raise TypeMismatch(f'{a} : {a.ty} against {b} : {b.ty}')
        if isinstance(ty, UnitType):
            return TOP
        if isinstance(ty, UrType):
            ta, tb = _term(a), _term(b)
            if ta is None or tb is None:
                raise NotCompositionFree(f'{a} = {b} is not over terms')
            return EqUr(ta, tb)
        ta, tb = expr_to_term(a), expr_to_term(b)
        if ta is not None and tb is not None:
            return equiv(ta, tb, frozenset(self._names))
        if isinstance(ty, ProdType):
            return And(self.eq(self.component(a, 1), self.component(b, 1)),
                       self.eq(self.component(a, 2), self.component(b, 2)))
        return And(self.forall_in(a, lambda u: self.member(u, b)),
                   self.forall_in(b, lambda u: self.member(u, a)))

    def member(self, e, s):
        """e ∈̂ s."""
        t = _term(s)
        if t is not None:
            y = self.fresh('y', s.ty.elem)
            return ExistsIn(y, t, self.eq(VarE(y), e))
        if isinstance(s, Singleton):
            return self.eq(e, s.e)
        if isinstance(s, EmptySet):
            return BOT
        if isinstance(s, Union):
            return Or(self.member(e, s.l), self.member(e, s.r))
        if isinstance(s, Difference):
            return And(self.member(e, s.l), dual(self.member(e, s.r)))
        if isinstance(s, BigUnion) and _is_test(s.over):
            return And(self.member(UnitE(), s.over),
                       self.member(e, _unit_body(s)))
        over = self._over(s)
        x = self.fresh(s.var.name, s.var.ty)
        if isinstance(s, BigUnion):
            body = subst_expr(s.body, {s.var: x})
            return ExistsIn(x, over, self.member(e, body))
        return ExistsIn(x, over, And(subst(s.filter, {s.var: x}),
                                     self.eq(VarE(x), e)))

    def forall_in(self, s, body):
        """∀u ∈ s. body(u), body taking an expression."""
        t = _term(s)
        if t is not None:
            u = self.fresh('u', s.ty.elem)
            return ForallIn(u, t, body(VarE(u)))
        if isinstance(s, Singleton):
            return body(s.e)
        if isinstance(s, EmptySet):
            return TOP
        if isinstance(s, Union):
            return And(self.forall_in(s.l, body), self.forall_in(s.r, body))
        if isinstance(s, Difference):
            return self.forall_in(
                s.l, lambda u: Or(self.member(u, s.r), body(u)))
        if isinstance(s, BigUnion) and _is_test(s.over):
            return Or(dual(self.member(UnitE(), s.over)),
                      self.forall_in(_unit_body(s), body))
        over = self._over(s)
        x = self.fresh(s.var.name, s.var.ty)
        if isinstance(s, BigUnion):
            return ForallIn(x, over, self.forall_in(
                subst_expr(s.body, {s.var: x}), body))
        return ForallIn(x, over, Or(dual(subst(s.filter, {s.var: x})),
                                    body(VarE(x))))

    def _over(self, s):
        t = _term(s.over)
        if t is None:
            raise NotCompositionFree(f'{s} ranges over {s.over}')
        return t


@dataclass(frozen=True)
class IoSpec:
    sigma: object
    inputs: tuple
    output: Var
    aux: tuple = field(default=())

    @property
    def aux_vars(self):
        return tuple(v for v, _ in self.aux)

    def canonical(self, valuation):
        """valuation extended by the value of every auxiliary."""
        for v, e in self.aux:
            valuation = valuation.bind(v, evaluate(e, valuation))
        return valuation


class _SpecBuilder:

    def __init__(self, inputs, start):
        self._inputs = frozenset(inputs)
        self._k = start
        self._defs = []

    @property
    def defs(self):
        return self._defs

    def lift(self, e):
        """e with every closed compound child replaced by an auxiliary."""
        if isinstance(e, BigUnion):
            return BigUnion(self.lift_child(e.body), e.var, e.over)
        children = expr_children(e)
        if not children:
            return e
        return rebuild_expr(e, [self.lift_child(c) for c in children])

    def lift_child(self, c):
        lifted = self.lift(c)
        if (expr_to_term(lifted) is not None or isinstance(lifted, EmptySet)
                or not expr_free_vars(c) <= self._inputs):
            return lifted
        aux = Var(f'_sub{self._k}', c.ty)
        self._k += 1
        self._defs.append((aux, lifted, c))
        return VarE(aux)


def io_spec(e, output=None, inputs=None, start=1, avoid=frozenset()):
    """An input-output specification of a composition-free expression."""
    if not is_composition_free(e):
        raise NotCompositionFree(f'{e} is not composition-free')
    fv = expr_free_vars(e)
    inputs = tuple(sorted(fv, key=lambda v: v.name)) if inputs is None \
        else tuple(inputs)
    if not fv <= set(inputs):
        raise TypeMismatch(f'{sorted(v.name for v in fv - set(inputs))} are '
                           f'not inputs')
    output = output or Var('o', e.ty)
    if output.ty != e.ty:
        raise TypeMismatch(f'{output} : {output.ty} specifies {e} : {e.ty}')
    names = (set(avoid) | expr_names(e) | {v.name for v in inputs}
             | {output.name})
    unfolder = _Unfolder(names)
    builder = _SpecBuilder(inputs, start)
    root = builder.lift(e)
    parts = [unfolder.eq(VarE(aux), lifted)
             for aux, lifted, _ in builder.defs]
    parts.append(unfolder.eq(VarE(output), root))
    sigma = parts[0]
    for part in parts[1:]:
        sigma = And(sigma, part)
    logger.debug('specified %s with %d auxiliaries', output,
                 len(builder.defs))
    return IoSpec(sigma, inputs, output,
                  tuple((aux, orig) for aux, _, orig in builder.defs))


# Normalization into composition-free form.

def _unit_test(x, y):
    """{()} when x ≡ y, as an expression."""
    return formula_to_expr(equiv(x, y))


class _Unnester:

    def __init__(self, size_ceiling):
        self._ceiling = size_ceiling
        self._names = set()

    def fresh(self, stem, ty):
        v = fresh_var(stem, ty, self._names)
        self._names.add(v.name)
        return v

    def run(self, e):
        e = expand_comprehension(e)
        self._names |= expr_names(e)
        out = self.visit(e)
        if expr_size(out) > self._ceiling:
            raise SizeBlowup(f'normalization exceeded {self._ceiling} nodes')
        return out

    def visit(self, e):
        children = expr_children(e)
        if children:
            e = rebuild_expr(e, [self.visit(c) for c in children])
        if isinstance(e, ProjE) and isinstance(e.of, PairE):
            return e.of.fst if e.side == 1 else e.of.snd
        if isinstance(e, BigUnion):
            return self.unnest(e)
        return e

    def unnest(self, e):
        over = e.over
        if expr_to_term(over) is not None or _is_test(over):
            return e
        if expr_size(e) > self._ceiling:
            raise SizeBlowup(f'normalization exceeded {self._ceiling} nodes')
        if isinstance(over, EmptySet):
            return EmptySet(e.ty)
        if isinstance(over, Singleton):
            return self.visit(compose(e.body, e.var, over.e))
        if isinstance(over, Union):
            return Union(self.unnest(BigUnion(e.body, e.var, over.l)),
                         self.unnest(BigUnion(e.body, e.var, over.r)))
        if isinstance(over, BigUnion):
            y = self.fresh(over.var.name, over.var.ty)
            inner = self.unnest(BigUnion(e.body, e.var,
                                         subst_expr(over.body, {over.var: y})))
            return self.unnest(BigUnion(inner, y, over.over))
        if isinstance(over, Difference):
            # x ∈ l \ r: keep the body when no element of r equals x.
            y = self.fresh('y', e.var.ty)
            w = self.fresh('w', UNIT)
            hit = self.unnest(BigUnion(_unit_test(e.var, y), y, over.r))
            keep = Difference(Singleton(UnitE()), hit)
            return self.unnest(BigUnion(BigUnion(e.body, w, keep), e.var,
                                        over.l))
        raise NotCompositionFree(f'{e} ranges over {over}')


def normalize_composition_free(e, size_ceiling=100000):
    """An equivalent expression whose big unions range over terms."""
    if is_composition_free(e):
        return e
    out = _Unnester(size_ceiling).run(e)
    logger.debug('unnested %d nodes into %d', expr_size(e), expr_size(out))
    return out


# Determinacy problems.

@dataclass(frozen=True)
class DeterminacyProblem:
    views: dict
    query: object
    base: tuple
    constraints: object = None
    output: Var = None

    def view_vars(self):
        return tuple(Var(name, e.ty) for name, e in self.views.items())

    def query_var(self):
        return self.output or Var('q', self.query.ty)

    def view_values(self, valuation):
        """The view extension of a base instance."""
        for v in self.view_vars():
            valuation = valuation.bind(v, evaluate(self.views[v.name],
                                                   valuation))
        return valuation


def assemble_determinacy(problem, size_ceiling=100000):
    """The implicit definition of the query in terms of the views."""
    base = tuple(problem.base)
    avoid = {v.name for v in base} | set(problem.views) \
        | {problem.query_var().name}
    specs = []
    start = 1
    targets = list(zip(problem.view_vars(),
                       [problem.views[name] for name in problem.views]))
    targets.append((problem.query_var(), problem.query))
    for out, e in targets:
        e = normalize_composition_free(e, size_ceiling)
        spec = io_spec(e, output=out, inputs=base, start=start, avoid=avoid)
        start += len(spec.aux)
        specs.append(spec)
    phi = specs[0].sigma
    for spec in specs[1:]:
        phi = And(phi, spec.sigma)
    if problem.constraints is not None:
        stray = free_vars(problem.constraints) - set(base)
        if stray:
            raise TypeMismatch(f'constraints mention '
                               f'{sorted(v.name for v in stray)}')
        phi = And(phi, problem.constraints)
    aux = base + tuple(v for spec in specs for v in spec.aux_vars)
    return ImplicitDefinition(phi, problem.view_vars(), aux,
                              problem.query_var())


def rewrite_views(problem, witness, **kwargs):
    """Rewrites the query over the views from a determinacy witness."""
    defn = assemble_determinacy(problem).with_(witness=witness)
    return extract(defn, **kwargs)
