"""Nested values, instances, NRC expressions, evaluation and Δ₀ satisfaction."""
import logging
from dataclasses import dataclass

from nrcsynth.errors import (
    NoDefaultAtom, NonSingletonGet, TypeMismatch, UnboundVariable)
from nrcsynth.syntax import (
    UR, UNIT, UrType, UnitType, ProdType, SetType, Var, UnitVal, Pair,
    Projection, EqUr, NeqUr, Top, Bot, And, Or, ForallIn, ExistsIn,
    Quantifier, MembershipAtom, Term, free_vars, fresh_var, all_names, subst,
    term_vars, formula_size, proj, replace_all)

logger = logging.getLogger(__name__)


# Values.

@dataclass(frozen=True)
class Atom:
    label: str

    def __str__(self):
        return self.label if self.label.isdigit() else f'atom({self.label})'


@dataclass(frozen=True)
class UnitV:

    def __str__(self):
        return 'unit'


@dataclass(frozen=True)
class PairV:
    fst: object
    snd: object

    def __str__(self):
        return f'<{self.fst},{self.snd}>'


@dataclass(frozen=True)
class SetV:
    elems: tuple = ()

    def __post_init__(self):
        unique = {value_key(v): v for v in self.elems}
        ordered = tuple(unique[k] for k in sorted(unique))
        object.__setattr__(self, 'elems', ordered)

    def __contains__(self, v):
        return v in self.elems

    def __iter__(self):
        return iter(self.elems)

    def __len__(self):
        return len(self.elems)

    def __str__(self):
        return '[' + ','.join(str(v) for v in self.elems) + ']'


def value_key(v):
    """Canonical total order: atoms by label, then structure."""
    if isinstance(v, Atom):
        if v.label.isdigit():
            return (0, 0, int(v.label), v.label)
        return (0, 1, 0, v.label)
    if isinstance(v, UnitV):
        return (1,)
    if isinstance(v, PairV):
        return (2, value_key(v.fst), value_key(v.snd))
    return (3, len(v.elems), tuple(value_key(e) for e in v.elems))


def format_value(v):
    return str(v)


def value_atoms(v):
    if isinstance(v, Atom):
        return {v}
    if isinstance(v, PairV):
        return value_atoms(v.fst) | value_atoms(v.snd)
    if isinstance(v, SetV):
        result = set()
        for e in v.elems:
            result |= value_atoms(e)
        return result
    return set()


def has_type(v, ty):
    if isinstance(ty, UrType):
        return isinstance(v, Atom)
    if isinstance(ty, UnitType):
        return isinstance(v, UnitV)
    if isinstance(ty, ProdType):
        return (isinstance(v, PairV) and has_type(v.fst, ty.left)
                and has_type(v.snd, ty.right))
    return isinstance(v, SetV) and all(has_type(e, ty.elem) for e in v.elems)


def atom_order(atoms):
    return sorted(atoms, key=value_key)


class Valuation:
    """Typed bindings together with the universe of atoms."""

    def __init__(self, bindings=None, universe=None):
        self._bindings = dict(bindings or {})
        if universe is None:
            universe = set()
            for v in self._bindings.values():
                universe |= value_atoms(v)
        self._universe = frozenset(
            a if isinstance(a, Atom) else Atom(str(a)) for a in universe)

    @property
    def universe(self):
        return self._universe

    @property
    def bindings(self):
        return dict(self._bindings)

    def lookup(self, var):
        try:
            return self._bindings[var]
        except KeyError:
            raise UnboundVariable(f'{var} : {var.ty} is not bound')

    def bind(self, var, value):
        bindings = dict(self._bindings)
        bindings[var] = value
        return Valuation(bindings, self._universe)

    def restrict(self, variables):
        return Valuation({v: self._bindings[v] for v in variables
                          if v in self._bindings}, self._universe)

    def by_name(self, name):
        for var in self._bindings:
            if var.name == name:
                return var
        raise UnboundVariable(f'{name} is not bound')

    def __contains__(self, var):
        return var in self._bindings

    def __eq__(self, other):
        return (isinstance(other, Valuation)
                and self._bindings == other._bindings
                and self._universe == other._universe)

    def __repr__(self):
        inner = ', '.join(f'{k.name} = {v}' for k, v in sorted(
            self._bindings.items(), key=lambda kv: kv[0].name))
        return '{' + inner + '}'


class Instance(Valuation):
    """A valuation whose values are checked against their types and universe."""

    def __init__(self, bindings=None, universe=None):
        super().__init__(bindings, universe)
        for var, value in self._bindings.items():
            if not has_type(value, var.ty):
                raise TypeMismatch(f'{value} is not a value of {var.ty}')
            stray = value_atoms(value) - self._universe
            if stray:
                raise TypeMismatch(
                    f'atoms {sorted(map(str, stray))} outside the universe')


# NRC expressions.

class NrcExpr:
    pass


@dataclass(frozen=True)
class VarE(NrcExpr):
    var: Var

    @property
    def ty(self):
        return self.var.ty

    def __str__(self):
        return self.var.name


@dataclass(frozen=True)
class UnitE(NrcExpr):

    @property
    def ty(self):
        return UNIT

    def __str__(self):
        return '()'


@dataclass(frozen=True)
class PairE(NrcExpr):
    fst: NrcExpr
    snd: NrcExpr

    @property
    def ty(self):
        return ProdType(self.fst.ty, self.snd.ty)

    def __str__(self):
        return f'<{self.fst},{self.snd}>'


@dataclass(frozen=True)
class ProjE(NrcExpr):
    of: NrcExpr

    def __post_init__(self):
        if not isinstance(self.of.ty, ProdType):
            raise TypeMismatch(f'projection of {self.of} : {self.of.ty}')

    @property
    def ty(self):
        return self.of.ty.left if self.side == 1 else self.of.ty.right

    def __str__(self):
        return f'pi{self.side}({self.of})'


@dataclass(frozen=True)
class Proj1E(ProjE):
    side = 1


@dataclass(frozen=True)
class Proj2E(ProjE):
    side = 2


@dataclass(frozen=True)
class Singleton(NrcExpr):
    e: NrcExpr

    @property
    def ty(self):
        return SetType(self.e.ty)

    def __str__(self):
        return '{' + str(self.e) + '}'


@dataclass(frozen=True)
class GetT(NrcExpr):
    e: NrcExpr

    def __post_init__(self):
        if not isinstance(self.e.ty, SetType):
            raise TypeMismatch(f'get of {self.e} : {self.e.ty}')

    @property
    def ty(self):
        return self.e.ty.elem

    def __str__(self):
        return f'get({self.e})'


@dataclass(frozen=True)
class BigUnion(NrcExpr):
    body: NrcExpr
    var: Var
    over: NrcExpr

    def __post_init__(self):
        if self.over.ty != SetType(self.var.ty):
            raise TypeMismatch(f'{self.var} ranges over {self.over}')
        if not isinstance(self.body.ty, SetType):
            raise TypeMismatch(f'big union body {self.body} : {self.body.ty}')

    @property
    def ty(self):
        return self.body.ty

    def __str__(self):
        return f'bigunion({self.body} | {self.var} in {self.over})'


@dataclass(frozen=True)
class EmptySet(NrcExpr):
    set_ty: SetType

    def __post_init__(self):
        if not isinstance(self.set_ty, SetType):
            raise TypeMismatch(f'empty set at {self.set_ty}')

    @property
    def ty(self):
        return self.set_ty

    def __str__(self):
        return f'empty({self.set_ty})'


@dataclass(frozen=True)
class _SetBinary(NrcExpr):
    l: NrcExpr
    r: NrcExpr

    def __post_init__(self):
        if not isinstance(self.l.ty, SetType) or self.l.ty != self.r.ty:
            raise TypeMismatch(f'{self.l} : {self.l.ty} with {self.r} : '
                               f'{self.r.ty}')

    @property
    def ty(self):
        return self.l.ty

    def __str__(self):
        return f'{self.keyword}({self.l}, {self.r})'


@dataclass(frozen=True)
class Union(_SetBinary):
    keyword = 'union'


@dataclass(frozen=True)
class Difference(_SetBinary):
    keyword = 'diff'


@dataclass(frozen=True)
class Comprehension(NrcExpr):
    var: Var
    over: NrcExpr
    filter: object

    def __post_init__(self):
        if self.over.ty != SetType(self.var.ty):
            raise TypeMismatch(f'{self.var} ranges over {self.over}')

    @property
    def ty(self):
        return self.over.ty

    def __str__(self):
        return '{' + f'{self.var} in {self.over} | {self.filter}' + '}'


def expr_type(e):
    return e.ty


def expr_children(e):
    if isinstance(e, PairE):
        return (e.fst, e.snd)
    if isinstance(e, (ProjE,)):
        return (e.of,)
    if isinstance(e, (Singleton, GetT)):
        return (e.e,)
    if isinstance(e, BigUnion):
        return (e.body, e.over)
    if isinstance(e, _SetBinary):
        return (e.l, e.r)
    if isinstance(e, Comprehension):
        return (e.over,)
    return ()


def expr_size(e):
    size = 1 + sum(expr_size(c) for c in expr_children(e))
    if isinstance(e, Comprehension):
        size += formula_size(e.filter)
    return size


def expr_free_vars(e):
    if isinstance(e, VarE):
        return frozenset([e.var])
    if isinstance(e, BigUnion):
        return (expr_free_vars(e.body) - {e.var}) | expr_free_vars(e.over)
    if isinstance(e, Comprehension):
        return (expr_free_vars(e.over)
                | (free_vars(e.filter) - {e.var}))
    result = frozenset()
    for c in expr_children(e):
        result |= expr_free_vars(c)
    return result


def expr_names(e):
    names = {v.name for v in expr_free_vars(e)}
    if isinstance(e, (BigUnion, Comprehension)):
        names.add(e.var.name)
    if isinstance(e, Comprehension):
        names |= all_names(e.filter)
    for c in expr_children(e):
        names |= expr_names(c)
    return names


def term_to_expr(t):
    if isinstance(t, Var):
        return VarE(t)
    if isinstance(t, UnitVal):
        return UnitE()
    if isinstance(t, Pair):
        return PairE(term_to_expr(t.fst), term_to_expr(t.snd))
    inner = term_to_expr(t.of)
    return Proj1E(inner) if t.side == 1 else Proj2E(inner)


def expr_to_term(e):
    """The term an expression denotes, or None if it uses set operations."""
    if isinstance(e, VarE):
        return e.var
    if isinstance(e, UnitE):
        return UnitVal()
    if isinstance(e, PairE):
        fst, snd = expr_to_term(e.fst), expr_to_term(e.snd)
        if fst is None or snd is None:
            return None
        return Pair(fst, snd)
    if isinstance(e, ProjE):
        inner = expr_to_term(e.of)
        if inner is None:
            return None
        return proj(e.side, inner)
    return None


# Evaluation.

def _default(ty, valuation):
    if isinstance(ty, SetType):
        return SetV()
    if isinstance(ty, UnitType):
        return UnitV()
    if isinstance(ty, ProdType):
        return PairV(_default(ty.left, valuation),
                     _default(ty.right, valuation))
    if not valuation.universe:
        raise NoDefaultAtom('get at ur needs a default but the universe '
                            'is empty')
    return atom_order(valuation.universe)[0]


def eval_term(t, valuation):
    if isinstance(t, Var):
        return valuation.lookup(t)
    if isinstance(t, UnitVal):
        return UnitV()
    if isinstance(t, Pair):
        return PairV(eval_term(t.fst, valuation), eval_term(t.snd, valuation))
    v = eval_term(t.of, valuation)
    return v.fst if t.side == 1 else v.snd


def evaluate(e, valuation, strict=False):
    """The value of e. A get of a non-singleton yields the default value of
    its type, or raises NonSingletonGet when strict."""
    if isinstance(e, VarE):
        return valuation.lookup(e.var)
    if isinstance(e, UnitE):
        return UnitV()
    if isinstance(e, PairE):
        return PairV(evaluate(e.fst, valuation, strict),
                     evaluate(e.snd, valuation, strict))
    if isinstance(e, ProjE):
        v = evaluate(e.of, valuation, strict)
        return v.fst if e.side == 1 else v.snd
    if isinstance(e, Singleton):
        return SetV((evaluate(e.e, valuation, strict),))
    if isinstance(e, GetT):
        v = evaluate(e.e, valuation, strict)
        if len(v) == 1:
            return v.elems[0]
        if strict:
            raise NonSingletonGet(e, len(v), valuation)
        logger.debug('get applied to %d elements, using the default', len(v))
        return _default(e.ty, valuation)
    if isinstance(e, BigUnion):
        elems = []
        for x in evaluate(e.over, valuation, strict):
            elems.extend(evaluate(e.body, valuation.bind(e.var, x), strict))
        return SetV(tuple(elems))
    if isinstance(e, EmptySet):
        return SetV()
    if isinstance(e, Union):
        return SetV(evaluate(e.l, valuation, strict).elems
                    + evaluate(e.r, valuation, strict).elems)
    if isinstance(e, Difference):
        right = evaluate(e.r, valuation, strict)
        return SetV(tuple(x for x in evaluate(e.l, valuation, strict)
                          if x not in right))
    if isinstance(e, Comprehension):
        return SetV(tuple(
            x for x in evaluate(e.over, valuation, strict)
            if satisfies(e.filter, valuation.bind(e.var, x))))
    raise TypeError(f'not an expression: {e!r}')


# Alias kept for the command line and the public surface.
eval_expr = evaluate


def satisfies(f, valuation):
    if isinstance(f, MembershipAtom):
        return (eval_term(f.elem, valuation)
                in eval_term(f.container, valuation))
    if isinstance(f, EqUr):
        return eval_term(f.l, valuation) == eval_term(f.r, valuation)
    if isinstance(f, NeqUr):
        return eval_term(f.l, valuation) != eval_term(f.r, valuation)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, And):
        return satisfies(f.l, valuation) and satisfies(f.r, valuation)
    if isinstance(f, Or):
        return satisfies(f.l, valuation) or satisfies(f.r, valuation)
    domain = eval_term(f.bound, valuation)
    if isinstance(f, ForallIn):
        return all(satisfies(f.body, valuation.bind(f.var, x))
                   for x in domain)
    return any(satisfies(f.body, valuation.bind(f.var, x)) for x in domain)


# Derived constructions.

TRUE_SET = SetType(UNIT)


def _truth():
    return Singleton(UnitE())


def _falsity():
    return EmptySet(TRUE_SET)


def _negate(e):
    return Difference(_truth(), e)


def formula_to_expr(f, avoid=frozenset()):
    """A Δ₀ formula as a Boolean expression of type Set(Unit)."""
    names = set(avoid) | all_names(f)
    if isinstance(f, Top):
        return _truth()
    if isinstance(f, Bot):
        return _falsity()
    if isinstance(f, (EqUr, NeqUr)):
        # {()} when the atoms differ: bigunion({()} | _ in {t} \ {u}).
        w = fresh_var('w', UR, names)
        differ = BigUnion(_truth(), w,
                          Difference(Singleton(term_to_expr(f.l)),
                                     Singleton(term_to_expr(f.r))))
        return differ if isinstance(f, NeqUr) else _negate(differ)
    if isinstance(f, And):
        w = fresh_var('w', UNIT, names)
        return BigUnion(formula_to_expr(f.r, names), w,
                        formula_to_expr(f.l, names))
    if isinstance(f, Or):
        return Union(formula_to_expr(f.l, names), formula_to_expr(f.r, names))
    if isinstance(f, ExistsIn):
        return BigUnion(formula_to_expr(f.body, names), f.var,
                        term_to_expr(f.bound))
    counter = BigUnion(_negate(formula_to_expr(f.body, names)), f.var,
                       term_to_expr(f.bound))
    return _negate(counter)


cond = formula_to_expr


def expand_comprehension(e):
    """Rewrites every comprehension into core constructors."""
    if isinstance(e, Comprehension):
        over = expand_comprehension(e.over)
        names = expr_names(e) | {e.var.name}
        w = fresh_var('w', UNIT, names)
        test = formula_to_expr(e.filter, names)
        body = BigUnion(Singleton(VarE(e.var)), w, test)
        return BigUnion(body, e.var, over)
    children = expr_children(e)
    if not children:
        return e
    new = [expand_comprehension(c) for c in children]
    return rebuild_expr(e, new)


def rebuild_expr(e, children):
    if isinstance(e, PairE):
        return PairE(*children)
    if isinstance(e, ProjE):
        return type(e)(children[0])
    if isinstance(e, (Singleton, GetT)):
        return type(e)(children[0])
    if isinstance(e, BigUnion):
        return BigUnion(children[0], e.var, children[1])
    if isinstance(e, _SetBinary):
        return type(e)(children[0], children[1])
    if isinstance(e, Comprehension):
        return Comprehension(e.var, children[0], e.filter)
    return e


def atoms_expr(variables):
    """The set of atoms occurring anywhere inside the given inputs."""
    parts = []
    for v in variables:
        part = _atoms_of(VarE(v), v.ty, {v.name for v in variables})
        if part is not None:
            parts.append(part)
    if not parts:
        return EmptySet(SetType(UR))
    result = parts[0]
    for part in parts[1:]:
        result = Union(result, part)
    return result


def _atoms_of(e, ty, avoid):
    if isinstance(ty, UrType):
        return Singleton(e)
    if isinstance(ty, UnitType):
        return None
    if isinstance(ty, ProdType):
        left = _atoms_of(Proj1E(e), ty.left, avoid)
        right = _atoms_of(Proj2E(e), ty.right, avoid)
        if left is None or right is None:
            return left or right
        return Union(left, right)
    x = fresh_var('x', ty.elem, avoid)
    inner = _atoms_of(VarE(x), ty.elem, avoid | {x.name})
    if inner is None:
        return None
    return BigUnion(inner, x, e)


def subst_expr(e, mapping):
    """Capture-avoiding substitution of variables by terms inside e."""
    mapping = {v: t for v, t in mapping.items() if v != t}
    if not mapping:
        return e
    if isinstance(e, VarE):
        if e.var in mapping:
            return term_to_expr(mapping[e.var])
        return e
    if isinstance(e, (BigUnion, Comprehension)):
        incoming = set()
        for t in mapping.values():
            incoming |= {w.name for w in term_vars(t)}
        var = e.var
        inner = {v: t for v, t in mapping.items() if v != var}
        over = subst_expr(e.over, mapping)
        if var.name in incoming:
            new = fresh_var(var.name, var.ty,
                            incoming | expr_names(e)
                            | {v.name for v in mapping})
            e = _rename_expr_binder(e, new)
            var = new
        if isinstance(e, BigUnion):
            return BigUnion(subst_expr(e.body, inner), var, over)
        return Comprehension(var, over, subst(e.filter, inner))
    children = expr_children(e)
    if not children:
        return e
    return rebuild_expr(e, [subst_expr(c, mapping) for c in children])


def _rename_expr_binder(e, new):
    if isinstance(e, BigUnion):
        return BigUnion(subst_expr(e.body, {e.var: new}), new, e.over)
    return Comprehension(new, e.over, subst(e.filter, {e.var: new}))


def replace_expr(e, target, repl):
    """Replaces every occurrence of the term target (as an expression) by
    the variable repl."""
    target_e = term_to_expr(target)
    if e == target_e:
        return VarE(repl)
    if isinstance(e, (BigUnion, Comprehension)):
        over = replace_expr(e.over, target, repl)
        if isinstance(e, BigUnion):
            body = (e.body if e.var in term_vars(target)
                    else replace_expr(e.body, target, repl))
            return BigUnion(body, e.var, over)
        filt = (e.filter if e.var in term_vars(target)
                else replace_all(e.filter, target, repl))
        return Comprehension(e.var, over, filt)
    children = expr_children(e)
    if not children:
        return e
    return rebuild_expr(e, [replace_expr(c, target, repl) for c in children])


def compose(e, x, f):
    """E(F): substitutes the expression f for the variable x in e."""
    if f.ty != x.ty:
        raise TypeMismatch(f'{x} : {x.ty} composed with {f} : {f.ty}')
    term = expr_to_term(f)
    if term is not None:
        return subst_expr(e, {x: term})
    return _compose(e, x, f)


def _compose(e, x, f):
    if x not in expr_free_vars(e):
        return e
    if isinstance(e, VarE):
        return f
    if isinstance(e, Comprehension) and x in free_vars(e.filter):
        # Formulas only take terms; bind x to f through a big union.
        return BigUnion(e, x, Singleton(f))
    if isinstance(e, (BigUnion, Comprehension)):
        avoid = {v.name for v in expr_free_vars(f)}
        if e.var == x:
            over = _compose(e.over, x, f)
            return rebuild_expr(e, [e.body, over] if isinstance(e, BigUnion)
                            else [over])
        if e.var.name in avoid:
            new = fresh_var(e.var.name, e.var.ty,
                            avoid | expr_names(e) | {x.name})
            e = _rename_expr_binder(e, new)
        if isinstance(e, BigUnion):
            return BigUnion(_compose(e.body, x, f), e.var,
                            _compose(e.over, x, f))
        return Comprehension(e.var, _compose(e.over, x, f), e.filter)
    children = expr_children(e)
    new = [_compose(c, x, f) for c in children]
    return rebuild_expr(e, new)


__all__ = [
    'Atom', 'UnitV', 'PairV', 'SetV', 'Valuation', 'Instance', 'VarE',
    'UnitE', 'PairE', 'Proj1E', 'Proj2E', 'Singleton', 'GetT', 'BigUnion',
    'EmptySet', 'Union', 'Difference', 'Comprehension', 'evaluate',
    'satisfies', 'atoms_expr', 'compose', 'formula_to_expr', 'cond',
    'expand_comprehension', 'term_to_expr', 'expr_free_vars', 'subst_expr',
    'value_key', 'format_value', 'Term', 'Quantifier', 'Projection']
