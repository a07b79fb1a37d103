"""Nested types, terms, Δ₀ formulas and the operations every other module
builds on: substitution, dualization, free variables and the macros."""
import re
from dataclasses import dataclass
from enum import Enum

from nrcsynth.errors import (
    TypeMismatch, VariableCapture, InvalidPosition, InvalidPath,
    InconsistentTyping)


# Types.

class NestedType:
    pass


@dataclass(frozen=True)
class UrType(NestedType):

    def __str__(self):
        return 'ur'


@dataclass(frozen=True)
class UnitType(NestedType):

    def __str__(self):
        return 'unit'


@dataclass(frozen=True)
class ProdType(NestedType):
    left: NestedType
    right: NestedType

    def __str__(self):
        return f'({self.left} * {self.right})'


@dataclass(frozen=True)
class SetType(NestedType):
    elem: NestedType

    def __str__(self):
        return f'set({self.elem})'


UR = UrType()
UNIT = UnitType()


def product_type(*tys):
    """Right-nested encoding of an n-ary product."""
    assert len(tys) > 0
    if len(tys) == 1:
        return tys[0]
    return ProdType(tys[0], product_type(*tys[1:]))


def type_depth(ty):
    if isinstance(ty, SetType):
        return 1 + type_depth(ty.elem)
    if isinstance(ty, ProdType):
        return max(type_depth(ty.left), type_depth(ty.right))
    return 0


# Terms.

class Term:
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str
    ty: NestedType

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class UnitVal(Term):

    @property
    def ty(self):
        return UNIT

    def __str__(self):
        return '()'


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    snd: Term

    @property
    def ty(self):
        return ProdType(self.fst.ty, self.snd.ty)

    def __str__(self):
        return f'<{self.fst},{self.snd}>'


@dataclass(frozen=True)
class Projection(Term):
    of: Term

    def __post_init__(self):
        if not isinstance(self.of.ty, ProdType):
            raise TypeMismatch(
                f'projection of {self.of} which has type {self.of.ty}')

    @property
    def ty(self):
        return self.of.ty.left if self.side == 1 else self.of.ty.right

    def __str__(self):
        return f'pi{self.side}({self.of})'


@dataclass(frozen=True)
class Proj1(Projection):
    side = 1


@dataclass(frozen=True)
class Proj2(Projection):
    side = 2


def proj(side, t):
    """Projection that contracts a pair on the spot."""
    assert side in (1, 2)
    if isinstance(t, Pair):
        return t.fst if side == 1 else t.snd
    return Proj1(t) if side == 1 else Proj2(t)


def tuple_term(*terms):
    assert len(terms) > 0
    if len(terms) == 1:
        return terms[0]
    return Pair(terms[0], tuple_term(*terms[1:]))


def beta_reduce_term(t):
    if isinstance(t, Pair):
        return Pair(beta_reduce_term(t.fst), beta_reduce_term(t.snd))
    if isinstance(t, Projection):
        return proj(t.side, beta_reduce_term(t.of))
    return t


def term_children(t):
    if isinstance(t, Pair):
        return (t.fst, t.snd)
    if isinstance(t, Projection):
        return (t.of,)
    return ()


def rebuild_term(t, children):
    if isinstance(t, Pair):
        return Pair(*children)
    if isinstance(t, Projection):
        return type(t)(children[0])
    return t


def term_vars(t):
    if isinstance(t, Var):
        return frozenset([t])
    result = frozenset()
    for c in term_children(t):
        result |= term_vars(c)
    return result


def replace_in_term(t, target, repl):
    if t == target:
        return repl
    children = term_children(t)
    if not children:
        return t
    return rebuild_term(t, [replace_in_term(c, target, repl) for c in children])


def subst_term(t, mapping):
    if isinstance(t, Var):
        return mapping.get(t, t)
    children = term_children(t)
    if not children:
        return t
    return rebuild_term(t, [subst_term(c, mapping) for c in children])


# Formulas.

class Formula:
    pass


@dataclass(frozen=True)
class EqUr(Formula):
    l: Term
    r: Term

    def __post_init__(self):
        _check_ur(self.l, self.r)

    def __str__(self):
        return f'{self.l} = {self.r}'


@dataclass(frozen=True)
class NeqUr(Formula):
    l: Term
    r: Term

    def __post_init__(self):
        _check_ur(self.l, self.r)

    def __str__(self):
        return f'{self.l} != {self.r}'


@dataclass(frozen=True)
class Top(Formula):

    def __str__(self):
        return 'true'


@dataclass(frozen=True)
class Bot(Formula):

    def __str__(self):
        return 'false'


@dataclass(frozen=True)
class And(Formula):
    l: Formula
    r: Formula

    def __str__(self):
        return f'and({self.l}, {self.r})'


@dataclass(frozen=True)
class Or(Formula):
    l: Formula
    r: Formula

    def __str__(self):
        return f'or({self.l}, {self.r})'


@dataclass(frozen=True)
class Quantifier(Formula):
    var: Var
    bound: Term
    body: Formula

    def __post_init__(self):
        if self.bound.ty != SetType(self.var.ty):
            raise TypeMismatch(
                f'{self.var} : {self.var.ty} bounded by {self.bound} : '
                f'{self.bound.ty}')

    def __str__(self):
        return f'{self.keyword} {self.var} in {self.bound} . {self.body}'


@dataclass(frozen=True)
class ForallIn(Quantifier):
    keyword = 'forall'


@dataclass(frozen=True)
class ExistsIn(Quantifier):
    keyword = 'exists'


TOP = Top()
BOT = Bot()


@dataclass(frozen=True)
class MembershipAtom:
    elem: Term
    container: Term

    def __post_init__(self):
        if self.container.ty != SetType(self.elem.ty):
            raise TypeMismatch(
                f'{self.elem} : {self.elem.ty} in {self.container} : '
                f'{self.container.ty}')

    def __str__(self):
        return f'{self.elem} in {self.container}'


def _check_ur(l, r):
    if l.ty != UR or r.ty != UR:
        raise TypeMismatch(f'{l} : {l.ty} compared with {r} : {r.ty}')


class Polarity(Enum):
    EL = 'EL'
    AL = 'AL'
    BOTH = 'Both'


def polarity(f):
    if isinstance(f, (EqUr, NeqUr)):
        return Polarity.BOTH
    if isinstance(f, ExistsIn):
        return Polarity.EL
    return Polarity.AL


def is_atomic(f):
    return isinstance(f, (EqUr, NeqUr))


def is_el(f):
    return polarity(f) != Polarity.AL


def dual(f):
    if isinstance(f, EqUr):
        return NeqUr(f.l, f.r)
    if isinstance(f, NeqUr):
        return EqUr(f.l, f.r)
    if isinstance(f, Top):
        return BOT
    if isinstance(f, Bot):
        return TOP
    if isinstance(f, And):
        return Or(dual(f.l), dual(f.r))
    if isinstance(f, Or):
        return And(dual(f.l), dual(f.r))
    if isinstance(f, ForallIn):
        return ExistsIn(f.var, f.bound, dual(f.body))
    if isinstance(f, ExistsIn):
        return ForallIn(f.var, f.bound, dual(f.body))
    raise TypeError(f'not a formula: {f!r}')


def formula_size(f):
    if isinstance(f, (And, Or)):
        return 1 + formula_size(f.l) + formula_size(f.r)
    if isinstance(f, Quantifier):
        return 1 + formula_size(f.body)
    return 1


# Free variables.

def _occurrences(x, bound, out):
    """Collects free variable occurrences (with repetitions)."""
    if isinstance(x, Term):
        out.extend(v for v in _term_var_list(x) if v not in bound)
    elif isinstance(x, MembershipAtom):
        _occurrences(x.elem, bound, out)
        _occurrences(x.container, bound, out)
    elif isinstance(x, (EqUr, NeqUr)):
        _occurrences(x.l, bound, out)
        _occurrences(x.r, bound, out)
    elif isinstance(x, (And, Or)):
        _occurrences(x.l, bound, out)
        _occurrences(x.r, bound, out)
    elif isinstance(x, Quantifier):
        _occurrences(x.bound, bound, out)
        _occurrences(x.body, bound | {x.var}, out)
    elif isinstance(x, (Top, Bot)):
        pass
    else:
        for y in x:
            _occurrences(y, bound, out)


def _term_var_list(t):
    if isinstance(t, Var):
        return [t]
    result = []
    for c in term_children(t):
        result.extend(_term_var_list(c))
    return result


def free_vars(x):
    """Free typed variables of a term, formula, atom or collection of them."""
    out = []
    _occurrences(x, frozenset(), out)
    seen = {}
    for v in out:
        if seen.setdefault(v.name, v.ty) != v.ty:
            raise InconsistentTyping(
                f'{v.name} used at {seen[v.name]} and at {v.ty}')
    return frozenset(out)


def all_names(x):
    """Every variable name occurring in x, bound or free."""
    names = set()

    def visit(y):
        if isinstance(y, Term):
            names.update(v.name for v in _term_var_list(y))
        elif isinstance(y, MembershipAtom):
            visit(y.elem)
            visit(y.container)
        elif isinstance(y, (EqUr, NeqUr)):
            visit(y.l)
            visit(y.r)
        elif isinstance(y, (And, Or)):
            visit(y.l)
            visit(y.r)
        elif isinstance(y, Quantifier):
            names.add(y.var.name)
            visit(y.bound)
            visit(y.body)
        elif isinstance(y, (Top, Bot)):
            pass
        else:
            for z in y:
                visit(z)

    visit(x)
    return names


_SUFFIX = re.compile(r'\d+$')


def fresh_name(stem, avoid):
    """The stem with the smallest numeric suffix not in avoid."""
    base = _SUFFIX.sub('', stem) or 'v'
    if base not in avoid:
        return base
    k = 1
    while f'{base}{k}' in avoid:
        k += 1
    return f'{base}{k}'


def fresh_var(stem, ty, avoid):
    return Var(fresh_name(stem, avoid), ty)


# Structural equality up to bound variable renaming.

def _term_key(t, env):
    if isinstance(t, Var):
        if t in env:
            return ('b', env[t])
        return ('v', t.name, t.ty)
    if isinstance(t, UnitVal):
        return ('u',)
    if isinstance(t, Pair):
        return ('p', _term_key(t.fst, env), _term_key(t.snd, env))
    return ('pi', t.side, _term_key(t.of, env))


def _alpha(f, env):
    if isinstance(f, EqUr):
        return ('=', _term_key(f.l, env), _term_key(f.r, env))
    if isinstance(f, NeqUr):
        return ('!=', _term_key(f.l, env), _term_key(f.r, env))
    if isinstance(f, Top):
        return ('T',)
    if isinstance(f, Bot):
        return ('F',)
    if isinstance(f, (And, Or)):
        return (type(f).__name__, _alpha(f.l, env), _alpha(f.r, env))
    bound = _term_key(f.bound, env)
    inner = dict(env)
    inner[f.var] = len(env)
    return (f.keyword, f.var.ty, bound, _alpha(f.body, inner))


def alpha_key(f):
    """A hashable key equal for α-equivalent formulas."""
    if isinstance(f, MembershipAtom):
        return ('in', _term_key(f.elem, {}), _term_key(f.container, {}))
    if isinstance(f, Term):
        return _term_key(f, {})
    return _alpha(f, {})


def alpha_eq(f, g):
    return alpha_key(f) == alpha_key(g)


# Substitution.

def _rename_binder(f, avoid):
    """Renames the binder of a quantifier away from avoid."""
    names = avoid | all_names(f)
    new = fresh_var(f.var.name, f.var.ty, names)
    body = subst(f.body, {f.var: new})
    return type(f)(new, f.bound, body)


def subst(f, mapping):
    """Capture-avoiding simultaneous substitution of variables by terms."""
    mapping = {v: t for v, t in mapping.items() if v != t}
    if not mapping:
        return f
    if isinstance(f, Term):
        return subst_term(f, mapping)
    if isinstance(f, MembershipAtom):
        return MembershipAtom(subst_term(f.elem, mapping),
                              subst_term(f.container, mapping))
    if isinstance(f, (EqUr, NeqUr)):
        return type(f)(subst_term(f.l, mapping), subst_term(f.r, mapping))
    if isinstance(f, (Top, Bot)):
        return f
    if isinstance(f, (And, Or)):
        return type(f)(subst(f.l, mapping), subst(f.r, mapping))
    bound = subst_term(f.bound, mapping)
    inner = {v: t for v, t in mapping.items() if v != f.var}
    incoming = set()
    for v, t in inner.items():
        incoming |= {w.name for w in term_vars(t)}
    if f.var.name in incoming:
        avoid = incoming | {v.name for v in inner}
        f = _rename_binder(f, avoid)
    return type(f)(f.var, bound, subst(f.body, inner))


def replace_all(f, target, repl):
    """Capture-avoiding replacement of every free occurrence of a term."""
    if target == repl:
        return f
    if isinstance(f, Term):
        return replace_in_term(f, target, repl)
    if isinstance(f, MembershipAtom):
        return MembershipAtom(replace_in_term(f.elem, target, repl),
                              replace_in_term(f.container, target, repl))
    if isinstance(f, (EqUr, NeqUr)):
        return type(f)(replace_in_term(f.l, target, repl),
                       replace_in_term(f.r, target, repl))
    if isinstance(f, (Top, Bot)):
        return f
    if isinstance(f, (And, Or)):
        return type(f)(replace_all(f.l, target, repl),
                       replace_all(f.r, target, repl))
    bound = replace_in_term(f.bound, target, repl)
    if f.var in term_vars(target):
        return type(f)(f.var, bound, f.body)
    if f.var in term_vars(repl):
        f = _rename_binder(
            f, {v.name for v in term_vars(repl) | term_vars(target)})
    return type(f)(f.var, bound, replace_all(f.body, target, repl))


# Positions: And/Or children 0/1, quantifier bound 0 and body 1, atom
# operands 0/1, pair components 0/1, projection argument 0.

def _term_positions(t, target, prefix, out):
    if t == target:
        out.append(prefix)
        return
    for i, c in enumerate(term_children(t)):
        _term_positions(c, target, prefix + (i,), out)


def positions_of(f, target, _prefix=(), _bound=frozenset()):
    """Positions of the free occurrences of target in f."""
    out = []
    if term_vars(target) & _bound:
        return out
    if isinstance(f, (EqUr, NeqUr)):
        _term_positions(f.l, target, _prefix + (0,), out)
        _term_positions(f.r, target, _prefix + (1,), out)
    elif isinstance(f, (And, Or)):
        out += positions_of(f.l, target, _prefix + (0,), _bound)
        out += positions_of(f.r, target, _prefix + (1,), _bound)
    elif isinstance(f, Quantifier):
        _term_positions(f.bound, target, _prefix + (0,), out)
        out += positions_of(f.body, target, _prefix + (1,), _bound | {f.var})
    return out


def _term_at(t, path):
    for i in path:
        children = term_children(t)
        if i >= len(children):
            return None
        t = children[i]
    return t


def _replace_term_at(t, path, repl):
    if not path:
        return repl
    children = list(term_children(t))
    children[path[0]] = _replace_term_at(children[path[0]], path[1:], repl)
    return rebuild_term(t, children)


def _subst_at(f, pos, target, repl, binders):
    if isinstance(f, (EqUr, NeqUr)):
        if not pos or pos[0] not in (0, 1):
            raise InvalidPosition(f'{pos} does not address a term of {f}')
        side = f.l if pos[0] == 0 else f.r
        if _term_at(side, pos[1:]) != target:
            raise InvalidPosition(f'no occurrence of {target} at {pos}')
        new = _replace_term_at(side, pos[1:], repl)
        return type(f)(new, f.r) if pos[0] == 0 else type(f)(f.l, new)
    if isinstance(f, (And, Or)):
        if not pos or pos[0] not in (0, 1):
            raise InvalidPosition(f'{pos} does not address a subformula')
        if pos[0] == 0:
            return type(f)(_subst_at(f.l, pos[1:], target, repl, binders), f.r)
        return type(f)(f.l, _subst_at(f.r, pos[1:], target, repl, binders))
    if isinstance(f, Quantifier):
        if pos and pos[0] == 0:
            if _term_at(f.bound, pos[1:]) != target:
                raise InvalidPosition(f'no occurrence of {target} at {pos}')
            _check_capture(binders, target, repl)
            return type(f)(f.var, _replace_term_at(f.bound, pos[1:], repl),
                           f.body)
        if pos and pos[0] == 1:
            body = _subst_at(f.body, pos[1:], target, repl, binders + [f.var])
            return type(f)(f.var, f.bound, body)
        raise InvalidPosition(f'{pos} does not address a part of {f}')
    raise InvalidPosition(f'{pos} addresses no term in {f}')


def _check_capture(binders, target, repl):
    for v in binders:
        if v in term_vars(target):
            raise InvalidPosition(f'{target} is bound at the selected position')
        if v in term_vars(repl):
            raise VariableCapture(f'{v} would capture {repl}')


def substitute(f, target, replacement, occurrences='all'):
    """Replaces the selected occurrences of target by replacement."""
    if target.ty != replacement.ty:
        raise TypeMismatch(
            f'{target} : {target.ty} replaced by {replacement} : '
            f'{replacement.ty}')
    if occurrences == 'all':
        return _subst_all(f, target, replacement)
    for pos in occurrences:
        binders = []
        _collect_binders(f, tuple(pos), binders)
        _check_capture(binders, target, replacement)
    for pos in occurrences:
        f = _subst_at(f, tuple(pos), target, replacement, [])
    return f


def term_at_position(f, pos):
    """The term at a position, or None if pos addresses no term."""
    pos = tuple(pos)
    if isinstance(f, (EqUr, NeqUr)):
        if not pos or pos[0] not in (0, 1):
            return None
        return _term_at(f.l if pos[0] == 0 else f.r, pos[1:])
    if isinstance(f, (And, Or)) and pos and pos[0] in (0, 1):
        return term_at_position(f.l if pos[0] == 0 else f.r, pos[1:])
    if isinstance(f, Quantifier) and pos:
        if pos[0] == 0:
            return _term_at(f.bound, pos[1:])
        if pos[0] == 1:
            return term_at_position(f.body, pos[1:])
    return None


def rewritten_positions(a, b, src, dst):
    """Positions where a holds src and b holds dst, a and b agreeing
    everywhere else; None if they differ in any other way."""
    out = []

    def terms(s, t, prefix):
        if s == t:
            return True
        if s == src and t == dst:
            out.append(prefix)
            return True
        if type(s) is not type(t) or not term_children(s):
            return False
        return all(terms(x, y, prefix + (i,)) for i, (x, y) in
                   enumerate(zip(term_children(s), term_children(t))))

    def formulas(f, g, prefix):
        if type(f) is not type(g):
            return False
        if isinstance(f, (EqUr, NeqUr)):
            return (terms(f.l, g.l, prefix + (0,))
                    and terms(f.r, g.r, prefix + (1,)))
        if isinstance(f, (And, Or)):
            return (formulas(f.l, g.l, prefix + (0,))
                    and formulas(f.r, g.r, prefix + (1,)))
        if isinstance(f, Quantifier):
            if f.var != g.var:
                g = type(g)(f.var, g.bound, subst(g.body, {g.var: f.var}))
            return (terms(f.bound, g.bound, prefix + (0,))
                    and formulas(f.body, g.body, prefix + (1,)))
        return f == g

    if not formulas(a, b, ()):
        return None
    return out


def _collect_binders(f, pos, out):
    if isinstance(f, (And, Or)) and pos:
        _collect_binders(f.l if pos[0] == 0 else f.r, pos[1:], out)
    elif isinstance(f, Quantifier) and pos and pos[0] == 1:
        out.append(f.var)
        _collect_binders(f.body, pos[1:], out)


def _subst_all(f, target, repl):
    if isinstance(f, (EqUr, NeqUr)):
        return type(f)(replace_in_term(f.l, target, repl),
                       replace_in_term(f.r, target, repl))
    if isinstance(f, (Top, Bot)):
        return f
    if isinstance(f, (And, Or)):
        return type(f)(_subst_all(f.l, target, repl),
                       _subst_all(f.r, target, repl))
    bound = replace_in_term(f.bound, target, repl)
    if f.var in term_vars(target):
        return type(f)(f.var, bound, f.body)
    body = _subst_all(f.body, target, repl)
    if body != f.body and f.var in term_vars(repl):
        raise VariableCapture(f'{f.var} would capture {repl}')
    return type(f)(f.var, bound, body)


def beta_normalize_formula(f):
    if isinstance(f, MembershipAtom):
        return MembershipAtom(beta_reduce_term(f.elem),
                              beta_reduce_term(f.container))
    if isinstance(f, (EqUr, NeqUr)):
        return type(f)(beta_reduce_term(f.l), beta_reduce_term(f.r))
    if isinstance(f, (Top, Bot)):
        return f
    if isinstance(f, (And, Or)):
        return type(f)(beta_normalize_formula(f.l),
                       beta_normalize_formula(f.r))
    return type(f)(f.var, beta_reduce_term(f.bound),
                   beta_normalize_formula(f.body))


# Macros.

def equiv_macro(ty, l, r, avoid=frozenset()):
    """Extensional equivalence l ≡ r at type ty."""
    if l.ty != ty or r.ty != ty:
        raise TypeMismatch(f'{l} ≡ {r} requested at {ty}')
    if isinstance(ty, UrType):
        return EqUr(l, r)
    if isinstance(ty, UnitType):
        return TOP
    if isinstance(ty, ProdType):
        return And(equiv_macro(ty.left, proj(1, l), proj(1, r), avoid),
                   equiv_macro(ty.right, proj(2, l), proj(2, r), avoid))
    return And(subseteq_macro(l, r, avoid), subseteq_macro(r, l, avoid))


def equiv(l, r, avoid=frozenset()):
    return equiv_macro(l.ty, l, r, avoid)


def member_macro(t, u, avoid=frozenset()):
    """t ∈̂ u, membership up to extensionality."""
    if u.ty != SetType(t.ty):
        raise TypeMismatch(f'{t} : {t.ty} member of {u} : {u.ty}')
    names = set(avoid) | all_names([t, u])
    y = fresh_var('y', t.ty, names)
    return ExistsIn(y, u, equiv_macro(t.ty, t, y, frozenset(names | {y.name})))


def subseteq_macro(a, b, avoid=frozenset()):
    if not isinstance(a.ty, SetType) or a.ty != b.ty:
        raise TypeMismatch(f'{a} : {a.ty} subset of {b} : {b.ty}')
    names = set(avoid) | all_names([a, b])
    x = fresh_var('x', a.ty.elem, names)
    return ForallIn(x, a, member_macro(x, b, frozenset(names | {x.name})))


def iff_macro(a, b):
    return And(Or(dual(a), b), Or(dual(b), a))


# Quantification along subtype occurrence paths.

def type_at_path(ty, path):
    for letter in path:
        if letter == 'm' and isinstance(ty, SetType):
            ty = ty.elem
        elif letter in '12' and isinstance(ty, ProdType):
            ty = ty.left if letter == '1' else ty.right
        else:
            raise InvalidPath(f'{path!r} is not an occurrence in {ty}')
    return ty


def path_quantify(q, var, path, anchor, body):
    """Q var ∈_path anchor. body; q is ForallIn or ExistsIn."""
    if not path or path[-1] != 'm':
        raise InvalidPath(f'{path!r} must be non-empty and end with m')
    if type_at_path(anchor.ty, path) != var.ty:
        raise InvalidPath(f'{var} : {var.ty} does not sit at {path!r}')
    avoid = all_names([anchor, body]) | {var.name}
    return _path_chain(q, var, path, anchor, body, avoid)


def _path_chain(q, var, path, anchor, body, avoid):
    letter, rest = path[0], path[1:]
    if letter in '12':
        return _path_chain(q, var, rest, proj(int(letter), anchor), body, avoid)
    if not rest:
        return q(var, anchor, body)
    y = fresh_var('y', anchor.ty.elem, avoid)
    return q(y, anchor,
             _path_chain(q, var, rest, y, body, avoid | {y.name}))


def goal_formula(elem, path, anchor, stem=None, leaf=None,
                 avoid=frozenset()):
    """∃elem′ ∈_path anchor. elem ≡ elem′.

    The path may be empty or end with projections; in that case the
    innermost position is compared directly. `leaf(r, avoid)` replaces the
    innermost equivalence when given.
    """
    ty = type_at_path(anchor.ty, path)
    if ty != elem.ty:
        raise InvalidPath(f'{elem} : {elem.ty} does not sit at {path!r}')
    if stem is None:
        stem = elem.name + "'" if isinstance(elem, Var) else 'w'
    avoid = set(avoid) | all_names([elem, anchor])
    if leaf is None:
        def leaf(r, names):
            return equiv(elem, r, names)
    return _goal_chain(elem, path, anchor, avoid, stem, leaf)


def _goal_chain(elem, path, anchor, avoid, stem, leaf):
    if not path:
        return leaf(anchor, frozenset(avoid))
    letter, rest = path[0], path[1:]
    if letter in '12':
        return _goal_chain(elem, rest, proj(int(letter), anchor), avoid, stem,
                           leaf)
    y = fresh_var(stem if 'm' not in rest else 'y', anchor.ty.elem, avoid)
    return ExistsIn(y, anchor,
                    _goal_chain(elem, rest, y, avoid | {y.name}, stem, leaf))
