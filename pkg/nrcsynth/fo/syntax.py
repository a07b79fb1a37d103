"""First-order formulas with equality and no function symbols, in negation
normal form. Terms are variable names."""
from dataclasses import dataclass
import itertools


class FoFormula:
    pass


@dataclass(frozen=True)
class Pred(FoFormula):
    name: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, 'args', tuple(self.args))

    def __str__(self):
        return f'{self.name}({",".join(self.args)})'


@dataclass(frozen=True)
class NegPred(FoFormula):
    name: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, 'args', tuple(self.args))

    def __str__(self):
        return f'not({self.name}({",".join(self.args)}))'


@dataclass(frozen=True)
class FoEq(FoFormula):
    l: str
    r: str

    def __str__(self):
        return f'{self.l} = {self.r}'


@dataclass(frozen=True)
class FoNeq(FoFormula):
    l: str
    r: str

    def __str__(self):
        return f'{self.l} != {self.r}'


@dataclass(frozen=True)
class FoTop(FoFormula):

    def __str__(self):
        return 'true'


@dataclass(frozen=True)
class FoBot(FoFormula):

    def __str__(self):
        return 'false'


@dataclass(frozen=True)
class FoAnd(FoFormula):
    l: FoFormula
    r: FoFormula

    def __str__(self):
        return f'and({self.l}, {self.r})'


@dataclass(frozen=True)
class FoOr(FoFormula):
    l: FoFormula
    r: FoFormula

    def __str__(self):
        return f'or({self.l}, {self.r})'


@dataclass(frozen=True)
class FoQuantifier(FoFormula):
    var: str
    body: FoFormula

    def __str__(self):
        return f'{self.keyword} {self.var} . {self.body}'


@dataclass(frozen=True)
class FoForall(FoQuantifier):
    keyword = 'forall'


@dataclass(frozen=True)
class FoExists(FoQuantifier):
    keyword = 'exists'


FO_TOP = FoTop()
FO_BOT = FoBot()

_ATOMS = (Pred, FoEq)
_NEGATIVE = (NegPred, FoNeq)


def is_atom(f):
    return isinstance(f, _ATOMS)


def is_literal(f):
    return isinstance(f, _ATOMS + _NEGATIVE)


def is_negative_literal(f):
    return isinstance(f, _NEGATIVE)


def is_invertible(f):
    """Top-level ∧, ∨ or ∀."""
    return isinstance(f, (FoAnd, FoOr, FoForall))


def literal_terms(f):
    return f.args if isinstance(f, (Pred, NegPred)) else (f.l, f.r)


def with_terms(f, terms):
    if isinstance(f, (Pred, NegPred)):
        return type(f)(f.name, tuple(terms))
    return type(f)(*terms)


def fo_dual(f):
    if isinstance(f, Pred):
        return NegPred(f.name, f.args)
    if isinstance(f, NegPred):
        return Pred(f.name, f.args)
    if isinstance(f, FoEq):
        return FoNeq(f.l, f.r)
    if isinstance(f, FoNeq):
        return FoEq(f.l, f.r)
    if isinstance(f, FoTop):
        return FO_BOT
    if isinstance(f, FoBot):
        return FO_TOP
    if isinstance(f, FoAnd):
        return FoOr(fo_dual(f.l), fo_dual(f.r))
    if isinstance(f, FoOr):
        return FoAnd(fo_dual(f.l), fo_dual(f.r))
    if isinstance(f, FoForall):
        return FoExists(f.var, fo_dual(f.body))
    return FoForall(f.var, fo_dual(f.body))


def fo_conj(parts):
    parts = list(parts)
    if not parts:
        return FO_TOP
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = FoAnd(part, result)
    return result


def fo_disj(parts):
    parts = list(parts)
    if not parts:
        return FO_BOT
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = FoOr(part, result)
    return result


def fo_iff(a, b):
    return FoAnd(FoOr(fo_dual(a), b), FoOr(fo_dual(b), a))


def fo_free_vars(x):
    """Free variables of a formula or of an iterable of formulas."""
    if not isinstance(x, FoFormula):
        result = frozenset()
        for f in x:
            result |= fo_free_vars(f)
        return result
    if is_literal(x):
        return frozenset(literal_terms(x))
    if isinstance(x, (FoTop, FoBot)):
        return frozenset()
    if isinstance(x, (FoAnd, FoOr)):
        return fo_free_vars(x.l) | fo_free_vars(x.r)
    return fo_free_vars(x.body) - {x.var}


def fo_preds(x):
    """Predicate symbols with their arities."""
    if not isinstance(x, FoFormula):
        result = frozenset()
        for f in x:
            result |= fo_preds(f)
        return result
    if isinstance(x, (Pred, NegPred)):
        return frozenset([(x.name, len(x.args))])
    if isinstance(x, (FoAnd, FoOr)):
        return fo_preds(x.l) | fo_preds(x.r)
    if isinstance(x, FoQuantifier):
        return fo_preds(x.body)
    return frozenset()


def fo_names(x):
    """Every variable name, free or bound."""
    if not isinstance(x, FoFormula):
        result = set()
        for f in x:
            result |= fo_names(f)
        return result
    if is_literal(x):
        return set(literal_terms(x))
    if isinstance(x, (FoAnd, FoOr)):
        return fo_names(x.l) | fo_names(x.r)
    if isinstance(x, FoQuantifier):
        return fo_names(x.body) | {x.var}
    return set()


def fo_fresh(stem, avoid):
    stem = stem.rstrip("'0123456789") or 'v'
    if stem not in avoid:
        return stem
    for i in itertools.count(1):
        name = f'{stem}{i}'
        if name not in avoid:
            return name


def fo_size(f):
    if isinstance(f, (FoAnd, FoOr)):
        return 1 + fo_size(f.l) + fo_size(f.r)
    if isinstance(f, FoQuantifier):
        return 1 + fo_size(f.body)
    return 1


def fo_subst(f, mapping):
    """Capture-avoiding simultaneous substitution of variables."""
    mapping = {k: v for k, v in mapping.items() if k != v}
    if not mapping:
        return f
    if is_literal(f):
        return with_terms(f, [mapping.get(t, t) for t in literal_terms(f)])
    if isinstance(f, (FoTop, FoBot)):
        return f
    if isinstance(f, (FoAnd, FoOr)):
        return type(f)(fo_subst(f.l, mapping), fo_subst(f.r, mapping))
    inner = {k: v for k, v in mapping.items() if k != f.var}
    if not inner:
        return f
    var = f.var
    if var in set(inner.values()) and fo_free_vars(f.body) & set(inner):
        var = fo_fresh(f.var, fo_names(f) | set(inner) | set(inner.values()))
        inner[f.var] = var
    return type(f)(var, fo_subst(f.body, inner))


def _alpha(f, env):
    if is_literal(f):
        return (type(f).__name__, getattr(f, 'name', ''),
                tuple(env.get(t, ('free', t)) for t in literal_terms(f)))
    if isinstance(f, (FoTop, FoBot)):
        return (type(f).__name__,)
    if isinstance(f, (FoAnd, FoOr)):
        return (type(f).__name__, _alpha(f.l, env), _alpha(f.r, env))
    inner = dict(env)
    inner[f.var] = ('bound', len(env))
    return (type(f).__name__, _alpha(f.body, inner))


def fo_alpha_key(f):
    return _alpha(f, {})


def fo_alpha_eq(f, g):
    return fo_alpha_key(f) == fo_alpha_key(g)


def replaces(source, derived, t, u):
    """derived is source with some occurrences of t replaced by u."""
    if type(source) is not type(derived):
        return False
    if isinstance(source, (Pred, NegPred)) and (
            source.name != derived.name
            or len(source.args) != len(derived.args)):
        return False
    return all(a == b or (a == t and b == u)
               for a, b in zip(literal_terms(source), literal_terms(derived)))


@dataclass(frozen=True)
class FoSequent:
    formulas: tuple

    def __post_init__(self):
        object.__setattr__(self, 'formulas', tuple(self.formulas))

    def __len__(self):
        return len(self.formulas)

    def __getitem__(self, i):
        return self.formulas[i]

    def free_vars(self):
        return fo_free_vars(self.formulas)

    def names(self):
        return fo_names(self.formulas)

    def same_as(self, other):
        return (len(self) == len(other)
                and all(fo_alpha_eq(f, g) for f, g in zip(self, other)))

    def splice(self, i, replacements):
        return FoSequent(self.formulas[:i] + tuple(replacements)
                         + self.formulas[i + 1:])

    def extend(self, *formulas):
        return FoSequent(self.formulas + formulas)

    def __str__(self):
        return '|- ' + ', '.join(str(f) for f in self.formulas)
