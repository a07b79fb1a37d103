"""Rule schemas: from a conclusion and a rule instance, the premises the rule
demands, each formula tagged with where it came from.

Origins are ('t', i), ('g', i), ('d', i) for formulas carried over from the
conclusion, ('new', loc, part) for formulas produced from the principal at loc,
and ('refl',) for the disequality a reflexivity step introduces.
"""
from dataclasses import dataclass, field

from nrcsynth.errors import NrcSynthError
from nrcsynth.kernel.sequents import Sequent1, Sequent2, parse_loc
from nrcsynth.syntax import (
    UR, ProdType, Var, Pair, Proj1, Proj2, EqUr, NeqUr, TOP, BOT, And, Or,
    ForallIn, ExistsIn, MembershipAtom, alpha_key, dual, subst, replace_all,
    substitute, is_atomic, is_el)

FOCUSED_RULES = ('Eq', 'Top', 'And', 'Or', 'Forall', 'Exists', 'Neq',
                 'ProdEta', 'ProdBeta')
LOWERED_RULES = FOCUSED_RULES + ('Ax', 'Refl')
GENERAL_RULES = ('Ax', 'BotL', 'NegL', 'NegR', 'AndR', 'OrR', 'ForallR',
                 'ExistsR', 'Refl', 'Repl', 'ProdEta', 'ProdBeta')
ALIASES = {'TopR': 'Top', '=': 'Eq', '!=': 'Neq'}


class RuleViolation(Exception):

    def __init__(self, condition, message):
        super().__init__(f'{condition}: {message}')
        self.condition = condition
        self.message = message


@dataclass
class Expected:
    theta: list = field(default_factory=list)
    gamma: list = field(default_factory=list)
    delta: list = field(default_factory=list)

    def sequent(self, two_sided):
        theta = tuple(a for a, _ in self.theta)
        delta = tuple(f for f, _ in self.delta)
        if two_sided:
            return Sequent2(theta, tuple(f for f, _ in self.gamma), delta)
        return Sequent1(theta, delta)


def el_context(f):
    """EL contexts also admit ⊥, which never contributes to provability."""
    return is_el(f) or f == BOT


def _copies(seq):
    gamma = getattr(seq, 'gamma', ())
    return Expected(
        theta=[(a, ('t', i)) for i, a in enumerate(seq.theta)],
        gamma=[(f, ('g', i)) for i, f in enumerate(gamma)],
        delta=[(f, ('d', i)) for i, f in enumerate(seq.delta)])


def _principal(seq, rule, n, kinds):
    if len(rule.principal) <= n:
        raise RuleViolation('SchemaViolation',
                            f'{rule.rule} needs {n + 1} principal locations')
    location = rule.principal[n]
    kind, index = parse_loc(location)
    if kind not in kinds:
        raise RuleViolation('SchemaViolation',
                            f'{rule.rule} cannot act on {location}')
    zone = {'t': seq.theta, 'g': getattr(seq, 'gamma', ()),
            'd': seq.delta}[kind]
    if index >= len(zone):
        raise RuleViolation('SchemaViolation', f'{location} is out of range')
    return location, kind, index, zone[index]


def _free_names(seq):
    return {v.name for v in seq.free_vars()}


def _require_el(seq, skip=()):
    for i, f in enumerate(seq.delta):
        if i not in skip and not el_context(f):
            raise RuleViolation('ELContextViolation',
                                f'{f} in the context is not EL')


def _fresh(seq, rule, count):
    if len(rule.fresh) != count:
        raise RuleViolation('SchemaViolation',
                            f'{rule.rule} needs {count} fresh variables')
    used = _free_names(seq)
    names = [v.name for v in rule.fresh]
    if len(set(names)) != len(names):
        raise RuleViolation('FreshnessViolation', 'fresh variables coincide')
    for v in rule.fresh:
        if v.name in used:
            raise RuleViolation('FreshnessViolation',
                                f'{v.name} occurs free in the conclusion')
    return rule.fresh


def _theta_keys(seq):
    return {alpha_key(a) for a in seq.theta}


# Axioms.

def _eq(seq, rule, strict):
    _, _, _, f = _principal(seq, rule, 0, 'd')
    if not (isinstance(f, EqUr) and f.l == f.r):
        raise RuleViolation('SchemaViolation', f'{f} is not t = t')
    return []


def _top(seq, rule, strict):
    _, _, _, f = _principal(seq, rule, 0, 'd')
    if f != TOP:
        raise RuleViolation('SchemaViolation', f'{f} is not true')
    return []


def _ax1(seq, rule, strict):
    _, _, i, f = _principal(seq, rule, 0, 'd')
    _, _, j, g = _principal(seq, rule, 1, 'd')
    if i == j or alpha_key(f) != alpha_key(dual(g)):
        raise RuleViolation('SchemaViolation',
                            f'{f} and {g} are not complementary')
    return []


def _ax2(seq, rule, strict):
    _, _, _, f = _principal(seq, rule, 0, 'g')
    _, _, _, g = _principal(seq, rule, 1, 'd')
    if alpha_key(f) != alpha_key(g):
        raise RuleViolation('SchemaViolation', f'{f} and {g} differ')
    return []


def _botl(seq, rule, strict):
    _, _, _, f = _principal(seq, rule, 0, 'g')
    if f != BOT:
        raise RuleViolation('SchemaViolation', f'{f} is not false')
    return []


# Negation moves (two-sided only).

def _negl(seq, rule, strict):
    location, _, i, f = _principal(seq, rule, 0, 'g')
    e = _copies(seq)
    origin = e.gamma.pop(i)[1]
    e.delta.append((dual(f), origin))
    return [e]


def _negr(seq, rule, strict):
    location, _, j, f = _principal(seq, rule, 0, 'd')
    e = _copies(seq)
    origin = e.delta.pop(j)[1]
    e.gamma.append((dual(f), origin))
    return [e]


# Connectives.

def _and(seq, rule, strict):
    location, kind, k, f = _principal(seq, rule, 0, 'd')
    if not isinstance(f, And):
        raise RuleViolation('SchemaViolation', f'{f} is not a conjunction')
    left, right = _copies(seq), _copies(seq)
    left.delta[k] = (f.l, ('new', location, 0))
    right.delta[k] = (f.r, ('new', location, 0))
    return [left, right]


def _or(seq, rule, strict):
    location, kind, k, f = _principal(seq, rule, 0, 'd')
    if not isinstance(f, Or):
        raise RuleViolation('SchemaViolation', f'{f} is not a disjunction')
    e = _copies(seq)
    e.delta[k] = (f.l, ('new', location, 0))
    e.delta.append((f.r, ('new', location, 1)))
    return [e]


def _forall(seq, rule, strict):
    location, kind, k, f = _principal(seq, rule, 0, 'd')
    if not isinstance(f, ForallIn):
        raise RuleViolation('SchemaViolation', f'{f} is not universal')
    (y,) = _fresh(seq, rule, 1)
    if y.ty != f.var.ty:
        raise RuleViolation('TypeMismatch', f'{y} : {y.ty} for {f.var}')
    e = _copies(seq)
    e.theta.append((MembershipAtom(y, f.bound), ('new', location, 'atom')))
    e.delta[k] = (subst(f.body, {f.var: y}), ('new', location, 0))
    return [e]


def instantiate(f, witnesses, theta_keys=None):
    """Instantiates the leading existentials of f with the witnesses.

    Returns the instance and the membership atoms the witnesses need.
    """
    needed = []
    for t in witnesses:
        if not isinstance(f, ExistsIn):
            raise RuleViolation('SchemaViolation',
                                'more witnesses than leading existentials')
        if t.ty != f.var.ty:
            raise RuleViolation('TypeMismatch',
                                f'witness {t} : {t.ty} for {f.var}')
        atom = MembershipAtom(t, f.bound)
        if theta_keys is not None and alpha_key(atom) not in theta_keys:
            raise RuleViolation('MissingMembership',
                                f'{atom} is not in the context')
        needed.append(atom)
        f = subst(f.body, {f.var: t})
    return f, needed


def can_extend(f, seq):
    """Whether some context atom witnesses the next leading bound of f."""
    if not isinstance(f, ExistsIn):
        return False
    bound = alpha_key(f.bound)
    return any(alpha_key(a.container) == bound for a in seq.theta)


def _exists(seq, rule, strict):
    location, kind, k, f = _principal(seq, rule, 0, 'd')
    if not isinstance(f, ExistsIn):
        raise RuleViolation('SchemaViolation', f'{f} is not existential')
    if not rule.witness:
        raise RuleViolation('SchemaViolation', 'no witness given')
    if rule.rule == 'ExistsR' and len(rule.witness) != 1:
        raise RuleViolation('SchemaViolation', 'ExistsR takes one witness')
    instance, _ = instantiate(f, rule.witness, _theta_keys(seq))
    if strict:
        _require_el(seq)
        if can_extend(instance, seq):
            raise RuleViolation(
                'NonMaximalSpecialization',
                f'{instance} can be specialized further from the context')
    e = _copies(seq)
    e.delta.append((instance, ('new', location, 0)))
    return [e]


def rewrite_sides(atom, side):
    """(source, destination) of a rewrite along a (dis)equality atom."""
    if side not in (1, 2):
        raise RuleViolation('SchemaViolation', 'side must be 1 or 2')
    return (atom.l, atom.r) if side == 1 else (atom.r, atom.l)


def rewrite_formula(alpha, atom, rule):
    src, dst = rewrite_sides(atom, rule.side)
    if not rule.occ:
        raise RuleViolation('PositionError', 'no occurrence selected')
    try:
        return substitute(alpha, src, dst, rule.occ)
    except NrcSynthError as e:
        raise RuleViolation('PositionError', str(e))


def _neq(seq, rule, strict):
    _, _, a, atom = _principal(seq, rule, 0, 'd')
    location, _, b, alpha = _principal(seq, rule, 1, 'd')
    if a == b or not isinstance(atom, NeqUr):
        raise RuleViolation('SchemaViolation', f'{atom} is not t != u')
    if strict:
        if not is_atomic(alpha):
            raise RuleViolation('SchemaViolation', f'{alpha} is not atomic')
        _require_el(seq)
    e = _copies(seq)
    e.delta.append((rewrite_formula(alpha, atom, rule), ('new', location, 0)))
    return [e]


def _repl(seq, rule, strict):
    _, _, a, atom = _principal(seq, rule, 0, 'g')
    location, _, b, phi = _principal(seq, rule, 1, 'g')
    if a == b or not isinstance(atom, EqUr):
        raise RuleViolation('SchemaViolation', f'{atom} is not t = u')
    e = _copies(seq)
    e.gamma.append((rewrite_formula(phi, atom, rule), ('new', location, 0)))
    return [e]


def _refl(seq, rule, strict):
    if len(rule.witness) != 1 or rule.witness[0].ty != UR:
        raise RuleViolation('SchemaViolation', 'Refl takes one ur witness')
    t = rule.witness[0]
    e = _copies(seq)
    if isinstance(seq, Sequent2):
        e.gamma.append((EqUr(t, t), ('refl',)))
    else:
        e.delta.append((NeqUr(t, t), ('refl',)))
    return [e]


# Products.

def _map_all(seq, fn):
    e = _copies(seq)
    e.theta = [(fn(a), o) for a, o in e.theta]
    e.gamma = [(fn(f), o) for f, o in e.gamma]
    e.delta = [(fn(f), o) for f, o in e.delta]
    return e


def _prod_eta(seq, rule, strict):
    if len(rule.witness) != 1 or not isinstance(rule.witness[0], Var) \
            or not isinstance(rule.witness[0].ty, ProdType):
        raise RuleViolation('SchemaViolation',
                            'ProdEta splits one product variable')
    x = rule.witness[0]
    x1, x2 = _fresh(seq, rule, 2)
    if x1.ty != x.ty.left or x2.ty != x.ty.right:
        raise RuleViolation('TypeMismatch', f'{x1}, {x2} do not split {x}')
    if strict:
        _require_el(seq)
    pair = Pair(x1, x2)
    return [_map_all(seq, lambda f: subst(f, {x: pair}))]


def beta_redex(rule):
    if len(rule.witness) != 2 or rule.side not in (1, 2):
        raise RuleViolation('SchemaViolation',
                            'ProdBeta takes two witnesses and a side')
    t1, t2 = rule.witness
    pair = Pair(t1, t2)
    redex = Proj1(pair) if rule.side == 1 else Proj2(pair)
    return redex, (t1 if rule.side == 1 else t2)


def _prod_beta(seq, rule, strict):
    redex, contractum = beta_redex(rule)
    if strict:
        _require_el(seq)
    return [_map_all(seq, lambda f: replace_all(f, redex, contractum))]


ONE_SIDED = {
    'Eq': _eq, 'Top': _top, 'Ax': _ax1, 'And': _and, 'Or': _or,
    'Forall': _forall, 'Exists': _exists, 'Neq': _neq, 'Refl': _refl,
    'ProdEta': _prod_eta, 'ProdBeta': _prod_beta}

TWO_SIDED = {
    'Ax': _ax2, 'BotL': _botl, 'NegL': _negl, 'NegR': _negr, 'AndR': _and,
    'OrR': _or, 'ForallR': _forall, 'ExistsR': _exists, 'Refl': _refl,
    'Repl': _repl, 'ProdEta': _prod_eta, 'ProdBeta': _prod_beta}


def expand(seq, rule, strict=False, allowed=None):
    """The expected premises of a rule instance applied to seq."""
    tag = ALIASES.get(rule.rule, rule.rule)
    table = TWO_SIDED if isinstance(seq, Sequent2) else ONE_SIDED
    if tag not in table or (allowed is not None and tag not in allowed):
        raise RuleViolation('UnknownRule', f'{rule.rule} is not a rule here')
    if tag != rule.rule:
        rule = rule.with_(rule=tag)
    return table[tag](seq, rule, strict)


def _match(expected, actual, key):
    """Aligns actual items with expected ones, returning the origin of each
    actual item or None if the multisets differ."""
    pool = {}
    for item, origin in expected:
        pool.setdefault(key(item), []).append(origin)
    result = []
    for item in actual:
        origins = pool.get(key(item))
        if not origins:
            return None
        result.append(origins.pop(0))
    if any(pool.values()):
        return None
    return result


def _match_set(expected, actual):
    table = {}
    for item, origin in expected:
        table.setdefault(alpha_key(item), origin)
    if set(table) != {alpha_key(a) for a in actual}:
        return None
    return [table[alpha_key(a)] for a in actual]


@dataclass
class Alignment:
    """Origins of every formula of one premise."""
    theta: list
    gamma: list
    delta: list


def align(expected, premise):
    theta = _match_set(expected.theta, premise.theta)
    delta = _match(expected.delta, premise.delta, alpha_key)
    gamma = _match(expected.gamma, getattr(premise, 'gamma', ()), alpha_key)
    if theta is None or delta is None or gamma is None:
        return None
    return Alignment(theta, gamma, delta)


def node_alignments(node, strict=False):
    """Alignments of the premises of a node, raising on mismatch."""
    expected = expand(node.conclusion, node.rule, strict)
    if len(expected) != len(node.premises):
        raise RuleViolation('ArityMismatch',
                            f'{node.tag} expects {len(expected)} premises')
    result = []
    for i, (e, p) in enumerate(zip(expected, node.premises)):
        a = align(e, p.conclusion)
        if a is None:
            raise RuleViolation(
                'PremiseMismatch',
                f'premise {i} is {p.conclusion}, expected '
                f'{e.sequent(isinstance(node.conclusion, Sequent2))}')
        result.append(a)
    return result
