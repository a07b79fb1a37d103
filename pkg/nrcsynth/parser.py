"""Textual syntax for types, terms, formulas, NRC expressions, values,
sequents and proof files."""
import lark

from nrcsynth.errors import ParseError
from nrcsynth.instances import (
    Atom, UnitV, PairV, SetV, VarE, UnitE, PairE, Proj1E, Proj2E, Singleton,
    GetT, BigUnion, EmptySet, Union, Difference, Comprehension)
from nrcsynth.kernel.sequents import (
    Sequent1, Sequent2, RuleInstance, ProofTree)
from nrcsynth.syntax import (
    UR, UNIT, ProdType, SetType, Var, UnitVal, Pair, Proj1, Proj2, EqUr,
    NeqUr, TOP, BOT, And, Or, ForallIn, ExistsIn, MembershipAtom, dual,
    equiv, member_macro, subseteq_macro)

PROOF_FORMAT_VERSION = 'nrcsynth-proof/1'
EXPR_FORMAT_VERSION = 'nrcsynth-nrc/1'
FORMULA_FORMAT_VERSION = 'nrcsynth-delta0/1'

GRAMMAR = r'''
?type: "ur"                       -> ur
     | "unit"                     -> unit
     | "(" type "*" type ")"      -> prod
     | "set" "(" type ")"         -> set

?term: NAME                       -> var
     | "(" ")"                    -> unitval
     | "<" term "," term ">"      -> pair
     | "pi1" "(" term ")"         -> proj1
     | "pi2" "(" term ")"         -> proj2

?formula: term "=" term                          -> eq
        | term "!=" term                         -> neq
        | "true"                                 -> top
        | "false"                                -> bot
        | "and" "(" formula ("," formula)+ ")"   -> conj
        | "or" "(" formula ("," formula)+ ")"    -> disj
        | "forall" NAME "in" term "." formula    -> forall
        | "exists" NAME "in" term "." formula    -> exists
        | "not" "(" formula ")"                  -> neg
        | term "memb" term                       -> memb
        | term "equiv" term                      -> equiv
        | term "subseteq" term                   -> subseteq

?expr: NAME                                      -> var
     | "(" ")"                                   -> unitval
     | "<" expr "," expr ">"                     -> pair
     | "pi1" "(" expr ")"                        -> proj1
     | "pi2" "(" expr ")"                        -> proj2
     | "{" expr "}"                              -> singleton
     | "get" "(" expr ")"                        -> get
     | "bigunion" "(" expr "|" NAME "in" expr ")" -> bigunion
     | "empty" "(" type ")"                      -> empty
     | "union" "(" expr "," expr ")"             -> union
     | "diff" "(" expr "," expr ")"              -> diff
     | "{" NAME "in" expr "|" formula "}"        -> comprehension

?value: NUMBER                                   -> atom
      | "atom" "(" (NAME | NUMBER) ")"           -> atom
      | "unit"                                   -> unitv
      | "<" value "," value ">"                  -> pairv
      | "[" [value ("," value)*] "]"             -> setv

membership: term "in" term
theta: [membership ("," membership)*]
formulas: [formula ("," formula)*]
sequent: theta "|-" formulas                     -> sequent1
       | theta ";" formulas "|-" formulas        -> sequent2

vardecl: NAME ":" type
LOC: /[tgd][0-9]+/
position: "(" [NUMBER ("," NUMBER)*] ")"
attr: ":principal" "[" [LOC ("," LOC)*] "]"      -> principal
    | ":witness" "[" [term ("," term)*] "]"      -> witness
    | ":fresh" "[" [NAME ("," NAME)*] "]"        -> fresh
    | ":occ" "[" [position ("," position)*] "]"  -> occ
    | ":side" NUMBER                             -> side
    | ":conclusion" "{" sequent "}"              -> conclusion
node: "(" "rule" NAME attr* node* ")"
proof: "(" "proof" ":calculus" NAME [":vars" "[" [vardecl ("," vardecl)*] "]"] node ")"

NAME: /(?!(in|and|or|not|forall|exists|true|false|pi1|pi2|memb|equiv|subseteq|get|bigunion|empty|union|diff|rule|proof|unit|ur|set|atom)\b)[A-Za-z_][A-Za-z0-9_']*/
COMMENT: /;;[^\n]*/

%import common.INT -> NUMBER
%import common.WS
%ignore WS
%ignore COMMENT
'''

_STARTS = ['type', 'term', 'formula', 'expr', 'value', 'sequent', 'proof',
           'theta', 'formulas']
_parser = lark.Lark(GRAMMAR, start=_STARTS)


class _Raw(lark.Transformer):
    """Builds untyped nested tuples; types are resolved afterwards."""

    def ur(self, _):
        return UR

    def unit(self, _):
        return UNIT

    def prod(self, children):
        return ProdType(children[0], children[1])

    def set(self, children):
        return SetType(children[0])

    def var(self, children):
        return ('var', str(children[0]))

    def unitval(self, _):
        return ('unit',)

    def pair(self, children):
        return ('pair', children[0], children[1])

    def proj1(self, children):
        return ('proj', 1, children[0])

    def proj2(self, children):
        return ('proj', 2, children[0])

    def eq(self, children):
        return ('eq', children[0], children[1])

    def neq(self, children):
        return ('neq', children[0], children[1])

    def top(self, _):
        return ('top',)

    def bot(self, _):
        return ('bot',)

    def conj(self, children):
        return ('and', list(children))

    def disj(self, children):
        return ('or', list(children))

    def forall(self, children):
        return ('forall', str(children[0]), children[1], children[2])

    def exists(self, children):
        return ('exists', str(children[0]), children[1], children[2])

    def neg(self, children):
        return ('not', children[0])

    def memb(self, children):
        return ('memb', children[0], children[1])

    def equiv(self, children):
        return ('equiv', children[0], children[1])

    def subseteq(self, children):
        return ('subseteq', children[0], children[1])

    def singleton(self, children):
        return ('singleton', children[0])

    def get(self, children):
        return ('get', children[0])

    def bigunion(self, children):
        return ('bigunion', children[0], str(children[1]), children[2])

    def empty(self, children):
        return ('empty', children[0])

    def union(self, children):
        return ('union', children[0], children[1])

    def diff(self, children):
        return ('diff', children[0], children[1])

    def comprehension(self, children):
        return ('comprehension', str(children[0]), children[1], children[2])

    def atom(self, children):
        return Atom(str(children[0]))

    def unitv(self, _):
        return UnitV()

    def pairv(self, children):
        return PairV(children[0], children[1])

    def setv(self, children):
        return SetV(tuple(c for c in children if c is not None))

    def membership(self, children):
        return ('in', children[0], children[1])

    def theta(self, children):
        return [c for c in children if c is not None]

    def formulas(self, children):
        return [c for c in children if c is not None]

    def sequent1(self, children):
        return ('seq1', children[0], children[1])

    def sequent2(self, children):
        return ('seq2', children[0], children[1], children[2])

    def vardecl(self, children):
        return (str(children[0]), children[1])

    def position(self, children):
        return tuple(int(c) for c in children if c is not None)

    def principal(self, children):
        return ('principal', tuple(str(c) for c in children if c is not None))

    def witness(self, children):
        return ('witness', [c for c in children if c is not None])

    def fresh(self, children):
        return ('fresh', [str(c) for c in children if c is not None])

    def occ(self, children):
        return ('occ', tuple(c for c in children if c is not None))

    def side(self, children):
        return ('side', int(children[0]))

    def conclusion(self, children):
        return ('conclusion', children[0])

    def node(self, children):
        attrs = [c for c in children[1:] if isinstance(c, tuple)]
        premises = [c for c in children[1:] if isinstance(c, dict)]
        return {'rule': str(children[0]), 'attrs': attrs,
                'premises': premises}

    def proof(self, children):
        decls = [c for c in children[1:-1] if c is not None]
        return {'calculus': str(children[0]), 'vars': decls,
                'root': children[-1]}


def _parse(text, start):
    try:
        tree = _parser.parse(text, start=start)
    except lark.exceptions.LarkError as e:
        raise ParseError(str(e)) from e
    return _Raw().transform(tree)


class Resolver:
    """Assigns types to raw syntax using declared free variables."""

    def __init__(self, env=None):
        self._env = dict(env or {})

    @property
    def env(self):
        return dict(self._env)

    def _lookup(self, name, env):
        if name in env:
            return env[name]
        if name in self._env:
            return Var(name, self._env[name])
        raise ParseError(f'undeclared variable {name}')

    def term(self, raw, env=None):
        env = env or {}
        kind = raw[0]
        if kind == 'var':
            return self._lookup(raw[1], env)
        if kind == 'unit':
            return UnitVal()
        if kind == 'pair':
            return Pair(self.term(raw[1], env), self.term(raw[2], env))
        if kind == 'proj':
            inner = self.term(raw[2], env)
            return Proj1(inner) if raw[1] == 1 else Proj2(inner)
        raise ParseError(f'expected a term, found {kind}')

    def formula(self, raw, env=None):
        env = env or {}
        kind = raw[0]
        if kind in ('eq', 'neq'):
            cls = EqUr if kind == 'eq' else NeqUr
            return cls(self.term(raw[1], env), self.term(raw[2], env))
        if kind == 'top':
            return TOP
        if kind == 'bot':
            return BOT
        if kind in ('and', 'or'):
            parts = [self.formula(r, env) for r in raw[1]]
            cls = And if kind == 'and' else Or
            result = parts[-1]
            for part in reversed(parts[:-1]):
                result = cls(part, result)
            return result
        if kind in ('forall', 'exists'):
            bound = self.term(raw[2], env)
            if not isinstance(bound.ty, SetType):
                raise ParseError(f'{raw[1]} bounded by non-set {bound}')
            var = Var(raw[1], bound.ty.elem)
            body = self.formula(raw[3], {**env, raw[1]: var})
            cls = ForallIn if kind == 'forall' else ExistsIn
            return cls(var, bound, body)
        if kind == 'not':
            return dual(self.formula(raw[1], env))
        if kind == 'memb':
            return member_macro(self.term(raw[1], env),
                                self.term(raw[2], env))
        if kind == 'equiv':
            return equiv(self.term(raw[1], env), self.term(raw[2], env))
        if kind == 'subseteq':
            return subseteq_macro(self.term(raw[1], env),
                                  self.term(raw[2], env))
        raise ParseError(f'expected a formula, found {kind}')

    def membership(self, raw, env=None):
        return MembershipAtom(self.term(raw[1], env), self.term(raw[2], env))

    def expr(self, raw, env=None):
        env = env or {}
        kind = raw[0]
        if kind == 'var':
            return VarE(self._lookup(raw[1], env))
        if kind == 'unit':
            return UnitE()
        if kind == 'pair':
            return PairE(self.expr(raw[1], env), self.expr(raw[2], env))
        if kind == 'proj':
            inner = self.expr(raw[2], env)
            return Proj1E(inner) if raw[1] == 1 else Proj2E(inner)
        if kind == 'singleton':
            return Singleton(self.expr(raw[1], env))
        if kind == 'get':
            return GetT(self.expr(raw[1], env))
        if kind in ('bigunion', 'comprehension'):
            name, over_raw = (raw[2], raw[3]) if kind == 'bigunion' \
                else (raw[1], raw[2])
            over = self.expr(over_raw, env)
            if not isinstance(over.ty, SetType):
                raise ParseError(f'{name} ranges over non-set {over}')
            var = Var(name, over.ty.elem)
            inner = {**env, name: var}
            if kind == 'bigunion':
                return BigUnion(self.expr(raw[1], inner), var, over)
            return Comprehension(var, over, self.formula(raw[3], inner))
        if kind == 'empty':
            return EmptySet(raw[1])
        if kind == 'union':
            return Union(self.expr(raw[1], env), self.expr(raw[2], env))
        if kind == 'diff':
            return Difference(self.expr(raw[1], env), self.expr(raw[2], env))
        raise ParseError(f'expected an expression, found {kind}')

    def sequent(self, raw):
        theta = tuple(self.membership(a) for a in raw[1])
        if raw[0] == 'seq1':
            return Sequent1(theta, tuple(self.formula(f) for f in raw[2]))
        return Sequent2(theta, tuple(self.formula(f) for f in raw[2]),
                        tuple(self.formula(f) for f in raw[3]))

    def node(self, raw):
        attrs = dict(raw['attrs'])
        if 'conclusion' not in attrs:
            raise ParseError(f'rule {raw["rule"]} has no conclusion')
        rule = RuleInstance(
            rule=raw['rule'],
            principal=attrs.get('principal', ()),
            witness=tuple(self.term(t) for t in attrs.get('witness', [])),
            fresh=tuple(self._lookup(n, {}) for n in attrs.get('fresh', [])),
            occ=attrs.get('occ', ()),
            side=attrs.get('side', 0))
        return ProofTree(self.sequent(attrs['conclusion']), rule,
                         tuple(self.node(p) for p in raw['premises']))


def _env(env):
    """Accepts {name: type}, {name: type string} or an iterable of Vars."""
    if env is None:
        return {}
    if isinstance(env, dict):
        return {k: parse_type(v) if isinstance(v, str) else v
                for k, v in env.items()}
    return {v.name: v.ty for v in env}


def parse_type(text):
    return _parse(text, 'type')


def parse_term(text, env=None):
    return Resolver(_env(env)).term(_parse(text, 'term'))


def parse_formula(text, env=None):
    return Resolver(_env(env)).formula(_parse(text, 'formula'))


def parse_expr(text, env=None):
    return Resolver(_env(env)).expr(_parse(text, 'expr'))


def parse_value(text):
    return _parse(text, 'value')


def parse_sequent(text, env=None):
    return Resolver(_env(env)).sequent(_parse(text, 'sequent'))


def parse_proof(text):
    """Returns (calculus, proof tree, declared variables)."""
    raw = _parse(text, 'proof')
    env = dict(raw['vars'])
    tree = Resolver(env).node(raw['root'])
    return raw['calculus'], tree, env


def format_type(ty):
    return str(ty)


def format_formula(f):
    return str(f)


def format_expr(e):
    return str(e)


def format_proof(p, calculus, indent=2):
    variables = {}
    for node in p.nodes():
        for v in node.conclusion.free_vars():
            variables[v.name] = v.ty
        for v in node.rule.fresh:
            variables[v.name] = v.ty
    decls = ', '.join(f'{n} : {t}' for n, t in sorted(variables.items()))
    lines = [f'(proof :calculus {calculus} :vars [{decls}]']
    _format_node(p, lines, indent, indent)
    lines[-1] += ')'
    return '\n'.join(lines) + '\n'


def _format_node(p, lines, depth, indent):
    pad = ' ' * depth
    r = p.rule
    head = f'{pad}(rule {r.rule}'
    if r.principal:
        head += ' :principal [' + ', '.join(r.principal) + ']'
    if r.witness:
        head += ' :witness [' + ', '.join(str(t) for t in r.witness) + ']'
    if r.fresh:
        head += ' :fresh [' + ', '.join(v.name for v in r.fresh) + ']'
    if r.occ:
        head += ' :occ [' + ', '.join(
            '(' + ', '.join(str(i) for i in pos) + ')' for pos in r.occ) + ']'
    if r.side:
        head += f' :side {r.side}'
    lines.append(head)
    lines.append(f'{pad}  :conclusion {{ {p.conclusion} }}')
    for q in p.premises:
        _format_node(q, lines, depth + indent, indent)
    lines[-1] += ')'
