"""Textual syntax for first-order formulas, sequents and proof files."""
import lark

from nrcsynth.errors import ParseError
from nrcsynth.kernel.sequents import ProofTree
from nrcsynth.fo.checker import FoRule
from nrcsynth.fo.collection import FoCollectionGoal
from nrcsynth.fo.syntax import (
    FO_BOT, FO_TOP, FoEq, FoExists, FoForall, FoNeq, FoOr, FoSequent, Pred,
    fo_conj, fo_disj, fo_dual, fo_iff)

FO_PROOF_FORMAT_VERSION = 'nrcsynth-foproof/1'
FO_FORMULA_FORMAT_VERSION = 'nrcsynth-fo/1'

GRAMMAR = r'''
?fo: NAME "(" [NAME ("," NAME)*] ")"             -> pred
   | NAME "=" NAME                               -> eq
   | NAME "!=" NAME                              -> neq
   | "true"                                      -> top
   | "false"                                     -> bot
   | "and" "(" fo ("," fo)+ ")"                  -> conj
   | "or" "(" fo ("," fo)+ ")"                   -> disj
   | "not" "(" fo ")"                            -> neg
   | "implies" "(" fo "," fo ")"                 -> implies
   | "iff" "(" fo "," fo ")"                     -> iff
   | "forall" NAME "." fo                        -> forall
   | "exists" NAME "." fo                        -> exists

sequent: "|-" [fo ("," fo)*]
SIDE: "L" | "R" | "G"
attr: ":principal" "[" [NUMBER ("," NUMBER)*] "]"  -> principal
    | ":term" NAME                                -> term
    | ":derived" "{" fo "}"                       -> derived
    | ":conclusion" "{" sequent "}"               -> conclusion
node: "(" "rule" NAME attr* node* ")"
header: ":lambda" "{" fo "}"                      -> lam
      | ":rho" "{" fo "}"                         -> rho
      | ":z" NAME                                 -> z
      | ":y" NAME                                 -> y
      | ":sides" "[" [SIDE ("," SIDE)*] "]"       -> sides
proof: "(" "foproof" header* node ")"

NAME: /(?!(and|or|not|implies|iff|forall|exists|true|false|rule|foproof)\b)[A-Za-z_][A-Za-z0-9_']*/
COMMENT: /;;[^\n]*/

%import common.INT -> NUMBER
%import common.WS
%ignore WS
%ignore COMMENT
'''

_parser = lark.Lark(GRAMMAR, start=['fo', 'sequent', 'proof'])


class _Build(lark.Transformer):

    def pred(self, children):
        return Pred(str(children[0]),
                    tuple(str(c) for c in children[1:] if c is not None))

    def eq(self, children):
        return FoEq(str(children[0]), str(children[1]))

    def neq(self, children):
        return FoNeq(str(children[0]), str(children[1]))

    def top(self, _):
        return FO_TOP

    def bot(self, _):
        return FO_BOT

    def conj(self, children):
        return fo_conj(children)

    def disj(self, children):
        return fo_disj(children)

    def neg(self, children):
        return fo_dual(children[0])

    def implies(self, children):
        return FoOr(fo_dual(children[0]), children[1])

    def iff(self, children):
        return fo_iff(children[0], children[1])

    def forall(self, children):
        return FoForall(str(children[0]), children[1])

    def exists(self, children):
        return FoExists(str(children[0]), children[1])

    def sequent(self, children):
        return FoSequent(tuple(c for c in children if c is not None))

    def principal(self, children):
        return ('principal', tuple(int(c) for c in children if c is not None))

    def term(self, children):
        return ('term', str(children[0]))

    def derived(self, children):
        return ('derived', children[0])

    def conclusion(self, children):
        return ('conclusion', children[0])

    def node(self, children):
        name = str(children[0])
        attrs = dict(c for c in children[1:] if isinstance(c, tuple))
        premises = tuple(c for c in children[1:] if isinstance(c, ProofTree))
        if 'conclusion' not in attrs:
            raise ParseError(f'rule {name} has no conclusion')
        rule = FoRule(name, attrs.get('principal', ()), attrs.get('term'),
                      attrs.get('derived'))
        return ProofTree(attrs['conclusion'], rule, premises)

    def lam(self, children):
        return ('lam', children[0])

    def rho(self, children):
        return ('rho', children[0])

    def z(self, children):
        return ('z', str(children[0]))

    def y(self, children):
        return ('y', str(children[0]))

    def sides(self, children):
        return ('sides', tuple(str(c) for c in children if c is not None))

    def proof(self, children):
        header = dict(children[:-1])
        return header, children[-1]


def _parse(text, start):
    try:
        tree = _parser.parse(text, start=start)
        return _Build().transform(tree)
    except lark.exceptions.LarkError as e:
        raise ParseError(str(e)) from e


def parse_fo_formula(text):
    return _parse(text, 'fo')


def parse_fo_proof(text):
    """Returns (proof, goal or None, sides or None)."""
    header, root = _parse(text, 'proof')
    goal = None
    if 'lam' in header:
        missing = {'rho', 'z', 'y'} - set(header)
        if missing:
            raise ParseError(f'goal lacks {sorted(missing)}')
        goal = FoCollectionGoal(header['lam'], header['rho'], header['z'],
                                header['y'])
    return root, goal, header.get('sides')


def format_fo_proof(p, goal=None, sides=None, indent=2):
    lines = ['(foproof']
    if goal is not None:
        lines.append(f'  :lambda {{ {goal.lam} }} :rho {{ {goal.rho} }} '
                     f':z {goal.z} :y {goal.y}')
    if sides is not None:
        lines.append('  :sides [' + ', '.join(sides) + ']')
    _format_node(p, lines, indent, indent)
    lines[-1] += ')'
    return '\n'.join(lines) + '\n'


def _format_node(p, lines, depth, indent):
    pad = ' ' * depth
    r = p.rule
    head = f'{pad}(rule {r.rule}'
    if r.principal:
        head += ' :principal [' + ', '.join(map(str, r.principal)) + ']'
    if r.term is not None:
        head += f' :term {r.term}'
    if r.derived is not None:
        head += f' :derived {{ {r.derived} }}'
    lines.append(head)
    lines.append(f'{pad}  :conclusion {{ {p.conclusion} }}')
    for q in p.premises:
        _format_node(q, lines, depth + indent, indent)
    lines[-1] += ')'
