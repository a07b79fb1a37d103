"""Worked implicit definitions with their witnesses.

Witnesses are written as tactic scripts: each step names its principal
formula by text, looked up up to α-equivalence in the current sequent, and
the builder computes the premises with the kernel's own rule schemas. A
script that does not fit its sequent fails while building, so every fixture
is checked by construction.
"""
import logging

from nrcsynth.determinacy import DeterminacyProblem, assemble_determinacy
from nrcsynth.errors import MalformedProof
from nrcsynth.fo.checker import FoRule, fo_expand
from nrcsynth.fo.collection import FoCollectionGoal
from nrcsynth.fo.parser import parse_fo_formula
from nrcsynth.fo.syntax import FoSequent, fo_dual
from nrcsynth.instances import VarE
from nrcsynth.kernel.rules import RuleViolation, expand
from nrcsynth.kernel.sequents import (
    ProofTree, RuleInstance, Sequent2, at, parse_loc)
from nrcsynth.parser import parse_formula, parse_term, parse_type
from nrcsynth.synthesizer import ImplicitDefinition
from nrcsynth.syntax import (
    EqUr, MembershipAtom, Or, ProdType, UnitType, UrType, Var, dual,
    free_vars)
from nrcsynth.transforms.base import locate

logger = logging.getLogger(__name__)


class ProofBuilder:
    """Runs tactic scripts against one-sided sequents.

    A script is a list of steps; a branching step ends its list and carries
    one sub-script per premise:

        ('or', f)                       ('split', f)
        ('and', f, left, right)         ('forall', f, name)
        ('exists', f, [terms])          ('neq', atom, alpha, side, *occ)
        ('eq', f)   ('top', f)   ('ax', f, g)   ('refl', t)
    """

    def __init__(self, strict=True):
        self._strict = strict
        self._steps = 0

    @property
    def steps(self):
        return self._steps

    def formula(self, seq, f):
        if isinstance(f, str):
            return parse_formula(f, seq.free_vars())
        return f

    def where(self, seq, f, exclude=()):
        return locate(seq, self.formula(seq, f), exclude)

    def build(self, seq, script):
        self._steps = 0
        p = self.run(seq, script)
        logger.debug('built a proof of %d steps', self._steps)
        return p

    def run(self, seq, script):
        script = list(script)
        if not script:
            raise MalformedProof(f'the script stops at {seq}')
        step, rest = script[0], script[1:]
        handler = getattr(self, '_' + step[0], None)
        if handler is None:
            raise MalformedProof(f'unknown step {step[0]}')
        self._steps += 1
        return handler(seq, rest, *step[1:])

    def node(self, seq, rule, scripts):
        try:
            premises = expand(seq, rule, self._strict)
        except RuleViolation as e:
            raise MalformedProof(f'{rule.rule} at {seq}: {e}') from None
        if len(premises) != len(scripts):
            raise MalformedProof(f'{rule.rule} has {len(premises)} premises, '
                                 f'the script gives {len(scripts)}')
        return ProofTree(seq, rule, tuple(
            self.run(e.sequent(False), s) for e, s in zip(premises, scripts)))

    def leaf(self, seq, rest, rule):
        if rest:
            raise MalformedProof(f'steps after the axiom {rule.rule}')
        return self.node(seq, rule, [])

    def _or(self, seq, rest, f):
        return self.node(seq, RuleInstance('Or', (self.where(seq, f),)),
                         [rest])

    def _split(self, seq, rest, f):
        f = self.formula(seq, f)
        if not isinstance(f, Or):
            return self.run(seq, rest)
        return self._or(seq, [('split', f.l), ('split', f.r)] + rest, f)

    def _and(self, seq, rest, f, left, right):
        if rest:
            raise MalformedProof('steps after a branching And')
        return self.node(seq, RuleInstance('And', (self.where(seq, f),)),
                         [left, right])

    def _forall(self, seq, rest, f, name):
        location = self.where(seq, f)
        y = Var(name, at(seq, location).var.ty)
        return self.node(seq, RuleInstance('Forall', (location,), fresh=(y,)),
                         [rest])

    def _exists(self, seq, rest, f, witnesses):
        env = seq.free_vars()
        rule = RuleInstance('Exists', (self.where(seq, f),), witness=tuple(
            parse_term(t, env) for t in witnesses))
        return self.node(seq, rule, [rest])

    def _neq(self, seq, rest, atom, alpha, side, *occ):
        a = self.where(seq, atom)
        b = self.where(seq, alpha, exclude=(parse_loc(a)[1],))
        rule = RuleInstance('Neq', (a, b), occ=tuple(occ) or ((0,),),
                            side=side)
        return self.node(seq, rule, [rest])

    def _eq(self, seq, rest, f):
        return self.leaf(seq, rest, RuleInstance('Eq', (self.where(seq, f),)))

    def _top(self, seq, rest, f='true'):
        return self.leaf(seq, rest, RuleInstance('Top', (self.where(seq, f),)))

    def _ax(self, seq, rest, f, g):
        i = self.where(seq, f)
        j = self.where(seq, g, exclude=(parse_loc(i)[1],))
        return self.leaf(seq, rest, RuleInstance('Ax', (i, j)))

    def _refl(self, seq, rest, t):
        rule = RuleInstance('Refl', witness=(parse_term(t, seq.free_vars()),))
        return self.node(seq, rule, [rest])


def build_proof(seq, script, strict=True):
    return ProofBuilder(strict).build(seq, script)


# Nesting a flat relation by its first column.

NESTING_TYPES = {'V': 'set((ur * ur))', 'B': 'set((ur * set(ur)))'}


def _c1(x):
    return (f'forall v in V . exists b in {x} . '
            f'and(pi1(v) = pi1(b), pi2(v) memb pi2(b))')


def _c2(x):
    return (f'forall b in {x} . forall e in pi2(b) . exists v in V . '
            f'and(pi1(v) = pi1(b), pi2(v) = e)')


def _key(x):
    return (f'forall b in {x} . forall b2 in {x} . '
            f'or(pi1(b) != pi1(b2), b equiv b2)')


def _nonempty(x):
    return f'forall b in {x} . exists e in pi2(b) . true'


def nesting_formula():
    """B groups V by first component, with nonempty groups and unique keys."""
    text = f'and({_c1("B")}, {_c2("B")}, {_key("B")}, {_nonempty("B")})'
    return parse_formula(text, NESTING_TYPES)


def _key_chain(v, w, b, b1, wb):
    """pi1(b) = pi1(b1) from v, w agreeing with b, b1 and w with wb."""
    return [
        ('neq', f'pi1({w}) != pi1({wb})', f'pi1({wb}) = pi1({b1})', 2, (0,)),
        ('neq', f'pi1({w}) != pi1({b})', f'pi1({w}) = pi1({b1})', 1, (0,)),
        ('neq', f'pi1({v}) != pi1({b})', f'pi1({b}) = pi1({b1})', 2, (0,)),
        ('neq', f'pi1({v}) != pi1({b1})', f'pi1({v}) = pi1({b1})', 2, (1,)),
        ('eq', f'pi1({v}) = pi1({v})')]


def _group_inclusion(src, dst, b, b1, s, w, wb, c, y):
    """pi2(b) ⊆ pi2(b1): s comes from a tuple w of V, which also lands in
    the group wb of dst; wb and b1 share their key, so they coincide."""
    distinct = f'not(pi2({wb}) subseteq pi2({b1}))'
    return [
        ('forall', f'pi2({b}) subseteq pi2({b1})', s),
        ('exists', f'not({_c2(src)})', [b, s]),
        ('forall', f'forall v in V . or(pi1(v) != pi1({b}), pi2(v) != {s})',
         w),
        ('or', f'or(pi1({w}) != pi1({b}), pi2({w}) != {s})'),
        ('exists', f'not({_c1(dst)})', [w]),
        ('forall', f'forall b in {dst} . or(pi1({w}) != pi1(b), '
                   f'not(pi2({w}) memb pi2(b)))', wb),
        ('or', f'or(pi1({w}) != pi1({wb}), not(pi2({w}) memb pi2({wb})))'),
        ('forall', f'not(pi2({w}) memb pi2({wb}))', c),
        ('exists', f'not({_key(dst)})', [wb, b1]),
        ('and', f'and(pi1({wb}) = pi1({b1}), not({wb} equiv {b1}))',
         _key_chain('v', w, b, b1, wb),
         [('or', f'not({wb} equiv {b1})'),
          ('or', f'or({distinct}, not(pi2({b1}) subseteq pi2({wb})))'),
          ('exists', distinct, [c]),
          ('forall', f'forall y in pi2({b1}) . {c} != y', y),
          ('exists', f'exists y in pi2({b1}) . {s} = y', [y]),
          ('neq', f'pi2({w}) != {s}', f'{s} = {y}', 2, (0,)),
          ('neq', f'pi2({w}) != {c}', f'pi2({w}) = {y}', 1, (0,)),
          ('neq', f'{c} != {y}', f'{c} = {y}', 1, (0,)),
          ('eq', f'{y} = {y}')])]


def _nesting_inclusion(src, dst):
    """src ⊆ dst up to ≡, from both copies of the nesting formula."""
    return [
        ('forall', f'{src} subseteq {dst}', 'b'),
        ('exists', f'not({_nonempty(src)})', ['b']),
        ('forall', 'forall e in pi2(b) . false', 'e'),
        ('exists', f'not({_c2(src)})', ['b', 'e']),
        ('forall', 'forall v in V . or(pi1(v) != pi1(b), pi2(v) != e)', 'v'),
        ('or', 'or(pi1(v) != pi1(b), pi2(v) != e)'),
        ('exists', f'not({_c1(dst)})', ['v']),
        ('forall', f'forall b in {dst} . or(pi1(v) != pi1(b), '
                   f'not(pi2(v) memb pi2(b)))', 'b1'),
        ('or', 'or(pi1(v) != pi1(b1), not(pi2(v) memb pi2(b1)))'),
        ('forall', 'not(pi2(v) memb pi2(b1))', 'c1'),
        ('exists', f'exists y in {dst} . b equiv y', ['b1']),
        ('and', 'b equiv b1',
         [('neq', 'pi1(v) != pi1(b)', 'pi1(b) = pi1(b1)', 2, (0,)),
          ('neq', 'pi1(v) != pi1(b1)', 'pi1(v) = pi1(b1)', 2, (1,)),
          ('eq', 'pi1(v) = pi1(v)')],
         [('and', 'and(pi2(b) subseteq pi2(b1), pi2(b1) subseteq pi2(b))',
           _group_inclusion(src, dst, 'b', 'b1', 's', 'v2', 'b2', 'c2',
                            'y2'),
           _group_inclusion(dst, src, 'b1', 'b', 't', 'v3', 'b3', 'c3',
                            'y3'))])]


def nesting_definition(with_witness=True):
    """B as an implicit function of V: the grouping of a flat relation."""
    phi = nesting_formula()
    env = {v.name: v for v in free_vars(phi)}
    defn = ImplicitDefinition(phi, (env['V'],), (), env['B'])
    if not with_witness:
        return defn
    script = [('split', dual(defn.phi)), ('split', dual(defn.phi_primed)),
              ('and', "B equiv B'", _nesting_inclusion('B', "B'"),
               _nesting_inclusion("B'", 'B'))]
    return defn.with_(witness=build_proof(defn.sequent(), script))


# Identity views.

def identity_problem(ty='set(ur)'):
    """One view V = B and the query B itself."""
    b = Var('B', parse_type(ty))
    return DeterminacyProblem({'V': VarE(b)}, VarE(b), (b,))


def _chain_inclusion(steps, x, goal):
    """x ∈ goal set through the chain of inclusions given as (formula, var)."""
    script = []
    previous = x
    for f, name in steps:
        script.append(('exists', f, [previous]))
        script.append(('forall', _instance_text(f, previous), name))
        previous = name
    script.append(('exists', goal.format(x=x), [previous]))
    names = [x] + [name for _, name in steps]
    for a, b in zip(names, names[1:]):
        script.append(('neq', f'{a} != {b}', f'{a} = {previous}', 1, (0,)))
    script.append(('eq', f'{previous} = {previous}'))
    return script


def _instance_text(f, t):
    # not(X subseteq Y) instantiated at t
    inner = f[len('not('):-1]
    _, container = inner.split(' subseteq ')
    return f'forall y in {container} . {t} != y'


def _atom_chain(at):
    """at(q) = at(q′) rewritten along at(V) = at(B) and at(V) = at(B′)."""
    q, b, v, q1, b1 = (at(name) for name in ('q', 'B', 'V', "q'", "B'"))
    return [('neq', f'{q} != {b}', f'{q} = {q1}', 1, (0,)),
            ('neq', f'{v} != {b}', f'{b} = {q1}', 2, (0,)),
            ('neq', f'{v} != {b1}', f'{v} = {q1}', 1, (0,)),
            ('neq', f'{q1} != {b1}', f'{b1} = {q1}', 2, (0,)),
            ('eq', f'{q1} = {q1}')]


def identity_witness(defn):
    """q ≡ q′ through V = B, V = B′ and the query specifications. Covers
    unit, ur, ur × ur and set(ur) outputs."""
    seq = defn.sequent()
    ty = defn.output.ty
    if isinstance(ty, UnitType):
        return build_proof(seq, [('top', 'true')])
    script = [('split', dual(defn.phi)), ('split', dual(defn.phi_primed))]
    if isinstance(ty, UrType):
        return build_proof(seq, script + _atom_chain(str))
    if isinstance(ty, ProdType):
        script.append(('and', "q equiv q'",
                       _atom_chain(lambda name: f'pi1({name})'),
                       _atom_chain(lambda name: f'pi2({name})')))
        return build_proof(seq, script)

    def forward(a, b, a_side, b_side):
        chain = [(f'not({a} subseteq {a_side})', 'y1'),
                 (f'not({a_side} subseteq V)', 'y2'),
                 (f'not(V subseteq {b_side})', 'y3'),
                 (f'not({b_side} subseteq {b})', 'y4')]
        return [('forall', f'{a} subseteq {b}', 'x0')] + _chain_inclusion(
            chain, 'x0', f'exists y in {b} . {{x}} = y')

    script.append(('and', "q equiv q'", forward('q', "q'", 'B', "B'"),
                   forward("q'", 'q', "B'", 'B')))
    return build_proof(seq, script)


def identity_definition(ty='set(ur)'):
    defn = assemble_determinacy(identity_problem(ty))
    return defn.with_(witness=identity_witness(defn))


# A two-sided proof: ∀x ∈ b. x = x.

def reflexivity_proof():
    b = Var('b', parse_type('set(ur)'))
    y = Var('y', parse_type('ur'))
    goal = parse_formula('forall x in b . x = x', [b])
    root = Sequent2((), (), (goal,))
    middle = Sequent2((MembershipAtom(y, b),), (), (EqUr(y, y),))
    top = Sequent2((MembershipAtom(y, b),), (EqUr(y, y),), (EqUr(y, y),))
    leaf = ProofTree(top, RuleInstance('Ax', ('g0', 'd0')))
    refl = ProofTree(middle, RuleInstance('Refl', witness=(y,)), (leaf,))
    return ProofTree(root, RuleInstance('ForallR', ('d0',), fresh=(y,)),
                     (refl,))


# First-order proofs.

def fo_build(seq, script):
    """script = (tag, principal, term, derived, [sub-scripts])."""
    tag, principal, term, derived, subs = script
    if isinstance(derived, str):
        derived = parse_fo_formula(derived)
    rule = FoRule(tag, principal, term, derived)
    try:
        premises = fo_expand(seq, rule)
    except RuleViolation as e:
        raise MalformedProof(f'{tag} at {seq}: {e}') from None
    if len(premises) != len(subs):
        raise MalformedProof(f'{tag} has {len(premises)} premises')
    return ProofTree(seq, rule, tuple(fo_build(q, s)
                                      for q, s in zip(premises, subs)))


def _step(tag, principal=(), term=None, derived=None, *subs):
    return (tag, tuple(principal), term, derived, list(subs))


def fo_negated(*texts):
    return FoSequent(tuple(fo_dual(parse_fo_formula(t)) for t in texts))


FO_LEFT = 'and(forall x . or(not(P(x)), R(x)), P(a))'
FO_RIGHT = 'and(forall x . or(not(R(x)), Q(x)), not(Q(a)))'


def fo_interpolation_proof():
    """⊢ ¬φ, ¬ψ where φ = ∀x(P→R) ∧ P(a) and ψ = ∀x(R→Q) ∧ ¬Q(a)."""
    seq = fo_negated(FO_LEFT, FO_RIGHT)
    script = _step(
        'Or', (0,), None, None, _step(
            'Or', (2,), None, None, _step(
                'Exists', (0,), 'a', None, _step(
                    'And', (4,), None, None,
                    _step('Ax', (4, 1)),
                    _step('Exists', (2,), 'a', None, _step(
                        'And', (5,), None, None,
                        _step('Ax', (5, 4)),
                        _step('Ax', (3, 5))))))))
    return fo_build(seq, script)


FO_COLLECT_LEFT = 'and(forall x . implies(R(x), P(x)), ' \
    'forall x . implies(P(x), R(x)))'
FO_COLLECT_RIGHT = 'and(forall x . implies(Q(x), R(x)), ' \
    'forall x . implies(R(x), Q(x)))'


def fo_collection_goal():
    return FoCollectionGoal(parse_fo_formula('P(z)'),
                            parse_fo_formula('Q(z)'), 'z', 'y')


def fo_collection_proof():
    """⊢ ¬(P↔R), ¬(R↔Q), ∃y ∀z (P(z) ↔ Q(z)), the goal on its own side."""
    goal = fo_collection_goal()
    seq = fo_negated(FO_COLLECT_LEFT, FO_COLLECT_RIGHT).extend(
        goal.formula())
    forward = _step(
        'Exists', (1,), 'u', None, _step(
            'And', (7,), None, None,
            _step('Ax', (7, 5)),
            _step('Exists', (3,), 'u', None, _step(
                'And', (8,), None, None,
                _step('Ax', (8, 7)),
                _step('Ax', (6, 8))))))
    backward = _step(
        'Exists', (2,), 'u', None, _step(
            'And', (7,), None, None,
            _step('Ax', (7, 5)),
            _step('Exists', (0,), 'u', None, _step(
                'And', (8,), None, None,
                _step('Ax', (8, 7)),
                _step('Ax', (6, 8))))))
    script = _step(
        'Or', (0,), None, None, _step(
            'Or', (2,), None, None, _step(
                'Exists', (4,), 'w', None, _step(
                    'Forall', (5,), 'u', None, _step(
                        'And', (5,), None, None,
                        _step('Or', (5,), None, None, forward),
                        _step('Or', (5,), None, None, backward))))))
    return fo_build(seq, script), goal


def fo_unfocused_proof():
    """∃x ¬P(x), P(a) ∧ P(a), instantiating before decomposing."""
    seq = FoSequent((parse_fo_formula('exists x . not(P(x))'),
                     parse_fo_formula('and(P(a), P(a))')))
    script = _step('Exists', (0,), 'a', None, _step(
        'And', (1,), None, None, _step('Ax', (1, 2)), _step('Ax', (1, 2))))
    return fo_build(seq, script)


def fo_reflexivity_proof():
    seq = FoSequent((parse_fo_formula('forall x . x = x'),))
    script = _step('Forall', (0,), 'y', None, _step(
        'Ref', (), 'y', None, _step('Ax', (0, 1))))
    return fo_build(seq, script)


def fo_replacement_proof():
    seq = FoSequent(tuple(parse_fo_formula(t)
                          for t in ('a != b', 'not(P(a))', 'P(b)')))
    script = _step('Repl', (0, 1), None, 'not(P(b))', _step('Ax', (2, 3)))
    return fo_build(seq, script)
