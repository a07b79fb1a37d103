import pytest

from nrcsynth.collection import CollectionGoal, Collector, check_clauses
from nrcsynth.errors import GoalShapeMismatch, NotFocused, PartitionMismatch
from nrcsynth.fixtures import build_proof
from nrcsynth.instances import Instance, evaluate, expr_free_vars
from nrcsynth.kernel import (
    PartitionedSequent, ProofTree, RuleInstance, Sequent1, check_focused,
    expand)
from nrcsynth.oracle import Bounds
from nrcsynth.parser import parse_formula, parse_type, parse_value
from nrcsynth.synthesizer import partition
from nrcsynth.syntax import MembershipAtom, Var, UR, fresh_var, member_macro
from nrcsynth.transforms import equiv_to_biconditional
from nrcsynth.transforms.base import index_of

ENV = {'A': 'set(ur)', 'C': 'set(ur)', 'O': 'set(set(ur))'}
A, C, O = (Var(name, parse_type(ty)) for name, ty in ENV.items())


def subset_goal():
    """∃y∈O. ∀z∈C (z ∈̂ A ↔ z ∈̂ y)."""
    z, y = Var('z', UR), Var('y', parse_type('set(ur)'))
    return CollectionGoal('m', O, C, member_macro(z, A), member_macro(z, y),
                          z, y)


def subset_proof(goal):
    """C ⊆ A and C ∈ O give the goal with y = C."""
    seq = Sequent1((MembershipAtom(C, O),),
                   (parse_formula('not(C subseteq A)', ENV), goal.formula()))
    inside = [
        ('or', 'or(not(u memb A), u memb C)'),
        ('forall', 'not(u memb A)', 'w1'),
        ('exists', 'u memb C', ['u']),
        ('eq', 'u = u')]
    outside = [
        ('or', 'or(not(u memb C), u memb A)'),
        ('forall', 'not(u memb C)', 'w2'),
        ('exists', 'not(C subseteq A)', ['u']),
        ('forall', 'forall y in A . u != y', 'w3'),
        ('exists', 'u memb A', ['w3']),
        ('neq', 'u != w3', 'u = w3', 1, (0,)),
        ('eq', 'w3 = w3')]
    return build_proof(seq, [
        ('exists', goal.formula(), ['C']),
        ('forall', 'forall z in C . and(or(not(z memb A), z memb C), '
                   'or(not(z memb C), z memb A))', 'u'),
        ('and', 'and(or(not(u memb A), u memb C), '
                'or(not(u memb C), u memb A))', inside, outside)])


@pytest.fixture
def subset_case():
    goal = subset_goal()
    p = subset_proof(goal)
    part = PartitionedSequent(p.conclusion, ('R',), ('L', 'G'))
    return p, goal, part


def test_the_proof_is_focused(subset_case):
    p, _, _ = subset_case
    assert check_focused(p)


def test_collected_family_contains_the_defined_set(subset_case):
    p, goal, part = subset_case
    result = Collector().collect(p, goal, part)
    assert expr_free_vars(result.expr) <= {C}
    left, right = check_clauses(goal, part, result, Bounds(2, 2))
    assert left and right


def test_collected_family_on_an_instance(subset_case):
    p, goal, part = subset_case
    result = Collector().collect(p, goal, part)
    inst = Instance({C: parse_value('[1, 2]'), A: parse_value('[1, 2, 3]'),
                     O: parse_value('[[1, 2]]')})
    assert evaluate(goal.defined_set(), inst) in evaluate(result.expr, inst)


def test_goal_needs_a_set_occurrence():
    z, y = Var('z', UR), Var('y', parse_type('set(set(ur))'))
    with pytest.raises(GoalShapeMismatch):
        CollectionGoal('', O, C, member_macro(z, A), member_macro(z, A), z, y)


def test_goal_bound_ranges_over_z():
    z, y = Var('z', UR), Var('y', parse_type('set(ur)'))
    with pytest.raises(GoalShapeMismatch):
        CollectionGoal('m', O, O, member_macro(z, A), member_macro(z, y),
                       z, y)


def test_collection_wants_one_goal(subset_case):
    p, goal, _ = subset_case
    part = PartitionedSequent(p.conclusion, ('R',), ('L', 'R'))
    with pytest.raises(PartitionMismatch):
        Collector().collect(p, goal, part)


def test_collection_wants_a_focused_proof(subset_case):
    _, goal, _ = subset_case
    s = Sequent1((MembershipAtom(C, O),),
                 (parse_formula('forall x in A . x = x', ENV),
                  goal.formula()))
    rule = RuleInstance('Exists', ('d1',), witness=(C,))
    (e,) = expand(s, rule)
    # an existential step beside a universal one
    p = ProofTree(s, rule, (ProofTree(e.sequent(False),
                                      RuleInstance('Top', ('d0',))),))
    part = PartitionedSequent(s, ('R',), ('L', 'G'))
    with pytest.raises(NotFocused):
        Collector().collect(p, goal, part)


def test_collection_below_the_nesting_output(nesting):
    from tests.test_transforms import nested_goal
    p, k, elem, anchor = nested_goal(nesting)
    a = fresh_var('a', elem.ty, p.names() | nesting.names())
    q = equiv_to_biconditional(p, k, elem, 'm2', anchor, a)
    avoid = q.names() | {a.name}
    v = fresh_var('v', elem.ty.elem, avoid)
    y = fresh_var('y', elem.ty, avoid | {v.name})
    goal = CollectionGoal('m2', anchor, a, member_macro(v, elem),
                          member_macro(v, y), v, y)
    part = partition(q.conclusion, nesting,
                     index_of(q.conclusion, goal.formula()), 'G')
    result = Collector().collect(q, goal, part)
    assert not {w.name for w in expr_free_vars(result.expr)} & \
        {w.name for w in nesting.primed_vars}
    left, right = check_clauses(goal, part, result, Bounds(2, 1))
    assert left and right
