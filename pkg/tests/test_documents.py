import pytest

from nrcsynth.documents import (
    dump_definition, dump_goal, dump_instance, dump_partition, dump_problem,
    load_definition, load_goal, load_instance, load_partition, load_problem,
    load_yaml)
from nrcsynth.errors import ParseError, TypeMismatch
from nrcsynth.fixtures import identity_problem
from nrcsynth.instances import Atom
from nrcsynth.kernel import PartitionedSequent
from nrcsynth.parser import parse_value
from nrcsynth.syntax import alpha_eq

INSTANCE = '''
universe: [1, 2, 7]
bindings:
  B:
    type: set((ur * set(ur)))
    value: '[<1, [2]>]'
  a:
    type: ur
    value: '7'
'''


def test_instances():
    inst = load_instance(INSTANCE)
    assert inst.universe == {Atom('1'), Atom('2'), Atom('7')}
    assert inst.lookup(inst.by_name('B')) == parse_value('[<1, [2]>]')
    assert load_instance(dump_instance(inst)) == inst


def test_instance_values_are_typed():
    with pytest.raises(TypeMismatch):
        load_instance('bindings: {a: {type: ur, value: "[1]"}}')


def test_definitions(nesting):
    loaded = load_definition(dump_definition(nesting))
    assert loaded.witness is None
    assert loaded.inputs == nesting.inputs
    assert loaded.auxiliaries == nesting.auxiliaries
    assert loaded.output == nesting.output
    assert alpha_eq(loaded.phi, nesting.phi)


def test_problems():
    problem = identity_problem()
    assert load_problem(dump_problem(problem)) == problem


def test_partitions(identity_set):
    seq = identity_set.sequent()
    part = load_partition('sides: {d1: R, d2: G}\n', seq)
    assert part.delta == ('L', 'R', 'G')
    assert isinstance(part, PartitionedSequent)
    assert load_partition(dump_partition(part), seq) == part


def test_goals():
    from tests.test_collection import subset_goal, subset_proof
    goal = subset_goal()
    seq = subset_proof(goal).conclusion
    loaded = load_goal(dump_goal(goal), seq)
    assert (loaded.path, loaded.anchor, loaded.bound, loaded.z, loaded.y) == \
        (goal.path, goal.anchor, goal.bound, goal.z, goal.y)
    assert alpha_eq(loaded.lam, goal.lam)
    assert alpha_eq(loaded.rho, goal.rho)


@pytest.mark.parametrize('text', ['- 1\n- 2\n', 'a: [\n', ''])
def test_documents_must_be_mappings(text):
    with pytest.raises(ParseError):
        load_yaml(text)


def test_missing_fields():
    with pytest.raises(ParseError):
        load_problem('base: {B: set(ur)}\nviews: {V: B}\n')
