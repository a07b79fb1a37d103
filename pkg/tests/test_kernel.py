import pytest

from nrcsynth.errors import FreshnessViolation, NonMaximalSpecialization, \
    ProofRejected
from nrcsynth.fixtures import identity_definition
from nrcsynth.kernel import (
    PartitionedSequent, ProofTree, RuleInstance, check_focused, check_general,
    check_lowered, embed, expand, lower, lower_tree, node_at, proof_size)
from nrcsynth.kernel.sides import propagate_sides
from nrcsynth.parser import parse_sequent, parse_term
from nrcsynth.syntax import Var, UR
from nrcsynth.transforms import Focuser

ENV = {'S': 'set(ur)', 'T': 'set(ur)', 'c': 'ur', 'd': 'ur'}


def seq(text):
    return parse_sequent(text, ENV)


def grow(conclusion, rule, *above):
    """A node whose premises are the expected ones, closed by `above`."""
    return ProofTree(conclusion, rule, tuple(
        close(e.sequent(False))
        for e, close in zip(expand(conclusion, rule), above)))


def eq_leaf(k):
    return lambda s: ProofTree(s, RuleInstance('Eq', (f'd{k}',)))


def test_general_proof_is_accepted(reflexivity):
    report = check_general(reflexivity)
    assert report.accepted and report.nodes == 3


def test_lowering_keeps_the_proof_checkable(reflexivity):
    lowered = lower_tree(reflexivity)
    assert lowered.conclusion == lower(reflexivity.conclusion)
    assert check_lowered(lowered)


def test_focused_existential():
    s = seq('c in S |- exists y in S . c = y')
    rule = RuleInstance('Exists', ('d0',), witness=(parse_term('c', ENV),))
    p = grow(s, rule, eq_leaf(1))
    assert check_focused(p)
    assert proof_size(p) == 2


def test_focused_witnesses_are_checked(nesting, identity_set, identity_ur):
    for defn in (nesting, identity_set, identity_ur):
        report = check_focused(defn.witness)
        assert report, report.message
        assert defn.witness.conclusion.same_as(defn.sequent())


def test_missing_membership():
    s = seq('|- exists y in S . c = y')
    rule = RuleInstance('Exists', ('d0',), witness=(parse_term('c', ENV),))
    p = ProofTree(s, rule, (ProofTree(seq('|- exists y in S . c = y, c = c'),
                                      RuleInstance('Eq', ('d1',))),))
    report = check_focused(p)
    assert not report and report.condition == 'MissingMembership'


def test_alternating_context_is_rejected():
    s = seq('c in S |- exists y in S . c = y, forall x in T . x = x')
    rule = RuleInstance('Exists', ('d0',), witness=(parse_term('c', ENV),))
    p = ProofTree(s, rule, (ProofTree(
        seq('c in S |- exists y in S . c = y, forall x in T . x = x, c = c'),
        RuleInstance('Eq', ('d2',))),))
    report = check_focused(p)
    assert report.condition == 'ELContextViolation' and report.path == ()
    with pytest.raises(ProofRejected):
        report.require()
    # The general reading has no such condition.
    assert check_lowered(p)


def test_non_maximal_instance():
    s = seq('c in S, d in T |- exists y in S . exists z in T . y = z')
    rule = RuleInstance('Exists', ('d0',), witness=(parse_term('c', ENV),))
    above = seq('c in S, d in T |- exists y in S . exists z in T . y = z, '
                'exists z in T . c = z')
    p = ProofTree(s, rule, (ProofTree(above, RuleInstance('Top', ('d0',))),))
    report = check_focused(p)
    assert report.condition == 'NonMaximalSpecialization'
    with pytest.raises(NonMaximalSpecialization):
        report.require()


def test_eigenvariable_must_be_fresh():
    s = seq('|- forall x in S . x = c')
    rule = RuleInstance('Forall', ('d0',), fresh=(Var('c', UR),))
    p = ProofTree(s, rule, (ProofTree(seq('c in S |- c = c'),
                                      RuleInstance('Eq', ('d0',))),))
    report = check_focused(p)
    assert report.condition == 'FreshnessViolation'
    with pytest.raises(FreshnessViolation):
        report.require()


def test_wrong_premise_is_located():
    s = seq('|- and(c = c, d = d)')
    rule = RuleInstance('And', ('d0',))
    good = ProofTree(seq('|- c = c'), RuleInstance('Eq', ('d0',)))
    bad = ProofTree(seq('|- c = c'), RuleInstance('Eq', ('d0',)))
    report = check_focused(ProofTree(s, rule, (good, bad)))
    assert report.condition == 'PremiseMismatch' and report.path == ()


def test_failure_deep_in_the_tree():
    s = seq('|- and(c = c, d = d)')
    rule = RuleInstance('And', ('d0',))
    good = ProofTree(seq('|- c = c'), RuleInstance('Eq', ('d0',)))
    bad = ProofTree(seq('|- d = d'), RuleInstance('Top', ('d0',)))
    report = check_focused(ProofTree(s, rule, (good, bad)))
    assert report.path == (1,) and report.rule == 'Top'
    assert report.as_dict()['accepted'] is False


def test_unknown_rule():
    s = seq('|- c = c')
    report = check_focused(ProofTree(s, RuleInstance('Refl',
                                                     witness=(Var('c', UR),))))
    assert report.condition == 'UnknownRule'


def test_rewrite_along_a_disequality():
    s = seq('|- c != d, d = c')
    rule = RuleInstance('Neq', ('d0', 'd1'), occ=((0,),), side=2)
    (e,) = expand(s, rule, strict=True)
    assert [str(f) for f in e.sequent(False).delta] == \
        ['c != d', 'd = c', 'c = c']


def test_embedding_a_focused_proof(identity_ur):
    p = embed(identity_ur.witness)
    assert check_general(p)
    assert lower(p.conclusion).same_as(identity_ur.sequent())


def test_sides_follow_their_principal():
    s = seq('|- and(c = c, d = d), c != d')
    rule = RuleInstance('And', ('d0',))
    p = ProofTree(s, rule, (
        ProofTree(seq('|- c = c, c != d'), RuleInstance('Eq', ('d0',))),
        ProofTree(seq('|- d = d, c != d'), RuleInstance('Eq', ('d0',)))))
    part = PartitionedSequent(s, (), ('R', 'L'))
    left, right = propagate_sides(p, part)
    assert left.delta == ('R', 'L') and right.delta == ('R', 'L')


WITNESSES = ['nesting', 'identity_set', 'identity_ur']


def focused_corpus(request):
    proofs = [request.getfixturevalue(name).witness for name in WITNESSES]
    proofs += [identity_definition(ty).witness
               for ty in ('(ur * ur)', 'unit')]
    proofs.append(Focuser().focus(request.getfixturevalue('reflexivity')))
    return proofs


def test_focused_corpus_is_sound(request):
    for p in focused_corpus(request):
        assert check_focused(p)
        general = embed(p)
        assert check_general(general)
        assert lower(general.conclusion).same_as(p.conclusion)


def replace_at(p, path, node):
    if not path:
        return node
    premises = list(p.premises)
    premises[path[0]] = replace_at(premises[path[0]], path[1:], node)
    return p.with_(premises=tuple(premises))


def find(p, pred, path=()):
    """The path of the first node satisfying pred, depth first."""
    if pred(p):
        return path
    for i, prem in enumerate(p.premises):
        found = find(prem, pred, path + (i,))
        if found is not None:
            return found
    return None


def mutated(p, pred, change):
    path = find(p, pred)
    assert path is not None
    return replace_at(p, path, change(node_at(p, path))), path


def drop_premise(node):
    return node.with_(premises=node.premises[:-1])


def stray_witness(node):
    (t,) = node.rule.witness[:1]
    stray = Var('stray', t.ty)
    return node.with_(rule=node.rule.with_(
        witness=(stray,) + node.rule.witness[1:]))


def missing_principal(node):
    gone = f'd{len(node.conclusion.delta)}'
    return node.with_(rule=node.rule.with_(principal=(gone,)))


MUTATIONS = [
    (lambda n: len(n.premises) > 1, drop_premise),
    (lambda n: n.tag == 'Exists', stray_witness),
    (lambda n: n.tag == 'Eq', missing_principal),
]


@pytest.mark.parametrize('name', ['nesting', 'identity_set'])
@pytest.mark.parametrize('pred,change', MUTATIONS)
def test_corrupted_witnesses_are_rejected(request, name, pred, change):
    p = request.getfixturevalue(name).witness
    bad, path = mutated(p, pred, change)
    report = check_focused(bad)
    assert not report
    assert report.path == path


def test_corrupted_lowered_proofs_are_rejected(reflexivity):
    p = lower_tree(reflexivity)
    bad, path = mutated(p, lambda n: n.tag == 'Ax', missing_principal)
    report = check_lowered(bad)
    assert not report and report.path == path
