import pytest

from nrcsynth.errors import ShapeMismatch, SizeBlowup
from nrcsynth.fixtures import build_proof
from nrcsynth.kernel import (
    ProofTree, RuleInstance, check_focused, check_lowered, embed, expand,
    lower, proof_size)
from nrcsynth.parser import parse_sequent, parse_term
from nrcsynth.synthesizer import Synthesizer, primed
from nrcsynth.syntax import (
    MembershipAtom, SetType, Var, UR, all_names, fresh_var, goal_formula,
    proj)
from nrcsynth.transforms import (
    Focuser, and_project, beta_normalize, contract, equiv_to_biconditional,
    exists_block, flip_neq, focus, forall_invert, freshen, gen_congruence,
    identity_proof, mem_context, move_down, or_invert, project_goal, refocus,
    substitute_proof, weaken)
from nrcsynth.transforms.base import index_of
from nrcsynth.transforms.goals import biconditional

ENV = {'S': 'set(ur)', 'T': 'set(ur)', 'c': 'ur', 'd': 'ur', 'z': 'ur'}


def seq(text):
    return parse_sequent(text, ENV)


def term(text):
    return parse_term(text, ENV)


def closed_conjunction():
    return build_proof(seq('|- and(c = c, d = d)'), [
        ('and', 'and(c = c, d = d)', [('eq', 'c = c')], [('eq', 'd = d')])])


def membership_proof():
    return build_proof(seq('c in S |- exists y in S . c = y'), [
        ('exists', 'exists y in S . c = y', ['c']), ('eq', 'c = c')])


def linear(p, out):
    return proof_size(out) <= 3 * proof_size(p) + 3


def cubic(p, out):
    return proof_size(out) <= (proof_size(p) + 1) ** 3


def test_weakening_adds_to_both_sides():
    p = build_proof(seq('|- c = c'), [('eq', 'c = c')])
    atom = MembershipAtom(Var('c', UR), Var('S', SetType(UR)))
    out = weaken(p, extra_theta=(atom,), extra_delta=seq('|- d = d').delta)
    assert out.conclusion.same_as(seq('c in S |- c = c, d = d'))
    assert check_focused(out)
    assert linear(p, out)
    assert weaken(p) is p


def test_and_projection():
    p = closed_conjunction()
    out = and_project(p, 0, 2)
    assert out.conclusion.same_as(seq('|- d = d'))
    assert check_focused(out)
    assert linear(p, out)


def test_and_projection_needs_a_conjunction():
    p = build_proof(seq('|- c = c'), [('eq', 'c = c')])
    with pytest.raises(ShapeMismatch):
        and_project(p, 0, 1)


def test_or_inversion():
    p = build_proof(seq('|- or(c = c, d != d)'), [
        ('or', 'or(c = c, d != d)'), ('eq', 'c = c')])
    out = or_invert(p, 0)
    assert out.conclusion.same_as(seq('|- c = c, d != d'))
    assert check_focused(out)


def test_forall_inversion():
    p = build_proof(seq('|- forall x in S . x = x'), [
        ('forall', 'forall x in S . x = x', 'y'), ('eq', 'y = y')])
    out = forall_invert(p, 0, Var('z', UR))
    assert out.conclusion.same_as(seq('z in S |- z = z'))
    assert check_focused(out)
    assert linear(p, out)


def test_contraction_of_a_used_copy():
    s = seq('|- and(c = c, d = d), and(c = c, d = d)')
    rule = RuleInstance('And', ('d1',))
    p = ProofTree(s, rule, tuple(
        ProofTree(e.sequent(False), RuleInstance('Eq', ('d1',)))
        for e in expand(s, rule)))
    out = contract(p, 0, 1)
    assert out.conclusion.same_as(seq('|- and(c = c, d = d)'))
    assert check_focused(out)


def test_contraction_needs_two_copies():
    with pytest.raises(ShapeMismatch):
        contract(closed_conjunction(), 0, 0)


def test_substitution():
    out = substitute_proof(membership_proof(), term('d'), Var('c', UR))
    assert out.conclusion.same_as(seq('d in S |- exists y in S . d = y'))
    assert check_focused(out)


def test_identity_without_axioms():
    s = seq('|- forall x in S . x = c, exists x in S . x != c')
    p = identity_proof(s, 0, 1)
    assert p.conclusion == s
    assert all(node.tag != 'Ax' for node in p.nodes())
    assert check_focused(p)


def test_flipped_disequality():
    p = identity_proof(seq('|- c = d, c != d'), 0, 1)
    out = flip_neq(p, 1)
    assert out.conclusion.same_as(seq('|- c = d, d != c'))
    assert check_lowered(out)


def test_congruence_records_the_disequivalence():
    p = build_proof(seq('|- c = c'), [('eq', 'c = c')])
    out = gen_congruence(p, term('c'), term('d'), {'d0': ((1,),)})
    assert out.conclusion.same_as(seq('|- c = d, c != d'))
    assert check_lowered(out)
    assert check_focused(refocus(out))
    assert cubic(p, out)


def test_membership_moves_into_the_conclusion():
    p = membership_proof()
    out = mem_context(p, 0)
    assert out.conclusion.same_as(
        seq('|- exists y in S . c = y, not(c memb S)'))
    assert check_lowered(out)
    assert check_focused(refocus(out))
    assert cubic(p, out)


def test_beta_normalization():
    s = seq('|- pi1(<c, d>) = pi1(<c, d>)')
    p = ProofTree(s, RuleInstance('Eq', ('d0',)))
    out = beta_normalize(p)
    assert out.conclusion.same_as(seq('|- c = c'))
    assert check_lowered(out)


def test_focusing_a_general_proof(reflexivity):
    out = Focuser().focus(reflexivity)
    assert out.conclusion.same_as(lower(reflexivity.conclusion))
    assert check_focused(out)


def test_focusing_an_embedded_proof(identity_ur):
    out = focus(embed(identity_ur.witness))
    assert out.conclusion.same_as(identity_ur.sequent())
    assert check_focused(out)


def test_refocusing_moves_alternating_steps_down():
    s = seq('c in S |- exists y in S . c = y, forall x in T . x = x')
    rule = RuleInstance('Exists', ('d0',), witness=(term('c'),))
    (e,) = expand(s, rule)
    p = ProofTree(s, rule, (ProofTree(e.sequent(False),
                                      RuleInstance('Eq', ('d2',))),))
    assert not check_focused(p)
    out = refocus(p)
    assert out.conclusion.same_as(s)
    assert check_focused(out)
    assert out.tag == 'Forall'


def test_size_ceiling_is_enforced(reflexivity):
    assert proof_size(reflexivity) > 1
    with pytest.raises(SizeBlowup):
        Focuser(size_ceiling=1).focus(reflexivity)


def test_exists_block_folds_the_instance():
    p = build_proof(seq('c in S |- exists y in S . c = y, c = c'),
                    [('eq', 'c = c')])
    out = exists_block(p, 0, (term('c'),))
    assert out.conclusion.same_as(seq('c in S |- exists y in S . c = y'))
    assert out.tag == 'Exists'
    assert check_focused(out)
    assert proof_size(out) <= 2 * proof_size(p) + 3


def test_exists_block_needs_the_instance():
    p = build_proof(seq('c in S |- exists y in S . c = y, d = d'),
                    [('eq', 'd = d')])
    with pytest.raises(ShapeMismatch):
        exists_block(p, 0, (term('c'),))


def test_freshening_renames_eigenvariables():
    p = build_proof(seq('|- forall x in S . x = x'), [
        ('forall', 'forall x in S . x = x', 'y'), ('eq', 'y = y')])
    out = freshen(p, {'y'})
    assert out.conclusion.same_as(p.conclusion)
    assert all(v.name != 'y' for node in out.nodes() for v in node.rule.fresh)
    assert check_focused(out)
    assert proof_size(out) == proof_size(p)
    assert freshen(p, {'q'}) is p


def moved_nesting(nesting):
    """The nesting witness after the goal moves below the output."""
    p = Synthesizer().prepare(nesting)
    o = nesting.output
    z = fresh_var('z', o.ty.elem, p.names() | nesting.names())
    out = move_down(p, index_of(p.conclusion, nesting.goal()), o, '',
                    primed(o), z)
    return p, out, z


def test_move_down_at_the_output(nesting):
    p, out, z = moved_nesting(nesting)
    assert MembershipAtom(z, nesting.output) in out.conclusion.theta
    index_of(out.conclusion, goal_formula(z, 'm', primed(nesting.output)))
    assert check_focused(out)
    assert proof_size(out) <= proof_size(p)


def test_move_down_needs_a_set():
    p = identity_proof(seq('|- c = d, c != d'), 0, 1)
    with pytest.raises(ShapeMismatch):
        move_down(p, 0, term('c'), '', term('d'))


def test_project_goal_below_a_member(nesting):
    _, p, z = moved_nesting(nesting)
    anchor = primed(nesting.output)
    k = index_of(p.conclusion, goal_formula(z, 'm', anchor))
    for side in (1, 2):
        out = project_goal(p, k, z, 'm', anchor, side)
        index_of(out.conclusion,
                 goal_formula(proj(side, z), 'm' + str(side), anchor))
        assert check_focused(out)
        assert linear(p, out)


def nested_goal(nesting):
    """The witness with its goal on the set component of a member of the
    output, as collection meets it."""
    _, moved, z = moved_nesting(nesting)
    anchor = primed(nesting.output)
    km = index_of(moved.conclusion, goal_formula(z, 'm', anchor))
    p = project_goal(moved, km, z, 'm', anchor, 2)
    elem = proj(2, z)
    k = index_of(p.conclusion, goal_formula(elem, 'm2', anchor))
    return p, k, elem, anchor


def test_move_down_below_a_projection(nesting):
    p, k, elem, anchor = nested_goal(nesting)
    w = fresh_var('w', elem.ty.elem, p.names() | all_names([anchor]))
    out = move_down(p, k, elem, 'm2', anchor, w)
    assert MembershipAtom(w, elem) in out.conclusion.theta
    index_of(out.conclusion, goal_formula(w, 'm2m', anchor))
    assert check_focused(out)
    assert linear(p, out)


def test_equivalence_becomes_a_biconditional(nesting):
    p, k, elem, anchor = nested_goal(nesting)
    a = fresh_var('a', elem.ty, p.names() | all_names([anchor]))
    out = equiv_to_biconditional(p, k, elem, 'm2', anchor, a)
    goal = goal_formula(elem, 'm2', anchor,
                        leaf=lambda r, names: biconditional(a, elem, r, names))
    index_of(out.conclusion, goal)
    assert check_focused(out)


def test_biconditional_at_the_output(identity_set):
    p = Synthesizer().prepare(identity_set)
    o = identity_set.output
    a = fresh_var('a', o.ty, p.names() | identity_set.names())
    out = equiv_to_biconditional(p, index_of(p.conclusion, identity_set.goal()),
                                 o, '', primed(o), a)
    assert check_focused(out)


def test_biconditional_needs_a_matching_parameter(identity_set):
    p = Synthesizer().prepare(identity_set)
    o = identity_set.output
    with pytest.raises(ShapeMismatch):
        equiv_to_biconditional(p, index_of(p.conclusion, identity_set.goal()),
                               o, '', primed(o), Var('a', UR))
