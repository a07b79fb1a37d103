import pytest

from nrcsynth.errors import NotFocused
from nrcsynth.fixtures import (
    FO_COLLECT_LEFT, FO_COLLECT_RIGHT, FO_LEFT, FO_RIGHT,
    fo_interpolation_proof, fo_reflexivity_proof, fo_replacement_proof,
    fo_unfocused_proof)
from nrcsynth.fo import (
    FoRule, FoSequent, fo_check, fo_collect, fo_dual, fo_focus,
    fo_free_vars, fo_interpolate, fo_is_focused, fo_preds, fo_subst)
from nrcsynth.fo.parser import (
    format_fo_proof, parse_fo_formula, parse_fo_proof)
from nrcsynth.kernel import ProofTree
from nrcsynth.oracle import fo_bounded_valid


def pred_names(f):
    return {name for name, _ in fo_preds(f)}


def test_parsing_macros():
    f = parse_fo_formula('implies(P(x), Q(x))')
    assert f == parse_fo_formula('or(not(P(x)), Q(x))')
    assert fo_free_vars(parse_fo_formula('forall x . R(x, y)')) == {'y'}


def test_substitution_avoids_capture():
    f = parse_fo_formula('exists x . R(x, y)')
    out = fo_subst(f, {'y': 'x'})
    assert fo_free_vars(out) == {'x'}


@pytest.mark.parametrize('build', [
    fo_interpolation_proof, fo_reflexivity_proof, fo_replacement_proof,
    fo_unfocused_proof])
def test_fixture_proofs_check(build):
    report = fo_check(build())
    assert report.accepted, report.message


def test_fixture_collection_proof_checks(fo_collection):
    p, _ = fo_collection
    assert fo_check(p) and fo_is_focused(p)


def test_bad_replacement_is_located():
    seq = FoSequent(tuple(parse_fo_formula(t)
                          for t in ('a != b', 'not(P(a))', 'P(b)')))
    derived = parse_fo_formula('not(P(c))')
    p = ProofTree(seq, FoRule('Repl', (0, 1), None, derived), (
        ProofTree(seq.extend(derived), FoRule('Ax', (2, 3))),))
    report = fo_check(p)
    assert not report and report.condition == 'BadReplacement'


def test_focusing():
    p = fo_unfocused_proof()
    assert not fo_is_focused(p)
    out = fo_focus(p)
    assert fo_is_focused(out)
    assert out.conclusion.same_as(p.conclusion)
    assert fo_check(out)


def test_interpolant():
    theta = fo_interpolate(fo_interpolation_proof())
    assert pred_names(theta) <= {'R'}
    assert fo_free_vars(theta) <= {'a'}
    assert fo_bounded_valid([parse_fo_formula(FO_RIGHT)], [theta])
    assert fo_bounded_valid([parse_fo_formula(FO_LEFT)], [fo_dual(theta)])


def test_interpolation_needs_focusing():
    with pytest.raises(NotFocused):
        fo_interpolate(fo_unfocused_proof())


def test_collection(fo_collection):
    p, goal = fo_collection
    result = fo_collect(p, goal)
    assert result.pdepd.rhs_preds() <= {('R', 1)}
    assert not result.pdepd.rhs_vars()
    left = parse_fo_formula(FO_COLLECT_LEFT)
    right = parse_fo_formula(FO_COLLECT_RIGHT)
    assert fo_bounded_valid([right], [result.theta])
    assert fo_bounded_valid([left, result.theta], [result.formula()])


def test_proof_files_round_trip(fo_collection):
    p, goal = fo_collection
    text = format_fo_proof(p, goal, ('L', 'R', 'G'))
    q, parsed_goal, sides = parse_fo_proof(text)
    assert q == p
    assert parsed_goal == goal
    assert sides == ('L', 'R', 'G')
