import pytest

from nrcsynth.errors import WitnessShapeMismatch
from nrcsynth.fixtures import (
    identity_definition, nesting_definition, nesting_formula)
from nrcsynth.instances import (
    GetT, Instance, PairV, UnitE, UnitV, evaluate, expr_free_vars, satisfies)
from nrcsynth.oracle import Bounds, enumerate_valuations
from nrcsynth.parser import parse_expr, parse_value
from nrcsynth.synthesizer import (
    ImplicitDefinition, Synthesizer, extract, partition, primed)

UNNEST = ('bigunion({<pi1(v), bigunion({pi2(w)} | w in '
          '{u in V | pi1(u) = pi1(v)})>} | v in V)')


def run_on(result, var, text):
    return evaluate(result.expr, Instance({var: parse_value(text)}))


def test_identity_on_atoms(identity_ur):
    result = Synthesizer().extract(identity_ur)
    (v,) = identity_ur.inputs
    assert expr_free_vars(result.expr) <= {v}
    for text in ('1', '2'):
        assert run_on(result, v, text) == parse_value(text)


def test_identity_on_sets(identity_set):
    result = extract(identity_set)
    (v,) = identity_set.inputs
    assert result.for_type == identity_set.output.ty
    for text in ('[]', '[1]', '[1, 3]'):
        assert run_on(result, v, text) == parse_value(text)


def test_debug_mode_checks_every_stage(identity_set):
    result = Synthesizer(debug=True).extract(identity_set)
    stages = [step['stage'] for step in result.provenance]
    assert stages[-1] == 'set-filter'
    assert 'answers' in stages


def test_nesting_end_to_end(nesting):
    result = Synthesizer().extract(nesting)
    (v,) = nesting.inputs
    assert expr_free_vars(result.expr) <= {v}
    grouped = run_on(result, v, '[<4, 6>, <4, 9>, <5, 7>]')
    assert grouped == parse_value('[<4, [6, 9]>, <5, [7]>]')
    assert run_on(result, v, '[]') == parse_value('[]')


def test_witness_is_required():
    with pytest.raises(WitnessShapeMismatch):
        Synthesizer().extract(nesting_definition(with_witness=False))


def test_witness_must_prove_the_definition(identity_set, identity_ur):
    with pytest.raises(WitnessShapeMismatch):
        Synthesizer().extract(identity_set.with_(
            witness=identity_ur.witness))


def test_undeclared_variables():
    phi = nesting_formula()
    b = next(v for v in nesting_definition(False).renamed if v.name == 'B')
    with pytest.raises(WitnessShapeMismatch):
        ImplicitDefinition(phi, (), (), b)


def test_partition_by_copy(identity_set):
    seq = identity_set.sequent()
    part = partition(seq, identity_set, 2, 'G')
    assert part.delta == ('L', 'R', 'G')
    assert part.theta == ()


def test_primed_copy(identity_set):
    q = identity_set.output
    assert primed(q).name == "q'"
    assert primed(q) in identity_set.primed_vars


def test_nesting_agrees_with_grouping(nesting):
    result = Synthesizer().extract(nesting)
    (v,) = nesting.inputs
    unnest = parse_expr(UNNEST, {'V': 'set((ur * ur))'})
    checked = 0
    for valuation in enumerate_valuations((v,), Bounds(3, 3)):
        grouped = evaluate(unnest, valuation)
        assert evaluate(result.expr, valuation) == grouped
        assert satisfies(nesting.phi, valuation.bind(nesting.output, grouped))
        checked += 1
    assert checked == 130


def test_debug_nesting_checks_focused_stages(nesting):
    result = Synthesizer(debug=True).extract(nesting)
    stages = [step['stage'] for step in result.provenance]
    assert stages.count('collect') == 1
    assert stages[-1] == 'set-filter'


def test_identity_on_pairs():
    defn = identity_definition('(ur * ur)')
    (v,) = defn.inputs
    result = Synthesizer(debug=True).extract(defn)
    assert result.for_type == defn.output.ty
    assert expr_free_vars(result.expr) <= {v}
    assert 'product' in [step['stage'] for step in result.provenance]
    for text in ('<1, 2>', '<3, 3>'):
        value = run_on(result, v, text)
        assert isinstance(value, PairV)
        assert value == parse_value(text)


def test_unit_output():
    defn = identity_definition('unit')
    result = Synthesizer().extract(defn)
    assert result.expr == UnitE()
    assert [step['stage'] for step in result.provenance] == ['unit']
    (v,) = defn.inputs
    assert evaluate(result.expr, Instance({v: UnitV()})) == UnitV()


def test_debug_get_holds_on_every_model(identity_ur):
    result = Synthesizer(debug=True).extract(identity_ur)
    assert isinstance(result.expr, GetT)


def test_free_variable_check_can_be_disabled(identity_set):
    synthesizer = Synthesizer(verify_fv=False)
    assert synthesizer.verify_fv is False
    assert Synthesizer().verify_fv is True
    (v,) = identity_set.inputs
    result = synthesizer.extract(identity_set)
    assert run_on(result, v, '[1, 3]') == parse_value('[1, 3]')
