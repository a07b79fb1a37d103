import argparse
import os

import pytest
import yaml

import make_fixtures
from nrcsynth import cli
from nrcsynth.fixtures import fo_interpolation_proof
from nrcsynth.fo import FoRule, FoSequent
from nrcsynth.fo.parser import format_fo_proof, parse_fo_formula
from nrcsynth.kernel import ProofTree
from nrcsynth.parser import parse_type, parse_value


@pytest.fixture(scope='module')
def files(tmp_path_factory):
    out_dir = tmp_path_factory.mktemp('fixtures')
    make_fixtures.run(argparse.Namespace(out_dir=str(out_dir)))
    return out_dir


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    return code, capsys.readouterr()


def structured(capsys, *argv):
    code, out = run(capsys, '--format', 'json-like', *argv)
    return code, yaml.load(out.out, Loader=yaml.SafeLoader)


def test_check_accepts(files, capsys):
    code, out = run(capsys, 'check', files / 'reflexivity.proof')
    assert code == 0
    assert out.out.startswith('accepted (general')


def test_unreadable_inputs(files, capsys, tmp_path):
    garbage = tmp_path / 'garbage.proof'
    garbage.write_text('(proof :calculus general (((\n')
    assert run(capsys, 'check', garbage)[0] == 2
    assert run(capsys, 'check', tmp_path / 'missing.proof')[0] == 2


def test_fo_check_rejects(capsys, tmp_path):
    seq = FoSequent(tuple(parse_fo_formula(t)
                          for t in ('a != b', 'not(P(a))', 'P(b)')))
    derived = parse_fo_formula('not(P(c))')
    p = ProofTree(seq, FoRule('Repl', (0, 1), None, derived), (
        ProofTree(seq.extend(derived), FoRule('Ax', (2, 3))),))
    path = tmp_path / 'bad.foproof'
    path.write_text(format_fo_proof(p))
    code, doc = structured(capsys, 'fo-check', path)
    assert code == 1
    assert doc['condition'] == 'BadReplacement'


def test_fo_check_accepts(files, capsys):
    assert run(capsys, 'fo-check', files / 'fo_replacement.foproof')[0] == 0


def test_eval(files, capsys):
    code, out = run(capsys, 'eval', '--instance', files / 'nested.yaml',
                    '--expr', files / 'flatten.nrc')
    assert code == 0
    assert parse_value(out.out.strip()) == parse_value('[<4, 6>, <4, 9>]')


def test_eval_reports_the_type(files, capsys):
    code, doc = structured(capsys, 'eval', '--instance', files / 'nested.yaml',
                           '--expr', files / 'flatten.nrc')
    assert code == 0
    assert parse_type(doc['type']) == parse_type('set((ur * ur))')


def test_eval_needs_a_target(files, capsys):
    assert run(capsys, 'eval', '--instance', files / 'nested.yaml')[0] == 2


def test_check_entailment(capsys, tmp_path):
    valid = tmp_path / 'valid.yaml'
    valid.write_text('vars: {S: set(ur), T: set(ur)}\n'
                     'sequent: "|- not(S subseteq T), S subseteq T"\n')
    code, doc = structured(capsys, 'check-entailment', valid)
    assert (code, doc) == (0, {'valid': True})

    invalid = tmp_path / 'invalid.yaml'
    invalid.write_text('vars: {S: set(ur), T: set(ur)}\n'
                       'sequent: "|- S subseteq T"\n')
    code, doc = structured(capsys, 'check-entailment', invalid,
                           '--max-atoms', 2, '--max-card', 2)
    assert code == 1
    assert doc['valid'] is False


def test_out_file(files, capsys, tmp_path):
    target = tmp_path / 'report.txt'
    code, out = run(capsys, '--out', target, 'check',
                    files / 'reflexivity.proof')
    assert code == 0 and out.out == ''
    assert target.read_text().startswith('accepted')


def test_focus(files, capsys):
    code, doc = structured(capsys, 'focus', files / 'reflexivity.proof')
    assert code == 0
    assert doc['nodes'] > 0 and doc['proof'].startswith('(proof')


def test_random_interpolants(files, capsys):
    code, doc = structured(capsys, 'interpolate', files / 'identity_ur.fproof',
                           '--random', 4, '--seed', 1)
    assert code == 0
    assert len(doc['partitions']) == 4
    assert doc['max_size_ratio'] >= doc['mean_size_ratio'] >= 0


def test_interpolate_needs_a_partition(files, capsys):
    assert run(capsys, 'interpolate', files / 'identity_ur.fproof')[0] == 2


def test_spec(files, capsys):
    code, doc = structured(capsys, 'spec', '--problem', files / 'identity.yaml')
    assert code == 0
    assert list(doc['inputs']) == ['V']
    assert list(doc['output']) == ['q']


def test_rewrite_views(files, capsys):
    code, doc = structured(capsys, 'rewrite-views',
                           '--problem', files / 'identity.yaml',
                           '--witness', files / 'identity.fproof')
    assert code == 0
    assert 'V' in doc['expr']


def test_extract(files, capsys):
    code, doc = structured(capsys, 'extract',
                           '--spec', files / 'simplenesting.yaml',
                           '--witness', files / 'simplenesting.fproof',
                           '--debug')
    assert code == 0
    assert doc['size'] > 0
    assert doc['provenance'][-1]['stage'] == 'set-filter'


def test_fo_extract(files, capsys):
    code, doc = structured(capsys, 'fo-extract',
                           files / 'fo_collection.foproof')
    assert code == 0
    assert set(doc) == {'theta', 'definition'}

    code, doc = structured(capsys, 'fo-extract',
                           files / 'fo_interpolation.foproof')
    assert code == 0
    assert 'R' in doc['theta']


def test_config_overrides(files, capsys, tmp_path):
    config = tmp_path / 'config.yaml'
    config.write_text('Logging:\n  level: ERROR\n')
    code, _ = run(capsys, '--config', config, 'check',
                  files / 'reflexivity.proof')
    assert code == 0
    merged = cli.load_config(str(config))
    assert merged['Logging']['level'] == 'ERROR'
    assert merged['Oracle'] == cli.DEFAULT_CONFIG['Oracle']


def test_fixture_files(files):
    names = set(os.listdir(files))
    assert {'simplenesting.yaml', 'simplenesting.fproof', 'identity.yaml',
            'identity_ur.fproof', 'reflexivity.proof', 'nested.yaml',
            'flatten.nrc', 'fo_collection.foproof'} <= names
    assert format_fo_proof(fo_interpolation_proof()) == \
        (files / 'fo_interpolation.foproof').read_text()


def test_eval_formula(files, capsys, tmp_path):
    formula = tmp_path / 'nonempty.formula'
    formula.write_text('exists b in B . pi1(b) = pi1(b)\n')
    code, out = run(capsys, 'eval', '--instance', files / 'nested.yaml',
                    '--formula', formula)
    assert (code, out.out) == (0, 'true\n')


def test_interpolation_section_reaches_the_synthesizer(files, capsys,
                                                      tmp_path):
    config = tmp_path / 'config.yaml'
    config.write_text('Interpolation:\n  verify_fv: false\n')
    merged = cli.load_config(str(config))
    synthesizer = cli._synthesizer(argparse.Namespace(debug=False), merged)
    assert synthesizer.verify_fv is False
    code, doc = structured(capsys, '--config', config, 'rewrite-views',
                           '--problem', files / 'identity.yaml',
                           '--witness', files / 'identity.fproof')
    assert code == 0
    assert 'V' in doc['expr']
