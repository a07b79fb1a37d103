"""Command-line front end: one subcommand per pipeline stage.

Exit codes: 0 on success, 1 when the input is rejected on its merits (a
proof fails its checker, an entailment has a counterexample, extraction
fails), 2 when the input cannot be read.
"""
import argparse
import copy
import logging
import sys

import yaml

from nrcsynth.collection import Collector
from nrcsynth.determinacy import assemble_determinacy, rewrite_views
from nrcsynth.documents import (
    DOCUMENT_FORMAT_VERSION, dump_definition, load_definition, load_goal,
    load_instance, load_partition, load_problem, load_yaml)
from nrcsynth.errors import (
    InconsistentTyping, InvalidPath, InvalidPosition, MalformedProof,
    NrcSynthError, ParseError, PartitionMismatch, TypeMismatch,
    UnboundVariable)
from nrcsynth.fo.checker import fo_check
from nrcsynth.fo.collection import fo_collect, fo_interpolate
from nrcsynth.fo.focusing import FoFocuser
from nrcsynth.fo.parser import (
    FO_FORMULA_FORMAT_VERSION, FO_PROOF_FORMAT_VERSION, format_fo_proof,
    parse_fo_proof)
from nrcsynth.instances import evaluate, expr_type, satisfies
from nrcsynth.interpolation import Interpolator
from nrcsynth.kernel.focused import check_focused, check_lowered
from nrcsynth.kernel.general import check_general, lower_tree
from nrcsynth.kernel.sequents import Sequent2, proof_size
from nrcsynth.oracle import Bounds, bounded_valid
from nrcsynth.parser import (
    EXPR_FORMAT_VERSION, FORMULA_FORMAT_VERSION, PROOF_FORMAT_VERSION,
    format_expr, format_formula, format_proof, format_type, parse_expr,
    parse_formula, parse_proof, parse_sequent)
from nrcsynth.synthesizer import Synthesizer
from nrcsynth.syntax import formula_size
from nrcsynth.transforms.focusing import Focuser
from nrcsynth.utils import RunningMeanStats, random_partitions, size_ratio

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = {
    'Oracle': {'max_atoms': 3, 'max_set_card': 3, 'ceiling': 10**7,
               'symmetry': False},
    'Focus': {'size_ceiling': 200000},
    'Normalize': {'size_ceiling': 100000},
    'Synthesizer': {'debug': False, 'max_atoms': 2, 'max_set_card': 2,
                    'ceiling': 10**6, 'size_ceiling': 200000},
    'Interpolation': {'verify_fv': True},
    'Logging': {'level': 'WARNING'},
}

CHECKERS = {'general': check_general, 'focused': check_focused,
            'lowered': check_lowered}

INPUT_ERRORS = (ParseError, MalformedProof, TypeMismatch, UnboundVariable,
                InconsistentTyping, InvalidPath, InvalidPosition,
                PartitionMismatch)


class Rejected(Exception):
    """A well-formed input that fails on its merits; carries the report."""

    def __init__(self, doc, human):
        super().__init__(human)
        self.doc = doc
        self.human = human


def versions():
    return {'proof': PROOF_FORMAT_VERSION, 'expr': EXPR_FORMAT_VERSION,
            'formula': FORMULA_FORMAT_VERSION,
            'foproof': FO_PROOF_FORMAT_VERSION,
            'foformula': FO_FORMULA_FORMAT_VERSION,
            'document': DOCUMENT_FORMAT_VERSION}


class _Versions(argparse.Action):

    def __init__(self, option_strings, dest, **kwargs):
        super().__init__(option_strings, dest, nargs=0, **kwargs)

    def __call__(self, parser, namespace, values, option_string=None):
        for name, version in versions().items():
            print(f'{name}: {version}')
        parser.exit()


def load_config(path=None):
    """The built-in defaults overridden section by section by the file."""
    config = copy.deepcopy(DEFAULT_CONFIG)
    if path is None:
        return config
    with open(path) as f:
        loaded = yaml.load(f, Loader=yaml.SafeLoader) or {}
    for section, values in loaded.items():
        config.setdefault(section, {}).update(values or {})
    return config


def configure_logging(config, verbose=False):
    level = 'DEBUG' if verbose else config['Logging']['level']
    logging.basicConfig(
        level=getattr(logging, str(level).upper()),
        format='%(asctime)s %(name)s %(levelname)s %(message)s')


def _read(path):
    with open(path) as f:
        return f.read()


def _bounds(args, config):
    params = dict(config['Oracle'])
    if getattr(args, 'max_atoms', None) is not None:
        params['max_atoms'] = args.max_atoms
    if getattr(args, 'max_card', None) is not None:
        params['max_set_card'] = args.max_card
    return Bounds(**params)


def _synthesizer(args, config):
    params = dict(config['Synthesizer'])
    if getattr(args, 'debug', False):
        params['debug'] = True
    return Synthesizer(**params, **config['Interpolation'])


def _one_sided(p):
    return lower_tree(p) if isinstance(p.conclusion, Sequent2) else p


# Commands. Each returns (document, human-readable text).

def cmd_check(args, config):
    calculus, p, _ = parse_proof(_read(args.file))
    calculus = args.calculus or calculus
    if calculus not in CHECKERS:
        raise ParseError(f'unknown calculus {calculus}')
    report = CHECKERS[calculus](p)
    doc = dict(report.as_dict(), calculus=calculus)
    if not report:
        raise Rejected(doc, f'rejected {report.rule} at '
                            f'{list(report.path)}: {report.condition}: '
                            f'{report.message}')
    return doc, f'accepted ({calculus}, {report.nodes} nodes)'


def cmd_focus(args, config):
    _, p, _ = parse_proof(_read(args.file))
    focused = Focuser(**config['Focus']).focus(p)
    logger.info('focused %d nodes into %d', proof_size(p),
                proof_size(focused))
    text = format_proof(focused, 'focused')
    return {'nodes': proof_size(focused), 'proof': text}, text


def cmd_interpolate(args, config):
    _, p, _ = parse_proof(_read(args.file))
    interpolator = Interpolator(**config['Interpolation'])
    if args.random:
        return _random_interpolants(p, interpolator, args.random, args.seed)
    if not args.partition:
        raise ParseError('interpolate needs --partition or --random')
    part = load_partition(_read(args.partition), p.conclusion)
    theta = format_formula(interpolator.interpolate(p, part))
    return {'interpolant': theta}, theta


def _random_interpolants(p, interpolator, count, seed):
    """Interpolants under `count` seeded random partitions, with the running
    mean of size(θ) / nodes(p)."""
    stats = RunningMeanStats(count)
    nodes = proof_size(p)
    entries, lines = [], []
    mean = 0.0
    for part in random_partitions(p.conclusion, count, seed):
        theta = interpolator.interpolate(p, part)
        mean = size_ratio(stats, formula_size(theta), nodes)
        sides = part.as_locations()
        entries.append({'sides': sides, 'interpolant': str(theta)})
        lines.append(f'{sides} -> {theta}')
    lines.append(f'mean size ratio {mean:.3f}, max {stats.max():.3f}')
    doc = {'partitions': entries, 'mean_size_ratio': mean,
           'max_size_ratio': stats.max()}
    return doc, '\n'.join(lines)


def cmd_collect_params(args, config):
    _, p, _ = parse_proof(_read(args.file))
    p = _one_sided(p)
    goal = load_goal(_read(args.goal), p.conclusion)
    part = load_partition(_read(args.partition), p.conclusion)
    result = Collector(**config['Interpolation']).collect(p, goal, part)
    return ({'expr': str(result.expr), 'theta': str(result.theta)},
            f'E = {result.expr}\ntheta = {result.theta}')


def cmd_extract(args, config):
    _, witness, _ = parse_proof(_read(args.witness))
    defn = load_definition(_read(args.spec), witness)
    result = _synthesizer(args, config).extract(defn)
    text = format_expr(result.expr)
    doc = {'expr': text, 'type': format_type(result.for_type),
           'size': result.size, 'provenance': list(result.provenance)}
    return doc, text


def cmd_eval(args, config):
    instance = load_instance(_read(args.instance))
    env = tuple(instance.bindings)
    if args.formula:
        f = parse_formula(_read(args.formula), env)
        truth = satisfies(f, instance)
        return {'value': truth}, 'true' if truth else 'false'
    if not args.expr:
        raise ParseError('eval needs --expr or --formula')
    e = parse_expr(_read(args.expr), env)
    value = evaluate(e, instance)
    doc = {'value': str(value), 'type': format_type(expr_type(e))}
    return doc, str(value)


def cmd_spec(args, config):
    problem = load_problem(_read(args.problem))
    defn = assemble_determinacy(problem, **config['Normalize'])
    text = dump_definition(defn)
    return load_yaml(text), text


def cmd_rewrite_views(args, config):
    problem = load_problem(_read(args.problem))
    _, witness, _ = parse_proof(_read(args.witness))
    result = rewrite_views(problem, witness, **config['Synthesizer'],
                           **config['Interpolation'])
    return {'expr': str(result.expr), 'size': result.size}, str(result.expr)


def cmd_check_entailment(args, config):
    doc = load_yaml(_read(args.file))
    seq = parse_sequent(str(doc.get('sequent', '')), doc.get('vars') or {})
    premises = list(seq.theta) + list(getattr(seq, 'gamma', ()))
    verdict = bounded_valid(premises, seq.delta, _bounds(args, config))
    if not verdict:
        text = f'counterexample: {verdict.valuation}'
        raise Rejected({'valid': False,
                        'counterexample': str(verdict.valuation)}, text)
    return {'valid': True}, 'valid within the bounds'


def cmd_fo_check(args, config):
    p, _, _ = parse_fo_proof(_read(args.file))
    report = fo_check(p)
    if not report:
        raise Rejected(report.as_dict(),
                       f'rejected {report.rule} at {list(report.path)}: '
                       f'{report.condition}: {report.message}')
    return report.as_dict(), f'accepted ({report.nodes} nodes)'


def cmd_fo_focus(args, config):
    p, goal, sides = parse_fo_proof(_read(args.file))
    focused = FoFocuser(**config['Focus']).focus(p)
    text = format_fo_proof(focused, goal, sides)
    return {'nodes': proof_size(focused), 'proof': text}, text


def cmd_fo_extract(args, config):
    p, goal, sides = parse_fo_proof(_read(args.file))
    verify = config['Interpolation']['verify_fv']
    if goal is None:
        theta = fo_interpolate(p, sides, verify)
        return {'theta': str(theta)}, f'theta = {theta}'
    result = fo_collect(p, goal, sides, verify)
    definition = result.formula()
    return ({'theta': str(result.theta), 'definition': str(definition)},
            f'theta = {result.theta}\nD = {definition}')


COMMANDS = {
    'check': cmd_check, 'focus': cmd_focus, 'interpolate': cmd_interpolate,
    'collect-params': cmd_collect_params, 'extract': cmd_extract,
    'eval': cmd_eval, 'spec': cmd_spec, 'rewrite-views': cmd_rewrite_views,
    'check-entailment': cmd_check_entailment, 'fo-check': cmd_fo_check,
    'fo-focus': cmd_fo_focus, 'fo-extract': cmd_fo_extract,
}


def build_parser(default_config=None):
    parser = argparse.ArgumentParser(prog='synth')
    parser.add_argument('--config', type=str, default=default_config)
    parser.add_argument('--format', choices=['json-like', 'human'],
                        default='human')
    parser.add_argument('--out', type=str, required=False)
    parser.add_argument('--verbose', action='store_true')
    parser.add_argument('--version', action=_Versions)
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('check')
    p.add_argument('file')
    p.add_argument('--calculus', choices=sorted(CHECKERS), required=False)

    p = sub.add_parser('focus')
    p.add_argument('file')

    p = sub.add_parser('interpolate')
    p.add_argument('file')
    p.add_argument('--partition', required=False)
    p.add_argument('--random', type=int, default=0)
    p.add_argument('--seed', type=int, default=0)

    p = sub.add_parser('collect-params')
    p.add_argument('file')
    p.add_argument('--goal', required=True)
    p.add_argument('--partition', required=True)

    p = sub.add_parser('extract')
    p.add_argument('--spec', required=True)
    p.add_argument('--witness', required=True)
    p.add_argument('--debug', action='store_true')

    p = sub.add_parser('eval')
    p.add_argument('--instance', required=True)
    p.add_argument('--expr', required=False)
    p.add_argument('--formula', required=False)

    p = sub.add_parser('spec')
    p.add_argument('--problem', required=True)

    p = sub.add_parser('rewrite-views')
    p.add_argument('--problem', required=True)
    p.add_argument('--witness', required=True)

    p = sub.add_parser('check-entailment')
    p.add_argument('file')
    p.add_argument('--max-atoms', dest='max_atoms', type=int, required=False)
    p.add_argument('--max-card', dest='max_card', type=int, required=False)

    for name in ('fo-check', 'fo-focus', 'fo-extract'):
        sub.add_parser(name).add_argument('file')
    return parser


def _emit(args, doc, human):
    if args.format == 'json-like':
        text = yaml.safe_dump(doc, default_flow_style=True, sort_keys=False,
                              width=10**6)
    else:
        text = human if human.endswith('\n') else human + '\n'
    if args.out:
        with open(args.out, 'w') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def dispatch(args, config):
    """Runs the chosen command and returns its exit code."""
    try:
        doc, human = COMMANDS[args.command](args, config)
    except Rejected as e:
        _emit(args, e.doc, e.human)
        return 1
    except (OSError, *INPUT_ERRORS) as e:
        print(f'error: {e}', file=sys.stderr)
        return 2
    except NrcSynthError as e:
        _emit(args, {'error': type(e).__name__, 'message': str(e)},
              f'{type(e).__name__}: {e}')
        return 1
    _emit(args, doc, human)
    return 0


def main(argv=None, default_config=None):
    args = build_parser(default_config).parse_args(argv)
    try:
        config = load_config(args.config)
    except (OSError, yaml.YAMLError) as e:
        print(f'error: {e}', file=sys.stderr)
        return 2
    configure_logging(config, args.verbose)
    return dispatch(args, config)
