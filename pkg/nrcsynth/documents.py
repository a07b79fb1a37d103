"""YAML documents: instances, implicit definitions, determinacy problems,
partitions and collection goals.

Types, formulas, expressions and values inside a document use the textual
syntax of nrcsynth.parser.
"""
import yaml

from nrcsynth.collection import CollectionGoal
from nrcsynth.determinacy import DeterminacyProblem
from nrcsynth.errors import ParseError
from nrcsynth.instances import Atom, Instance, format_value, value_key
from nrcsynth.kernel.sides import PartitionedSequent
from nrcsynth.parser import (
    format_type, parse_expr, parse_formula, parse_term, parse_type,
    parse_value)
from nrcsynth.synthesizer import ImplicitDefinition
from nrcsynth.syntax import Var

DOCUMENT_FORMAT_VERSION = 'nrcsynth-yaml/1'


def load_yaml(text):
    try:
        doc = yaml.load(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as e:
        raise ParseError(str(e)) from e
    if not isinstance(doc, dict):
        raise ParseError('expected a mapping at the top of the document')
    return doc


def _field(doc, key, kind=None):
    if key not in doc:
        raise ParseError(f'missing field {key!r}')
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise ParseError(f'field {key!r} must be a {kind.__name__}')
    return value


def _declarations(table):
    """{name: type string} as typed variables, in document order."""
    if table is None:
        return ()
    if not isinstance(table, dict):
        raise ParseError('declarations must map names to types')
    return tuple(Var(str(name), parse_type(str(ty)))
                 for name, ty in table.items())


# Instances.

def load_instance(text):
    doc = load_yaml(text)
    universe = [Atom(str(label)) for label in doc.get('universe') or []]
    bindings = {}
    for name, entry in (_field(doc, 'bindings', dict)).items():
        if not isinstance(entry, dict):
            raise ParseError(f'binding {name} needs a type and a value')
        var = Var(str(name), parse_type(str(_field(entry, 'type'))))
        bindings[var] = parse_value(str(_field(entry, 'value')))
    return Instance(bindings, universe or None)


def dump_instance(instance):
    """Canonical text: sorted universe, sorted names, sorted sets."""
    doc = {
        'universe': [a.label for a in sorted(instance.universe,
                                             key=value_key)],
        'bindings': {
            var.name: {'type': format_type(var.ty),
                       'value': format_value(value)}
            for var, value in sorted(instance.bindings.items(),
                                     key=lambda kv: kv[0].name)}}
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=False)


# Implicit definitions.

def load_definition(text, witness=None):
    """inputs, auxiliaries and output declare variables; phi is a formula."""
    doc = load_yaml(text)
    inputs = _declarations(doc.get('inputs'))
    auxiliaries = _declarations(doc.get('auxiliaries'))
    output = _declarations(_field(doc, 'output', dict))
    if len(output) != 1:
        raise ParseError('exactly one output variable')
    env = inputs + auxiliaries + output
    phi = parse_formula(str(_field(doc, 'phi')), env)
    return ImplicitDefinition(phi, inputs, auxiliaries, output[0], witness)


def dump_definition(defn):
    def table(variables):
        return {v.name: format_type(v.ty) for v in variables}

    doc = {'inputs': table(defn.inputs),
           'auxiliaries': table(defn.auxiliaries),
           'output': table((defn.output,)),
           'phi': str(defn.phi)}
    return yaml.safe_dump(doc, sort_keys=False, width=10**6)


# Determinacy problems.

def load_problem(text):
    doc = load_yaml(text)
    base = _declarations(_field(doc, 'base', dict))
    views = {str(name): parse_expr(str(e), base)
             for name, e in _field(doc, 'views', dict).items()}
    query = parse_expr(str(_field(doc, 'query')), base)
    constraints = doc.get('constraints')
    if constraints is not None:
        constraints = parse_formula(str(constraints), base)
    output = doc.get('output')
    if output is not None:
        output = Var(str(output), query.ty)
    return DeterminacyProblem(views, query, base, constraints, output)


def dump_problem(problem):
    doc = {'base': {v.name: format_type(v.ty) for v in problem.base},
           'views': {name: str(e) for name, e in problem.views.items()},
           'query': str(problem.query)}
    if problem.constraints is not None:
        doc['constraints'] = str(problem.constraints)
    if problem.output is not None:
        doc['output'] = problem.output.name
    return yaml.safe_dump(doc, sort_keys=False, width=10**6)


# Partitions and goals.

def load_partition(text, seq):
    """`sides` maps locations (t0, d3, ...) to L, R, B or G; `default`
    is the side of every unlisted occurrence."""
    doc = load_yaml(text)
    sides = {str(k): str(v) for k, v in (doc.get('sides') or {}).items()}
    return PartitionedSequent.from_locations(seq, sides,
                                             str(doc.get('default', 'L')))


def dump_partition(part):
    return yaml.safe_dump({'sides': part.as_locations()}, sort_keys=False)


def load_goal(text, seq):
    """A collection goal over the free variables of seq.

    Fields: path, anchor and bound as terms, z and y as {name: type},
    lambda and rho as formulas.
    """
    doc = load_yaml(text)
    (z,) = _declarations(_field(doc, 'z', dict))
    (y,) = _declarations(_field(doc, 'y', dict))
    env = tuple(seq.free_vars())
    path = str(_field(doc, 'path'))
    anchor = parse_term(str(_field(doc, 'anchor')), env)
    bound = parse_term(str(_field(doc, 'bound')), env)
    lam = parse_formula(str(_field(doc, 'lambda')), env + (z,))
    rho = parse_formula(str(_field(doc, 'rho')), env + (z, y))
    return CollectionGoal(path, anchor, bound, lam, rho, z, y)


def dump_goal(goal):
    doc = {'path': goal.path, 'anchor': str(goal.anchor),
           'bound': str(goal.bound),
           'z': {goal.z.name: format_type(goal.z.ty)},
           'y': {goal.y.name: format_type(goal.y.ty)},
           'lambda': str(goal.lam), 'rho': str(goal.rho)}
    return yaml.safe_dump(doc, sort_keys=False, width=10**6)
