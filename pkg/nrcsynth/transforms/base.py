"""Proof rewriting by tracking every formula occurrence of an input proof.

A rewriter walks an input proof top-down. At each node it holds a View:
what each formula occurrence of the node's conclusion has become in the
output, plus formulas and atoms the output carries on top, plus a
substitution applied to the rule parameters. Unless a subclass intercepts
a node, the output node applies the same rule to the viewed conclusion and
the premises' views are read off from the rule's own origin bookkeeping, so
the output is correct by construction wherever the rule still applies.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
import logging

from nrcsynth.errors import ShapeMismatch, SizeBlowup
from nrcsynth.kernel.rules import (
    RuleViolation, beta_redex, expand, node_alignments)
from nrcsynth.kernel.sequents import (
    Sequent1, ProofTree, loc, parse_loc, proof_size)
from nrcsynth.syntax import (
    Var, Pair, alpha_key, fresh_var, subst, subst_term, term_vars,
    replace_in_term)

logger = logging.getLogger(__name__)


@dataclass
class View:
    """The output image of an input conclusion.

    delta[i] is the tuple of output formulas standing for input formula i
    (empty when dropped), theta[i] the output atom for input atom i (None
    when dropped). tags mark the input occurrences a rewriter tracks and
    sigma maps input variables to the output terms replacing them.
    """
    delta: list
    theta: list
    extra_theta: tuple = ()
    extra_delta: tuple = ()
    tags: dict = field(default_factory=dict)
    sigma: dict = field(default_factory=dict)
    notes: tuple = ()

    @classmethod
    def identity(cls, seq, tags=None):
        return cls(delta=[(f,) for f in seq.delta], theta=list(seq.theta),
                   tags=dict(tags or {}))

    @classmethod
    def substituted(cls, seq, sigma, tags=None):
        return cls(delta=[(subst(f, sigma),) for f in seq.delta],
                   theta=[subst(a, sigma) for a in seq.theta],
                   tags=dict(tags or {}), sigma=dict(sigma))

    def sequent(self):
        theta = [a for a in self.theta if a is not None]
        delta = [f for block in self.delta for f in block]
        return Sequent1(tuple(theta) + tuple(self.extra_theta),
                        tuple(delta) + tuple(self.extra_delta))

    def offsets(self):
        result, n = [], 0
        for block in self.delta:
            result.append(n)
            n += len(block)
        return result, n

    def out_loc(self, i):
        """Output location of input formula i when it maps to one formula."""
        if len(self.delta[i]) != 1:
            return None
        return loc('d', self.offsets()[0][i])

    def with_(self, **changes):
        return replace(self, **changes)


def locate(seq, formula, exclude=()):
    """The location of a delta formula α-equal to formula."""
    key = alpha_key(formula)
    for j, f in enumerate(seq.delta):
        if j not in exclude and alpha_key(f) == key:
            return loc('d', j)
    raise ShapeMismatch(f'{formula} does not occur in {seq}')


def index_of(seq, formula, exclude=()):
    return parse_loc(locate(seq, formula, exclude))[1]


def apply_rule(seq, rule):
    """Expected premises of rule on seq; rule failures become ShapeMismatch."""
    try:
        return expand(seq, rule)
    except RuleViolation as e:
        raise ShapeMismatch(f'{rule.rule} no longer applies: {e}') from None


def alignments(node):
    try:
        return node_alignments(node)
    except RuleViolation as e:
        raise ShapeMismatch(f'input node {node.tag} is not well formed: {e}') \
            from None


def expected_by_origin(expected):
    return ({o: f for f, o in expected.delta},
            {o: a for a, o in expected.theta})


def rename_new(origin, locs):
    if origin[0] == 'new':
        return ('new', locs.get(origin[1], origin[1])) + tuple(origin[2:])
    return origin


def new_index(a, origin):
    """Index of the premise formula with the given origin."""
    return a.delta.index(origin)


def map_term(t, rule):
    """A term of the conclusion as it reads in the premise of a product
    step."""
    if rule is None:
        return t
    if rule.rule == 'ProdEta':
        (x,) = rule.witness
        return subst_term(t, {x: Pair(*rule.fresh)})
    if rule.rule == 'ProdBeta':
        redex, contractum = beta_redex(rule)
        return replace_in_term(t, redex, contractum)
    return t


def map_sigma(sigma, rule):
    """The substitution after an output product step."""
    if rule.rule == 'ProdEta':
        (x,) = rule.witness
        pair = Pair(*rule.fresh)
        return {v: subst_term(t, {x: pair}) for v, t in sigma.items()}
    if rule.rule == 'ProdBeta':
        redex, contractum = beta_redex(rule)
        return {v: replace_in_term(t, redex, contractum)
                for v, t in sigma.items()}
    return sigma


class ProofRewriter(ABC):
    """Base class of the view-tracking transforms."""

    @abstractmethod
    def __init__(self, avoid=()):
        self._visited = 0
        self._avoid = frozenset(avoid)

    def run(self, p, view):
        self._visited = 0
        out = self.rewrite(p, view)
        logger.debug('%s: %d input nodes, %d output nodes',
                     type(self).__name__, proof_size(p), proof_size(out))
        return out

    def rewrite(self, node, view):
        self._visited += 1
        out = self.visit(node, view)
        if out is None:
            out = self.default(node, view)
        return out

    def visit(self, node, view):
        """Hook for nodes a rewriter handles itself; None means default."""
        return None

    def carry(self, tag, node, q, rule):
        """The tag a copy of a tagged occurrence keeps in premise q; rule is
        the output rule (None when the output omits the node)."""
        return tag

    def map_rule(self, node, view):
        """The input rule with its parameters moved through sigma."""
        rule, sigma = node.rule, view.sigma
        if not sigma:
            return rule
        if rule.rule == 'ProdEta':
            (x,) = rule.witness
            image = sigma.get(x, x)
            if not isinstance(image, Var):
                raise ShapeMismatch(f'cannot split {x} once it is {image}')
            return rule.with_(witness=(image,))
        return rule.with_(witness=tuple(subst_term(t, sigma)
                                        for t in rule.witness))

    def relocate(self, node, view, rule):
        """Moves principal locations of rule to the output conclusion."""
        out_seq = view.sequent()
        locs, moved = {}, []
        for location in rule.principal:
            kind, i = parse_loc(location)
            if kind != 'd':
                raise ShapeMismatch(f'{location} is not a delta location')
            target = view.out_loc(i)
            if target is None:
                image = self.image_of(node.conclusion.delta[i], view)
                target = locate(out_seq, image,
                                exclude=[parse_loc(m)[1] for m in moved])
            locs[location] = target
            moved.append(target)
        return rule.with_(principal=tuple(moved)), locs

    def image_of(self, f, view):
        """The output formula an input formula reads as."""
        return subst(f, view.sigma)

    def default(self, node, view):
        if node.tag == 'ProdEta' and view.sigma:
            (x,) = node.rule.witness
            image = view.sigma.get(x)
            if isinstance(image, Pair):
                return self.split_pair(node, view, image)
        rule, view = self.refresh(node, view, self.map_rule(node, view))
        rule, locs = self.relocate(node, view, rule)
        return self.emit(node, view, view.sequent(), rule, locs)

    def refresh(self, node, view, rule):
        """Renames eigenvariables of rule that would clash in the output."""
        if not rule.fresh:
            return rule, view
        taken = {v.name for v in view.sequent().free_vars()} | self._avoid
        for t in view.sigma.values():
            taken |= {v.name for v in term_vars(t)}
        clash = [v for v in rule.fresh if v.name in taken]
        if not clash:
            return rule, view
        avoid = taken | node.names()
        renaming = {}
        for v in clash:
            renaming[v] = fresh_var(v.name, v.ty, avoid)
            avoid.add(renaming[v].name)
        logger.debug('renaming eigenvariables %s', renaming)
        rule = rule.with_(fresh=tuple(renaming.get(v, v) for v in rule.fresh))
        return rule, view.with_(sigma={**view.sigma, **renaming})

    def emit(self, node, view, out_seq, rule, locs, new=None, new_tags=None):
        """Output node applying rule, premises rewritten from the input's."""
        expected = apply_rule(out_seq, rule)
        inputs = alignments(node)
        premises = []
        for q, (prem, a, e) in enumerate(zip(node.premises, inputs, expected)):
            pv = self.premise_view(node, view, q, a, e, locs, rule, new,
                                   new_tags)
            premises.append(self.rewrite(prem, pv))
        return ProofTree(out_seq, rule, premises)

    def split_pair(self, node, view, pair):
        """A product split of a variable sigma sends to a pair: the output
        omits the step and sends the components to the pair's parts."""
        (x,) = node.rule.witness
        x1, x2 = node.rule.fresh
        sigma = {v: t for v, t in view.sigma.items() if v != x}
        sigma.update({x1: pair.fst, x2: pair.snd})
        (prem,) = node.premises
        (a,) = alignments(node)
        return self.rewrite(prem, self.skip_view(node, view, 0, a, {}, sigma))

    def premise_view(self, node, view, q, a, e, locs, rule, new=None,
                     new_tags=None):
        """The view of premise q given the input alignment a and the output
        expectation e; new overrides the image of formulas the input rule
        produced, keyed by their input origin."""
        out_seq = view.sequent()
        delta_of, theta_of = expected_by_origin(e)
        starts, kept = view.offsets()
        new = new or {}
        delta, tags = [], {}
        for j, origin in enumerate(a.delta):
            if origin[0] == 'd':
                i = origin[1]
                block = tuple(delta_of[('d', starts[i] + k)]
                              for k in range(len(view.delta[i])))
                if i in view.tags:
                    tag = self.carry(view.tags[i], node, q, rule)
                    if tag is not None:
                        tags[j] = tag
            elif origin in new:
                block = new[origin]
            else:
                block = (delta_of[rename_new(origin, locs)],)
            delta.append(block)
            if new_tags and origin in new_tags:
                tags[j] = new_tags[origin]
        extra_delta = tuple(delta_of[('d', kept + k)]
                            for k in range(len(view.extra_delta)))
        index = {alpha_key(x): k for k, x in enumerate(out_seq.theta)}
        theta = []
        for origin in a.theta:
            if origin[0] == 't':
                atom = view.theta[origin[1]]
                theta.append(None if atom is None
                             else theta_of[('t', index[alpha_key(atom)])])
            elif origin in new:
                theta.append(new[origin])
            else:
                theta.append(theta_of[rename_new(origin, locs)])
        extra_theta = tuple(theta_of[('t', index[alpha_key(x)])]
                            for x in view.extra_theta)
        sigma = {v: t for v, t in map_sigma(view.sigma, rule).items()
                 if not (rule.rule == 'ProdEta'
                         and v == node.rule.witness[0])}
        notes = tuple(tuple(map_term(t, rule) for t in note)
                      for note in view.notes)
        return View(delta, theta, extra_theta, extra_delta, tags, sigma, notes)

    def skip_view(self, node, view, q, a, new, sigma=None, new_tags=None):
        """The view of premise q when the output omits this node: copies
        keep their image, formulas the rule produced map through new."""
        delta, tags = [], {}
        for j, origin in enumerate(a.delta):
            if origin[0] == 'd':
                i = origin[1]
                delta.append(view.delta[i])
                if i in view.tags:
                    tag = self.carry(view.tags[i], node, q, None)
                    if tag is not None:
                        tags[j] = tag
            else:
                delta.append(new[origin])
                if new_tags and origin in new_tags:
                    tags[j] = new_tags[origin]
        theta = [view.theta[o[1]] if o[0] == 't' else new[o] for o in a.theta]
        return View(delta, theta, view.extra_theta, view.extra_delta, tags,
                    view.sigma if sigma is None else sigma, view.notes)


def build(seq, rule, subproofs):
    """Applies rule to seq, closing each premise with subproofs(i, premise)."""
    expected = apply_rule(seq, rule)
    premises = []
    for i, e in enumerate(expected):
        premises.append(subproofs(i, e.sequent(False)))
    return ProofTree(seq, rule, premises)


def bounded_growth(name, before, after, factor=3, const=3):
    """Asserts the linear size bound of a transform."""
    n, m = proof_size(before), proof_size(after)
    if m > factor * n + const:
        raise SizeBlowup(f'{name} grew a {n}-node proof to {m} nodes')
    return after


def bounded_poly(name, before, after, degree=3):
    """Asserts the polynomial size cap of a transform."""
    n, m = proof_size(before), proof_size(after)
    if m > (n + 1) ** degree:
        raise SizeBlowup(f'{name} grew a {n}-node proof to {m} nodes')
    return after


def stack(chain, top):
    """Closes a chain of (sequent, rule) steps, bottom first, with top."""
    out = top
    for seq, rule in reversed(chain):
        out = ProofTree(seq, rule, (out,))
    return out
