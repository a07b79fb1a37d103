"""Generalized congruence.

A proof of Θ[t/x, t/y] ⊢ Δ[t/x, t/y] becomes a proof of
Θ[t/x, u/y] ⊢ ¬(t ≡ u), Δ[t/x, u/y]: the marked occurrences of t turn into
u and the conclusion pays with the disequivalence. Inside the rewrite the
disequivalence is kept split into its disjuncts (the E family: t ≠ u per
ur component, ¬(t ⊆ u) and ¬(u ⊆ t) per set component); instantiations
that land on the wrong side of a marked bound open it up and extend the
family with the pair (witness, fresh element).
"""
import logging

from nrcsynth.errors import (
    InvalidPosition, PositionError, ShapeMismatch, TypeMismatch,
    VariableCapture)
from nrcsynth.kernel.rules import rewrite_sides
from nrcsynth.kernel.sequents import Sequent1, ProofTree, RuleInstance, loc, \
    parse_loc
from nrcsynth.syntax import (
    NeqUr, Or, MembershipAtom, alpha_key, all_names, dual, equiv, fresh_var,
    member_macro, rebuild_term, subseteq_macro, substitute, term_at_position,
    term_children, term_vars)
from nrcsynth.transforms.base import (
    ProofRewriter, View, alignments, apply_rule, bounded_poly, build, locate,
    stack)
from nrcsynth.transforms.structural import identity_proof, weaken

logger = logging.getLogger(__name__)


def or_leaves(f):
    if isinstance(f, Or):
        return or_leaves(f.l) + or_leaves(f.r)
    return (f,)


def disequivalence(t, u, avoid=frozenset()):
    """¬(t ≡ u) and the disjuncts it splits into."""
    f = dual(equiv(t, u, frozenset(avoid)))
    return f, or_leaves(f)


def unfold_or(seq, k):
    """Or steps splitting the formula at k down to its leaves. Returns the
    chain and the sequent on top of it."""
    chain, pending = [], [k]
    while pending:
        i = pending.pop()
        if not isinstance(seq.delta[i], Or):
            continue
        rule = RuleInstance('Or', (loc('d', i),))
        (e,) = apply_rule(seq, rule)
        chain.append((seq, rule))
        seq = e.sequent(False)
        pending += [i, len(seq.delta) - 1]
    return chain, seq


def _replace_in(term, path, t, u):
    if not path:
        if term != t:
            raise InvalidPosition(f'no occurrence of {t} in {term}')
        return u
    children = list(term_children(term))
    if path[0] >= len(children):
        raise InvalidPosition(f'{path} does not address a part of {term}')
    children[path[0]] = _replace_in(children[path[0]], path[1:], t, u)
    return rebuild_term(term, children)


def replace_in_atom(atom, t, u, occs):
    """Positions in an atom: (0, ...) inside the element, (1, ...) inside
    the container."""
    elem, container = atom.elem, atom.container
    for pos in occs:
        if pos[0] == 0:
            elem = _replace_in(elem, tuple(pos[1:]), t, u)
        elif pos[0] == 1:
            container = _replace_in(container, tuple(pos[1:]), t, u)
        else:
            raise InvalidPosition(f'{pos} addresses no term of {atom}')
    return MembershipAtom(elem, container)


def split_block(node):
    """An existential step with several witnesses as single-witness steps;
    the intermediate instances stay as weakened extras."""
    (prem,) = node.premises
    k = parse_loc(node.rule.principal[0])[1]
    seq, chain, target = node.conclusion, [], k
    for w in node.rule.witness:
        rule = RuleInstance('Exists', (loc('d', target),), witness=(w,))
        (e,) = apply_rule(seq, rule)
        chain.append((seq, rule))
        seq = e.sequent(False)
        target = len(seq.delta) - 1
    partials = seq.delta[len(node.conclusion.delta):-1]
    return stack(chain, weaken(prem, extra_delta=partials))


def _closing_rewrite(seq, atom_loc, eq_loc, side):
    """Rewrites the left side of the equation at eq_loc along the
    disequality at atom_loc and closes the resulting t = t."""
    rule = RuleInstance('Neq', (atom_loc, eq_loc), occ=((0,),), side=side)
    return build(seq, rule, lambda _, s: ProofTree(
        s, RuleInstance('Eq', (loc('d', len(s.delta) - 1),))))


def _disequality(seq, s, d):
    """Location and side of a disequality rewriting s into d."""
    for atom, side in ((NeqUr(s, d), 1), (NeqUr(d, s), 2)):
        try:
            return locate(seq, atom), side
        except ShapeMismatch:
            continue
    raise ShapeMismatch(f'no disequality relates {s} and {d}')


class Congruence(ProofRewriter):

    def __init__(self, avoid):
        super().__init__(avoid)

    def visit(self, node, view):
        if node.tag == 'Ax':
            i, j = (parse_loc(m)[1] for m in node.rule.principal)
            return self.rewrite(identity_proof(node.conclusion, i, j), view)
        if node.tag == 'Eq':
            return self.equation(node, view)
        if node.tag == 'Neq':
            return self.bridged(node, view)
        if node.tag == 'Exists':
            if len(node.rule.witness) > 1:
                return self.rewrite(split_block(node), view)
            return self.instance(node, view)
        return None

    def equation(self, node, view):
        rule, _ = self.relocate(node, view, node.rule)
        out_seq = view.sequent()
        f = out_seq.delta[parse_loc(rule.principal[0])[1]]
        if f.l == f.r:
            return ProofTree(out_seq, rule)
        atom_loc, side = _disequality(out_seq, f.l, f.r)
        return _closing_rewrite(out_seq, atom_loc, rule.principal[0], side)

    def bridged(self, node, view):
        """A rewrite whose source no longer sits at every selected position
        of the image: the stray terms are first rewritten into the source
        along the E disequalities."""
        rule = self.map_rule(node, view)
        rule, locs = self.relocate(node, view, rule)
        out_seq = view.sequent()
        atom_i, target = (parse_loc(m)[1] for m in rule.principal)
        src, _ = rewrite_sides(out_seq.delta[atom_i], rule.side)
        seq, chain = out_seq, []
        for pos in rule.occ:
            s = term_at_position(seq.delta[target], pos)
            if s is None or s == src:
                continue
            bridge, side = _disequality(seq, s, src)
            step = RuleInstance('Neq', (bridge, loc('d', target)), occ=(pos,),
                                side=side)
            (e,) = apply_rule(seq, step)
            chain.append((seq, step))
            seq = e.sequent(False)
            target = len(seq.delta) - 1
        if not chain:
            return None
        logger.debug('bridged %d positions of a rewrite', len(chain))
        extras = seq.delta[len(out_seq.delta):]
        rule = rule.with_(principal=(rule.principal[0], loc('d', target)))
        locs = {node.rule.principal[0]: rule.principal[0],
                node.rule.principal[1]: loc('d', target)}
        wide = view.with_(extra_delta=view.extra_delta + tuple(extras))
        return stack(chain, self.emit(node, wide, seq, rule, locs))

    def instance(self, node, view):
        rule = self.map_rule(node, view)
        rule, locs = self.relocate(node, view, rule)
        out_seq = view.sequent()
        k = parse_loc(rule.principal[0])[1]
        phi = out_seq.delta[k]
        source = node.conclusion.delta[parse_loc(node.rule.principal[0])[1]]
        (w,) = node.rule.witness
        key = alpha_key(MembershipAtom(w, source.bound))
        i = next(j for j, a in enumerate(node.conclusion.theta)
                 if alpha_key(a) == key)
        image = view.theta[i]
        if image is None:
            raise ShapeMismatch(f'the membership of {w} is gone')
        theta = {alpha_key(a) for a in out_seq.theta}
        candidates = [image.elem] + [z for a, z in view.notes
                                     if a == image.elem]
        for c in candidates:
            if alpha_key(MembershipAtom(c, phi.bound)) in theta:
                return self.emit(node, view, out_seq, rule.with_(witness=(c,)),
                                 locs)
        return self.crossing(node, view, rule, locs, image, phi)

    def crossing(self, node, view, rule, locs, image, phi):
        """The witness sits in b′ while the existential ranges over c′: open
        ¬(b′ ⊆ c′) at the witness, take a fresh element z of c′ and go on
        with z, recording ¬(witness ≡ z) among the disjuncts."""
        out_seq = view.sequent()
        a = image.elem
        opening = RuleInstance(
            'Exists', (locate(out_seq, dual(subseteq_macro(image.container,
                                                           phi.bound))),),
            witness=(a,))
        (e,) = apply_rule(out_seq, opening)
        s1 = e.sequent(False)
        names = set(s1.names()) | set(self._avoid) | node.names()
        for t in view.sigma.values():
            names |= {v.name for v in term_vars(t)}
        z = fresh_var(phi.var.name, phi.var.ty, names)
        universal = RuleInstance('Forall', (loc('d', len(s1.delta) - 1),),
                                 fresh=(z,))
        (e,) = apply_rule(s1, universal)
        s2 = e.sequent(False)
        split, s3 = unfold_or(s2, len(s2.delta) - 1)
        leaves = s3.delta[len(s2.delta) - 1:]
        rule = rule.with_(witness=(z,))
        (e,) = apply_rule(s3, rule)
        wide = view.with_(
            extra_theta=view.extra_theta + (MembershipAtom(z, phi.bound),),
            extra_delta=view.extra_delta + tuple(leaves))
        (prem,) = node.premises
        (al,) = alignments(node)
        pv = self.premise_view(node, wide, 0, al, e, locs, rule)
        pv = pv.with_(notes=pv.notes + ((a, z),))
        logger.debug('crossing %s into %s with %s', image.container,
                     phi.bound, z)
        top = ProofTree(s3, rule, (self.rewrite(prem, pv),))
        return stack([(out_seq, opening), (s1, universal)] + split, top)


def gen_congruence(p, t, u, positions):
    """Replaces the occurrences of t at `positions` by u, adding ¬(t ≡ u).

    positions maps conclusion locations ('d3', 't0', ...) to the positions
    of t inside that formula or atom.
    """
    if t.ty != u.ty:
        raise TypeMismatch(f'{t} : {t.ty} against {u} : {u.ty}')
    seq = p.conclusion
    avoid = p.names() | all_names([t, u])
    target, leaves = disequivalence(t, u, avoid)
    if not any(positions.values()):
        return weaken(p, extra_delta=(target,))
    view = View.identity(seq)
    try:
        for location, occs in positions.items():
            kind, i = parse_loc(location)
            if kind == 'd':
                view.delta[i] = (substitute(seq.delta[i], t, u, occs),)
            else:
                view.theta[i] = replace_in_atom(seq.theta[i], t, u, occs)
    except (InvalidPosition, VariableCapture) as e:
        raise PositionError(str(e)) from None
    view = view.with_(extra_delta=leaves)
    out = Congruence(avoid).run(p, view)
    images = view.sequent()
    base = Sequent1(images.theta,
                    images.delta[:len(images.delta) - len(leaves)] + (target,))
    chain, top = unfold_or(base, len(base.delta) - 1)
    if not top.same_as(out.conclusion):
        raise ShapeMismatch('the congruence output does not line up')
    return bounded_poly('gen_congruence', p, stack(chain, out))


def mem_context(p, k):
    """From Θ, t∈u ⊢ Δ (the atom at index k) to Θ ⊢ ¬(t ∈̂ u), Δ."""
    seq = p.conclusion
    atom = seq.theta[k]
    t, u = atom.elem, atom.container
    names = p.names()
    x = fresh_var('x', t.ty, names)
    q = gen_congruence(p, t, x, {loc('t', k): ((0,),)})
    theta = seq.theta[:k] + seq.theta[k + 1:]
    out_seq = Sequent1(theta, seq.delta + (dual(member_macro(t, u, names)),))
    rule = RuleInstance('Forall', (loc('d', len(seq.delta)),), fresh=(x,))
    (e,) = apply_rule(out_seq, rule)
    if not e.sequent(False).same_as(q.conclusion):
        raise ShapeMismatch('the congruence premise does not line up')
    return ProofTree(out_seq, rule, (q,))
