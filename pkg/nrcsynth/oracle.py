"""Bounded brute-force semantics: enumerate small instances and decide
entailments over them."""
import itertools
import logging
from dataclasses import dataclass
from math import comb

from nrcsynth.errors import PreflightTooLarge
from nrcsynth.fo.semantics import Structure, fo_satisfies
from nrcsynth.fo.syntax import fo_free_vars, fo_preds
from nrcsynth.instances import Atom, UnitV, PairV, SetV, Valuation, \
    satisfies, value_key
from nrcsynth.syntax import (
    UrType, UnitType, ProdType, And, MembershipAtom, free_vars)

logger = logging.getLogger(__name__)


class Bounds:

    def __init__(self, max_atoms=3, max_set_card=3, ceiling=10**7,
                 symmetry=False):
        assert max_atoms >= 0 and max_set_card >= 0
        self._max_atoms = max_atoms
        self._max_set_card = max_set_card
        self._ceiling = ceiling
        self._symmetry = symmetry

    @property
    def max_atoms(self):
        return self._max_atoms

    @property
    def max_set_card(self):
        return self._max_set_card

    @property
    def ceiling(self):
        return self._ceiling

    @property
    def symmetry(self):
        return self._symmetry

    @property
    def atoms(self):
        return tuple(Atom(str(i + 1)) for i in range(self._max_atoms))

    def replace(self, **kwargs):
        params = dict(max_atoms=self._max_atoms,
                      max_set_card=self._max_set_card,
                      ceiling=self._ceiling, symmetry=self._symmetry)
        params.update(kwargs)
        return Bounds(**params)

    def __repr__(self):
        return (f'Bounds(max_atoms={self._max_atoms}, '
                f'max_set_card={self._max_set_card})')


def count_values(ty, bounds):
    """Closed-form number of values enumerate_values yields."""
    if isinstance(ty, UrType):
        return bounds.max_atoms
    if isinstance(ty, UnitType):
        return 1
    if isinstance(ty, ProdType):
        return count_values(ty.left, bounds) * count_values(ty.right, bounds)
    n = count_values(ty.elem, bounds)
    return sum(comb(n, k) for k in range(min(n, bounds.max_set_card) + 1))


def _values(ty, bounds):
    if isinstance(ty, UrType):
        return list(bounds.atoms)
    if isinstance(ty, UnitType):
        return [UnitV()]
    if isinstance(ty, ProdType):
        return [PairV(a, b) for a in _values(ty.left, bounds)
                for b in _values(ty.right, bounds)]
    elems = _values(ty.elem, bounds)
    result = []
    for k in range(min(len(elems), bounds.max_set_card) + 1):
        result.extend(SetV(c) for c in itertools.combinations(elems, k))
    return sorted(result, key=value_key)


def enumerate_values(ty, bounds):
    n = count_values(ty, bounds)
    if n > bounds.ceiling:
        raise PreflightTooLarge(f'{n} values of {ty} exceed {bounds.ceiling}')
    yield from _values(ty, bounds)


def valuation_space(variables, bounds):
    total = 1
    for v in variables:
        total *= count_values(v.ty, bounds)
    return total


def _rename_atoms(v, perm):
    if isinstance(v, Atom):
        return perm[v]
    if isinstance(v, PairV):
        return PairV(_rename_atoms(v.fst, perm), _rename_atoms(v.snd, perm))
    if isinstance(v, SetV):
        return SetV(tuple(_rename_atoms(e, perm) for e in v.elems))
    return v


def _is_canonical(values, atoms):
    key = tuple(value_key(v) for v in values)
    for image in itertools.permutations(atoms):
        perm = dict(zip(atoms, image))
        other = tuple(value_key(_rename_atoms(v, perm)) for v in values)
        if other < key:
            return False
    return True


def enumerate_valuations(variables, bounds):
    variables = sorted(variables, key=lambda v: v.name)
    total = valuation_space(variables, bounds)
    if total > bounds.ceiling:
        raise PreflightTooLarge(
            f'{total} valuations exceed the ceiling {bounds.ceiling}')
    domains = [list(_values(v.ty, bounds)) for v in variables]
    for values in itertools.product(*domains):
        if bounds.symmetry and not _is_canonical(values, bounds.atoms):
            continue
        yield Valuation(dict(zip(variables, values)), bounds.atoms)


class Valid:

    valid = True

    def __bool__(self):
        return True

    def __repr__(self):
        return 'Valid'


@dataclass
class Counterexample:
    valuation: Valuation

    valid = False

    def __bool__(self):
        return False


def _conjuncts(f):
    if isinstance(f, And):
        return _conjuncts(f.l) + _conjuncts(f.r)
    return [f]


def _variable_order(variables, premises, bounds):
    """Greedy order binding first the variables that complete premises."""
    remaining = set(variables)
    order = []
    pending = [free_vars(p) for p in premises]
    while remaining:
        bound = set(order)

        def score(v):
            done = sum(1 for fv in pending
                       if not fv <= bound and fv <= bound | {v})
            return (-done, count_values(v.ty, bounds), v.name)

        best = min(remaining, key=score)
        order.append(best)
        remaining.remove(best)
    return order


def bounded_valid(premises, conclusions, bounds=None, variables=(),
                  also=None):
    """Decides premises ⊨ conclusions over every instance within bounds.

    premises mixes formulas and membership atoms; the conclusions are read
    disjunctively, together with the predicate `also` on valuations when
    given.
    """
    bounds = bounds or Bounds()
    parts = []
    for p in premises:
        parts.extend([p] if isinstance(p, MembershipAtom) else _conjuncts(p))
    conclusions = list(conclusions)
    all_vars = set(free_vars(parts + conclusions)) | set(variables)
    total = valuation_space(all_vars, bounds)
    if total > bounds.ceiling:
        raise PreflightTooLarge(
            f'{total} valuations exceed the ceiling {bounds.ceiling}')
    order = _variable_order(all_vars, parts, bounds)
    domains = [list(_values(v.ty, bounds)) for v in order]
    # Premises are checked as soon as their variables are all bound.
    ready = [[] for _ in order]
    for p in parts:
        fv = free_vars(p)
        level = max((order.index(v) for v in fv), default=-1)
        if level < 0:
            ready_now = Valuation({}, bounds.atoms)
            if not satisfies(p, ready_now):
                logger.debug('premise %s is unsatisfiable', p)
                return Valid()
            continue
        ready[level].append(p)
    logger.debug('bounded check over %d valuations', total)
    witness = _search(order, domains, ready, conclusions, 0,
                      Valuation({}, bounds.atoms), bounds, also)
    return Valid() if witness is None else Counterexample(witness)


def _search(order, domains, ready, conclusions, level, valuation, bounds,
            also):
    if level == len(order):
        if any(satisfies(c, valuation) for c in conclusions):
            return None
        if also is not None and also(valuation):
            return None
        if bounds.symmetry and not _is_canonical(
                [valuation.lookup(v) for v in order], bounds.atoms):
            return None
        return valuation
    var = order[level]
    for value in domains[level]:
        extended = valuation.bind(var, value)
        if all(satisfies(p, extended) for p in ready[level]):
            found = _search(order, domains, ready, conclusions, level + 1,
                            extended, bounds, also)
            if found is not None:
                return found
    return None


def bounded_equivalent(f, g, bounds=None, premises=()):
    bounds = bounds or Bounds()
    forward = bounded_valid(list(premises) + [f], [g], bounds)
    if not forward:
        return forward
    return bounded_valid(list(premises) + [g], [f], bounds)


# First-order structures.

@dataclass
class FoCounterexample:
    structure: Structure
    assignment: dict

    valid = False

    def __bool__(self):
        return False

    @property
    def valuation(self):
        inner = ', '.join(f'{k} = {v}' for k, v in sorted(
            self.assignment.items()))
        return f'{self.structure} with {{{inner}}}'


def count_structures(signature, size):
    total = 1
    for arity in signature.values():
        total *= 2 ** (size ** arity)
    return total


def enumerate_structures(signature, max_domain=3, ceiling=10**7):
    """Every structure over domains of 1..max_domain elements.

    signature maps predicate names to arities.
    """
    signature = dict(sorted(signature.items()))
    total = sum(count_structures(signature, n)
                for n in range(1, max_domain + 1))
    if total > ceiling:
        raise PreflightTooLarge(f'{total} structures exceed {ceiling}')
    for n in range(1, max_domain + 1):
        tables = []
        for name, arity in signature.items():
            tuples = list(itertools.product(range(n), repeat=arity))
            tables.append([frozenset(t for t, keep in zip(tuples, bits) if keep)
                           for bits in itertools.product((False, True),
                                                         repeat=len(tuples))])
        for rels in itertools.product(*tables):
            yield Structure(n, dict(zip(signature, rels)))


def fo_bounded_valid(premises, conclusions, max_domain=3, ceiling=10**7):
    """Decides premises ⊨ conclusions on every structure of at most
    max_domain elements, under every assignment of the free variables."""
    premises, conclusions = list(premises), list(conclusions)
    formulas = premises + conclusions
    signature = dict(fo_preds(formulas))
    variables = sorted(fo_free_vars(formulas))
    total = sum(count_structures(signature, n) * n ** len(variables)
                for n in range(1, max_domain + 1))
    if total > ceiling:
        raise PreflightTooLarge(f'{total} models exceed the ceiling {ceiling}')
    logger.debug('first-order check over %d models', total)
    for structure in enumerate_structures(signature, max_domain, ceiling):
        for values in itertools.product(structure.domain,
                                        repeat=len(variables)):
            assignment = dict(zip(variables, values))
            if not all(fo_satisfies(p, structure, assignment)
                       for p in premises):
                continue
            if any(fo_satisfies(c, structure, assignment)
                   for c in conclusions):
                continue
            return FoCounterexample(structure, assignment)
    return Valid()
