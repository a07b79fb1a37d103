"""Finite first-order structures and satisfaction."""
from dataclasses import dataclass, field

from nrcsynth.errors import UnboundVariable
from nrcsynth.fo.syntax import (
    FoAnd, FoBot, FoEq, FoExists, FoForall, FoNeq, FoOr, FoTop, NegPred, Pred)


@dataclass(frozen=True)
class Structure:
    size: int
    relations: dict = field(default_factory=dict)

    @property
    def domain(self):
        return range(self.size)

    def holds(self, name, args):
        return tuple(args) in self.relations.get(name, frozenset())

    def __str__(self):
        rels = '; '.join(f'{n} = {sorted(r)}'
                         for n, r in sorted(self.relations.items()))
        return f'{{domain = {list(self.domain)}; {rels}}}'


def _value(t, assignment):
    try:
        return assignment[t]
    except KeyError:
        raise UnboundVariable(f'{t} is not assigned')


def fo_satisfies(f, structure, assignment):
    if isinstance(f, (Pred, NegPred)):
        truth = structure.holds(f.name, [_value(t, assignment)
                                         for t in f.args])
        return truth if isinstance(f, Pred) else not truth
    if isinstance(f, FoEq):
        return _value(f.l, assignment) == _value(f.r, assignment)
    if isinstance(f, FoNeq):
        return _value(f.l, assignment) != _value(f.r, assignment)
    if isinstance(f, FoTop):
        return True
    if isinstance(f, FoBot):
        return False
    if isinstance(f, FoAnd):
        return (fo_satisfies(f.l, structure, assignment)
                and fo_satisfies(f.r, structure, assignment))
    if isinstance(f, FoOr):
        return (fo_satisfies(f.l, structure, assignment)
                or fo_satisfies(f.r, structure, assignment))
    values = (fo_satisfies(f.body, structure, {**assignment, f.var: a})
              for a in structure.domain)
    if isinstance(f, FoForall):
        return all(values)
    assert isinstance(f, FoExists)
    return any(values)
