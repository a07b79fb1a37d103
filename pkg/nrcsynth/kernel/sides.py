"""Partitions of a sequent into a Left and a Right part.

Every occurrence carries one of 'L', 'R'; atoms of the context may also be
'B' (in both parts) and formulas may be 'G', the goal of a parameter
collection, which belongs to neither part.
"""
from dataclasses import dataclass, replace

from nrcsynth.errors import PartitionMismatch
from nrcsynth.kernel.rules import node_alignments
from nrcsynth.kernel.sequents import Sequent2, lower, loc, parse_loc
from nrcsynth.syntax import free_vars

SIDES = ('L', 'R', 'B', 'G')


def _in(side, part):
    return side == part or (side == 'B' and part in 'LR')


@dataclass(frozen=True)
class PartitionedSequent:
    sequent: object
    theta: tuple
    delta: tuple
    gamma: tuple = ()

    def __post_init__(self):
        seq = self.sequent
        gamma = getattr(seq, 'gamma', ())
        if (len(self.theta), len(self.gamma), len(self.delta)) != \
                (len(seq.theta), len(gamma), len(seq.delta)):
            raise PartitionMismatch(f'the partition does not cover {seq}')
        for side in self.theta:
            if side not in 'LRB':
                raise PartitionMismatch(f'{side!r} is not a side for an atom')
        for side in self.gamma + self.delta:
            if side not in 'LRG':
                raise PartitionMismatch(f'{side!r} is not a side')

    @classmethod
    def from_locations(cls, seq, sides, default='L'):
        """Builds a partition from {location: side}; unlisted occurrences
        go to default."""
        table = {'t': [default] * len(seq.theta),
                 'g': [default] * len(getattr(seq, 'gamma', ())),
                 'd': [default] * len(seq.delta)}
        for location, side in sides.items():
            kind, i = parse_loc(location)
            if i >= len(table[kind]):
                raise PartitionMismatch(f'{location} is not in {seq}')
            table[kind][i] = side
        return cls(seq, tuple(table['t']), tuple(table['d']),
                   tuple(table['g']))

    def side_of(self, origin):
        kind, i = origin[0], origin[1]
        return {'t': self.theta, 'g': self.gamma, 'd': self.delta}[kind][i]

    def at(self, location):
        return self.side_of(parse_loc(location))

    def atoms(self, part):
        return [a for a, s in zip(self.sequent.theta, self.theta)
                if _in(s, part)]

    def formulas(self, part):
        gamma = getattr(self.sequent, 'gamma', ())
        return ([f for f, s in zip(gamma, self.gamma) if s == part]
                + [f for f, s in zip(self.sequent.delta, self.delta)
                   if s == part])

    def free_vars(self, part):
        return free_vars(self.atoms(part) + self.formulas(part))

    def common(self):
        return self.free_vars('L') & self.free_vars('R')

    def lowered(self):
        """The same partition over Θ ⊢ ¬Γ, Δ."""
        if not isinstance(self.sequent, Sequent2):
            return self
        return PartitionedSequent(lower(self.sequent), self.theta,
                                  self.gamma + self.delta)

    def with_(self, **changes):
        return replace(self, **changes)

    def as_locations(self):
        out = {loc('t', i): s for i, s in enumerate(self.theta)}
        out.update({loc('g', i): s for i, s in enumerate(self.gamma)})
        out.update({loc('d', i): s for i, s in enumerate(self.delta)})
        return out


def _premise_side(origin, part, refl):
    if origin[0] in 'tgd':
        return part.side_of(origin)
    if origin[0] == 'refl':
        return refl
    side = part.at(origin[1])
    if origin[2] == 'atom' and side == 'G':
        return 'B'
    return side


def propagate_sides(node, part, refl='L'):
    """Partitions of the premises of node: carried occurrences keep their
    side and every new formula takes the side of the principal it came
    from."""
    if part.sequent != node.conclusion:
        raise PartitionMismatch('the partition belongs to another sequent')
    result = []
    for a, q in zip(node_alignments(node), node.premises):
        result.append(PartitionedSequent(
            q.conclusion,
            tuple(_premise_side(o, part, refl) for o in a.theta),
            tuple(_premise_side(o, part, refl) for o in a.delta),
            tuple(_premise_side(o, part, refl) for o in a.gamma)))
    return result
