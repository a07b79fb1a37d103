from nrcsynth.parser import parse_sequent
from nrcsynth.utils import RunningMeanStats, random_partition, \
    random_partitions, size_ratio

SEQ = parse_sequent('y in S |- exists x in S . x = y, y = y',
                    {'S': 'set(ur)', 'y': 'ur'})


def test_running_mean_keeps_a_window():
    stats = RunningMeanStats(2)
    for x in (1.0, 3.0, 5.0):
        stats.append(x)
    assert stats.get() == 4.0
    assert stats.max() == 5.0


def test_size_ratio():
    stats = RunningMeanStats(10)
    assert size_ratio(stats, 4, 2) == 2.0
    assert size_ratio(stats, 0, 2) == 1.0


def test_random_partitions_are_seeded():
    first = random_partitions(SEQ, 5, seed=7)
    assert first == random_partitions(SEQ, 5, seed=7)
    for part in first:
        assert part.theta[0] in 'LRB'
        assert set(part.delta) <= {'L', 'R'}


def test_single_partition_covers_the_sequent():
    part = random_partition(SEQ, seed=1)
    assert len(part.theta) == 1 and len(part.delta) == 2
