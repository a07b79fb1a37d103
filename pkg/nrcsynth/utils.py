from collections import deque
import numpy as np

from nrcsynth.kernel.sides import PartitionedSequent


class RunningMeanStats:

    def __init__(self, n=10):
        assert isinstance(n, int) and n > 0
        self._stats = deque(maxlen=n)

    def append(self, x):
        self._stats.append(x)

    def get(self):
        return float(np.mean(self._stats))

    def max(self):
        return float(np.max(self._stats))


def random_partition(seq, seed=0, state=None):
    """Every occurrence of seq on a uniformly drawn side; atoms may also
    land in both parts."""
    state = state or np.random.RandomState(seed)
    theta = tuple(str(s) for s in state.choice(['L', 'R', 'B'],
                                               size=len(seq.theta)))
    delta = tuple(str(s) for s in state.choice(['L', 'R'],
                                               size=len(seq.delta)))
    gamma = tuple(str(s) for s in state.choice(
        ['L', 'R'], size=len(getattr(seq, 'gamma', ()))))
    return PartitionedSequent(seq, theta, delta, gamma)


def random_partitions(seq, count, seed=0):
    state = np.random.RandomState(seed)
    return [random_partition(seq, state=state) for _ in range(count)]


def size_ratio(stats, output_size, input_size):
    """Records output/input and returns the running mean."""
    assert input_size > 0
    stats.append(output_size / input_size)
    return stats.get()
