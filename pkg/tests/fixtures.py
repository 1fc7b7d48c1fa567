"""Hand-built probe maps shared by several test modules."""
import numpy as np

from bitprobe.lowerlab import Layout, ProbeMap


def single(rows, s):
    return ProbeMap(len(rows), s, np.array(rows), Layout.SINGLE_ARRAY)


def three(rows):
    rows = np.array(rows)
    return ProbeMap(len(rows), int(rows.max()) + 1, rows, Layout.THREE_ARRAYS)


# majority forcing: two triangles through location 0 (P1), two 4-cycles
# sharing a hanging location (P2), a 4-cycle whose adjacent edges share a
# hanging location (P3)
P1_MAP = single([[0, 1, 5], [1, 2, 5], [2, 0, 5], [0, 3, 5], [3, 4, 5], [4, 0, 5]], 6)
P2_MAP = single([[0, 1, 8], [1, 2, 9], [2, 3, 10], [3, 0, 11],
                 [4, 5, 8], [5, 6, 12], [6, 7, 13], [7, 4, 14]], 15)
P3_MAP = single([[0, 1, 4], [1, 2, 4], [2, 3, 5], [3, 0, 6]], 7)

DENSITY_FIXTURES = {
    "AND3": three([[0, 0, 0], [0, 1, 1], [1, 0, 2], [2, 2, 0]]),
    "XOR_AND": three([[0, 0, 0], [1, 0, 0], [1, 1, 1], [0, 1, 1]]),
    "OR_AND": three([[0, 0, 0], [0, 1, 1], [1, 0, 2], [2, 2, 0], [2, 2, 1], [2, 2, 2]]),
    "ALL_EQUAL": three([[0, 0, 0], [0, 0, 1], [1, 0, 0]]),
    "ALL_OR_YZ_ZERO": three([[0, 0, 0], [1, 0, 0], [1, 1, 1], [2, 1, 1]]),
}

# the same location multiset twice: parity cannot tell 0 from 1
PARITY_DUP = single([[0, 1, 2], [0, 1, 2], [3, 4, 5]], 6)
# dependent count vectors with a non-trivial combination
DEPENDENT = single([[0, 1, 2], [0, 0, 1], [1, 2, 2]], 3)

# Four stored elements; 0 and 1 share an x location, 2 and 3 are joined by
# the trap element 4, and 5, 6 make every other pair of S gain as well.
GAINER_ROWS = [
    [0, 0, 0], [0, 1, 1], [1, 2, 2], [2, 3, 3],
    [1, 3, 4], [0, 2, 4], [0, 3, 4],
]
GAINER_S = (0, 1, 2, 3)


def gainer_map():
    return ProbeMap(len(GAINER_ROWS), 5, np.array(GAINER_ROWS), Layout.THREE_ARRAYS)
