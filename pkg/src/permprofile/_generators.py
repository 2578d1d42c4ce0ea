"""Embedded exact generator matrices for the irreducible representations.

For each partition of k (2 <= k <= 5, excluding the one-dimensional trivial
and alternating representations, which are generated programmatically) this
table holds the pair of orthogonal matrices representing the transposition
t_k = 2134...k and the rotation r_k = 234...k1.  Entries are exact elements
of Q(sqrt2, sqrt3, sqrt5, sqrt7); an entry num/den*sqrt(rad) is written
q(num, den, rad).

A transcription error here cannot pass silently: expansion checks every
Cayley-graph edge for consistency and every expanded matrix for exact
orthogonality.
"""

from fractions import Fraction

from .qfield import QNum


def q(num: int, den: int = 1, rad: int = 1) -> QNum:
    return QNum({rad: Fraction(num, den)})


# (k, partition) -> (matrix for t_k, matrix for r_k), rows of QNum
GENERATORS = {
    (3, (2, 1)): (
        [
            [q(-1, 2), q(1, 2, 3)],
            [q(1, 2, 3), q(1, 2)],
        ],
        [
            [q(-1, 2), q(-1, 2, 3)],
            [q(1, 2, 3), q(-1, 2)],
        ],
    ),
    (4, (3, 1)): (
        [
            [q(1, 5), q(2, 5, 5), q(-2, 5)],
            [q(2, 5, 5), q(0), q(1, 5, 5)],
            [q(-2, 5), q(1, 5, 5), q(4, 5)],
        ],
        [
            [q(-4, 5), q(-1, 5, 5), q(-2, 5)],
            [q(1, 5, 5), q(0), q(-2, 5, 5)],
            [q(-2, 5), q(2, 5, 5), q(-1, 5)],
        ],
    ),
    (4, (2, 2)): (
        [
            [q(-1), q(0)],
            [q(0), q(1)],
        ],
        [
            [q(1, 2), q(1, 2, 3)],
            [q(1, 2, 3), q(-1, 2)],
        ],
    ),
    (4, (2, 1, 1)): (
        [
            [q(0), q(0), q(1)],
            [q(0), q(-1), q(0)],
            [q(1), q(0), q(0)],
        ],
        [
            [q(0), q(1), q(0)],
            [q(-1), q(0), q(0)],
            [q(0), q(0), q(1)],
        ],
    ),
    (5, (4, 1)): (
        [
            [q(1, 10), q(-3, 10), q(3, 14, 7), q(9, 70, 35)],
            [q(-3, 10), q(9, 10), q(1, 14, 7), q(3, 70, 35)],
            [q(3, 14, 7), q(1, 14, 7), q(9, 14), q(-3, 14, 5)],
            [q(9, 70, 35), q(3, 70, 35), q(-3, 14, 5), q(5, 14)],
        ],
        [
            [q(-1, 2), q(-1, 2), q(3, 14, 7), q(-1, 14, 35)],
            [q(-1, 2), q(0), q(1, 14, 7), q(1, 7, 35)],
            [q(-3, 14, 7), q(-1, 14, 7), q(-11, 14), q(-1, 14, 5)],
            [q(1, 14, 35), q(-1, 7, 35), q(-1, 14, 5), q(2, 7)],
        ],
    ),
    (5, (3, 2)): (
        [
            [q(-6, 7), q(0), q(-1, 7, 7), q(0), q(-1, 7, 6)],
            [q(0), q(1), q(0), q(0), q(0)],
            [q(-1, 7, 7), q(0), q(0), q(0), q(1, 7, 42)],
            [q(0), q(0), q(0), q(1), q(0)],
            [q(-1, 7, 6), q(0), q(1, 7, 42), q(0), q(-1, 7)],
        ],
        [
            [q(2, 7), q(3, 14, 7), q(-2, 7, 7), q(-1, 28, 14), q(-1, 28, 6)],
            [q(-3, 14, 7), q(-1, 2), q(-1, 2), q(-1, 4, 2), q(-1, 28, 42)],
            [q(2, 7, 7), q(-1, 2), q(0), q(-1, 4, 2), q(-1, 28, 42)],
            [q(-1, 28, 14), q(1, 4, 2), q(1, 4, 2), q(-1, 4), q(-5, 28, 21)],
            [q(-1, 28, 6), q(1, 28, 42), q(1, 28, 42), q(-5, 28, 21), q(13, 28)],
        ],
    ),
    (5, (3, 1, 1)): (
        [
            [q(2, 5), q(-1, 5, 6), q(1, 5, 15), q(0), q(0), q(0)],
            [q(-1, 5, 6), q(3, 5), q(1, 5, 10), q(0), q(0), q(0)],
            [q(1, 5, 15), q(1, 5, 10), q(0), q(0), q(0), q(0)],
            [q(0), q(0), q(0), q(0), q(1, 7, 7), q(-1, 7, 42)],
            [q(0), q(0), q(0), q(1, 7, 7), q(-6, 7), q(-1, 7, 6)],
            [q(0), q(0), q(0), q(-1, 7, 42), q(-1, 7, 6), q(-1, 7)],
        ],
        [
            [q(1), q(0), q(0), q(0), q(0), q(0)],
            [q(0), q(-1, 4), q(-1, 12, 10), q(-5, 12, 2), q(5, 28, 14), q(5, 84, 21)],
            [q(0), q(1, 12, 10), q(1, 6), q(1, 6, 5), q(1, 42, 35), q(5, 84, 210)],
            [q(0), q(5, 12, 2), q(1, 6, 5), q(-2, 3), q(-2, 21, 7), q(1, 84, 42)],
            [q(0), q(5, 28, 14), q(-1, 42, 35), q(2, 21, 7), q(4, 7), q(-13, 84, 6)],
            [q(0), q(5, 84, 21), q(-5, 84, 210), q(-1, 84, 42), q(-13, 84, 6), q(5, 28)],
        ],
    ),
    (5, (2, 2, 1)): (
        [
            [q(-1, 5), q(2, 5), q(0), q(2, 15, 15), q(2, 15, 30)],
            [q(2, 5), q(-4, 5), q(0), q(1, 15, 15), q(1, 15, 30)],
            [q(0), q(0), q(1), q(0), q(0)],
            [q(2, 15, 15), q(1, 15, 15), q(0), q(-2, 3), q(1, 3, 2)],
            [q(2, 15, 30), q(1, 15, 30), q(0), q(1, 3, 2), q(-1, 3)],
        ],
        [
            [q(3, 10), q(-1, 10), q(3, 20, 30), q(1, 10, 15), q(1, 20, 30)],
            [q(-1, 10), q(-4, 5), q(-1, 20, 30), q(2, 15, 15), q(-1, 60, 30)],
            [q(-3, 20, 30), q(1, 20, 30), q(1, 4), q(1, 4, 2), q(-1, 4)],
            [q(-1, 10, 15), q(-2, 15, 15), q(1, 4, 2), q(-2, 3), q(1, 12, 2)],
            [q(-1, 20, 30), q(1, 60, 30), q(-1, 4), q(1, 12, 2), q(11, 12)],
        ],
    ),
    (5, (2, 1, 1, 1)): (
        [
            [q(-1, 6), q(1, 6, 15), q(1, 6, 5), q(1, 6, 15)],
            [q(1, 6, 15), q(-1, 2), q(1, 6, 3), q(1, 2)],
            [q(1, 6, 5), q(1, 6, 3), q(-5, 6), q(1, 6, 3)],
            [q(1, 6, 15), q(1, 2), q(1, 6, 3), q(-1, 2)],
        ],
        [
            [q(-2, 3), q(0), q(1, 6, 5), q(1, 6, 15)],
            [q(0), q(0), q(1, 2, 3), q(-1, 2)],
            [q(1, 6, 5), q(-1, 2, 3), q(1, 6), q(1, 6, 3)],
            [q(-1, 6, 15), q(-1, 2), q(-1, 6, 3), q(-1, 2)],
        ],
    ),
}
