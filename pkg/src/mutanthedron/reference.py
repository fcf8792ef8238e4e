"""Closed-form reference data for the AA5/AA5m pair.

Face order is ``cap_top, lat_0, lat_1, lat_2, cap_bot`` in both
polyhedra.  Every function evaluates at the current mpmath precision.
"""
import mpmath
from mpmath import sqrt

AA5_FACES = ("cap_top", "lat_0", "lat_1", "lat_2", "cap_bot")


def phi():
    return (1 + sqrt(5)) / 2


def alpha():
    return -mpmath.mpf(3) / 2 - 3 * sqrt(5) / 10


def beta():
    return -2 - sqrt(5) / 5


def _shared_rows():
    return [
        [0, 0, 0, 1],
        [0, 0, -1, 0],
        [0, -sqrt(10 - 2 * sqrt(5)) / 4, (1 + sqrt(5)) / 4, 0],
        [-sqrt(6 * sqrt(5) + 11) / 2, sqrt(50 + 22 * sqrt(5)) / 4, (1 + sqrt(5)) / 4, -mpmath.mpf(1) / 2],
    ]


def normals_aa5():
    rows = _shared_rows()
    rows.append([-sqrt(-130 + 90 * sqrt(5)) / 20, 0, 0, -mpmath.mpf(3) / 4 - 3 * sqrt(5) / 20])
    return mpmath.matrix(rows)


def normals_aa5m():
    rows = _shared_rows()
    rows.append([-sqrt(55 + 30 * sqrt(5)) / 10, sqrt(50 + 10 * sqrt(5)) / 10, 0, -1 - sqrt(5) / 10])
    return mpmath.matrix(rows)


def gram_aa5():
    a, f = alpha(), phi()
    return mpmath.matrix([
        [2, 0, 0, -1, a],
        [0, 2, -f, -f, 0],
        [0, -f, 2, -f, 0],
        [-1, -f, -f, 2, -1],
        [a, 0, 0, -1, 2],
    ])


def gram_aa5m():
    b, f = beta(), phi()
    return mpmath.matrix([
        [2, 0, 0, -1, b],
        [0, 2, -f, -f, 0],
        [0, -f, 2, -f, -1],
        [-1, -f, -f, 2, 0],
        [b, 0, -1, 0, 2],
    ])


def cutting_normal_aa5():
    """Unit normal of the plane perpendicular to the three lateral faces of AA5."""
    t = 1 / sqrt(10 + 6 * sqrt(5))
    return [t, 0, 0, t * sqrt(6 * sqrt(5) + 11)]
