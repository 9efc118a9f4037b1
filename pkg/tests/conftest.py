from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from freeset.drawing import StraightLineDrawing

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def drawing(coords, edges):
    return StraightLineDrawing.from_edges(coords, [tuple(e) for e in edges])


def k4_centered():
    c = {"a": (-2, -1), "b": (2, -1), "c": (0, 3), "o": (0, 0)}
    return drawing(c, ["ab", "bc", "ca", "ao", "bo", "co"])


def k4_convex():
    c = {"a": (-1, -1), "b": (1, -1), "c": (1, 1), "d": (-1, 1)}
    return drawing(c, ["ab", "bc", "cd", "da", "ac", "bd"])


def octahedron():
    c = {"A": (-6, -6), "B": (-6, 6), "C": (6, 0), "D": (0, Fraction(3, 2)), "E": (0, Fraction(-3, 2)),
         "F": (2, Fraction(1, 2))}
    return drawing(c, ["AB", "BC", "AC", "AD", "AE", "BD", "BF", "CE", "CF", "DE", "DF", "EF"])


@pytest.fixture
def k4():
    return k4_centered()
