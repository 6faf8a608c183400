import itertools

import pytest


def colex_subsets(n, ell):
    """Independent oracle: all ell-subsets sorted by colex order."""
    return sorted(itertools.combinations(range(n), ell), key=lambda s: tuple(reversed(s)))


def lex_tuples(n, ell):
    return list(itertools.permutations(range(n), ell))


@pytest.fixture
def oracles():
    return {"subsets": colex_subsets, "tuples": lex_tuples}
