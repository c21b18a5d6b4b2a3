import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from cuntz.matrix import DenseElement, SpectralElement, norm_less_than

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_spectral(rng: random.Random, blocks=None, max_n=4, den=8) -> SpectralElement:
    dims = blocks or [rng.randint(1, max_n) for _ in range(rng.randint(1, 3))]
    diags = []
    for n in dims:
        diags.append([Fraction(rng.randint(0, den), den) if rng.random() < 0.8 else 0
                      for _ in range(n)])
    return SpectralElement.from_blocks(*diags)


def _gram(x):
    n = len(x)
    return [[sum(x[i][k] * x[j][k] for k in range(n)) for j in range(n)] for i in range(n)]


def random_dense_pair(rng: random.Random, dims=None):
    """A PSD pair (a, b) and a rational eps with ||a - b|| < eps."""
    dims = dims or [rng.randint(1, 3) for _ in range(rng.randint(1, 2))]
    ablocks, bblocks = [], []
    for n in dims:
        m = [[Fraction(rng.randint(-4, 4), 4) for _ in range(n)] for _ in range(n)]
        e = [[Fraction(rng.randint(-1, 1), 16) for _ in range(n)] for _ in range(n)]
        ablocks.append(_gram(m))
        bblocks.append(_gram([[m[i][j] + e[i][j] for j in range(n)] for i in range(n)]))
    a, b = DenseElement(ablocks), DenseElement(bblocks)
    eps = Fraction(1, 8)
    while not norm_less_than(a, b, eps):
        eps *= 2
    return a, b, eps


@pytest.fixture
def rng():
    return random.Random(0)


def pytest_terminal_summary(terminalreporter):
    from tests.test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
