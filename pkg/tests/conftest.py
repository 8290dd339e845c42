import cmath
import sys

import numpy as np
import pytest

from twistconv.sequences import Sequence, l1_norm, make_delta


def brute_twisted(a: dict, b: dict, p: int, q: int) -> dict:
    """Direct double sum over dict-of-(k, l) sequences (d = 1), no reduction mod p."""
    out = {}
    for (k, l), x in a.items():
        for (k2, l2), y in b.items():
            # m - k = k2 for the landing index m = k + k2
            w = cmath.exp(2j * cmath.pi * q * k2 * l / p)
            key = (k + k2, l + l2)
            out[key] = out.get(key, 0) + x * y * w
    return out


def dict_distance(x: dict, y: dict) -> float:
    keys = set(x) | set(y)
    return sum(abs(x.get(k, 0) - y.get(k, 0)) for k in keys)


def random_sequence(rng, n_max=30, radius=4, dim=1) -> Sequence:
    n = int(rng.integers(1, n_max + 1))
    idx = rng.integers(-radius, radius + 1, size=(n, 2 * dim))
    val = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
    return Sequence.from_arrays(dim, idx, val)


def random_contractive(rng, rho_max=0.6, n_max=5, radius=2) -> Sequence:
    """delta - r with ||r||_1 drawn in (0.05, rho_max]."""
    r = random_sequence(rng, n_max, radius)
    r = r * (rng.uniform(0.05, rho_max) / l1_norm(r))
    return make_delta(1) - r


def diag_dominant_grid(rng, p):
    g = rng.normal(size=(p, p)) + 1j * rng.normal(size=(p, p))
    g[0, 0] = np.abs(g).sum() + 1.0
    return g


@pytest.fixture
def rng():
    return np.random.default_rng(20061016)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
