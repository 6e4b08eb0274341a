import random

import mpmath as mp
import pytest

from tschirnhaus.multipoly import MultiPoly, monomial_exponents
from tschirnhaus.numeric import PrecisionConfig
from tschirnhaus.transform import MonicPoly, Transformation


@pytest.fixture(autouse=True)
def _ambient_precision():
    """Comparison arithmetic in tests runs well above every config's bits."""
    with mp.workprec(700):
        yield


@pytest.fixture
def cfg():
    """Fast default configuration for unit tests."""
    return PrecisionConfig(bits=128, tol_rel=1e-18, max_retries=6, seed=1)


@pytest.fixture
def cfg256():
    return PrecisionConfig(bits=256, tol_rel=1e-25, max_retries=6, seed=1)


def rand_complex(rng, radius=1.0):
    return mp.mpc(rng.uniform(-radius, radius), rng.uniform(-radius, radius))


def rand_unipoly(rng, degree):
    from tschirnhaus.numeric import UniPoly
    coeffs = [rand_complex(rng) for _ in range(degree)] + [mp.mpc(1)]
    return UniPoly(coeffs)


def rand_monic(rng, n, radius=1.0):
    return MonicPoly(n, tuple(rand_complex(rng, radius) for _ in range(n)))


def rand_int_monic(rng, n, span=5):
    return MonicPoly(n, tuple(rng.randint(-span, span) for _ in range(n)))


def rand_transformation(rng, n, degree=None):
    degree = n - 1 if degree is None else degree
    b = [rand_complex(rng) if j <= degree else 0 for j in range(n)]
    if all(c == 0 for c in b):
        b[0] = mp.mpc(1)
    return Transformation(n, tuple(b))


def rand_homogeneous(rng, nvars, degree, radius=1.0):
    exps = monomial_exponents(nvars, degree)
    return MultiPoly(nvars, degree,
                     {e: rand_complex(rng, radius) for e in exps})


def poly_mul(a, b):
    """Product of two MultiPolys (tests only)."""
    out = {}
    for e1, c1 in a.terms.items():
        for e2, c2 in b.terms.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, mp.mpc(0)) + c1 * c2
    return MultiPoly(a.nvars, a.degree + b.degree, out)


def line_points(line, count):
    return [line.point_at(lam) for lam in range(count)]
