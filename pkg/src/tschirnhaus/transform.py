"""Applying a Tschirnhaus transformation y = T(x) to a monic polynomial.

The transformed polynomial q(y) = prod_i (y - T(x_i)) is computed without
ever solving p: traces of T(C_p)^i equal the power sums of the transformed
roots, and reducing T^i mod p turns each trace into a short inner product
with the power sums of p, which Newton's identities deliver straight from
the coefficients.  Newton's identities then convert the traces into the
coefficients A_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections import OrderedDict

import mpmath as mp

from .errors import EmptyGCD
from .numeric import (
    UniPoly,
    gcd_univariate,
    mpc_of,
    newton_e_from_p,
    roots_univariate,
    workprec,
)
from .multipoly import interpolate_homogeneous


@dataclass(frozen=True)
class MonicPoly:
    """p(x) = x^n + a_1 x^(n-1) + ... + a_n, coefficients highest first."""

    n: int
    a: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("degree must be >= 1")
        if len(self.a) != self.n:
            raise ValueError("need exactly n coefficients a_1..a_n")
        object.__setattr__(self, "a", tuple(mpc_of(c) for c in self.a))

    @classmethod
    def from_unipoly(cls, u):
        if u.is_zero() or u.degree < 1:
            raise ValueError("need degree >= 1")
        mon = u.monic()
        n = mon.degree
        return cls(n, tuple(reversed(mon.coeffs[:-1])))

    @classmethod
    def from_roots(cls, roots):
        return cls.from_unipoly(UniPoly.from_roots(roots))

    def to_unipoly(self):
        return UniPoly(tuple(reversed(self.a)) + (mp.mpc(1),))

    def __call__(self, x):
        return self.to_unipoly()(x)

    def power_sums(self, kmax):
        """Power sums t_0..t_kmax of the roots, from the coefficients alone.

        Newton's identities: t_k = -k*a_k - sum_{i=1}^{k-1} a_i t_{k-i} for
        k <= n, and t_k = -sum_{i=1}^{n} a_i t_{k-i} beyond the degree.
        """
        t = [mp.mpc(self.n)]
        for k in range(1, kmax + 1):
            acc = mp.mpc(0)
            for i in range(1, min(k - 1, self.n) + 1):
                acc -= self.a[i - 1] * t[k - i]
            if k <= self.n:
                acc -= k * self.a[k - 1]
            t.append(acc)
        return t


@dataclass(frozen=True)
class Transformation:
    """T(x) = b_{n-1} x^(n-1) + ... + b_1 x + b_0 applied to a degree-n root set.

    The coefficient vector is projectively meaningful, so the zero vector is
    rejected; deg T <= n-1 holds by construction, which is what rules out
    the classical 'illusory' transformations proportional to p.
    """

    n: int
    b: tuple

    def __post_init__(self):
        if len(self.b) != self.n:
            raise ValueError("need exactly n coefficients b_0..b_{n-1}")
        bb = tuple(mpc_of(c) for c in self.b)
        if all(c == 0 for c in bb):
            raise ValueError("zero transformation is projectively meaningless")
        object.__setattr__(self, "b", bb)

    @classmethod
    def identity(cls, n):
        b = [0] * n
        b[1] = 1
        return cls(n, tuple(b))

    def as_unipoly(self):
        return UniPoly(self.b)


def companion_matrix(p):
    """n x n matrix with characteristic polynomial p (subdiagonal of ones,
    negated coefficients in the last column)."""
    n = p.n
    u = p.to_unipoly().coeffs
    C = mp.matrix(n, n)
    for i in range(1, n):
        C[i, i - 1] = mp.mpf(1)
    for i in range(n):
        C[i, n - 1] = -u[i]
    return C


def _mulmod(u, v, plow, n):
    """(u*v) mod p for monic p; plow is p's lowest-first tail of length n."""
    prod = [mp.mpc(0)] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        if a == 0:
            continue
        for j, c in enumerate(v):
            prod[i + j] += a * c
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c == 0:
            continue
        prod[k] = mp.mpc(0)
        base = k - n
        for j in range(n):
            prod[base + j] -= c * plow[j]
    out = prod[:n]
    while len(out) < n:
        out.append(mp.mpc(0))
    return out


def _transformed_power_sums(p, bvec, k, tsums):
    """Traces of T(C_p)^i for i = 1..k, via T^i mod p."""
    n = p.n
    plow = p.to_unipoly().coeffs[:n]
    base = list(bvec)
    if len(base) < n:
        base = base + [mp.mpc(0)] * (n - len(base))
    cur = list(base)
    sums = []
    for _ in range(k):
        s = mp.mpc(0)
        for j, c in enumerate(cur):
            if c != 0:
                s += c * tsums[j]
        sums.append(s)
        if len(sums) < k:
            cur = _mulmod(cur, base, plow, n)
    return sums


def leading_coefficients(p, T, k, cfg):
    """First k coefficients A_1..A_k of the transformed polynomial.

    ``T`` may be a Transformation or a bare coefficient sequence b_0..; the
    result agrees with the leading slice of :func:`transform` and is
    homogeneous of degree i in the b's.
    """
    if k > p.n:
        raise ValueError("k cannot exceed the degree")
    bvec = list(T.b) if isinstance(T, Transformation) else [mpc_of(c) for c in T]
    with workprec(cfg):
        tsums = p.power_sums(p.n - 1)
        sums = _transformed_power_sums(p, bvec, k, tsums)
        elems = newton_e_from_p(sums)
        return [((-1) ** i) * elems[i - 1] for i in range(1, k + 1)]


def transform(p, T, cfg):
    """The monic polynomial whose roots are T(x_i) over the roots x_i of p.

    Computed as the characteristic polynomial of T(C_p) through the
    trace-Newton scheme; p itself is never solved.
    """
    if isinstance(T, Transformation) and T.n != p.n:
        raise ValueError("transformation degree mismatch")
    coeffs = leading_coefficients(p, T, p.n, cfg)
    return MonicPoly(p.n, tuple(coeffs))


class CoefficientFamily:
    """Batch evaluator for A_1..A_k as functions of the b-vector.

    Power sums of p are precomputed once; each evaluation costs k modular
    polynomial products.  Values are cached so that sibling equations probing
    the same point share one pass.
    """

    def __init__(self, p, k, cfg, cache_size=4096):
        self.p = p
        self.k = k
        self.cfg = cfg
        with workprec(cfg):
            self._tsums = p.power_sums(p.n - 1)
        self._cache = OrderedDict()
        self._cache_size = cache_size

    def values(self, bvec):
        key = tuple(bvec)
        hit = self._cache.get(key)
        if hit is not None:
            self._cache.move_to_end(key)
            return hit
        with workprec(self.cfg):
            sums = _transformed_power_sums(self.p, list(key), self.k, self._tsums)
            elems = newton_e_from_p(sums)
            vals = tuple(((-1) ** i) * elems[i - 1] for i in range(1, self.k + 1))
        self._cache[key] = vals
        if len(self._cache) > self._cache_size:
            self._cache.popitem(last=False)
        return vals

    def functional(self, i):
        if not 1 <= i <= self.k:
            raise ValueError("index out of range")
        return CoefficientFunctional(self.p, i, lambda b, _i=i: self.values(b)[_i - 1])


@dataclass(frozen=True)
class CoefficientFunctional:
    """A_i of the transformed polynomial as a function of b; homogeneous of
    degree i."""

    p: MonicPoly
    i: int
    evaluator: object

    def __call__(self, bvec):
        return self.evaluator(tuple(mpc_of(c) for c in bvec))

    def restrict(self, L, cfg):
        """Materialize A_i composed with a linear map as a MultiPoly."""
        return interpolate_homogeneous(
            lambda s: self(L.apply(s)), self.i, L.nvars_in, cfg,
            label=("A", self.i, L.nvars_in))


def coefficient_functional(p, i, cfg):
    """The functional b -> A_i(b) for the given polynomial."""
    return CoefficientFamily(p, i, cfg).functional(i)


def recover_roots(p, T, y_star, cfg, log=None):
    """Roots of p in the fiber over a root y* of the transformed polynomial.

    These are the roots of GCD(p(x), T(x) - y*); the gcd degree is the fiber
    size (generically 1) and the accompanying solve is logged with that
    degree.
    """
    with workprec(cfg):
        y_star = mpc_of(y_star)
        tp = T.as_unipoly()
        shifted = tp - UniPoly((y_star,))
        pu = p.to_unipoly()
        d = gcd_univariate(pu, shifted, cfg)
        if d.degree < 1:
            raise EmptyGCD("value is not a transformed root to tolerance")
        roots = roots_univariate(d, cfg, log=log, label="fiber gcd")
        tol = mp.mpf(cfg.tol_rel)
        pnorm = pu.inf_norm()
        tnorm = max(mp.mpf(1), tp.inf_norm(), abs(y_star))
        out = []
        for x in roots:
            growth = max(mp.mpf(1), abs(x)) ** p.n
            if abs(pu(x)) <= tol * pnorm * growth * 1000 and \
               abs(tp(x) - y_star) <= tol * tnorm * growth * 1000:
                out.append(x)
        return out


def solve_monic(p, cfg, log=None):
    """Verification-only root oracle: solve p numerically.

    Tests and demos use this to check pipeline output; pass a separate
    verification log so construction certificates stay honest.
    """
    return roots_univariate(p.to_unipoly(), cfg, log=log, label="verification oracle")
