"""Sparse homogeneous multivariate polynomials.

Provides evaluation, linear substitution (restriction to a subspace),
polarization of quadrics, interpolation of a homogeneous polynomial from a
black-box evaluator, and the bivariate Sylvester resultant used for curve
intersection.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb

import mpmath as mp

from .errors import IdenticallyZero, SingularInterpolation
from .numeric import (
    PrecisionConfig,
    UniPoly,
    mpc_of,
    random_vector,
    rng_for,
    solve_square,
    workprec,
)

# restrictions whose coefficient count exceeds this are kept as black boxes
# by callers instead of being materialized through interpolation
MATERIALIZE_CAP = 520


def monomial_exponents(nvars, degree):
    """All exponent tuples of the given total degree, in a fixed order."""
    if degree == 0:
        return [(0,) * nvars]
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def monomial_count(nvars, degree):
    return comb(degree + nvars - 1, degree)


class MultiPoly:
    """Homogeneous polynomial as a map from exponent tuples to coefficients.

    Exact zeros are never stored; ``drop_small`` cleans tolerance-level dust
    after numeric construction.
    """

    __slots__ = ("nvars", "degree", "terms")

    def __init__(self, nvars, degree, terms):
        self.nvars = nvars
        self.degree = degree
        clean = {}
        for exps, c in terms.items():
            if len(exps) != nvars:
                raise ValueError("exponent tuple length differs from nvars")
            if sum(exps) != degree:
                raise ValueError("non-homogeneous term")
            c = mpc_of(c)
            if c != 0:
                clean[exps] = c
        self.terms = clean

    @classmethod
    def zero(cls, nvars, degree):
        return cls(nvars, degree, {})

    @classmethod
    def from_pairs(cls, nvars, degree, pairs):
        acc = {}
        for exps, c in pairs:
            acc[exps] = acc.get(exps, mp.mpc(0)) + mpc_of(c)
        return cls(nvars, degree, acc)

    def is_zero(self):
        return not self.terms

    def inf_norm(self):
        return max((abs(c) for c in self.terms.values()), default=mp.mpf(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), reverse=True)

    def evaluate(self, point):
        """Value at the coordinate vector ``point`` (length nvars)."""
        if len(point) != self.nvars:
            raise ValueError("point length differs from nvars")
        acc = mp.mpc(0)
        for exps, c in self.sorted_terms():
            t = c
            for v, e in enumerate(exps):
                if e == 0:
                    continue
                t *= point[v] ** e
            acc += t
        return acc

    def __add__(self, other):
        if (self.nvars, self.degree) != (other.nvars, other.degree):
            raise ValueError("mismatched shapes")
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, mp.mpc(0)) + c
        return MultiPoly(self.nvars, self.degree, out)

    def scale(self, c):
        c = mpc_of(c)
        return MultiPoly(self.nvars, self.degree,
                         {e: v * c for e, v in self.terms.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def drop_small(self, tol_abs):
        return MultiPoly(self.nvars, self.degree,
                         {e: c for e, c in self.terms.items() if abs(c) > tol_abs})

    def directional_derivative(self, direction):
        """D_Q f = sum_v Q_v * df/dx_v; degree drops by one."""
        if self.degree == 0:
            return MultiPoly.zero(self.nvars, 0)
        acc = {}
        for exps, c in self.terms.items():
            for v, e in enumerate(exps):
                if e == 0:
                    continue
                q = mpc_of(direction[v])
                if q == 0:
                    continue
                ne = list(exps)
                ne[v] -= 1
                ne = tuple(ne)
                acc[ne] = acc.get(ne, mp.mpc(0)) + c * e * q
        return MultiPoly(self.nvars, self.degree - 1, acc)

    def __repr__(self):
        return f"MultiPoly(nvars={self.nvars}, degree={self.degree}, nterms={len(self.terms)})"


@dataclass(frozen=True)
class LinearMap:
    """Linear substitution x = M s from parameter space into ambient space.

    ``matrix`` is (nvars_out x nvars_in); composition is matrix product.
    """

    matrix: mp.matrix

    @property
    def nvars_out(self):
        return self.matrix.rows

    @property
    def nvars_in(self):
        return self.matrix.cols

    def apply(self, s):
        return tuple(
            sum((self.matrix[i, j] * s[j] for j in range(self.nvars_in)), mp.mpc(0))
            for i in range(self.nvars_out)
        )

    def compose(self, inner):
        """self o inner: first apply ``inner``, then ``self``."""
        return LinearMap(self.matrix * inner.matrix)

    @classmethod
    def identity(cls, n):
        return cls(mp.eye(n))


def _sparse_mul(a, b, nvars):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, mp.mpc(0)) + ca * cb
    return out


def substitute_linear(f, L, cfg=None, method="auto"):
    """Restriction g(s) = f(L s) as a MultiPoly in ``L.nvars_in`` variables.

    Direct sparse expansion is exact and is the default for small outputs;
    when a config is supplied and the target coefficient count is large, the
    restriction is interpolated from evaluations instead (the two agree to
    tolerance; the direct route is kept as a cross-check).
    """
    if f.nvars != L.nvars_out:
        raise ValueError("map output dimension differs from f.nvars")
    r = L.nvars_in
    if method == "auto":
        big = monomial_count(r, f.degree) > MATERIALIZE_CAP
        method = "interpolate" if (big and cfg is not None) else "direct"
    if method == "interpolate":
        if cfg is None:
            raise ValueError("interpolation requires a PrecisionConfig")
        return interpolate_homogeneous(
            lambda s: f.evaluate(L.apply(s)), f.degree, r, cfg,
            label=("restrict", f.degree, r))
    if f.is_zero():
        return MultiPoly.zero(r, f.degree)
    if cfg is not None:
        with workprec(cfg):
            return _substitute_direct(f, L, r)
    return _substitute_direct(f, L, r)


def _substitute_direct(f, L, r):
    unit = {(0,) * r: mp.mpc(1)}
    var_forms = []
    for v in range(f.nvars):
        form = {}
        for j in range(r):
            c = L.matrix[v, j]
            if c != 0:
                e = [0] * r
                e[j] = 1
                form[tuple(e)] = mpc_of(c)
        var_forms.append(form)
    acc = {}
    for exps, c in f.sorted_terms():
        part = dict(unit)
        for v, e in enumerate(exps):
            for _ in range(e):
                part = _sparse_mul(part, var_forms[v], r)
        for e_t, val in part.items():
            acc[e_t] = acc.get(e_t, mp.mpc(0)) + c * val
    return MultiPoly(r, f.degree, acc)


# ---------------------------------------------------------------------------
# quadrics
# ---------------------------------------------------------------------------

def gram_from_evaluator(fn, m, cfg):
    """Symmetric Gram matrix of a quadratic black box on m variables.

    Recovers G from values only: G_jk = (q(e_j+e_k) - q(e_j) - q(e_k)) / 2.
    """
    with workprec(cfg):
        basis = []
        for j in range(m):
            e = [mp.mpc(0)] * m
            e[j] = mp.mpc(1)
            basis.append(tuple(e))
        diag = [fn(basis[j]) for j in range(m)]
        G = mp.matrix(m, m)
        for j in range(m):
            G[j, j] = diag[j]
            for k in range(j + 1, m):
                s = tuple(a + b for a, b in zip(basis[j], basis[k]))
                val = (fn(s) - diag[j] - diag[k]) / 2
                G[j, k] = val
                G[k, j] = val
        return G


def polarize_quadratic(f, cfg=None):
    """Gram matrix G of a degree-2 MultiPoly, with v^T G v = f(v)."""
    if f.degree != 2:
        raise ValueError("polarize_quadratic needs a quadric")
    cfg = cfg or PrecisionConfig()
    return gram_from_evaluator(f.evaluate, f.nvars, cfg)


def quadric_from_gram(G):
    """MultiPoly v^T G v from a symmetric Gram matrix."""
    m = G.rows
    terms = {}
    for j in range(m):
        for k in range(j, m):
            c = G[j, k] if j == k else G[j, k] + G[k, j]
            if c == 0:
                continue
            e = [0] * m
            e[j] += 1
            e[k] += 1
            terms[tuple(e)] = mpc_of(c)
    return MultiPoly(m, 2, terms)


# ---------------------------------------------------------------------------
# interpolation from black-box evaluators
# ---------------------------------------------------------------------------

def interpolate_many(fns, degree, nvars, cfg, label="interp"):
    """Interpolate several homogeneous degree-d black boxes on shared nodes.

    One Vandermonde-style system is factored once and reused for every
    function; nodes are random unit-modulus points drawn from the seed.
    Each result is verified at 5 fresh points; a degenerate design is
    resampled with a new seed up to ``max_retries`` times.
    """
    exps = monomial_exponents(nvars, degree)
    count = len(exps)
    last = None
    for attempt in range(cfg.max_retries):
        rng = rng_for(cfg, "interp", label, degree, nvars, attempt)
        with workprec(cfg):
            nodes = [random_vector(rng, nvars) for _ in range(count)]
            M = mp.matrix(count, count)
            for i, node in enumerate(nodes):
                for t, e in enumerate(exps):
                    acc = mp.mpc(1)
                    for v, ev in enumerate(e):
                        if ev:
                            acc *= node[v] ** ev
                    M[i, t] = acc
            checks = [random_vector(rng, nvars) for _ in range(5)]
            try:
                all_vals = [[mpc_of(fn(node)) for node in nodes] for fn in fns]
                sols = solve_square(M, all_vals, cfg)
                results = []
                for fn, sol in zip(fns, sols):
                    poly = MultiPoly(nvars, degree,
                                     {exps[t]: sol[t] for t in range(count)})
                    maxc = poly.inf_norm()
                    poly = poly.drop_small(mp.mpf(cfg.tol_rel) * maxc)
                    bound = mp.mpf(cfg.tol_rel) * max(mp.mpf(1), maxc) * count * 10
                    for pt in checks:
                        if abs(poly.evaluate(pt) - mpc_of(fn(pt))) > bound:
                            raise SingularInterpolation(
                                "interpolant fails verification at a fresh point")
                    results.append(poly)
                return results
            except (ZeroDivisionError, SingularInterpolation) as exc:
                last = exc
    raise SingularInterpolation(
        f"no well-conditioned sample design after {cfg.max_retries} draws"
    ) from last


def interpolate_homogeneous(fn, degree, nvars, cfg, label="interp"):
    """The unique homogeneous degree-d polynomial agreeing with ``fn``."""
    if degree == 0:
        with workprec(cfg):
            c = mpc_of(fn((mp.mpc(1),) * nvars))
        return MultiPoly(nvars, 0, {(0,) * nvars: c})
    return interpolate_many([fn], degree, nvars, cfg, label=label)[0]


# ---------------------------------------------------------------------------
# bivariate resultants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BiPoly:
    """Polynomial in x whose coefficients are UniPoly values in y."""

    coeffs_x: tuple

    def __post_init__(self):
        cs = list(self.coeffs_x)
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs_x", tuple(cs))

    @property
    def deg_x(self):
        return len(self.coeffs_x) - 1

    @property
    def deg_y(self):
        return max((c.degree for c in self.coeffs_x if not c.is_zero()), default=-1)

    def is_zero(self):
        return not self.coeffs_x

    def slice_at(self, y):
        """UniPoly in x obtained by fixing y."""
        return UniPoly([c(y) for c in self.coeffs_x])

    def inf_norm(self):
        return max((c.inf_norm() for c in self.coeffs_x), default=mp.mpf(0))


def _sylvester_det(fc, gc):
    """Determinant of the Sylvester matrix of two scalar coefficient lists.

    ``fc`` and ``gc`` are lowest-first; sizes are taken from the list
    lengths even if leading values vanish numerically, so the result is the
    resultant polynomial evaluated pointwise.  Also returns a Hadamard bound
    used for zero decisions.
    """
    m = len(fc) - 1
    n = len(gc) - 1
    size = m + n
    S = mp.matrix(size, size)
    frow = list(reversed(fc))
    grow = list(reversed(gc))
    for k in range(n):
        for j, c in enumerate(frow):
            S[k, k + j] = c
    for k in range(m):
        for j, c in enumerate(grow):
            S[n + k, k + j] = c
    had = mp.mpf(1)
    for i in range(size):
        rn = mp.sqrt(sum((abs(S[i, j]) ** 2 for j in range(size)), mp.mpf(0)))
        had *= rn
    if had == 0:
        return mp.mpc(0), mp.mpf(0)
    return mp.det(S), had


def resultant_bivariate(f, g, cfg):
    """Resultant of two bivariate polynomials with respect to x.

    Evaluated at unit-modulus nodes in y and interpolated; the y-degree is
    bounded by ``deg_x(f)*deg_y(g) + deg_y(f)*deg_x(g)``.  Raises
    :class:`IdenticallyZero` when the determinant vanishes at every node
    relative to its Hadamard bound, which signals a common component.
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of a zero polynomial")
    with workprec(cfg):
        dxf, dxg = f.deg_x, g.deg_x
        dyf = max(f.deg_y, 0)
        dyg = max(g.deg_y, 0)
        if dxf == 0:
            return _power_resultant(f.coeffs_x[0], dxg)
        if dxg == 0:
            return _power_resultant(g.coeffs_x[0], dxf)
        bound = dxf * dyg + dxg * dyf
        npts = bound + 1
        rng = rng_for(cfg, "resultant", bound)
        ys = []
        seen = set()
        while len(ys) < npts:
            y = unit_node(rng)
            key = (mp.nstr(y, 12),)
            if key in seen:
                continue
            seen.add(key)
            ys.append(y)
        vals = []
        all_small = True
        for y in ys:
            fy = [c(y) for c in f.coeffs_x]
            gy = [c(y) for c in g.coeffs_x]
            d, had = _sylvester_det(fy, gy)
            vals.append(d)
            if abs(d) > mp.mpf(cfg.tol_rel) * had:
                all_small = False
        if all_small:
            raise IdenticallyZero("resultant vanishes at every sample node")
        V = mp.matrix(npts, npts)
        for i, y in enumerate(ys):
            acc = mp.mpc(1)
            for j in range(npts):
                V[i, j] = acc
                acc *= y
        (sol,) = solve_square(V, [vals], cfg)
        res = UniPoly(sol)
        return res.trim(mp.mpf(cfg.tol_rel) * res.inf_norm())


def unit_node(rng):
    theta = mp.mpf(rng.getrandbits(62)) / (1 << 62)
    return mp.expjpi(2 * theta)


def _power_resultant(c0, power):
    out = UniPoly((1,))
    for _ in range(power):
        out = out * c0
    return out
