"""Sylvester's method of obliteration.

Degree-profile bound calculus for underdetermined polynomial systems, and a
recursive solver producing point and line solutions without solving any
univariate equation of degree above the system's maximal degree.  Every
univariate solve is reported to a :class:`SolveLog`, which is how pipeline
certificates witness their degree caps.

Systems are lists of homogeneous equations.  Internally an equation may be a
materialized sparse polynomial or a black-box evaluator (restrictions of the
Tschirnhaus coefficient functionals never get expanded in many variables);
both support restriction to a subspace and the derived-system construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, ceil

import mpmath as mp

from .errors import (
    AmbientTooSmall,
    DomainError,
    GenericityFailure,
    QNotOnSystem,
)
from .numeric import (
    UniPoly,
    kernel_basis,
    mat_from_cols,
    mat_vec,
    mpc_of,
    normalize_point,
    orthonormal_columns,
    random_embedding,
    random_vector,
    rng_for,
    roots_univariate,
    vec_axpy,
    vec_hdot,
    vec_norm,
    workprec,
)
from .multipoly import (
    LinearMap,
    MultiPoly,
    interpolate_homogeneous,
    monomial_count,
    substitute_linear,
    MATERIALIZE_CAP,
)


# ---------------------------------------------------------------------------
# solve log
# ---------------------------------------------------------------------------

@dataclass
class SolveLog:
    """Append-only record of every univariate solve and its degree."""

    entries: list = field(default_factory=list)

    def record(self, label, degree):
        self.entries.append((str(label), int(degree)))

    @property
    def max_degree(self):
        return max((d for _, d in self.entries), default=0)

    def extend(self, other, prefix=""):
        for label, degree in other.entries:
            self.entries.append((prefix + label, degree))

    def snapshot(self):
        out = SolveLog()
        out.entries = list(self.entries)
        return out


# ---------------------------------------------------------------------------
# degree profiles and bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegreeProfile:
    """Equation counts by degree, highest degree first: (n_k, ..., n_1)."""

    counts: tuple

    def __post_init__(self):
        if len(self.counts) < 1:
            raise ValueError("profile needs at least one slot")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    @classmethod
    def from_degrees(cls, degrees):
        if not degrees:
            raise ValueError("no equations")
        k = max(degrees)
        counts = [0] * k
        for d in degrees:
            counts[k - d] += 1
        return cls(tuple(counts))

    @classmethod
    def parse(cls, text):
        """Parse "3:1,2:0,1:0" into a profile (degree:count pairs)."""
        pairs = {}
        for chunk in text.split(","):
            dstr, cstr = chunk.split(":")
            pairs[int(dstr)] = int(cstr)
        k = max(pairs)
        return cls(tuple(pairs.get(d, 0) for d in range(k, 0, -1)))

    @property
    def max_degree(self):
        return len(self.counts)

    def stripped(self):
        counts = self.counts
        i = 0
        while i < len(counts) - 1 and counts[i] == 0:
            i += 1
        return counts[i:]

    def total(self):
        return sum(self.counts)

    def derived(self):
        """Profile of the derived system: m_k = n_k, m_i = sum_{j>=i} n_j."""
        counts = self.stripped()
        out = []
        acc = 0
        for c in counts:
            acc += c
            out.append(acc)
        return DegreeProfile(tuple(out))


def _bracket(counts):
    counts = list(counts)
    while len(counts) > 1 and counts[0] == 0:
        counts.pop(0)
    if counts == [] or counts == [0]:
        return 1
    if len(counts) == 1:
        return counts[0] + 1
    m = [counts[0] - 1]
    acc = counts[0]
    for c in counts[1:]:
        acc += c
        m.append(acc)
    return 1 + _bracket(m)


def line_bound(profile):
    """Minimal projective ambient dimension guaranteeing a line solution.

    Sylvester's bracket: [n_k,...,n_1] <= 1 + [m_k,...,m_1] with
    m_k = n_k - 1 and m_i the partial sums, bottoming out at one more than
    the number of equations once only linear equations remain.
    """
    return _bracket(list(profile.counts))


def point_bound(profile):
    """Minimal ambient dimension for a point solution: hold one equation of
    maximal degree aside, line-solve the rest, and intersect."""
    counts = list(profile.stripped())
    if counts == [0]:
        raise ValueError("point_bound needs at least one equation")
    counts[0] -= 1
    return _bracket(counts)


def existence_bound_k_plane(d, k):
    """Ambient dimension from which every degree-d hypersurface contains a
    k-plane: ceil(C(d+k, k)/(k+1) + k).  Valid for d > 3 only."""
    if d <= 3:
        raise DomainError("existence bound is quoted for d > 3 only")
    if k < 1:
        raise DomainError("k must be >= 1")
    return ceil(Fraction(comb(d + k, k), k + 1) + k)


# ---------------------------------------------------------------------------
# projective points and lines
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjPoint:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", normalize_point(
            tuple(mpc_of(c) for c in self.coords)))

    @property
    def ambient(self):
        return len(self.coords) - 1


@dataclass(frozen=True)
class ProjLine:
    p1: ProjPoint
    p2: ProjPoint

    def __post_init__(self):
        if len(self.p1.coords) != len(self.p2.coords):
            raise ValueError("spanning points live in different spaces")

    @property
    def ambient(self):
        return self.p1.ambient

    def spanning_matrix(self):
        return mat_from_cols([self.p1.coords, self.p2.coords])

    def point_at(self, lam):
        """p2 + lam * p1, normalized."""
        from .numeric import mantissa_bits
        coords = self.p1.coords + self.p2.coords
        with mp.workprec(max(mp.mp.prec, mantissa_bits(coords) + 16)):
            return normalize_point(vec_axpy(self.p2.coords, mpc_of(lam), self.p1.coords))

    def is_degenerate(self, tol):
        u, v = self.p1.coords, self.p2.coords
        w = vec_axpy(v, -vec_hdot(u, v) / vec_hdot(u, u), u)
        return vec_norm(w) <= mp.mpf(tol) * vec_norm(v)


@dataclass(frozen=True)
class PolySystem:
    """Homogeneous equations in P^ambient (each MultiPoly has ambient+1 vars)."""

    ambient: int
    eqs: tuple

    def __post_init__(self):
        for f in self.eqs:
            if f.nvars != self.ambient + 1:
                raise ValueError("equation variable count differs from ambient+1")
        object.__setattr__(self, "eqs", tuple(self.eqs))

    def profile(self):
        return DegreeProfile.from_degrees([f.degree for f in self.eqs])


# ---------------------------------------------------------------------------
# equations: materialized or black-box
# ---------------------------------------------------------------------------

class PolyEq:
    """Materialized equation."""

    __slots__ = ("poly", "scale")

    def __init__(self, poly, scale=None):
        self.poly = poly
        self.scale = scale if scale is not None else max(mp.mpf(1), poly.inf_norm())

    @property
    def degree(self):
        return self.poly.degree

    @property
    def nvars(self):
        return self.poly.nvars

    def value(self, point):
        return self.poly.evaluate(point)

    def is_zero(self, cfg):
        return self.poly.inf_norm() <= mp.mpf(cfg.tol_rel) * self.scale * 10

    def restricted(self, L, cfg):
        out = substitute_linear(self.poly, L, cfg=cfg, method="direct")
        return PolyEq(out, scale=self.scale)

    def derived(self, Q, nodes, cfg):
        out = [self]
        cur = self.poly
        for j in range(1, self.degree):
            cur = cur.directional_derivative(Q).scale(mp.mpf(1) / j)
            out.append(PolyEq(cur, scale=self.scale))
        return out


class _LambdaExpansion:
    """Shared coefficient extractor for g(P + lambda*Q) at black boxes.

    Values at the m-th roots of unity in lambda are inverted by a DFT; all
    lambda-coefficients at a point are produced by one batch of m parent
    evaluations and cached, so sibling derived equations share work.
    """

    __slots__ = ("parent", "Q", "m", "omegas", "cache")

    def __init__(self, parent, Q, m, cfg):
        self.parent = parent
        self.Q = tuple(Q)
        self.m = m
        with workprec(cfg):
            self.omegas = [mp.expjpi(mp.mpf(2 * j) / m) for j in range(m)]
        self.cache = {}

    def coeffs_at(self, point):
        key = tuple(point)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        vals = [self.parent.value(vec_axpy(point, w, self.Q)) for w in self.omegas]
        m = self.m
        out = []
        for j in range(self.parent.degree):
            acc = mp.mpc(0)
            for i in range(m):
                acc += vals[i] * mp.conj(self.omegas[(i * j) % m])
            out.append(acc / m)
        self.cache[key] = out
        if len(self.cache) > 8192:
            self.cache.clear()
        return out


class BoxEq:
    """Black-box equation: a degree plus an evaluator."""

    __slots__ = ("degree", "nvars", "fn", "scale")

    def __init__(self, degree, nvars, fn, scale):
        self.degree = degree
        self.nvars = nvars
        self.fn = fn
        self.scale = scale

    def value(self, point):
        return self.fn(point)

    def is_zero(self, cfg):
        return False

    def restricted(self, L, cfg):
        r = L.nvars_in
        if monomial_count(r, self.degree) <= MATERIALIZE_CAP:
            poly = interpolate_homogeneous(
                lambda s: self.fn(L.apply(s)), self.degree, r, cfg,
                label=("box-restrict", self.degree, r))
            return PolyEq(poly, scale=max(self.scale, poly.inf_norm()))
        return BoxEq(self.degree, r, lambda s: self.fn(L.apply(s)), self.scale)

    def derived(self, Q, nodes, cfg):
        exp = _LambdaExpansion(self, Q, nodes, cfg)
        out = [self]
        for j in range(1, self.degree):
            out.append(BoxEq(self.degree - j, self.nvars,
                             lambda pt, _j=j, _e=exp: _e.coeffs_at(pt)[_j],
                             self.scale))
        return out


def as_equations(polys):
    return [PolyEq(f) for f in polys]


def derive_equations(eqs, Q, cfg):
    """All derived equations of the system at a solution Q.

    For each g of degree d these are the coefficients of 1, lambda, ...,
    lambda^(d-1) in g(P + lambda*Q): conditions on P of degrees d, d-1, ..., 1.
    The top coefficient g(Q) is omitted.  A common evaluation grid is used so
    black-box siblings share their parent evaluations.
    """
    nodes = max(e.degree for e in eqs) + 1
    out = []
    for e in eqs:
        out.extend(e.derived(Q, nodes, cfg))
    return out


# ---------------------------------------------------------------------------
# the recursive solver
# ---------------------------------------------------------------------------

class _Degenerate(Exception):
    """Internal: a random choice was degenerate; retry with fresh draws."""


def _child(rng):
    return random.Random(rng.getrandbits(64))


def _residual_ok(eq, point, cfg, slack=1000):
    bound = mp.mpf(cfg.tol_rel) * slack * max(mp.mpf(1), eq.scale)
    return abs(eq.value(point)) <= bound


def _check_point(eqs, point, cfg):
    return all(_residual_ok(e, point, cfg) for e in eqs)


def _profile_of(eqs):
    return DegreeProfile.from_degrees([e.degree for e in eqs])


def _cut_and_recurse(fn, eqs, nvars, target, cfg, log, rng, depth):
    E = random_embedding(rng, nvars, target + 1, cfg)
    L = LinearMap(E)
    sub = [e.restricted(L, cfg) for e in eqs]
    got = fn(sub, target + 1, cfg, log, rng, depth + 1)
    if isinstance(got, tuple) and got and isinstance(got[0], tuple):
        return tuple(normalize_point(mat_vec(E, p)) for p in got)
    return normalize_point(mat_vec(E, got))


def _linear_rows(eqs, cfg):
    rows = []
    for e in eqs:
        if isinstance(e, PolyEq):
            poly = e.poly
        else:
            poly = interpolate_homogeneous(e.fn, 1, e.nvars, cfg,
                                           label=("linear-row", e.nvars))
        row = [mp.mpc(0)] * poly.nvars
        for exps, c in poly.terms.items():
            row[exps.index(1)] = c
        rows.append(tuple(row))
    return rows


def _kernel_combo(basis, rng, count=1):
    out = []
    for _ in range(count):
        v = tuple(mp.mpc(0) for _ in basis[0])
        for b in basis:
            v = vec_axpy(v, mpc_of(complex(rng.uniform(-1, 1), rng.uniform(-1, 1))), b)
        out.append(v)
    return out


def _solve_linear_point(eqs, nvars, cfg, rng):
    rows = _linear_rows(eqs, cfg)
    K = kernel_basis(mp.matrix([list(r) for r in rows]), cfg)
    if not K:
        raise _Degenerate("linear system has no projective solution")
    (v,) = _kernel_combo(K, rng, 1)
    return normalize_point(v)


def _solve_linear_line(eqs, nvars, cfg, rng):
    rows = _linear_rows(eqs, cfg)
    K = kernel_basis(mp.matrix([list(r) for r in rows]), cfg)
    if len(K) < 2:
        raise _Degenerate("linear system kernel too small for a line")
    v1, v2 = _kernel_combo(K, rng, 2)
    ortho = orthonormal_columns([v1, v2])
    if len(ortho) < 2:
        raise _Degenerate("drawn kernel combinations were dependent")
    return normalize_point(ortho[0]), normalize_point(ortho[1])


def _intersect_line(eq, line_pts, cfg, log, label):
    """Cut a degree-d equation with a line; one univariate solve of degree <= d.

    Raises _Degenerate when the equation vanishes identically on the line.
    """
    P1, P2 = line_pts
    with workprec(cfg):
        L = LinearMap(mat_from_cols([P1, P2]))
        restricted = eq.restricted(L, cfg)
        if isinstance(restricted, PolyEq):
            binform = restricted.poly
        else:  # two variables always materialize (d+1 coefficients)
            binform = interpolate_homogeneous(restricted.fn, eq.degree, 2, cfg)
        bnorm = binform.inf_norm()
        if bnorm <= mp.mpf(cfg.tol_rel) * max(mp.mpf(1), eq.scale):
            raise _Degenerate("equation vanishes identically on the line")
        d = eq.degree
        coeffs = [mp.mpc(0)] * (d + 1)
        for exps, c in binform.terms.items():
            coeffs[exps[0]] = c
        u = UniPoly(coeffs).trim(mp.mpf(cfg.tol_rel) * bnorm)
        candidates = []
        if u.degree >= 1:
            for s in roots_univariate(u, cfg, log=log, label=label):
                candidates.append(normalize_point(vec_axpy(P2, s, P1)))
        if u.degree < d:
            # the top coefficient vanished: the direction P1 is a root at infinity
            candidates.append(normalize_point(P1))
        if not candidates:
            raise _Degenerate("no intersection candidates on the line")
        for pt in candidates:
            if _residual_ok(eq, pt, cfg):
                return pt
        raise _Degenerate("no line intersection passed the residual check")


def _find_point(eqs, nvars, cfg, log, rng, depth):
    eqs = [e for e in eqs if not e.is_zero(cfg)]
    if not eqs:
        return normalize_point(random_vector(rng, nvars))
    prof = _profile_of(eqs)
    N = nvars - 1
    B = point_bound(prof)
    if N > B:
        return _cut_and_recurse(_find_point, eqs, nvars, B, cfg, log, rng, depth)
    if prof.max_degree == 1:
        return _solve_linear_point(eqs, nvars, cfg, rng)
    maxd = max(e.degree for e in eqs)
    idx = next(i for i, e in enumerate(eqs) if e.degree == maxd)
    held = eqs[idx]
    rest = eqs[:idx] + eqs[idx + 1:]
    last = None
    for _ in range(cfg.max_retries):
        sub = _child(rng)
        try:
            line = _find_line(rest, nvars, cfg, log, sub, depth + 1)
            pt = _intersect_line(held, line, cfg, log,
                                 f"intersect line with degree-{held.degree} equation")
            if _check_point(eqs, pt, cfg):
                return pt
            last = _Degenerate("point failed the full-system residual check")
        except _Degenerate as exc:
            last = exc
    raise last


def _find_line(eqs, nvars, cfg, log, rng, depth):
    eqs = [e for e in eqs if not e.is_zero(cfg)]
    N = nvars - 1
    if not eqs:
        if N < 1:
            raise _Degenerate("no line in a zero-dimensional space")
        ortho = orthonormal_columns([random_vector(rng, nvars),
                                     random_vector(rng, nvars)])
        if len(ortho) < 2:
            raise _Degenerate("random spanning points were dependent")
        return normalize_point(ortho[0]), normalize_point(ortho[1])
    prof = _profile_of(eqs)
    B = line_bound(prof)
    if N > B:
        return _cut_and_recurse(_find_line, eqs, nvars, B, cfg, log, rng, depth)
    if prof.max_degree == 1:
        return _solve_linear_line(eqs, nvars, cfg, rng)
    last = None
    for _ in range(cfg.max_retries):
        sub = _child(rng)
        try:
            Q = _find_point(eqs, nvars, cfg, log, sub, depth + 1)
            deqs = derive_equations(eqs, Q, cfg)
            P = _find_point(deqs, nvars, cfg, log, sub, depth + 1)
            if _dependent(P, Q, cfg):
                last = _Degenerate("derived-system point collapsed onto Q")
                continue
            if _certify_line(eqs, Q, P, cfg):
                return Q, P
            last = _Degenerate("line failed the sample-point certificate")
        except _Degenerate as exc:
            last = exc
    raise last


def _dependent(P, Q, cfg):
    thr = mp.mpf(cfg.tol_rel) ** mp.mpf(0.25)
    u = vec_axpy(P, -vec_hdot(Q, P) / vec_hdot(Q, Q), Q)
    return vec_norm(u) <= thr * vec_norm(P)


def _certify_line(eqs, Q, P, cfg):
    """Each degree-d equation must vanish at d+1 distinct points of the line."""
    for e in eqs:
        for lam in range(e.degree + 1):
            pt = normalize_point(vec_axpy(P, mp.mpf(lam), Q)) if lam else normalize_point(P)
            if not _residual_ok(e, pt, cfg, slack=10 ** 4):
                return False
    return True


def solve_point(eqs, nvars, cfg, log, label):
    """Point solution for a list of Equation objects, with genericity retries.

    Used directly by the geometric constructions and the term-removal
    pipelines, which mix materialized and black-box equations.
    """
    last = None
    for attempt in range(cfg.max_retries):
        rng = rng_for(cfg, label, attempt)
        try:
            with workprec(cfg):
                return _find_point(eqs, nvars, cfg, log, rng, 0)
        except _Degenerate as exc:
            last = exc
    raise GenericityFailure(str(last))


def solve_line(eqs, nvars, cfg, log, label):
    """Line solution for a list of Equation objects, with genericity retries."""
    last = None
    for attempt in range(cfg.max_retries):
        rng = rng_for(cfg, label, attempt)
        try:
            with workprec(cfg):
                return _find_line(eqs, nvars, cfg, log, rng, 0)
        except _Degenerate as exc:
            last = exc
    raise GenericityFailure(str(last))


# ---------------------------------------------------------------------------
# public wrappers over MultiPoly systems
# ---------------------------------------------------------------------------

def derived_system(system, Q, cfg):
    """Derived system at a known solution Q of ``system``.

    Each degree-d equation g contributes the lambda-coefficients of
    g(P + lambda*Q) for lambda powers 0..d-1, i.e. conditions of degree
    d, d-1, ..., 1 on P; the top coefficient g(Q) is omitted (it vanishes).
    """
    q = Q.coords if isinstance(Q, ProjPoint) else normalize_point(tuple(Q))
    with workprec(cfg):
        for f in system.eqs:
            bound = mp.mpf(cfg.tol_rel) * 1000 * max(mp.mpf(1), f.inf_norm())
            if abs(f.evaluate(q)) > bound:
                raise QNotOnSystem("Q does not satisfy the system to tolerance")
        out = []
        for f in system.eqs:
            cur = f
            out.append(cur)
            for j in range(1, f.degree):
                cur = cur.directional_derivative(q).scale(mp.mpf(1) / j)
                out.append(cur)
        return PolySystem(system.ambient, tuple(out))


def find_point(system, cfg, log=None, label="find_point"):
    """A projective point satisfying every equation of the system.

    Requires ambient >= point_bound(profile); solves hold-one-aside
    recursively and logs every univariate solve, none of degree above the
    system's maximal degree.
    """
    log = log if log is not None else SolveLog()
    prof = system.profile()
    need = point_bound(prof)
    if system.ambient < need:
        raise AmbientTooSmall(
            f"point solution needs ambient >= {need}", required=need)
    pt = solve_point(as_equations(system.eqs), system.ambient + 1, cfg, log, label)
    return ProjPoint(pt)


def find_line(system, cfg, log=None, label="find_line"):
    """A projective line inside the vanishing locus of every equation."""
    log = log if log is not None else SolveLog()
    prof = system.profile()
    need = line_bound(prof)
    if system.ambient < need:
        raise AmbientTooSmall(
            f"line solution needs ambient >= {need}", required=need)
    p1, p2 = solve_line(as_equations(system.eqs), system.ambient + 1, cfg, log, label)
    return ProjLine(ProjPoint(p1), ProjPoint(p2))
