"""Arbitrary-precision complex scalars, dense univariate polynomials, and
the numeric kernel every other module builds on: root finding, GCD,
Newton's identities, and tolerance-aware linear algebra.

All numbers are ``mpmath`` values.  Every operation takes a
:class:`PrecisionConfig` and runs at ``cfg.bits`` plus a fixed guard, so two
runs with identical inputs, seed, and precision produce identical bits.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field, replace

import mpmath as mp

from .errors import IllConditioned, NonConvergence

WORK_GUARD_BITS = 32


@dataclass(frozen=True)
class PrecisionConfig:
    """Working precision, tolerance policy, retry budget, and RNG seed.

    Parameters
    ----------
    bits : int
        Mantissa precision in bits, at least 64.
    tol_rel : float
        Relative residual tolerance used for every accept/reject decision.
    max_retries : int
        Budget for precision escalation and genericity retries.
    seed : int
        Seed from which every random choice in the library is derived.
    """

    bits: int = 256
    tol_rel: float = 1e-30
    max_retries: int = 6
    seed: int = 0

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("bits must be >= 64")
        if not self.tol_rel > 0:
            raise ValueError("tol_rel must be positive")
        if self.max_retries < 1:
            raise ValueError("max_retries must be >= 1")

    def workbits(self):
        return self.bits + WORK_GUARD_BITS

    def escalated(self, factor=2):
        return replace(self, bits=self.bits * factor)


def workprec(cfg):
    """Context manager running mpmath at the config's working precision."""
    return mp.workprec(cfg.workbits())


def mpc_of(x):
    """Coerce ints/floats/strings/mpf/mpc to mpc at current precision."""
    if isinstance(x, mp.mpc):
        return x
    return mp.mpc(x)


# ---------------------------------------------------------------------------
# deterministic randomness
# ---------------------------------------------------------------------------

def rng_for(cfg, *labels):
    """A ``random.Random`` seeded stably from ``cfg.seed`` and labels.

    Hash salting never enters: the seed is a SHA-256 digest of the repr,
    so the stream is identical across processes and platforms.
    """
    tag = repr((cfg.seed,) + labels).encode()
    seed = int.from_bytes(hashlib.sha256(tag).digest()[:8], "big")
    return random.Random(seed)


def unit_scalar(rng):
    """A random complex number of modulus one, deterministic from ``rng``."""
    theta = mp.mpf(rng.getrandbits(62)) / (1 << 62)
    return mp.expjpi(2 * theta)


def random_vector(rng, n):
    return tuple(unit_scalar(rng) for _ in range(n))


# ---------------------------------------------------------------------------
# small vector/matrix helpers (tuples of mpc; mp.matrix where convenient)
# ---------------------------------------------------------------------------

def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(u, c):
    return tuple(a * c for a in u)


def vec_axpy(u, c, v):
    """u + c*v componentwise."""
    return tuple(a + c * b for a, b in zip(u, v))


def vec_dot(u, v):
    """Bilinear (not Hermitian) dot product."""
    return sum((a * b for a, b in zip(u, v)), mp.mpc(0))


def vec_hdot(u, v):
    """Hermitian inner product, conjugating the first argument."""
    return sum((mp.conj(a) * b for a, b in zip(u, v)), mp.mpc(0))


def vec_norm(u):
    return mp.sqrt(sum((abs(a) ** 2 for a in u), mp.mpf(0)))


def vec_inf_norm(u):
    return max((abs(a) for a in u), default=mp.mpf(0))


def mat_vec(M, v):
    """Apply an mp.matrix (rows x cols) to a tuple of length cols."""
    return tuple(
        sum((M[i, j] * v[j] for j in range(M.cols)), mp.mpc(0))
        for i in range(M.rows)
    )


def mat_cols(M):
    return [tuple(M[i, j] for i in range(M.rows)) for j in range(M.cols)]


def mat_from_cols(cols):
    rows = len(cols[0])
    M = mp.matrix(rows, len(cols))
    for j, c in enumerate(cols):
        for i in range(rows):
            M[i, j] = mpc_of(c[i])
    return M


def mat_inf_norm(M):
    best = mp.mpf(0)
    for i in range(M.rows):
        for j in range(M.cols):
            a = abs(M[i, j])
            if a > best:
                best = a
    return best


def mantissa_bits(values):
    """Largest mantissa bit-length among the given mpf/mpc values."""
    best = 53
    for z in values:
        z = mpc_of(z)
        for part in (z.real, z.imag):
            bc = part._mpf_[3]
            if isinstance(bc, int) and bc > best:
                best = bc
    return best


def normalize_point(v):
    """Scale a projective coordinate vector so its largest entry is 1.

    The pivot is the first index attaining the maximal modulus, which makes
    the representative (and its serialization) deterministic.  The division
    runs at a precision matching the operands, never below the ambient
    context, so normalizing never destroys accuracy.
    """
    with mp.workprec(max(mp.mp.prec, mantissa_bits(v) + 16)):
        mags = [abs(z) for z in v]
        m = max(mags)
        if m == 0:
            raise ValueError("zero vector has no projective normalization")
        piv = mags.index(m)
        inv = 1 / v[piv]
        return tuple(z * inv for z in v)


# ---------------------------------------------------------------------------
# dense univariate polynomials
# ---------------------------------------------------------------------------

class UniPoly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [mpc_of(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def from_roots(cls, roots):
        p = cls((1,))
        for r in roots:
            p = p * cls((-mpc_of(r), 1))
        return p

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __call__(self, x):
        acc = mp.mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return UniPoly.zero()
        out = [mp.mpc(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    def scale(self, c):
        c = mpc_of(c)
        return UniPoly(tuple(a * c for a in self.coeffs))

    def shift_up(self, k):
        """Multiply by x**k."""
        if self.is_zero():
            return self
        return UniPoly((mp.mpc(0),) * k + self.coeffs)

    def derivative(self):
        return UniPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i >= 1))

    def inf_norm(self):
        return vec_inf_norm(self.coeffs)

    def monic(self):
        if self.is_zero():
            raise ValueError("zero polynomial cannot be made monic")
        lc = self.coeffs[-1]
        return UniPoly(tuple(c / lc for c in self.coeffs))

    def divmod_by(self, d):
        """Quotient and remainder on division by ``d`` (exact long division)."""
        if d.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        r = list(self.coeffs)
        dd = d.degree
        lc = d.coeffs[-1]
        if len(r) - 1 < dd:
            return UniPoly.zero(), UniPoly(r)
        q = [mp.mpc(0)] * (len(r) - dd)
        for k in range(len(r) - 1, dd - 1, -1):
            factor = r[k] / lc
            q[k - dd] = factor
            if factor != 0:
                for j in range(dd + 1):
                    r[k - dd + j] -= factor * d.coeffs[j]
            r[k] = mp.mpc(0)
        return UniPoly(q), UniPoly(r[:dd])

    def trim(self, tol_abs):
        """Drop leading coefficients of modulus at most ``tol_abs``."""
        cs = list(self.coeffs)
        while cs and abs(cs[-1]) <= tol_abs:
            cs.pop()
        return UniPoly(cs)

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({[mp.nstr(c, 8) for c in self.coeffs]})"


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

def _initial_circle(monic, rng):
    d = monic.degree
    radius = 1 + max(abs(c) for c in monic.coeffs[:-1]) if d > 0 else mp.mpf(1)
    pts = []
    for j in range(d):
        theta = mp.mpf(2 * j + 1) / (2 * d)
        jitter = 1 + mp.mpf(rng.getrandbits(20) - (1 << 19)) / (1 << 27)
        pts.append(radius * mp.expjpi(2 * theta) * jitter)
    return pts


def _aberth_iterate(monic, z, stop_eps, maxsteps):
    d = len(z)
    deriv = monic.derivative()
    for _ in range(maxsteps):
        shift = mp.mpf(0)
        newz = list(z)
        for j in range(d):
            fj = monic(z[j])
            dj = deriv(z[j])
            if dj == 0:
                newz[j] = z[j] * (1 + mp.mpf(2) ** (-20))
                shift = mp.mpf(1)
                continue
            w = fj / dj
            s = mp.mpc(0)
            for k in range(d):
                if k == j:
                    continue
                diff = z[j] - z[k]
                if diff == 0:
                    diff = mp.mpf(2) ** (-20) * (1 + abs(z[j]))
                s += 1 / diff
            denom = 1 - w * s
            if denom == 0:
                step = w
            else:
                step = w / denom
            newz[j] = z[j] - step
            rel = abs(step) / max(mp.mpf(1), abs(newz[j]))
            if rel > shift:
                shift = rel
        z = newz
        if shift < stop_eps:
            break
    return z


def _cluster_roots(roots, d, tol_rel):
    """Group approximations into multiplicity clusters.

    A preliminary single-linkage pass uses the worst-case scatter radius of
    a d-fold root at the working precision; each candidate cluster of size m
    is then accepted only if its radius stays below tol_rel**(1/m), the
    documented multiplicity criterion.  Rejected clusters fall back to
    singletons (genuinely distinct roots that merely sit close).
    """
    prelim = (mp.mpf(2) ** (-(mp.mp.prec - 48))) ** (mp.mpf(1) / d)
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = max(mp.mpf(1), abs(roots[i]), abs(roots[j]))
            if abs(roots[i] - roots[j]) <= prelim * scale:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(roots[i])
    out = []
    for members in groups.values():
        m = len(members)
        centroid = sum(members, mp.mpc(0)) / m
        if m > 1:
            radius = max(abs(z - centroid) for z in members)
            allowed = mp.mpf(tol_rel) ** (mp.mpf(1) / m) * max(mp.mpf(1), abs(centroid))
            if radius > allowed:
                out.extend((z, 1) for z in members)
                continue
        out.append((centroid, m))
    return out


def _polish_multiple(monic, z, m, steps=32):
    """Newton-polish an m-fold root on the (m-1)-th derivative, where it is
    simple; keeps full working-precision accuracy for repeated roots."""
    h = monic
    for _ in range(m - 1):
        h = h.derivative()
    hp = h.derivative()
    eps = mp.mpf(2) ** (-(mp.mp.prec - 8))
    for _ in range(steps):
        dz = hp(z)
        if dz == 0:
            break
        step = h(z) / dz
        z = z - step
        if abs(step) <= eps * max(mp.mpf(1), abs(z)):
            break
    return z


def _root_sort_key(z):
    return (mp.re(z), mp.im(z))


def _companion_eigen_roots(monic):
    d = monic.degree
    C = mp.matrix(d, d)
    for i in range(1, d):
        C[i, i - 1] = mp.mpf(1)
    for i in range(d):
        C[i, d - 1] = -monic.coeffs[i]
    ev = mp.eig(C, left=False, right=False)
    deriv = monic.derivative()
    out = []
    for z in ev:
        z = mpc_of(z)
        for _ in range(12):
            dz = deriv(z)
            if dz == 0:
                break
            z = z - monic(z) / dz
        out.append(z)
    return out


def roots_univariate(f, cfg, log=None, label="univariate solve"):
    """All complex roots of ``f`` counted with multiplicity.

    Simultaneous Aberth-Ehrlich iteration, with a companion-matrix
    eigenvalue fallback and precision doubling on non-convergence.  Each
    returned root ``r`` satisfies ``|f(r)| <= tol_rel*||f||*max(1,|r|)^deg``.
    The solve is reported to ``log`` (when given) with the degree of ``f``:
    this is the raw material of every solve-degree certificate.

    Returns a list of length ``deg(f)`` with repeated entries for repeated
    roots, sorted by (real, imaginary) part.
    """
    if f.is_zero() or f.degree < 1:
        raise ValueError("roots_univariate requires a nonzero polynomial of degree >= 1")
    d = f.degree
    fnorm = f.inf_norm()
    if log is not None:
        log.record(label, d)

    def residual_ok(z):
        bound = mp.mpf(cfg.tol_rel) * fnorm * max(mp.mpf(1), abs(z)) ** d
        return abs(f(z)) <= bound

    def acceptable(monic, cands):
        flat = []
        for z, m in cands:
            if m > 1:
                polished = _polish_multiple(monic, z, m)
                if abs(f(polished)) < abs(f(z)):
                    z = polished
            if not residual_ok(z):
                return None
            flat.extend([z] * m)
        flat.sort(key=_root_sort_key)
        return flat

    last_exc = None
    attempt_cfg = cfg
    for attempt in range(cfg.max_retries):
        rng = rng_for(cfg, "roots", label, d, attempt)
        with workprec(attempt_cfg):
            monic = f.monic()
            stop_eps = mp.mpf(2) ** (-(attempt_cfg.workbits() - 10))
            maxsteps = 64 + 8 * d + attempt_cfg.workbits() // 2
            z = _initial_circle(monic, rng)
            z = _aberth_iterate(monic, z, stop_eps, maxsteps)
            got = acceptable(monic, _cluster_roots(z, d, cfg.tol_rel))
            if got is not None:
                return got
            try:
                z = _companion_eigen_roots(monic)
                got = acceptable(monic, _cluster_roots(z, d, cfg.tol_rel))
                if got is not None:
                    return got
            except Exception as exc:  # eig occasionally fails on hard inputs
                last_exc = exc
        attempt_cfg = attempt_cfg.escalated()
    raise NonConvergence(
        f"root finding did not converge for degree {d} after "
        f"{cfg.max_retries} precision escalations"
    ) from last_exc


# ---------------------------------------------------------------------------
# approximate GCD
# ---------------------------------------------------------------------------

def gcd_univariate(f, g, cfg):
    """Monic approximate GCD via the Euclidean remainder sequence.

    Remainders are declared zero when their sup-norm drops below
    ``tol_rel * (||f|| + ||g||)`` after normalizing both inputs to unit
    norm.  A remainder landing in the gray zone just above the threshold
    raises :class:`IllConditioned`; the precision is then doubled and the
    sequence rerun, up to ``cfg.max_retries`` times.
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("gcd_univariate requires nonzero polynomials")

    attempt_cfg = cfg
    last_exc = None
    for _ in range(cfg.max_retries):
        try:
            with workprec(attempt_cfg):
                return _gcd_once(f, g, cfg)
        except IllConditioned as exc:
            last_exc = exc
            attempt_cfg = attempt_cfg.escalated()
    raise last_exc


def _gcd_once(f, g, cfg):
    tiny = mp.mpf(2) ** (-(mp.mp.prec - 16))
    a = f.scale(1 / f.inf_norm())
    b = g.scale(1 / g.inf_norm())
    if a.degree < b.degree:
        a, b = b, a
    stop = mp.mpf(cfg.tol_rel) * 2
    gray = stop * mp.mpf(1e6)
    while True:
        b = b.trim(tiny * b.inf_norm())
        if b.is_zero():
            d = a
            break
        _, r = a.divmod_by(b)
        rn = r.inf_norm()
        if rn <= stop:
            d = b
            break
        if rn <= gray:
            raise IllConditioned(
                "remainder norm in the ambiguous band; degree decision unsafe"
            )
        a, b = b, r.scale(1 / rn)
    d = d.monic()
    # divisibility sanity check at the promised tolerance
    for h in (f, g):
        _, rem = h.divmod_by(d)
        if rem.inf_norm() > mp.mpf(cfg.tol_rel) * (f.inf_norm() + g.inf_norm()) * 100:
            raise IllConditioned("computed gcd fails the divisibility residual")
    return d


# ---------------------------------------------------------------------------
# Newton's identities
# ---------------------------------------------------------------------------

def newton_e_from_p(powersums):
    """Elementary symmetric functions from power sums.

    Uses i*e_i = sum_{j=1..i} (-1)**(j-1) * e_{i-j} * p_j, so the only
    divisions are by the integers 1..k.
    """
    p = [mpc_of(x) for x in powersums]
    e = [mp.mpc(1)]
    for i in range(1, len(p) + 1):
        acc = mp.mpc(0)
        sign = 1
        for j in range(1, i + 1):
            acc += sign * e[i - j] * p[j - 1]
            sign = -sign
        e.append(acc / i)
    return e[1:]


def newton_p_from_e(elems):
    """Power sums from elementary symmetric functions (inverse direction)."""
    e = [mpc_of(x) for x in elems]
    p = []
    for i in range(1, len(e) + 1):
        sign = 1
        acc = mp.mpc(0)
        for j in range(1, i):
            acc += sign * e[j - 1] * p[i - j - 1]
            sign = -sign
        acc += sign * i * e[i - 1]
        p.append(acc)
    return p


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

def _to_complex_matrix(M):
    A = mp.matrix(M.rows, M.cols)
    for i in range(M.rows):
        for j in range(M.cols):
            A[i, j] = mpc_of(M[i, j])
    return A


def kernel_basis(M, cfg):
    """Orthonormal basis of the numerical kernel of ``M``.

    Singular vectors whose singular value is at most ``tol_rel * sigma_max``
    count as kernel; for the zero matrix that is the full space.  Every
    returned ``v`` satisfies ``||M v|| <= tol_rel * ||M||``.
    """
    with workprec(cfg):
        A = _to_complex_matrix(M)
        n = A.cols
        norm = mat_inf_norm(A)
        if norm == 0:
            basis = []
            for j in range(n):
                e = [mp.mpc(0)] * n
                e[j] = mp.mpc(1)
                basis.append(tuple(e))
            return basis
        U, S, V = mp.svd(A, full_matrices=True)
        smax = S[0] if S.rows else mp.mpf(0)
        thr = mp.mpf(cfg.tol_rel) * smax
        basis = []
        for i in range(n):
            sigma = S[i] if i < S.rows else mp.mpf(0)
            if sigma <= thr:
                basis.append(tuple(mp.conj(V[i, j]) for j in range(n)))
        return basis


def orthonormal_columns(vectors):
    """Gram-Schmidt (Hermitian) orthonormalization; drops dependent vectors."""
    out = []
    for v in vectors:
        w = tuple(mpc_of(x) for x in v)
        for u in out:
            w = vec_axpy(w, -vec_hdot(u, w), u)
        nrm = vec_norm(w)
        if nrm > 0:
            out.append(vec_scale(w, 1 / nrm))
    return out


def project_off(v, basis):
    """Remove the (Hermitian) span of ``basis`` from ``v``."""
    w = v
    for u in basis:
        w = vec_axpy(w, -vec_hdot(u, w), u)
    return w


def solve_square(M, rhss, cfg):
    """Solve M x = v for several right-hand sides at working precision.

    Mixed-precision iterative refinement: one float64 LAPACK factorization
    supplies correction directions, full-precision residuals drive the
    refinement, so the cost is O(n^2) mpmath work per iteration instead of
    an O(n^3) arbitrary-precision elimination.  Falls back to mpmath's LU
    when the matrix is too ill-conditioned for float64 to make progress.
    """
    import numpy as np

    n = M.rows
    with workprec(cfg):
        A64 = np.empty((n, n), dtype=np.complex128)
        for i in range(n):
            for j in range(n):
                A64[i, j] = complex(M[i, j])
        eps = mp.mpf(2) ** (-(mp.mp.prec - 20))
        mnorm = mat_inf_norm(M)
        out = []
        for v in rhss:
            v = [mpc_of(c) for c in v]
            vnorm = max(vec_inf_norm(v), mp.mpf(1))
            x = None
            try:
                x64 = np.linalg.solve(A64, np.array([complex(c) for c in v]))
                x = [mpc_of(complex(c)) for c in x64]
                target = None
                prev = None
                for _ in range(4 + mp.mp.prec // 24):
                    r = list(v)
                    for i in range(n):
                        acc = r[i]
                        for j in range(n):
                            acc -= M[i, j] * x[j]
                        r[i] = acc
                    rnorm = vec_inf_norm(r)
                    xnorm = max(vec_inf_norm(x), mp.mpf(1))
                    target = eps * (mnorm * xnorm + vnorm)
                    if rnorm <= target:
                        break
                    if prev is not None and rnorm > prev / 2:
                        x = None  # stagnating: matrix too ill-conditioned
                        break
                    prev = rnorm
                    scale = rnorm
                    r64 = np.array([complex(c / scale) for c in r])
                    d64 = np.linalg.solve(A64, r64)
                    for i in range(n):
                        x[i] = x[i] + scale * mpc_of(complex(d64[i]))
                else:
                    x = None
            except (np.linalg.LinAlgError, OverflowError, ValueError):
                x = None
            if x is None:
                sol = mp.lu_solve(M, mp.matrix(v))
                x = [sol[i] for i in range(n)]
            out.append(x)
        return out


def random_embedding(rng, nbig, nsmall, cfg):
    """A generic full-rank (nbig x nsmall) matrix with unit-modulus entries.

    Used to cut a projective problem down to a smaller generic subspace.
    """
    with workprec(cfg):
        for _ in range(cfg.max_retries):
            cols = [random_vector(rng, nbig) for _ in range(nsmall)]
            ortho = orthonormal_columns(cols)
            if len(ortho) == nsmall:
                return mat_from_cols(cols)
    raise NonConvergence("could not draw a full-rank random embedding")
