"""Constructive linear subspaces of specific hypersurfaces.

Isotropic subspaces of quadrics by hyperbolic-pair extraction, lines on
cubic hypersurfaces, 2-planes on cubics (the degree-3 route needing eleven
ambient dimensions and the degree-5 route needing nine), lines on an
intersection of two quadrics via the pencil's singular members, and the
intersection of two plane curves through a resultant.

Every construction takes a SolveLog and leaves behind the degree of each
univariate equation it solved; the advertised caps (2 for quadrics, 3 or 5
for the plane constructions, 20 for curve intersection) are asserted by the
test suite on the logs, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .errors import (
    AmbientTooSmall,
    CommonComponent,
    GenericityFailure,
    IdenticallyZero,
    IllConditioned,
    NonConvergence,
    RankCollapse,
)
from .numeric import (
    UniPoly,
    gcd_univariate,
    kernel_basis,
    mat_from_cols,
    mat_vec,
    mpc_of,
    normalize_point,
    orthonormal_columns,
    project_off,
    random_embedding,
    random_vector,
    rng_for,
    roots_univariate,
    unit_scalar,
    vec_axpy,
    vec_dot,
    vec_hdot,
    vec_norm,
    workprec,
)
from .multipoly import (
    BiPoly,
    LinearMap,
    MultiPoly,
    polarize_quadratic,
    resultant_bivariate,
    substitute_linear,
)
from .obliteration import (
    PolyEq,
    ProjLine,
    ProjPoint,
    SolveLog,
    _Degenerate,
    _intersect_line,
    solve_point,
)


@dataclass(frozen=True)
class LinearSubspace:
    """A projective r-plane in P^N given by r+1 spanning coordinate vectors."""

    ambient: int
    dim: int
    basis: tuple

    def __post_init__(self):
        if len(self.basis) != self.dim + 1:
            raise ValueError("need dim+1 spanning vectors")
        basis = tuple(tuple(mpc_of(c) for c in v) for v in self.basis)
        for v in basis:
            if len(v) != self.ambient + 1:
                raise ValueError("vector length differs from ambient+1")
        object.__setattr__(self, "basis", basis)

    def as_map(self):
        return LinearMap(mat_from_cols(list(self.basis)))

    def spans_point(self, point, tol):
        """Whether the point lies in the span, by Hermitian projection."""
        ortho = orthonormal_columns(list(self.basis))
        res = project_off(tuple(mpc_of(c) for c in point), ortho)
        return vec_norm(res) <= mp.mpf(tol) * vec_norm(point)


@dataclass(frozen=True)
class QuadricPencil:
    """Two quadrics in the same ambient space, as symmetric Gram matrices."""

    G1: mp.matrix
    G2: mp.matrix

    def __post_init__(self):
        if self.G1.rows != self.G1.cols or self.G2.rows != self.G2.cols:
            raise ValueError("Gram matrices must be square")
        if self.G1.rows != self.G2.rows:
            raise ValueError("Gram matrices must share the ambient space")
        object.__setattr__(self, "G1", _symmetrized(self.G1))
        object.__setattr__(self, "G2", _symmetrized(self.G2))

    @property
    def size(self):
        return self.G1.rows

    def member(self, t):
        t = mpc_of(t)
        K = mp.matrix(self.size, self.size)
        for i in range(self.size):
            for j in range(self.size):
                K[i, j] = self.G1[i, j] + t * self.G2[i, j]
        return K


def _symmetrized(G):
    out = mp.matrix(G.rows, G.cols)
    for i in range(G.rows):
        for j in range(G.cols):
            out[i, j] = (mpc_of(G[i, j]) + mpc_of(G[j, i])) / 2
    return out


def _bilinear(G, u, v):
    return vec_dot(u, mat_vec(G, v))


def restrict_gram(G, cols):
    """Gram matrix of the bilinear form restricted to span(cols)."""
    k = len(cols)
    images = [mat_vec(G, c) for c in cols]
    out = mp.matrix(k, k)
    for i in range(k):
        for j in range(k):
            out[i, j] = vec_dot(cols[i], images[j])
    return out


def _gram_norm(G):
    best = mp.mpf(0)
    for i in range(G.rows):
        for j in range(G.cols):
            a = abs(G[i, j])
            if a > best:
                best = a
    return best


def _matrix_columns(M):
    return [tuple(M[i, j] for i in range(M.rows)) for j in range(M.cols)]


def _combo(basis, rng):
    v = tuple(mp.mpc(0) for _ in basis[0])
    for b in basis:
        v = vec_axpy(v, unit_scalar(rng), b)
    n = vec_norm(v)
    if n == 0:
        raise _Degenerate("zero combination drawn")
    return tuple(c / n for c in v)


def _isotropic_vector(G, basis, cfg, rng, log, label):
    """One isotropic vector in span(basis); a single quadratic solve."""
    gnorm = max(_gram_norm(G), mp.mpf(1))
    for _ in range(cfg.max_retries):
        a = _combo(basis, rng)
        b = _combo(basis, rng)
        qa = _bilinear(G, a, a)
        qb = _bilinear(G, b, b)
        qab = _bilinear(G, a, b)
        u = UniPoly([qa, 2 * qab, qb])
        if u.degree < 1:
            if abs(qa) <= mp.mpf(cfg.tol_rel) * gnorm * 100:
                return a
            continue
        roots = roots_univariate(u, cfg, log=log, label=label)
        for mu in roots:
            w = vec_axpy(a, mu, b)
            n = vec_norm(w)
            if n == 0:
                continue
            w = tuple(c / n for c in w)
            if abs(_bilinear(G, w, w)) <= mp.mpf(cfg.tol_rel) * gnorm * 1000:
                return w
    raise _Degenerate("no isotropic vector found in the working space")


def _hyperbolic_pair(G, basis, cfg, rng, log, label):
    """Isotropic w plus partner z with B(w,z)=1, q(z)=0; one quadratic solve.

    Returns (w, None) when w pairs to zero with the whole space (w lies in
    the radical of the restricted form).
    """
    gnorm = max(_gram_norm(G), mp.mpf(1))
    w = _isotropic_vector(G, basis, cfg, rng, log, label)
    thr = mp.mpf(cfg.tol_rel) * gnorm * 1000
    partner = None
    for b in basis:
        if abs(_bilinear(G, w, b)) > thr:
            partner = b
            break
    if partner is None:
        for _ in range(3):
            z = _combo(basis, rng)
            if abs(_bilinear(G, w, z)) > thr:
                partner = z
                break
    if partner is None:
        return w, None
    z = tuple(c / _bilinear(G, w, partner) for c in partner)
    z = vec_axpy(z, -_bilinear(G, z, z) / 2, w)
    return w, z


def isotropic_subspace(G, r, cfg, log=None, label="isotropic"):
    """Projective r-dimensional subspace on which the quadric vanishes.

    Kernel vectors of G come first (they are isotropic and pair to zero with
    everything); the rest are extracted as hyperbolic pairs, one quadratic
    solve each.  Requires at least 2(r+1) variables, the complex Witt bound.
    """
    log = log if log is not None else SolveLog()
    m = G.rows
    if m < 2 * (r + 1):
        raise AmbientTooSmall(
            f"isotropic P^{r} needs at least {2 * (r + 1)} variables",
            required=2 * (r + 1))
    last = None
    for attempt in range(cfg.max_retries):
        rng = rng_for(cfg, label, attempt)
        try:
            with workprec(cfg):
                return _isotropic_once(G, r, cfg, rng, log, label)
        except (_Degenerate, NonConvergence) as exc:
            last = exc
    raise RankCollapse(f"quadric too degenerate for isotropic extraction: {last}")


def _isotropic_once(G, r, cfg, rng, log, label):
    m = G.rows
    G = _symmetrized(G)
    gnorm = max(_gram_norm(G), mp.mpf(1))
    vectors = []
    kern = kernel_basis(G, cfg)
    vectors.extend(kern[: r + 1])
    # working space: Hermitian complement of the kernel
    if kern:
        full = [tuple(mp.mpc(1) if i == j else 0 for i in range(m)) for j in range(m)]
        basis = []
        for v in full:
            w = project_off(v, kern + basis)
            n = vec_norm(w)
            if n > mp.mpf(0.5) ** (cfg.bits // 4):
                basis.append(tuple(c / n for c in w))
    else:
        basis = [tuple(mp.mpc(1) if i == j else 0 for i in range(m)) for j in range(m)]
    while len(vectors) < r + 1:
        if len(basis) < 2:
            raise _Degenerate("working space exhausted before reaching the target")
        w, z = _hyperbolic_pair(G, basis, cfg, rng, log, label)
        if z is None:
            raise _Degenerate("radical vector encountered outside the kernel")
        vectors.append(w)
        rows = [[_bilinear(G, w, b) for b in basis],
                [_bilinear(G, z, b) for b in basis]]
        K = kernel_basis(mp.matrix(rows), cfg)
        newbasis = []
        for coef in K:
            v = tuple(mp.mpc(0) for _ in range(m))
            for c, b in zip(coef, basis):
                v = vec_axpy(v, c, b)
            newbasis.append(v)
        basis = orthonormal_columns(newbasis)
    vectors = orthonormal_columns(vectors)
    if len(vectors) < r + 1:
        raise _Degenerate("extracted vectors were dependent")
    B = restrict_gram(G, vectors)
    if _gram_norm(B) > mp.mpf(cfg.tol_rel) * gnorm * 10 ** 4:
        raise _Degenerate("restricted Gram matrix is not numerically zero")
    return LinearSubspace(m - 1, r, tuple(vectors))


def line_on_quadric_surface(Q, cfg, log=None, label="quadric surface line"):
    """A line on a quadric surface in P^3; only degree-2 solves are logged."""
    log = log if log is not None else SolveLog()
    G = Q if isinstance(Q, mp.matrix) else polarize_quadratic(Q, cfg)
    if G.rows != 4:
        raise ValueError("expected a quadric in P^3")
    sub = isotropic_subspace(G, 1, cfg, log, label=label)
    return ProjLine(ProjPoint(sub.basis[0]), ProjPoint(sub.basis[1]))


# ---------------------------------------------------------------------------
# lines and planes on cubic hypersurfaces
# ---------------------------------------------------------------------------

def restriction_is_zero(f, subspace, cfg, slack=10 ** 4):
    """The universal acceptance check: f restricted to the subspace vanishes."""
    with workprec(cfg):
        g = substitute_linear(f, subspace.as_map(), cfg=cfg, method="direct")
        bound = mp.mpf(cfg.tol_rel) * max(mp.mpf(1), f.inf_norm()) * slack
        return g.inf_norm() <= bound


def line_on_cubic(f, cfg, log=None, label="line on cubic"):
    """A projective line inside a cubic hypersurface in P^m, m >= 5.

    Point on the cubic (one cubic solve), derived system at that point,
    line on its quadric-and-linear part by cutting with the linear equation
    and extracting an isotropic pair, then one more cubic solve to intersect.
    No solve of degree above 3 is performed.
    """
    log = log if log is not None else SolveLog()
    m = f.nvars - 1
    if f.degree != 3:
        raise ValueError("line_on_cubic expects a cubic")
    if m < 5:
        raise AmbientTooSmall("a cubic needs ambient >= 5 for a degree-3 line",
                              required=5)
    last = None
    for attempt in range(cfg.max_retries):
        rng = rng_for(cfg, label, attempt)
        try:
            with workprec(cfg):
                return _line_on_cubic_once(f, m, cfg, rng, log, label)
        except (_Degenerate, NonConvergence, RankCollapse) as exc:
            last = exc
    raise GenericityFailure(f"line on cubic stayed degenerate: {last}")


def _line_on_cubic_once(f, m, cfg, rng, log, label):
    if m > 5:
        E = random_embedding(rng, m + 1, 6, cfg)
        g = substitute_linear(f, LinearMap(E), cfg=cfg, method="direct")
    else:
        E = None
        g = f
    scale = max(mp.mpf(1), g.inf_norm())
    # a point on the cubic: random line cut with g, one cubic solve
    p1, p2 = orthonormal_columns([random_vector(rng, 6), random_vector(rng, 6)])
    Q = _intersect_line(PolyEq(g), (p1, p2), cfg, log, f"{label}: point section")
    # derived system at Q: quadric and linear parts
    quad = g.directional_derivative(Q)
    lin = quad.directional_derivative(Q).scale(mp.mpf(1) / 2)
    if lin.inf_norm() <= mp.mpf(cfg.tol_rel) * scale:
        raise _Degenerate("degenerate derived linear form")
    row = [mp.mpc(0)] * 6
    for exps, c in lin.terms.items():
        row[exps.index(1)] = c
    K = kernel_basis(mp.matrix([row]), cfg)
    if len(K) < 5:
        raise _Degenerate("linear cut has deficient kernel")
    KL = LinearMap(mat_from_cols(K))
    h = substitute_linear(quad, KL, cfg=cfg, method="direct")
    Gh = polarize_quadratic(h, cfg)
    # Q is the vertex of this quadric cone; take the isotropic pair in a
    # complement of the vertex direction so the ruling line avoids Q
    qk = tuple(vec_hdot(col, Q) for col in _matrix_columns(KL.matrix))
    comp = kernel_basis(mp.matrix([[mp.conj(c) for c in qk]]), cfg)
    if len(comp) < 4:
        raise _Degenerate("vertex complement is deficient")
    CompL = mat_from_cols(comp)
    S3 = restrict_gram(Gh, comp)
    iso = isotropic_subspace(S3, 1, cfg, log, label=f"{label}: isotropic pair")
    w1 = mat_vec(CompL, iso.basis[0])
    w2 = mat_vec(CompL, iso.basis[1])
    u1 = normalize_point(mat_vec(KL.matrix, w1))
    u2 = normalize_point(mat_vec(KL.matrix, w2))
    # intersect the line in V(quad, lin) with the cubic itself; when the
    # cubic already vanishes on the whole line (a component of the cubic
    # swallowed it), any point of the line completes the construction
    section = substitute_linear(g, LinearMap(mat_from_cols([u1, u2])),
                                cfg=cfg, method="direct")
    if section.inf_norm() <= mp.mpf(cfg.tol_rel) * scale * 10:
        P = normalize_point(vec_axpy(u2, unit_scalar(rng), u1))
    else:
        P = _intersect_line(PolyEq(g), (u1, u2), cfg, log,
                            f"{label}: cubic section")
    line = ProjLine(ProjPoint(Q), ProjPoint(P))
    if line.is_degenerate(mp.mpf(cfg.tol_rel) ** mp.mpf(0.25)):
        raise _Degenerate("intersection point collapsed onto the base point")
    for lam in range(4):
        pt = line.point_at(lam)
        if abs(g.evaluate(pt)) > mp.mpf(cfg.tol_rel) * scale * 10 ** 4:
            raise _Degenerate("line failed the 4-point vanishing certificate")
    if E is not None:
        q1 = normalize_point(mat_vec(E, line.p1.coords))
        q2 = normalize_point(mat_vec(E, line.p2.coords))
        line = ProjLine(ProjPoint(q1), ProjPoint(q2))
    return line


def _plane_extension_equations(f, q, r, E, cfg):
    """Conditions on a complement point p making span{p, q, r} sit inside V(f).

    Taylor coefficients of f(p + mu*q + lam*r): the cubic itself, two
    quadrics (directional derivatives along q and r), and three linears
    (second-order mixed derivatives).
    """
    dq = f.directional_derivative(q)
    dr = f.directional_derivative(r)
    dqq = dq.directional_derivative(q).scale(mp.mpf(1) / 2)
    dqr = dq.directional_derivative(r)
    drr = dr.directional_derivative(r).scale(mp.mpf(1) / 2)
    L = LinearMap(E)
    return [substitute_linear(x, L, cfg=cfg, method="direct")
            for x in (f, dq, dr, dqq, dqr, drr)]


def _complement_embedding(vectors, total, rng):
    """Orthonormal columns spanning a complement of span(vectors)."""
    cols = []
    anchor = list(vectors)
    want = total - len(vectors)
    while len(cols) < want:
        v = project_off(random_vector(rng, total), anchor + cols)
        n = vec_norm(v)
        if n > mp.mpf(1e-3):
            cols.append(tuple(c / n for c in v))
    return mat_from_cols(cols)


def _assemble_plane(f, q, r, p, cfg):
    basis = orthonormal_columns([q, r, p])
    if len(basis) < 3:
        raise _Degenerate("plane spanning vectors were dependent")
    plane = LinearSubspace(f.nvars - 1, 2, tuple(basis))
    if not restriction_is_zero(f, plane, cfg):
        raise _Degenerate("plane failed the restriction-vanishing certificate")
    return plane


def plane_on_cubic_strict(f, cfg, log=None, label="plane on cubic (strict)"):
    """A 2-plane in a cubic hypersurface in P^m, m >= 11, max solve degree 3.

    Extends a line span{q, r} on the cubic by a point p of a complementary
    subspace subject to one cubic, two quadric, and three linear conditions;
    that system is handed to the obliteration solver, which needs nine
    projective dimensions, hence the ambient bound of eleven.
    """
    log = log if log is not None else SolveLog()
    m = f.nvars - 1
    if f.degree != 3:
        raise ValueError("expected a cubic")
    if m < 11:
        raise AmbientTooSmall("the degree-3 plane construction needs P^11",
                              required=11)
    last = None
    for attempt in range(cfg.max_retries):
        rng = rng_for(cfg, label, attempt)
        try:
            with workprec(cfg):
                line = line_on_cubic(f, cfg, log, label=f"{label}: base line")
                q, r = line.p1.coords, line.p2.coords
                E = _complement_embedding([q, r], m + 1, rng)
                eqs = _plane_extension_equations(f, q, r, E, cfg)
                pt = solve_point([PolyEq(e) for e in eqs], m - 1, cfg, log,
                                 (label, attempt))
                p = normalize_point(mat_vec(E, pt))
                return _assemble_plane(f, q, r, p, cfg)
        except (_Degenerate, GenericityFailure, NonConvergence) as exc:
            last = exc
    raise GenericityFailure(f"no 2-plane found: {last}")


def line_on_two_quadrics_P4(pencil, cfg, log=None, label="quadric pencil line"):
    """A line on the intersection of two quadrics in P^4, max solve degree 5.

    Singular pencil member from the degree-5 discriminant, ruled normal form
    of its rank-4 residual quadric by hyperbolic pairs, then the one-parameter
    family of 2-planes through the vertex: restricting the second quadric to
    the family gives a 3x3 conic whose determinant has degree at most 4; a
    root makes the conic split into lines (a final quadratic).
    """
    log = log if log is not None else SolveLog()
    if pencil.size != 5:
        raise ValueError("expected quadrics in P^4 (5x5 Gram matrices)")
    last = None
    for attempt in range(cfg.max_retries):
        rng = rng_for(cfg, label, attempt)
        try:
            with workprec(cfg):
                return _pencil_line_once(pencil, cfg, rng, log, label, attempt)
        except (_Degenerate, NonConvergence, RankCollapse) as exc:
            last = exc
    raise GenericityFailure(f"degenerate pencil after retries: {last}")


def _det_interpolated(values_fn, npts, degbound, rng, cfg):
    ts = []
    while len(ts) < npts:
        t = unit_scalar(rng)
        ts.append(t)
    vals = [values_fn(t) for t in ts]
    V = mp.matrix(npts, npts)
    for i, t in enumerate(ts):
        acc = mp.mpc(1)
        for j in range(npts):
            V[i, j] = acc
            acc *= t
    sol = mp.lu_solve(V, mp.matrix(vals))
    out = UniPoly([sol[i] for i in range(npts)])
    return out.trim(mp.mpf(cfg.tol_rel) * out.inf_norm())


def _pencil_line_once(pencil, cfg, rng, log, label, attempt):
    G1, G2 = pencil.G1, pencil.G2
    if attempt > 0:
        # remix the pencil generators; the intersection is unchanged
        alpha = unit_scalar(rng)
        G1 = _symmetrized(G1 + alpha * G2)
    scale = max(_gram_norm(G1), _gram_norm(G2), mp.mpf(1))
    disc = _det_interpolated(lambda t: mp.det(pencil_member(G1, G2, t)),
                             6, 5, rng, cfg)
    if disc.is_zero():
        candidates = [unit_scalar(rng)]
    elif disc.degree < 1:
        raise _Degenerate("pencil discriminant is a nonzero constant")
    else:
        candidates = roots_univariate(disc, cfg, log=log,
                                      label=f"{label}: pencil discriminant")
    for t_star in candidates:
        K = pencil_member(G1, G2, t_star)
        if _gram_norm(K) <= mp.mpf(cfg.tol_rel) * scale * 1000:
            # the member vanished: the quadrics are proportional, so the
            # intersection is one quadric in P^4 and any isotropic pair works
            big = G2 if _gram_norm(G2) >= _gram_norm(G1) else G1
            sub = isotropic_subspace(big, 1, cfg, log,
                                     label=f"{label}: proportional pencil")
            return ProjLine(ProjPoint(sub.basis[0]), ProjPoint(sub.basis[1]))
        kern = kernel_basis(K, cfg)
        if len(kern) != 1:
            continue
        v = kern[0]
        Ev = kernel_basis(mp.matrix([[mp.conj(c) for c in v]]), cfg)
        if len(Ev) < 4:
            continue
        S4 = restrict_gram(K, Ev)
        basis4 = [tuple(mp.mpc(1) if i == j else 0 for i in range(4)) for j in range(4)]
        w1, z1 = _hyperbolic_pair(S4, basis4, cfg, rng, log,
                                  f"{label}: ruled normal form")
        if z1 is None:
            continue
        rows = [[_bilinear(S4, w1, b) for b in basis4],
                [_bilinear(S4, z1, b) for b in basis4]]
        K2 = kernel_basis(mp.matrix(rows), cfg)
        if len(K2) < 2:
            continue
        w2, z2 = _hyperbolic_pair(S4, K2, cfg, rng, log,
                                  f"{label}: ruled normal form")
        if z2 is None:
            continue
        # ruled coordinates x0 x3 = x1 x2: u0=w1, u3=z1, u1=w2, u2=-z2
        u0, u3, u1, u2 = w1, z1, w2, tuple(-c for c in z2)
        U = [mat_vec(mat_from_cols(Ev), u) for u in (u0, u1, u2, u3)]
        vfull = v
        line = _ruling_family_line(G2, vfull, U, cfg, rng, log, label)
        if line is None:
            continue
        # certificate: both quadrics vanish on three line points
        ok = True
        for lam in range(3):
            pt = line.point_at(lam)
            for G in (pencil.G1, pencil.G2):
                if abs(_bilinear(G, pt, pt)) > mp.mpf(cfg.tol_rel) * scale * 10 ** 4:
                    ok = False
        if ok:
            return line
    raise _Degenerate("no pencil root produced a usable ruling")


def pencil_member(G1, G2, t):
    t = mpc_of(t)
    K = mp.matrix(G1.rows, G1.cols)
    for i in range(G1.rows):
        for j in range(G1.cols):
            K[i, j] = G1[i, j] + t * G2[i, j]
    return K


def _ruling_family_line(G2, v, U, cfg, rng, log, label):
    """Line inside V(K) cap V(G2) from the plane family span{v, l1(t), l2(t)}.

    l1(t) = t*U0 + U2 and l2(t) = t*U1 + U3 sweep one ruling family; the
    second quadric restricted to the plane is a 3x3 conic whose determinant
    has degree at most 4 in t.
    """
    def conic(t):
        l1 = vec_axpy(U[2], t, U[0])
        l2 = vec_axpy(U[3], t, U[1])
        return restrict_gram(G2, [v, l1, l2]), l1, l2

    det4 = _det_interpolated(lambda t: mp.det(conic(t)[0]), 5, 4, rng, cfg)
    if det4.is_zero():
        t_candidates = [unit_scalar(rng)]
    elif det4.degree < 1:
        t_candidates = []
    else:
        t_candidates = roots_univariate(det4, cfg, log=log,
                                        label=f"{label}: ruling parameter")
    if det4.degree < 4 and not det4.is_zero():
        # dropped leading coefficient: the parameter at infinity is a root,
        # i.e. the plane span{v, U0, U1}
        t_candidates = list(t_candidates) + [None]
    for t in t_candidates:
        if t is None:
            M = restrict_gram(G2, [v, U[0], U[1]])
            cols = [v, U[0], U[1]]
        else:
            M, l1, l2 = conic(t)
            cols = [v, l1, l2]
        plane = mat_from_cols(cols)
        kern = kernel_basis(M, cfg)
        if not kern:
            continue
        if len(kern) >= 2:
            a = normalize_point(mat_vec(plane, kern[0]))
            b = normalize_point(mat_vec(plane, kern[1]))
            return ProjLine(ProjPoint(a), ProjPoint(b))
        z = kern[0]
        comp = orthonormal_columns(
            [project_off((mp.mpc(1), mp.mpc(0), mp.mpc(0)), [z]),
             project_off((mp.mpc(0), mp.mpc(1), mp.mpc(0)), [z]),
             project_off((mp.mpc(0), mp.mpc(0), mp.mpc(1)), [z])])[:2]
        if len(comp) < 2:
            continue
        c1, c2 = comp
        qa = _bilinear(M, c1, c1)
        qb = _bilinear(M, c2, c2)
        qab = _bilinear(M, c1, c2)
        u = UniPoly([qa, 2 * qab, qb])
        if u.is_zero():
            w = c1
        else:
            if u.degree < 1:
                continue
            mus = roots_univariate(u, cfg, log=log, label=f"{label}: conic split")
            w = vec_axpy(c1, mus[0], c2)
        a = normalize_point(mat_vec(plane, z))
        b = normalize_point(mat_vec(plane, w))
        line = ProjLine(ProjPoint(a), ProjPoint(b))
        if not line.is_degenerate(mp.mpf(cfg.tol_rel) ** mp.mpf(0.25)):
            return line
    return None


def plane_on_cubic_segre(f, cfg, log=None, label="plane on cubic (pencil)"):
    """A 2-plane in a cubic hypersurface in P^m, m >= 9, max solve degree 5.

    Same extension step as the strict construction, but the quadric-linear
    subsystem is solved in P^7 by cutting with its three linear equations
    down to P^4 and finding a line on the two restricted quadrics through
    the pencil algorithm; the held-aside cubic is then one degree-3 solve.
    """
    log = log if log is not None else SolveLog()
    m = f.nvars - 1
    if f.degree != 3:
        raise ValueError("expected a cubic")
    if m < 9:
        raise AmbientTooSmall("the degree-5 plane construction needs P^9",
                              required=9)
    last = None
    for attempt in range(cfg.max_retries):
        rng = rng_for(cfg, label, attempt)
        try:
            with workprec(cfg):
                line = line_on_cubic(f, cfg, log, label=f"{label}: base line")
                q, r = line.p1.coords, line.p2.coords
                E = _complement_embedding([q, r], m + 1, rng)
                cubic, q1, q2, l1, l2, l3 = _plane_extension_equations(f, q, r, E, cfg)
                # cut by the three linear forms down to P^{m-5}
                rows = []
                for lin in (l1, l2, l3):
                    row = [mp.mpc(0)] * (m - 1)
                    for exps, c in lin.terms.items():
                        row[exps.index(1)] = c
                    rows.append(row)
                K3 = kernel_basis(mp.matrix(rows), cfg)
                if len(K3) < m - 4:
                    raise _Degenerate("linear cut has deficient kernel")
                cut = mat_from_cols(K3)
                if m - 5 > 4:
                    shrink = random_embedding(rng, m - 4, 5, cfg)
                    cut = cut * shrink
                CL = LinearMap(cut)
                h1 = substitute_linear(q1, CL, cfg=cfg, method="direct")
                h2 = substitute_linear(q2, CL, cfg=cfg, method="direct")
                pencil = QuadricPencil(polarize_quadratic(h1, cfg),
                                       polarize_quadratic(h2, cfg))
                ln = line_on_two_quadrics_P4(pencil, cfg, log,
                                             label=f"{label}: pencil step")
                a = normalize_point(mat_vec(cut, ln.p1.coords))
                b = normalize_point(mat_vec(cut, ln.p2.coords))
                pt = _intersect_line(PolyEq(cubic), (a, b), cfg, log,
                                     f"{label}: cubic section")
                p = normalize_point(mat_vec(E, pt))
                return _assemble_plane(f, q, r, p, cfg)
        except (_Degenerate, GenericityFailure, NonConvergence, RankCollapse) as exc:
            last = exc
    raise GenericityFailure(f"no 2-plane found: {last}")


# ---------------------------------------------------------------------------
# plane curve intersection
# ---------------------------------------------------------------------------

def _dehomogenize(F):
    """BiPoly in (x=first var, y=second var) from a ternary form at z=1."""
    dx = max(e[0] for e in F.terms)
    cols = []
    for i in range(dx + 1):
        coeffs = {}
        for (a, b, c), v in F.terms.items():
            if a == i:
                coeffs[b] = coeffs.get(b, mp.mpc(0)) + v
        top = max(coeffs) if coeffs else -1
        cols.append(UniPoly([coeffs.get(j, 0) for j in range(top + 1)]))
    return BiPoly(tuple(cols))


def _random_pgl3(rng, cfg):
    for _ in range(cfg.max_retries):
        M = mat_from_cols([random_vector(rng, 3) for _ in range(3)])
        if abs(mp.det(M)) > mp.mpf(0.01):
            return M
    raise GenericityFailure("no invertible coordinate change drawn")


def intersect_plane_curves(C4, C5, cfg, log=None, label="curve intersection"):
    """Common points of two plane curves via a resultant.

    A random coordinate change makes the setup generic; the resultant in one
    variable is a single solve of degree at most deg(C4)*deg(C5) (20 for the
    quartic-quintic pair), and each surviving root is back-substituted
    through the GCD of the two univariate slices (degree <= 4).  Points are
    returned in the original coordinates, each certified by both residuals.
    """
    log = log if log is not None else SolveLog()
    if C4.nvars != 3 or C5.nvars != 3:
        raise ValueError("expected plane curves in three variables")
    tol = mp.mpf(cfg.tol_rel)
    saw_zero = False
    for attempt in range(cfg.max_retries):
        rng = rng_for(cfg, label, attempt)
        with workprec(cfg):
            M = _random_pgl3(rng, cfg)
            LM = LinearMap(M)
            F = substitute_linear(C4, LM, cfg=cfg, method="direct")
            G = substitute_linear(C5, LM, cfg=cfg, method="direct")
            topF = abs(F.terms.get((C4.degree, 0, 0), mp.mpc(0)))
            topG = abs(G.terms.get((C5.degree, 0, 0), mp.mpc(0)))
            if topF <= tol * F.inf_norm() * 1000 or topG <= tol * G.inf_norm() * 1000:
                continue
            fb = _dehomogenize(F)
            gb = _dehomogenize(G)
            try:
                R = resultant_bivariate(fb, gb, cfg)
            except IdenticallyZero:
                saw_zero = True
                continue
            if R.degree < 1:
                continue
            yroots = roots_univariate(R, cfg, log=log, label=f"{label}: resultant")
            found = []
            for y in _distinct(yroots, cfg):
                fy = fb.slice_at(y)
                gy = gb.slice_at(y)
                fy = fy.trim(tol * max(fy.inf_norm(), mp.mpf(1)))
                gy = gy.trim(tol * max(gy.inf_norm(), mp.mpf(1)))
                if fy.is_zero() or gy.is_zero():
                    continue
                try:
                    h = gcd_univariate(fy, gy, cfg)
                except IllConditioned:
                    continue
                if h.degree < 1:
                    continue
                xroots = roots_univariate(h, cfg, log=log, label=f"{label}: fiber")
                for x in _distinct(xroots, cfg):
                    pt = normalize_point(mat_vec(M, (x, y, mp.mpc(1))))
                    r4 = abs(C4.evaluate(pt)) / max(mp.mpf(1), C4.inf_norm())
                    r5 = abs(C5.evaluate(pt)) / max(mp.mpf(1), C5.inf_norm())
                    if r4 <= tol * 10 ** 4 and r5 <= tol * 10 ** 4:
                        found.append((r4 + r5, pt))
            pts = _distinct_points([p for _, p in sorted(found, key=lambda t: t[0])], cfg)
            if pts:
                return [ProjPoint(p) for p in pts[:C4.degree * C5.degree]]
    if saw_zero:
        raise CommonComponent("curves share a component in every coordinate frame")
    raise GenericityFailure("no certified intersection point found")


def _distinct(values, cfg):
    thr = mp.mpf(cfg.tol_rel) ** mp.mpf(0.5)
    out = []
    for v in values:
        if all(abs(v - w) > thr * max(mp.mpf(1), abs(v)) for w in out):
            out.append(v)
    return out


def _distinct_points(points, cfg):
    thr = mp.mpf(cfg.tol_rel) ** mp.mpf(0.5)
    out = []
    for p in points:
        fresh = True
        for q in out:
            diff = max(abs(a - b) for a, b in zip(p, q))
            if diff <= thr:
                fresh = False
                break
        if fresh:
            out.append(p)
    return out
