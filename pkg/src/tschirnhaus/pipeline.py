"""End-to-end term-removal pipelines with solve-degree certificates.

``remove_terms_generic`` drives the obliteration solver directly on the
coefficient functionals A_1..A_k.  ``remove5`` follows the geometric chain
for five terms: cut the linear condition, take a maximal isotropic subspace
of the quadric, find a 2-plane in the restricted cubic, and intersect the
two remaining curves in that plane, so nothing above degree 20 is ever
solved.  ``bring_reduce`` is the classical quintic pipeline ending in the
one-parameter form z^5 + A z + 1.

Every pipeline emits a :class:`Certificate`: the chain of subspaces, the
transformation, the transformed polynomial, per-coefficient residuals, and
the solve log whose maximal degree witnesses the headline bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath as mp

from .errors import AmbientTooSmall, GenericityFailure
from .numeric import (
    PrecisionConfig,
    kernel_basis,
    mat_from_cols,
    mat_vec,
    mpc_of,
    normalize_point,
    random_vector,
    rng_for,
    workprec,
)
from .multipoly import LinearMap, interpolate_homogeneous, gram_from_evaluator
from .obliteration import BoxEq, ProjPoint, SolveLog, point_bound, DegreeProfile, solve_point
from .subspaces import (
    LinearSubspace,
    intersect_plane_curves,
    isotropic_subspace,
    plane_on_cubic_segre,
    plane_on_cubic_strict,
)
from .transform import (
    CoefficientFamily,
    MonicPoly,
    Transformation,
    leading_coefficients,
    recover_roots,
    solve_monic,
    transform,
)
from . import serialize as sz

CERT_FORMAT = "tf-cert/1"
GEOM_PREFIX = "geometry: "
CURVE_PREFIX = "curves: "

# (geometry-stage cap, overall cap); generic pipelines cap everything at k
VARIANT_CAPS = {"segre": (5, 20), "strict": (3, 20)}


@dataclass(frozen=True)
class ChainStep:
    """One stage of the construction: a subspace or the final point, plus
    the indices of the coefficient functionals that vanish on it."""

    label: str
    kind: str
    vanishing: tuple
    subspace: LinearSubspace = None
    point: tuple = None


@dataclass
class Certificate:
    input: MonicPoly
    k: int
    variant: str
    chain: list
    transformation: Transformation
    transformed: MonicPoly
    solve_log: SolveLog
    residuals: list
    bits: int
    tol_rel: float
    seed: int

    def caps(self):
        if self.variant in VARIANT_CAPS:
            return VARIANT_CAPS[self.variant]
        return (self.k, self.k)

    def to_json_dict(self):
        dps = sz.digits_for_bits(self.bits)
        return {
            "format": CERT_FORMAT,
            "k": self.k,
            "variant": self.variant,
            "bits": self.bits,
            "tol_rel": repr(self.tol_rel),
            "seed": self.seed,
            "input": sz.monic_to_json(self.input, dps),
            "transformation": sz.transformation_to_json(self.transformation, dps),
            "transformed": sz.monic_to_json(self.transformed, dps),
            "chain": [self._step_json(s, dps) for s in self.chain],
            "solve_log": sz.solvelog_to_json(self.solve_log),
            "residuals": [mp.nstr(r, 10) for r in self.residuals],
        }

    @staticmethod
    def _step_json(step, dps):
        out = {"label": step.label, "kind": step.kind,
               "vanishing": list(step.vanishing)}
        if step.subspace is not None:
            out["subspace"] = sz.subspace_to_json(step.subspace, dps)
        if step.point is not None:
            out["point"] = sz.scalars_to_json(step.point, dps)
        return out

    def dumps(self):
        return sz.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, obj):
        if obj.get("format") != CERT_FORMAT:
            raise ValueError(f"unknown certificate format {obj.get('format')!r}")
        bits = int(obj["bits"])
        p = sz.monic_from_json(obj["input"], bits)
        chain = []
        for s in obj["chain"]:
            sub = sz.subspace_from_json(s["subspace"], bits) if "subspace" in s else None
            pt = sz.scalars_from_json(s["point"], bits) if "point" in s else None
            chain.append(ChainStep(s["label"], s["kind"], tuple(s["vanishing"]),
                                   sub, pt))
        with mp.workprec(bits + 32):
            residuals = [mp.mpf(r) for r in obj["residuals"]]
        return cls(
            input=p,
            k=int(obj["k"]),
            variant=obj["variant"],
            chain=chain,
            transformation=sz.transformation_from_json(obj["transformation"], p.n, bits),
            transformed=sz.monic_from_json(obj["transformed"], bits),
            solve_log=sz.solvelog_from_json(obj["solve_log"]),
            residuals=residuals,
            bits=bits,
            tol_rel=float(obj["tol_rel"]),
            seed=int(obj["seed"]),
        )

    @classmethod
    def loads(cls, text):
        import json
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class BringForm:
    """The one-parameter quintic z^5 + A z + 1 and the scale that reaches it."""

    A: object
    scale: object


def _tail_scale(q, k):
    tail = [abs(c) for c in q.a[k:]]
    return max([mp.mpf(1)] + tail)


def _relative_residuals(q, k):
    scale = _tail_scale(q, k)
    return [abs(q.a[i]) / scale for i in range(k)], scale


def _hyperplane_of_linear(row, cfg):
    """Orthonormal basis of the kernel of a single linear functional."""
    return kernel_basis(mp.matrix([list(row)]), cfg)


def _compose_cols(left_cols, right_matrix):
    """Columns of mat(left_cols) * right_matrix."""
    M = mat_from_cols(left_cols) * right_matrix
    return [tuple(M[i, j] for i in range(M.rows)) for j in range(M.cols)]


def _a1_row(p, cfg):
    with workprec(cfg):
        t = p.power_sums(p.n - 1)
        return [-t[j] for j in range(p.n)]


def remove_terms_generic(p, k, cfg):
    """Remove the first k intermediate coefficients by the obliteration solver.

    The system A_1 = ... = A_k = 0 (degrees 1..k) is handed to the recursive
    point solver as black-box equations; restrictions are interpolated only
    in few variables, so nothing is ever expanded in all n coefficients.
    Every univariate solve has degree at most k.
    """
    if not 1 <= k <= 5:
        raise ValueError("supported range is 1 <= k <= 5")
    n = p.n
    need = point_bound(DegreeProfile(tuple([1] * k))) + 1
    if n < need:
        raise AmbientTooSmall(
            f"removing {k} terms generically needs degree >= {need}",
            required=need)
    fam = CoefficientFamily(p, k, cfg)
    log = SolveLog()
    with workprec(cfg):
        sample = random_vector(rng_for(cfg, "generic scale"), n)
        svals = fam.values(sample)
        eqs = []
        for i in range(1, k + 1):
            scale = max(mp.mpf(1), abs(svals[i - 1]))
            eqs.append(BoxEq(i, n, lambda b, _i=i: fam.values(b)[_i - 1], scale))
        pt = solve_point(eqs, n, cfg, log, "generic removal")
        T = Transformation(n, pt)
        q = transform(p, T, cfg)
        residuals, _ = _relative_residuals(q, k)
    cert = Certificate(p, k, "generic", [ChainStep("solution point", "point",
                                                   tuple(range(1, k + 1)),
                                                   None, tuple(pt))],
                       T, q, log, residuals, cfg.bits, cfg.tol_rel, cfg.seed)
    _assert_certificate(cert, cfg)
    return cert


def remove5(p, variant, cfg):
    """Remove five terms from a degree-n polynomial along the geometric chain.

    variant "segre" (n >= 21): isotropic P^9 in the quadric, then a 2-plane
    in the cubic by the pencil route (geometry solves of degree <= 5).
    variant "strict" (n >= 25): isotropic P^11 and the degree-3 plane
    construction (geometry solves of degree <= 3).  Both end by intersecting
    the restricted quartic and quintic curves: one solve of degree <= 20.
    """
    if variant not in ("segre", "strict"):
        raise ValueError("variant must be 'segre' or 'strict'")
    n = p.n
    iso_dim = 9 if variant == "segre" else 11
    need = 2 * (iso_dim + 1) + 1
    if n < need:
        raise AmbientTooSmall(
            f"variant {variant!r} needs degree >= {need}", required=need)
    fam = CoefficientFamily(p, 5, cfg)
    geom_log = SolveLog()
    curve_log = SolveLog()
    with workprec(cfg):
        # stage 1: the linear condition cuts a hyperplane
        e1 = _hyperplane_of_linear(_a1_row(p, cfg), cfg)
        E1 = mat_from_cols(e1)
        hyper = LinearSubspace(n - 1, n - 2, tuple(e1))

        # stage 2: Gram matrix of the quadric on the hyperplane, maximal
        # isotropic subspace
        G = gram_from_evaluator(
            lambda s: fam.values(mat_vec(E1, s))[1], n - 1, cfg)
        iso = isotropic_subspace(G, iso_dim, cfg, geom_log,
                                 label="quadric isotropic")
        e2 = _compose_cols(e1, mat_from_cols(list(iso.basis)))
        E2 = mat_from_cols(e2)
        isostep = LinearSubspace(n - 1, iso_dim, tuple(e2))

        # stage 3: restrict the cubic by interpolation, find a 2-plane
        cubic = interpolate_homogeneous(
            lambda s: fam.values(mat_vec(E2, s))[2], 3, iso_dim + 1, cfg,
            label="cubic restriction")
        planner = plane_on_cubic_segre if variant == "segre" else plane_on_cubic_strict
        plane = planner(cubic, cfg, geom_log)
        e3 = _compose_cols(e2, mat_from_cols(list(plane.basis)))
        E3 = mat_from_cols(e3)
        planestep = LinearSubspace(n - 1, 2, tuple(e3))

        # stage 4: the two remaining curves in the plane
        C4 = interpolate_homogeneous(
            lambda s: fam.values(mat_vec(E3, s))[3], 4, 3, cfg,
            label="quartic restriction")
        C5 = interpolate_homogeneous(
            lambda s: fam.values(mat_vec(E3, s))[4], 5, 3, cfg,
            label="quintic restriction")
        pts = intersect_plane_curves(C4, C5, cfg, curve_log)

        # stage 5: compose parametrizations back to a coefficient vector
        best = None
        for q3 in pts:
            b = normalize_point(mat_vec(E3, q3.coords))
            vals = fam.values(b)
            score = sum(abs(v) for v in vals)
            if best is None or score < best[0]:
                best = (score, b, q3)
        _, bvec, plane_pt = best
        T = Transformation(n, bvec)
        q = transform(p, T, cfg)
        residuals, _ = _relative_residuals(q, 5)

    log = SolveLog()
    log.extend(geom_log, GEOM_PREFIX)
    log.extend(curve_log, CURVE_PREFIX)
    chain = [
        ChainStep("hyperplane of the linear condition", "subspace", (1,), hyper),
        ChainStep(f"isotropic P^{iso_dim} of the quadric", "subspace", (1, 2),
                  isostep),
        ChainStep("2-plane in the cubic", "subspace", (1, 2, 3), planestep),
        ChainStep("curve intersection point", "point", (1, 2, 3, 4, 5),
                  None, tuple(bvec)),
    ]
    cert = Certificate(p, 5, variant, chain, T, q, log, residuals,
                       cfg.bits, cfg.tol_rel, cfg.seed)
    _assert_certificate(cert, cfg)
    return cert


def bring_reduce(p, cfg, log=None):
    """Reduce a quintic to Bring form: certificate for three removed terms
    plus the normalization data.

    Hyperplane for the linear condition, a line on the quadric surface
    (quadratic solves), one cubic solve for the intersection with the cubic
    condition, and a final degree-5 binomial solve extracting the fifth root
    used by the change of variables.
    """
    if p.n != 5:
        raise ValueError("bring_reduce expects a quintic")
    log = log if log is not None else SolveLog()
    fam = CoefficientFamily(p, 5, cfg)
    last = None
    for attempt in range(cfg.max_retries):
        try:
            return _bring_once(p, fam, cfg, log, attempt)
        except (GenericityFailure, _NoUsableRoot) as exc:
            last = exc
    raise GenericityFailure(f"bring reduction failed: {last}")


class _NoUsableRoot(Exception):
    pass


def _bring_once(p, fam, cfg, log, attempt):
    n = 5
    geom_log = SolveLog()
    with workprec(cfg):
        e1 = _hyperplane_of_linear(_a1_row(p, cfg), cfg)
        E1 = mat_from_cols(e1)
        hyper = LinearSubspace(4, 3, tuple(e1))
        G = gram_from_evaluator(
            lambda s: fam.values(mat_vec(E1, s))[1], 4, cfg)
        iso = isotropic_subspace(G, 1, cfg, geom_log,
                                 label=("quadric line", attempt))
        e2 = _compose_cols(e1, mat_from_cols(list(iso.basis)))
        E2 = mat_from_cols(e2)
        linestep = LinearSubspace(4, 1, tuple(e2))
        cubic = interpolate_homogeneous(
            lambda s: fam.values(mat_vec(E2, s))[2], 3, 2, cfg,
            label=("binary cubic", attempt))
        from .numeric import UniPoly, roots_univariate
        coeffs = [mp.mpc(0)] * 4
        for exps, c in cubic.terms.items():
            coeffs[exps[0]] = c
        u = UniPoly(coeffs).trim(mp.mpf(cfg.tol_rel) * cubic.inf_norm())
        candidates = []
        if u.degree >= 1:
            for s in roots_univariate(u, cfg, log=geom_log,
                                      label="cubic intersection"):
                candidates.append((s, mp.mpc(1)))
        if u.degree < 3:
            candidates.append((mp.mpc(1), mp.mpc(0)))
        tol = mp.mpf(cfg.tol_rel)
        chosen = None
        for s, t in candidates:
            b = normalize_point(mat_vec(E2, (s, t)))
            T = Transformation(n, b)
            q = transform(p, T, cfg)
            resid, scale = _relative_residuals(q, 3)
            if max(resid) > tol * 1000:
                continue
            if abs(q.a[4]) <= tol * scale * 1000:
                continue  # vanishing constant term cannot be normalized
            chosen = (b, T, q, resid)
            break
        if chosen is None:
            raise _NoUsableRoot("no cubic root gave a usable transformed quintic")
        bvec, T, q, residuals = chosen
        full = SolveLog()
        full.extend(geom_log, GEOM_PREFIX)
        chain = [
            ChainStep("hyperplane of the linear condition", "subspace", (1,), hyper),
            ChainStep("line on the quadric surface", "subspace", (1, 2), linestep),
            ChainStep("cubic intersection point", "point", (1, 2, 3),
                      None, tuple(bvec)),
        ]
        cert = Certificate(p, 3, "generic", chain, T, q, full, residuals,
                           cfg.bits, cfg.tol_rel, cfg.seed)
        _assert_certificate(cert, cfg)
        log.extend(full)
        # normalization: y = A5^(1/5) z and division by A5
        A4, A5 = q.a[3], q.a[4]
        scale5 = A5 ** (mp.mpf(1) / 5)
        log.record("bring normalization fifth root", 5)
        A = A4 * scale5 / A5
        return cert, BringForm(A=A, scale=scale5)


def quintic_solve_demo(p, cfg):
    """Solve a quintic end to end through the Bring form.

    The one-parameter quintic is solved numerically in a separate
    verification log; every pipeline solve (including the degree <= 4 fiber
    recoveries) stays in the pipeline log.  Returns the 5 roots of p.
    """
    if p.n != 5:
        raise ValueError("expected a quintic")
    pipeline_log = SolveLog()
    cert, bring = bring_reduce(p, cfg, log=pipeline_log)
    verification_log = SolveLog()
    with workprec(cfg):
        bring_poly = MonicPoly(5, (0, 0, 0, bring.A, mp.mpc(1)))
        zroots = solve_monic(bring_poly, cfg, log=verification_log)
        ys = [bring.scale * z for z in zroots]
        distinct_ys = []
        thr = mp.mpf(cfg.tol_rel) ** mp.mpf(0.5)
        for y in ys:
            if all(abs(y - w) > thr * max(mp.mpf(1), abs(y)) for w in distinct_ys):
                distinct_ys.append(y)
        roots = []
        for y in distinct_ys:
            roots.extend(recover_roots(p, cert.transformation, y, cfg,
                                       log=pipeline_log))
        if len(roots) != 5:
            raise GenericityFailure(
                f"recovered {len(roots)} roots instead of 5")
        roots.sort(key=lambda z: (mp.re(z), mp.im(z)))
    return roots, cert, bring, pipeline_log, verification_log


@dataclass
class VerifyReport:
    entries: list = field(default_factory=list)

    def add(self, name, passed, detail=""):
        self.entries.append((name, bool(passed), detail))

    @property
    def passed(self):
        return all(ok for _, ok, _ in self.entries)

    def lines(self):
        return [f"{'PASS' if ok else 'FAIL'} {name}" + (f" ({d})" if d else "")
                for name, ok, d in self.entries]


def _assert_certificate(cert, cfg):
    """Construction-time invariants; failures are construction bugs."""
    geom_cap, overall_cap = cert.caps()
    for label, degree in cert.solve_log.entries:
        cap = overall_cap if label.startswith(CURVE_PREFIX) else geom_cap
        if degree > cap:
            raise GenericityFailure(
                f"solve of degree {degree} exceeds the {cap} cap ({label})")
    tol = mp.mpf(cert.tol_rel)
    if max(cert.residuals, default=mp.mpf(0)) > tol:
        raise GenericityFailure("certificate residuals exceed tolerance")


def verify_certificate(cert, cfg=None):
    """Re-check a certificate along an independent computation path.

    Recomputes the leading coefficients at the recorded transformation,
    re-derives every chain containment by restricting the coefficient
    functionals to the recorded subspaces, checks chain nesting, and
    enforces the per-variant solve-degree caps on the log.  Failures land in
    the report, not in exceptions.
    """
    cfg = cfg or PrecisionConfig(bits=cert.bits, tol_rel=cert.tol_rel,
                                 seed=cert.seed)
    rep = VerifyReport()
    p = cert.input
    n = p.n
    tol = mp.mpf(cert.tol_rel)
    T = cert.transformation
    rep.add("format", True, CERT_FORMAT)
    nonzero = any(c != 0 for c in T.b)
    rep.add("transformation nonzero, degree <= n-1",
            nonzero and len(T.b) == n)
    with workprec(cfg):
        # independent recomputation of the removed coefficients
        vals = leading_coefficients(p, T, cert.k, cfg)
        scale = _tail_scale(cert.transformed, cert.k)
        worst = max(abs(v) / scale for v in vals)
        rep.add(f"A_1..A_{cert.k} vanish at the transformation",
                worst <= tol, f"worst relative residual {mp.nstr(worst, 3)}")
        # the recorded transformed polynomial matches a fresh transform
        q = transform(p, T, cfg)
        qs = max(max((abs(c) for c in q.a), default=mp.mpf(1)), mp.mpf(1))
        dq = max(abs(a - b) for a, b in zip(q.a, cert.transformed.a)) / qs
        rep.add("transformed polynomial matches recomputation",
                dq <= tol * 1000, f"relative gap {mp.nstr(dq, 3)}")
        # chain containments
        fam = CoefficientFamily(p, cert.k, cfg)
        prev = None
        for idx, step in enumerate(cert.chain):
            if step.kind == "subspace":
                L = step.subspace.as_map()
                ok = True
                detail = []
                for i in step.vanishing:
                    g = interpolate_homogeneous(
                        lambda s, _i=i: fam.values(mat_vec(L.matrix, s))[_i - 1],
                        i, L.nvars_in, cfg, label=("verify", idx, i))
                    r = g.inf_norm() / max(mp.mpf(1), scale)
                    detail.append(mp.nstr(r, 3))
                    if r > tol * 1000:
                        ok = False
                rep.add(f"chain[{idx}] {step.label}: restrictions vanish",
                        ok, ", ".join(detail))
                if prev is not None:
                    nested = all(prev.spans_point(v, tol * 1000)
                                 for v in step.subspace.basis)
                    rep.add(f"chain[{idx}] nested in chain[{idx - 1}]", nested)
                prev = step.subspace
            else:
                pt = normalize_point(step.point)
                if prev is not None:
                    rep.add(f"chain[{idx}] point lies in chain[{idx - 1}]",
                            prev.spans_point(pt, tol * 1000))
                bt = normalize_point(T.b)
                gap = max(abs(a - b) for a, b in zip(pt, bt))
                rep.add(f"chain[{idx}] point is the transformation",
                        gap <= tol * 1000, f"gap {mp.nstr(gap, 3)}")
    geom_cap, overall_cap = cert.caps()
    bad = [(label, d) for label, d in cert.solve_log.entries
           if d > (overall_cap if label.startswith(CURVE_PREFIX) else geom_cap)]
    rep.add(f"solve log within caps (geometry {geom_cap}, overall {overall_cap})",
            not bad, "; ".join(f"{l}: {d}" for l, d in bad[:3]))
    rep.add("recorded residuals within tolerance",
            max(cert.residuals, default=mp.mpf(0)) <= tol)
    return rep
