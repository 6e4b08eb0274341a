import random

import mpmath as mp
import pytest

from tschirnhaus.errors import AmbientTooSmall, CommonComponent
from tschirnhaus.multipoly import (
    LinearMap,
    MultiPoly,
    polarize_quadratic,
    substitute_linear,
)
from tschirnhaus.numeric import workprec
from tschirnhaus.obliteration import SolveLog
from tschirnhaus.subspaces import (
    LinearSubspace,
    QuadricPencil,
    intersect_plane_curves,
    isotropic_subspace,
    line_on_cubic,
    line_on_quadric_surface,
    line_on_two_quadrics_P4,
    plane_on_cubic_segre,
    plane_on_cubic_strict,
    restrict_gram,
    restriction_is_zero,
)

from conftest import line_points, poly_mul, rand_homogeneous


def fermat_cubic(nvars):
    return MultiPoly(nvars, 3,
                     {tuple(3 if i == j else 0 for i in range(nvars)): 1
                      for j in range(nvars)})


def gram_residual(G, pts):
    out = mp.mpf(0)
    m = G.rows
    for p in pts:
        val = abs(sum(p[i] * sum(G[i, j] * p[j] for j in range(m))
                      for i in range(m)))
        out = max(out, val)
    return out


class TestIsotropic:
    def test_hyperbolic_plane(self, cfg):
        G = mp.matrix([[0, 1], [1, 0]])
        sub = isotropic_subspace(G, 0, cfg)
        v = sub.basis[0]
        assert abs(v[0] * v[1]) < 1e-25  # q(v) = 2 v0 v1

    def test_sum_of_two_squares(self, cfg):
        sub = isotropic_subspace(mp.eye(2), 0, cfg)
        v = sub.basis[0]
        assert abs(v[0] ** 2 + v[1] ** 2) < 1e-25

    def test_coordinate_pairing_line(self, cfg):
        log = SolveLog()
        sub = isotropic_subspace(mp.eye(4), 1, cfg, log)
        B = restrict_gram(mp.eye(4), list(sub.basis))
        assert max(abs(B[i, j]) for i in range(2) for j in range(2)) < 1e-25
        assert all(d == 2 for _, d in log.entries)
        assert len(log.entries) == 2  # one quadratic per extracted vector

    def test_witt_precondition(self, cfg):
        with pytest.raises(AmbientTooSmall):
            isotropic_subspace(mp.eye(4), 2, cfg)

    def test_degenerate_form_uses_kernel(self, cfg):
        # rank-2 form on 6 variables: kernel supplies isotropic directions
        G = mp.matrix(6, 6)
        G[0, 0] = 1
        G[1, 1] = 1
        log = SolveLog()
        sub = isotropic_subspace(G, 2, cfg, log)
        B = restrict_gram(G, list(sub.basis))
        assert max(abs(B[i, j]) for i in range(3) for j in range(3)) < 1e-25


class TestLineOnQuadricSurface:
    def test_segre_ruling(self, cfg):
        seg = MultiPoly(4, 2, {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1})
        log = SolveLog()
        ln = line_on_quadric_surface(seg, cfg, log)
        for pt in line_points(ln, 3):
            assert abs(seg.evaluate(pt)) < 1e-24
        assert set(d for _, d in log.entries) <= {1, 2}

    def test_sum_of_squares(self, cfg):
        q = MultiPoly(4, 2, {tuple(2 if i == j else 0 for i in range(4)): 1
                             for j in range(4)})
        ln = line_on_quadric_surface(q, cfg)
        for pt in line_points(ln, 3):
            assert abs(q.evaluate(pt)) < 1e-24

    def test_random_rank4(self, cfg):
        rng = random.Random(59)
        with workprec(cfg):
            q = rand_homogeneous(rng, 4, 2)
        log = SolveLog()
        ln = line_on_quadric_surface(q, cfg, log)
        for pt in line_points(ln, 3):
            assert abs(q.evaluate(pt)) < 1e-24
        assert log.max_degree <= 2


class TestLineOnCubic:
    def test_fermat(self, cfg):
        f = fermat_cubic(6)
        log = SolveLog()
        ln = line_on_cubic(f, cfg, log)
        for pt in line_points(ln, 4):
            assert abs(f.evaluate(pt)) < 1e-22
        assert log.max_degree <= 3

    def test_linear_factor(self, cfg):
        rng = random.Random(61)
        with workprec(cfg):
            x0 = MultiPoly(6, 1, {(1, 0, 0, 0, 0, 0): 1})
            f = poly_mul(x0, rand_homogeneous(rng, 6, 2))
        ln = line_on_cubic(f, cfg)
        for pt in line_points(ln, 4):
            assert abs(f.evaluate(pt)) < 1e-22

    def test_random_cubics(self, cfg):
        rng = random.Random(63)
        for _ in range(3):
            with workprec(cfg):
                f = rand_homogeneous(rng, 6, 3)
            log = SolveLog()
            ln = line_on_cubic(f, cfg, log)
            for pt in line_points(ln, 4):
                assert abs(f.evaluate(pt)) < 1e-22
            assert log.max_degree <= 3

    def test_ambient_check(self, cfg):
        f = rand_homogeneous(random.Random(65), 5, 3)
        with pytest.raises(AmbientTooSmall):
            line_on_cubic(f, cfg)


class TestPlaneStrict:
    def test_fermat_pairing_plane_certificate(self, cfg):
        # the classical pairing plane passes the universal acceptance check
        f = fermat_cubic(12)
        basis = []
        for k in range(3):
            v = [0] * 12
            v[2 * k] = 1
            v[2 * k + 1] = -1
            basis.append(tuple(v))
        plane = LinearSubspace(11, 2, tuple(basis))
        assert restriction_is_zero(f, plane, cfg)

    def test_random_cubic(self, cfg):
        rng = random.Random(67)
        with workprec(cfg):
            f = rand_homogeneous(rng, 12, 3)
        log = SolveLog()
        plane = plane_on_cubic_strict(f, cfg, log)
        assert restriction_is_zero(f, plane, cfg)
        assert log.max_degree <= 3

    def test_ambient_check(self, cfg):
        f = rand_homogeneous(random.Random(69), 10, 3)
        with pytest.raises(AmbientTooSmall):
            plane_on_cubic_strict(f, cfg)


class TestPencilLine:
    def test_split_pair(self, cfg):
        G1 = mp.matrix(5, 5)
        G1[0, 1] = G1[1, 0] = mp.mpf(0.5)
        G2 = mp.matrix(5, 5)
        G2[2, 3] = G2[3, 2] = mp.mpf(0.5)
        ln = line_on_two_quadrics_P4(QuadricPencil(G1, G2), cfg)
        assert gram_residual(G1, line_points(ln, 3)) < 1e-22
        assert gram_residual(G2, line_points(ln, 3)) < 1e-22

    def test_equal_quadrics(self, cfg):
        rng = random.Random(71)
        with workprec(cfg):
            G = polarize_quadratic(rand_homogeneous(rng, 5, 2), cfg)
        log = SolveLog()
        ln = line_on_two_quadrics_P4(QuadricPencil(G, G), cfg, log)
        assert gram_residual(G, line_points(ln, 3)) < 1e-20
        assert log.max_degree <= 5

    def test_random_pencil(self, cfg):
        rng = random.Random(73)
        with workprec(cfg):
            G1 = polarize_quadratic(rand_homogeneous(rng, 5, 2), cfg)
            G2 = polarize_quadratic(rand_homogeneous(rng, 5, 2), cfg)
        log = SolveLog()
        ln = line_on_two_quadrics_P4(QuadricPencil(G1, G2), cfg, log)
        assert gram_residual(G1, line_points(ln, 3)) < 1e-20
        assert gram_residual(G2, line_points(ln, 3)) < 1e-20
        assert log.max_degree <= 5


class TestPlaneSegre:
    def test_fermat_pairing_plane_certificate(self, cfg):
        f = fermat_cubic(10)
        basis = []
        for k in range(3):
            v = [0] * 10
            v[2 * k] = 1
            v[2 * k + 1] = -1
            basis.append(tuple(v))
        assert restriction_is_zero(f, LinearSubspace(9, 2, tuple(basis)), cfg)

    def test_random_cubic(self, cfg):
        rng = random.Random(75)
        with workprec(cfg):
            f = rand_homogeneous(rng, 10, 3)
        log = SolveLog()
        plane = plane_on_cubic_segre(f, cfg, log)
        assert restriction_is_zero(f, plane, cfg)
        assert log.max_degree <= 5

    def test_generic_log_hits_five(self, cfg):
        rng = random.Random(77)
        with workprec(cfg):
            f = rand_homogeneous(rng, 10, 3)
        log = SolveLog()
        plane_on_cubic_segre(f, cfg, log)
        assert log.max_degree == 5  # the pencil discriminant is degree 5

    def test_plane_contains_its_line(self, cfg):
        rng = random.Random(79)
        with workprec(cfg):
            f = rand_homogeneous(rng, 10, 3)
        log = SolveLog()
        plane = plane_on_cubic_segre(f, cfg, log)
        # the plane is a genuine 2-dimensional subspace of the cubic; its
        # basis spans every point of itself (rank check) and the restriction
        # vanishes, which is the containment contract
        assert plane.dim == 2 and len(plane.basis) == 3
        assert restriction_is_zero(f, plane, cfg)


class TestIntersectPlaneCurves:
    def test_binomial_twenty_points(self, cfg256):
        C4 = MultiPoly(3, 4, {(4, 0, 0): 1, (0, 0, 4): -1})
        C5 = MultiPoly(3, 5, {(0, 5, 0): 1, (0, 0, 5): -1})
        log = SolveLog()
        pts = intersect_plane_curves(C4, C5, cfg256, log)
        assert len(pts) == 20
        assert log.max_degree <= 20
        with workprec(cfg256):
            for p in pts:
                assert abs(C4.evaluate(p.coords)) < 1e-18
                assert abs(C5.evaluate(p.coords)) < 1e-18

    def test_single_degenerate_point(self, cfg256):
        C4 = MultiPoly(3, 4, {(4, 0, 0): 1})
        C5 = MultiPoly(3, 5, {(0, 5, 0): 1})
        pts = intersect_plane_curves(C4, C5, cfg256)
        assert len(pts) == 1
        p = pts[0].coords
        assert abs(p[0]) < 1e-8 and abs(p[1]) < 1e-8 and abs(p[2] - 1) < 1e-8

    def test_random_curves(self, cfg256):
        rng = random.Random(81)
        with workprec(cfg256):
            C4 = rand_homogeneous(rng, 3, 4)
            C5 = rand_homogeneous(rng, 3, 5)
        log = SolveLog()
        pts = intersect_plane_curves(C4, C5, cfg256, log)
        assert 1 <= len(pts) <= 20
        assert log.max_degree <= 20
        with workprec(cfg256):
            for p in pts:
                assert abs(C4.evaluate(p.coords)) < 1e-18
                assert abs(C5.evaluate(p.coords)) < 1e-18

    def test_common_component(self, cfg):
        rng = random.Random(83)
        with workprec(cfg):
            lin = MultiPoly(3, 1, {(1, 0, 0): 1, (0, 1, 0): -1})
            C4 = poly_mul(lin, rand_homogeneous(rng, 3, 3))
            C5 = poly_mul(lin, rand_homogeneous(rng, 3, 4))
        with pytest.raises(CommonComponent):
            intersect_plane_curves(C4, C5, cfg)
