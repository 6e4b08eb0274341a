import random

import mpmath as mp
import pytest

from tschirnhaus.errors import AmbientTooSmall, DomainError, QNotOnSystem
from tschirnhaus.multipoly import MultiPoly, substitute_linear
from tschirnhaus.numeric import workprec
from tschirnhaus.obliteration import (
    DegreeProfile,
    PolySystem,
    ProjPoint,
    SolveLog,
    derived_system,
    existence_bound_k_plane,
    find_line,
    find_point,
    line_bound,
    point_bound,
)

from conftest import line_points, rand_homogeneous


class TestBounds:
    def test_single_cubic(self):
        assert line_bound(DegreeProfile((1, 0, 0))) == 5

    def test_two_quadrics_three_linears(self):
        assert line_bound(DegreeProfile((2, 3))) == 9

    def test_all_linear(self):
        for m in range(0, 8):
            assert line_bound(DegreeProfile((m,))) == m + 1

    def test_point_bounds_match_classical_numbers(self):
        # one equation each of degrees 1..k
        assert point_bound(DegreeProfile((1, 1, 1))) == 4        # degree >= 5
        assert point_bound(DegreeProfile((1, 1, 1, 1))) == 10    # degree >= 11
        assert point_bound(DegreeProfile((1, 1, 1, 1, 1))) == 46  # degree >= 47

    def test_monotone_in_counts(self):
        rng = random.Random(43)
        for _ in range(50):
            k = rng.randint(1, 4)
            counts = tuple(rng.randint(0, 3) for _ in range(k))
            if sum(counts) == 0:
                continue
            prof = DegreeProfile(counts)
            base = line_bound(prof)
            for slot in range(k):
                bumped = list(counts)
                bumped[slot] += 1
                assert line_bound(DegreeProfile(tuple(bumped))) >= base

    def test_parse(self):
        assert DegreeProfile.parse("3:1,2:0,1:0").counts == (1, 0, 0)
        assert DegreeProfile.parse("2:2,1:3").counts == (2, 3)

    def test_derived_profile_table(self):
        # m_k = n_k, m_i = sum of the counts of degree >= i
        assert DegreeProfile((1, 1, 1)).derived().counts == (1, 2, 3)
        assert DegreeProfile((2, 3)).derived().counts == (2, 5)


class TestExistenceBound:
    def test_quartic_line(self):
        assert existence_bound_k_plane(4, 1) == 4

    def test_quintic_line(self):
        assert existence_bound_k_plane(5, 1) == 4

    def test_quartic_plane(self):
        assert existence_bound_k_plane(4, 2) == 7

    def test_domain(self):
        with pytest.raises(DomainError):
            existence_bound_k_plane(3, 1)
        with pytest.raises(DomainError):
            existence_bound_k_plane(4, 0)


class TestDerivedSystem:
    def test_hand_expansion(self, cfg):
        g = MultiPoly(2, 2, {(2, 0): 1, (0, 2): 1})
        sys0 = PolySystem(1, (g,))
        out = derived_system(sys0, ProjPoint((1, mp.mpc(0, 1))), cfg)
        assert [f.degree for f in out.eqs] == [2, 1]
        lin = out.eqs[1]
        c0 = lin.terms[(1, 0)]
        c1 = lin.terms[(0, 1)]
        assert abs(c0 - 2) < 1e-25 and abs(c1 - mp.mpc(0, 2)) < 1e-25

    def test_linear_passthrough(self, cfg):
        g = MultiPoly(2, 1, {(1, 0): 1, (0, 1): 1})
        out = derived_system(PolySystem(1, (g,)), ProjPoint((1, -1)), cfg)
        assert len(out.eqs) == 1 and out.eqs[0].degree == 1

    def test_rejects_off_system_base_point(self, cfg):
        g = MultiPoly(2, 2, {(2, 0): 1, (0, 2): 1})
        with pytest.raises(QNotOnSystem):
            derived_system(PolySystem(1, (g,)), ProjPoint((1, 1)), cfg)

    def test_fermat_line_solves_derived_system(self, cfg):
        # span{(1,-1,0,0,0,0), (0,0,1,-1,0,0)} lies in the Fermat cubic; the
        # second spanning point must satisfy the derived system at the first
        f = MultiPoly(6, 3, {tuple(3 if i == j else 0 for i in range(6)): 1
                             for j in range(6)})
        Q = ProjPoint((1, -1, 0, 0, 0, 0))
        P = (0, 0, 1, -1, 0, 0)
        out = derived_system(PolySystem(5, (f,)), Q, cfg)
        assert [g.degree for g in out.eqs] == [3, 2, 1]
        for g in out.eqs:
            assert abs(g.evaluate(P)) == 0

    def test_profile_matches_table(self, cfg):
        rng = random.Random(45)
        with workprec(cfg):
            f3 = rand_homogeneous(rng, 5, 3)
            f2 = rand_homogeneous(rng, 5, 2)
            f1 = rand_homogeneous(rng, 5, 1)
        sys0 = PolySystem(4, (f3, f2, f1))
        log = SolveLog()
        Q = find_point(sys0, cfg, log)
        out = derived_system(sys0, Q, cfg)
        assert out.profile().counts == sys0.profile().derived().counts


class TestFindPoint:
    def test_single_linear(self, cfg):
        lin = MultiPoly(2, 1, {(1, 0): 1, (0, 1): 1})
        pt = find_point(PolySystem(1, (lin,)), cfg)
        assert abs(pt.coords[0] + pt.coords[1]) < 1e-25

    def test_binomial_cubic(self, cfg):
        f = MultiPoly(2, 3, {(3, 0): 1, (0, 3): -1})
        log = SolveLog()
        pt = find_point(PolySystem(1, (f,)), cfg, log)
        assert abs(f.evaluate(pt.coords)) < 1e-25
        assert log.max_degree <= 3

    def test_quadric_and_linear_in_p3(self, cfg):
        rng = random.Random(47)
        with workprec(cfg):
            q = rand_homogeneous(rng, 4, 2)
            l = rand_homogeneous(rng, 4, 1)
        log = SolveLog()
        pt = find_point(PolySystem(3, (q, l)), cfg, log)
        assert abs(q.evaluate(pt.coords)) < 1e-22
        assert abs(l.evaluate(pt.coords)) < 1e-22
        assert log.max_degree <= 2

    def test_ambient_too_small(self, cfg):
        f = rand_homogeneous(random.Random(49), 3, 3)
        with pytest.raises(AmbientTooSmall):
            # a point on a cubic needs P^1; P^0 cannot work
            find_point(PolySystem(0, (MultiPoly(1, 3, {(3,): 1}),)), cfg)


class TestFindLine:
    def test_single_linear_cuts_line_in_p2(self, cfg):
        lin = MultiPoly(3, 1, {(1, 0, 0): 1, (0, 1, 0): 2, (0, 0, 1): 3})
        ln = find_line(PolySystem(2, (lin,)), cfg)
        for pt in line_points(ln, 3):
            assert abs(lin.evaluate(pt)) < 1e-25

    def test_segre_quadric_ruling(self, cfg):
        seg = MultiPoly(4, 2, {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1})
        log = SolveLog()
        ln = find_line(PolySystem(3, (seg,)), cfg, log)
        for pt in line_points(ln, 3):
            assert abs(seg.evaluate(pt)) < 1e-25
        assert log.max_degree <= 2

    def test_cubic_in_p5(self, cfg):
        rng = random.Random(51)
        with workprec(cfg):
            f = rand_homogeneous(rng, 6, 3)
        assert line_bound(DegreeProfile((1, 0, 0))) == 5
        log = SolveLog()
        ln = find_line(PolySystem(5, (f,)), cfg, log)
        # vanishing at degree+1 points, and at a fresh extra point
        for pt in line_points(ln, 5):
            assert abs(f.evaluate(pt)) < 1e-22
        assert log.max_degree <= 3

    def test_restriction_is_zero_polynomial(self, cfg):
        rng = random.Random(53)
        with workprec(cfg):
            q = rand_homogeneous(rng, 5, 2)
            l = rand_homogeneous(rng, 5, 1)
        ln = find_line(PolySystem(4, (q, l)), cfg)
        L = ln.spanning_matrix()
        from tschirnhaus.multipoly import LinearMap
        for eq in (q, l):
            g = substitute_linear(eq, LinearMap(L), cfg=cfg)
            assert g.inf_norm() < 1e-22

    def test_log_never_exceeds_system_degree(self, cfg):
        rng = random.Random(55)
        for _ in range(5):
            with workprec(cfg):
                f = rand_homogeneous(rng, 6, 3)
                q = rand_homogeneous(rng, 6, 2)
            log = SolveLog()
            find_line(PolySystem(5, (f,)), cfg, log)
            assert log.max_degree <= 3
            log2 = SolveLog()
            find_point(PolySystem(5, (f, q)), cfg, log2)
            assert log2.max_degree <= 3

    def test_ambient_too_small(self, cfg):
        f = rand_homogeneous(random.Random(57), 5, 3)
        with pytest.raises(AmbientTooSmall):
            find_line(PolySystem(4, (f,)), cfg)


class TestSolveLog:
    def test_append_and_max(self):
        log = SolveLog()
        assert log.max_degree == 0
        log.record("a", 3)
        log.record("b", 2)
        assert log.max_degree == 3
        assert log.entries == [("a", 3), ("b", 2)]

    def test_extend_with_prefix(self):
        a = SolveLog()
        a.record("x", 2)
        b = SolveLog()
        b.extend(a, "stage: ")
        assert b.entries == [("stage: x", 2)]
