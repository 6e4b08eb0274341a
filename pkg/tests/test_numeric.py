import random

import mpmath as mp
import pytest

from tschirnhaus.errors import NonConvergence
from tschirnhaus.numeric import (
    PrecisionConfig,
    UniPoly,
    gcd_univariate,
    kernel_basis,
    mat_vec,
    newton_e_from_p,
    newton_p_from_e,
    roots_univariate,
    vec_norm,
)

from conftest import rand_unipoly


def as_multiset(roots, tol=1e-12):
    out = []
    for r in roots:
        for i, (v, m) in enumerate(out):
            if abs(r - v) < tol:
                out[i] = (v, m + 1)
                break
        else:
            out.append((r, 1))
    return out


class TestRoots:
    def test_binomial(self, cfg):
        roots = roots_univariate(UniPoly((1, 0, 1)), cfg)
        assert len(roots) == 2
        assert min(abs(r - mp.mpc(0, 1)) for r in roots) < 1e-30
        assert min(abs(r + mp.mpc(0, 1)) for r in roots) < 1e-30

    def test_triple_root(self, cfg):
        roots = roots_univariate(UniPoly.from_roots([1, 1, 1]), cfg)
        assert len(roots) == 3
        assert all(abs(r - 1) < 1e-6 for r in roots)
        ms = as_multiset(roots, tol=1e-6)
        assert ms[0][1] == 3

    def test_cbrt2_newton_oracle(self, cfg):
        # independent oracle: Newton iteration for the real cube root of 2
        roots = roots_univariate(UniPoly((-2, 0, 0, 1)), cfg)
        with mp.workprec(200):
            x = mp.mpf(1.3)
            for _ in range(60):
                x = x - (x**3 - 2) / (3 * x**2)
            real = [r for r in roots if abs(mp.im(r)) < 1e-25]
            assert len(real) == 1
            assert abs(real[0] - x) < 1e-30
            others = [r for r in roots if r is not real[0]]
            # conjugate pair by symmetry
            assert abs(others[0] - mp.conj(others[1])) < 1e-30

    def test_solve_log_records_degree(self, cfg):
        from tschirnhaus.obliteration import SolveLog
        log = SolveLog()
        roots_univariate(UniPoly((-2, 0, 0, 1)), cfg, log=log, label="cube")
        assert log.entries == [("cube", 3)]
        assert log.max_degree == 3

    def test_rejects_constants(self, cfg):
        with pytest.raises(ValueError):
            roots_univariate(UniPoly((3,)), cfg)

    def test_reconstruction_random_degrees(self, cfg):
        # product over returned roots rebuilds the monic polynomial
        rng = random.Random(7)
        for deg in (5, 11, 20):
            f = rand_unipoly(rng, deg)
            roots = roots_univariate(f, cfg)
            with mp.workprec(cfg.workbits()):
                rebuilt = UniPoly.from_roots(roots)
                fm = f.monic()
                err = max(abs(a - b) for a, b in
                          zip(rebuilt.coeffs, fm.coeffs))
            assert err <= 1e3 * cfg.tol_rel * max(1, float(fm.inf_norm()))


class TestGCD:
    def test_simple_factor(self, cfg):
        d = gcd_univariate(UniPoly((-1, 0, 1)), UniPoly((-1, 1)), cfg)
        assert d.degree == 1
        assert abs(d(1)) < 1e-30

    def test_identity_case(self, cfg):
        f = UniPoly((2, -4, 2, 6))
        d = gcd_univariate(f, f, cfg)
        fm = f.monic()
        assert d.degree == f.degree
        assert max(abs(a - b) for a, b in zip(d.coeffs, fm.coeffs)) < 1e-30

    def test_hand_factored(self, cfg):
        # (x-1)^2 (x+2) and (x-1)(x+1) share exactly x-1
        f = UniPoly.from_roots([1, 1, -2])
        g = UniPoly.from_roots([1, -1])
        d = gcd_univariate(f, g, cfg)
        assert d.degree == 1
        assert abs(d(1)) < 1e-30

    def test_common_factor_degree(self, cfg):
        rng = random.Random(3)
        for _ in range(20):
            f = rand_unipoly(rng, rng.randint(1, 4))
            g = rand_unipoly(rng, rng.randint(1, 4))
            h = rand_unipoly(rng, rng.randint(1, 4))
            d = gcd_univariate(f * h, g * h, cfg)
            assert d.degree >= h.degree


class TestNewtonIdentities:
    def test_hand_example(self):
        e = newton_e_from_p([3, 5])
        assert abs(e[0] - 3) < 1e-12 and abs(e[1] - 2) < 1e-12

    def test_zeros(self):
        e = newton_e_from_p([0] * 6)
        assert all(abs(x) == 0 for x in e)

    def test_product_expansion_oracle(self, cfg):
        rng = random.Random(11)
        with mp.workprec(cfg.workbits()):
            roots = [mp.mpc(rng.uniform(-1, 1), rng.uniform(-1, 1))
                     for _ in range(6)]
            powersums = [sum(r**k for r in roots) for k in range(1, 7)]
            e = newton_e_from_p(powersums)
            prod = UniPoly.from_roots(roots)
            # e_i = (-1)^i * coefficient of x^(n-i)
            for i in range(1, 7):
                expected = ((-1) ** i) * prod.coeffs[6 - i]
                assert abs(e[i - 1] - expected) < 1e-30

    def test_roundtrip(self, cfg):
        rng = random.Random(13)
        with mp.workprec(cfg.workbits()):
            for _ in range(200):
                k = rng.randint(1, 8)
                p = [mp.mpc(rng.uniform(-2, 2), rng.uniform(-2, 2))
                     for _ in range(k)]
                back = newton_p_from_e(newton_e_from_p(p))
                assert max(abs(a - b) for a, b in zip(p, back)) < 1e-28


class TestKernel:
    def test_zero_matrix(self, cfg):
        assert len(kernel_basis(mp.matrix(2, 2), cfg)) == 2

    def test_identity(self, cfg):
        assert kernel_basis(mp.eye(3), cfg) == []

    def test_constructed_rank(self, cfg):
        rng = random.Random(5)
        with mp.workprec(cfg.workbits()):
            A = mp.matrix(4, 5)
            for i in range(4):
                for j in range(5):
                    A[i, j] = mp.mpc(rng.uniform(-1, 1), rng.uniform(-1, 1))
            M = A.T * A
        basis = kernel_basis(M, cfg)
        assert len(basis) == 1
        with mp.workprec(cfg.workbits()):
            assert vec_norm(mat_vec(M, basis[0])) < 1e-20

    def test_residual_bound(self, cfg):
        rng = random.Random(9)
        with mp.workprec(cfg.workbits()):
            M = mp.matrix(3, 6)
            for i in range(3):
                for j in range(6):
                    M[i, j] = mp.mpc(rng.uniform(-1, 1), rng.uniform(-1, 1))
        basis = kernel_basis(M, cfg)
        assert len(basis) == 3
        with mp.workprec(cfg.workbits()):
            for v in basis:
                assert vec_norm(mat_vec(M, v)) <= cfg.tol_rel * 10


class TestPrecisionConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            PrecisionConfig(bits=32)
        with pytest.raises(ValueError):
            PrecisionConfig(tol_rel=0)
        with pytest.raises(ValueError):
            PrecisionConfig(max_retries=0)

    def test_deterministic_roots(self, cfg):
        f = rand_unipoly(random.Random(1), 9)
        r1 = roots_univariate(f, cfg)
        r2 = roots_univariate(f, cfg)
        assert all(a == b for a, b in zip(r1, r2))
