import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import derived_words, words
from wordmaps.certify import certify, engel_certificate
from wordmaps.freegroup import exponent_sums, parse
from wordmaps.laurent import LaurentPoly
from wordmaps.witness import (
    NotCertified,
    NotSpecialUnitary,
    apply_poly,
    build_sigma,
    check_su,
    diagonalize,
    evaluate_word,
    find_witness,
    haar_random_su,
    residual,
    shift_action,
    solve_cartan,
    torus_log,
    witness_from_diagonal,
    witness_nonderived,
)

t = LaurentPoly.monomial(1)
PROP_WORD = "[a,b][a,b^-1][a^-1,b][a^-1,b^-1]"


class TestSigma:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 8])
    def test_special_unitary(self, n):
        s = build_sigma(n)
        check_su(s)
        assert abs(np.linalg.det(s) - 1) < 1e-12

    def test_maps_basis_forward(self):
        s = build_sigma(3)
        assert np.allclose(s @ np.eye(3)[:, 0], np.eye(3)[:, 1])

    @pytest.mark.parametrize("n", range(2, 9))
    def test_conjugation_is_shift(self, n):
        h = np.random.default_rng(n).standard_normal(n)
        s = build_sigma(n)
        for k in (1, 2, -1):
            sk = np.linalg.matrix_power(s, k) if k > 0 else np.linalg.matrix_power(s.conj().T, -k)
            lhs = sk @ np.diag(h) @ sk.conj().T
            assert np.allclose(lhs, np.diag(shift_action(h, k)), atol=1e-12)

    def test_rejects_small(self):
        with pytest.raises(ValueError):
            build_sigma(1)


class TestTorusLog:
    def test_identity(self):
        assert np.allclose(torus_log(np.ones(4)), 0)

    def test_needs_shift(self):
        # angles 2.5 + 2.5 + (2pi - 5) lift to a sum of 2pi before adjusting
        d = np.exp(1j * np.array([2.5, 2.5, -5.0]))
        th = torus_log(d)
        assert abs(th.sum()) < 1e-12
        assert np.allclose(np.exp(1j * th), d)

    def test_minus_one_pair(self):
        th = torus_log(np.array([-1, -1], dtype=complex))
        assert abs(th.sum()) < 1e-12 and np.allclose(np.exp(1j * th), -1)

    @settings(deadline=None)
    @given(st.integers(2, 12), st.integers(0, 2 ** 32 - 1))
    def test_random(self, n, seed):
        d = np.linalg.eigvals(haar_random_su(n, seed))
        th = torus_log(d)
        assert abs(th.sum()) < 1e-9
        assert np.allclose(np.exp(1j * th), d, atol=1e-10)
        assert np.all(np.abs(th) <= 2 * np.pi)

    def test_rejects_off_torus(self):
        with pytest.raises(NotSpecialUnitary):
            torus_log(np.array([1j, 1j]))
        with pytest.raises(NotSpecialUnitary):
            torus_log(np.array([2.0, 0.5]))


class TestSolveCartan:
    def test_two_by_two(self):
        phi = 0.7
        h = solve_cartan(t - 1, np.array([phi, -phi]))
        assert np.allclose(h, [-phi / 2, phi / 2])

    def test_three(self):
        p = t ** 2 - 3 * t + 3 - t ** -1
        g = np.array([0.3, -1.1, 0.8])
        h = solve_cartan(p, g)
        assert np.linalg.norm(apply_poly(p, h) - g) <= 1e-10
        assert abs(h.sum()) < 1e-12

    @settings(deadline=None)
    @given(st.integers(2, 16), st.integers(0, 2 ** 32 - 1))
    def test_engel(self, n, seed):
        p = (1 - t) ** 3
        g = np.random.default_rng(seed).standard_normal(n)
        g -= g.mean()
        assert np.allclose(apply_poly(p, solve_cartan(p, g)), g, atol=1e-8)

    def test_singular(self):
        with pytest.raises(ValueError):
            solve_cartan(t ** 2 - 1, np.array([1.0, -1.0, 1.0, -1.0]))


class TestEvaluate:
    def test_commutator(self):
        u, v = haar_random_su(3, 1), haar_random_su(3, 2)
        expected = u @ v @ u.conj().T @ v.conj().T
        assert np.allclose(evaluate_word(parse("[a,b]"), u, v), expected)

    def test_identity_word(self):
        assert np.allclose(evaluate_word(parse("e"), haar_random_su(2, 0), haar_random_su(2, 1)), np.eye(2))

    def test_mismatch(self):
        with pytest.raises(ValueError):
            evaluate_word(parse("a"), np.eye(2), np.eye(3))

    @settings(deadline=None, max_examples=50)
    @given(words(6, 3), words(6, 3))
    def test_homomorphism(self, x, y):
        u, v = haar_random_su(3, 5), haar_random_su(3, 6)
        lhs = evaluate_word(x * y, u, v)
        rhs = evaluate_word(x, u, v) @ evaluate_word(y, u, v)
        assert np.allclose(lhs, rhs, atol=1e-10)

    @settings(deadline=None, max_examples=50)
    @given(derived_words(20), st.sampled_from([2, 4, 6]))
    def test_scalars_cancel_in_derived_words(self, w, n):
        u, v = haar_random_su(n, 7), haar_random_su(n, 8)
        c = np.exp(1j * np.pi / n)
        assert np.allclose(evaluate_word(w, c * u, v), evaluate_word(w, u, v), atol=1e-9)


class TestDiagonalize:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_reconstructs(self, n):
        g = haar_random_su(n, 40 + n)
        z, d = diagonalize(g)
        assert np.allclose(z @ np.diag(d) @ z.conj().T, g, atol=1e-12)
        assert np.allclose(z.conj().T @ z, np.eye(n), atol=1e-12)
        assert np.all(np.diff(np.angle(d)) <= 1e-12)


class TestWitness:
    @pytest.mark.parametrize("text", ["[a,b]", "[a,b]^2", "a^2 b a^-1 b a^-1 b^-2", PROP_WORD,
                                      "[a,b][a,b^-1]"])
    @pytest.mark.parametrize("n", range(2, 9))
    def test_sweep(self, text, n):
        cert = certify(parse(text))
        for s in range(3):
            g = haar_random_su(n, [n, s])
            res = find_witness(cert, n, g)
            assert res.residual <= 1e-8
            check_su(res.u, 1e-9, 1e-9)
            check_su(res.v, 1e-9, 1e-9)

    def test_four_commutators_n3_many_targets(self):
        cert = certify(parse(PROP_WORD))
        rng = np.random.default_rng(2024)
        worst = max(find_witness(cert, 3, haar_random_su(3, rng)).residual for _ in range(100))
        assert worst <= 1e-8

    @pytest.mark.parametrize("k", range(1, 5))
    def test_engel(self, k):
        cert = engel_certificate(k)
        for n in (2, 5, 8):
            assert find_witness(cert, n, haar_random_su(n, k * n)).residual <= 1e-8

    @pytest.mark.parametrize("n", range(2, 17))
    def test_commutator_large_n(self, n):
        res = find_witness(certify(parse("[a,b]")), n, haar_random_su(n, n))
        assert res.residual <= 1e-8

    def test_residual_recomputes(self):
        cert = certify(parse(PROP_WORD))
        g = haar_random_su(5, 3)
        res = find_witness(cert, 5, g)
        assert abs(residual(cert.word, res.u, res.v, g) - res.residual) <= 1e-12

    def test_identity_and_central_targets(self):
        cert = certify(parse("[a,b]"))
        for n in (2, 3, 4):
            assert find_witness(cert, n, np.eye(n, dtype=complex)).residual <= 1e-8
            c = np.exp(2j * np.pi / n) * np.eye(n)
            assert find_witness(cert, n, c).residual <= 1e-8

    def test_conjugation_by_fixed_basis(self):
        cert = certify(parse("[a,b]^2"))
        d = np.linalg.eigvals(haar_random_su(4, 9))
        z = haar_random_su(4, 10)
        u0, v0 = witness_from_diagonal(cert, np.eye(4), d)
        u, v = witness_from_diagonal(cert, z, d)
        assert np.allclose(evaluate_word(cert.word, u0, v0), np.diag(d), atol=1e-10)
        assert np.allclose(u, z @ u0 @ z.conj().T, atol=1e-12)
        assert np.allclose(evaluate_word(cert.word, u, v), z @ np.diag(d) @ z.conj().T, atol=1e-10)

    def test_refuses_uncertified(self):
        cert = certify(parse("[a^2,b^2]"))
        with pytest.raises(NotCertified) as exc:
            find_witness(cert, 4, haar_random_su(4, 0))
        assert exc.value.divisors == [2]
        assert find_witness(cert, 3, haar_random_su(3, 0)).residual <= 1e-8

    def test_refuses_second_derived(self):
        with pytest.raises(NotCertified):
            find_witness(certify(parse("[[a,b],[a^2,b^2]]")), 3, np.eye(3))

    def test_rejects_non_su_target(self):
        cert = certify(parse("[a,b]"))
        with pytest.raises(NotSpecialUnitary):
            find_witness(cert, 2, np.diag([1j, 1j]))
        with pytest.raises(ValueError):
            find_witness(cert, 3, np.eye(2))

    def test_n_equals_one(self):
        res = find_witness(certify(parse("[a,b]")), 1, np.ones((1, 1)))
        assert res.residual == 0.0


class TestNonDerived:
    @pytest.mark.parametrize("text", ["a", "a^3 b", "b^-2 a b a^-1", "a b^2 a^-1 b^3"])
    @pytest.mark.parametrize("n", range(2, 9))
    def test_roots(self, text, n):
        w = parse(text)
        res = witness_nonderived(w, n, haar_random_su(n, n))
        assert res.residual <= 1e-8
        sa, _ = exponent_sums(w)
        assert np.allclose(res.v if sa else res.u, np.eye(n))

    def test_rejects_derived(self):
        with pytest.raises(ValueError):
            witness_nonderived(parse("[a,b]"), 2, np.eye(2))


class TestHaar:
    def test_deterministic(self):
        assert np.array_equal(haar_random_su(5, 123), haar_random_su(5, 123))
        assert not np.allclose(haar_random_su(5, 123), haar_random_su(5, 124))

    @pytest.mark.parametrize("n", range(1, 10))
    def test_special_unitary(self, n):
        check_su(haar_random_su(n, n))

    def test_n_one(self):
        assert np.array_equal(haar_random_su(1, 0), np.ones((1, 1)))

    def test_trace_moments(self):
        # E|tr g|^2 = 1 for Haar measure on SU(n), n >= 2
        rng = np.random.default_rng(0)
        vals = [abs(np.trace(haar_random_su(3, rng))) ** 2 for _ in range(4000)]
        assert abs(np.mean(vals) - 1) < 0.1
