"""Explicit preimages under word maps on SU(n).

For a certified word the target ``g`` is diagonalized as ``z d z*``; the
torus element ``d`` is lifted to the Cartan subalgebra, and the linear problem
``p(P) h = log d`` is solved on the zero-sum subspace, where ``P`` is the
cyclic coordinate shift induced by conjugating with the n-cycle ``sigma``.
Then ``(sigma, exp h)`` evaluated through the certificate's back-substitution
gives a pair mapping to ``d``, and conjugating by ``z`` gives ``g``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .certify import Certificate, Classification
from .freegroup import Generator, Word, exponent_sums
from .laurent import LaurentPoly, bad_divisors

UNITARY_TOL = 1e-10
DET_TOL = 1e-10
TORUS_DET_TOL = 1e-8
SINGULAR_TOL = 1e-12


class NotSpecialUnitary(ValueError):
    pass


class NotCertified(ValueError):
    """The certificate does not cover the requested dimension."""

    def __init__(self, n: int, divisors: list[int]):
        self.n = n
        self.divisors = divisors
        super().__init__(f"n={n} is not certified: bad divisor(s) {divisors}")


@dataclass(frozen=True)
class WitnessResult:
    u: np.ndarray
    v: np.ndarray
    residual: float


def check_su(g: np.ndarray, unitary_tol: float = UNITARY_TOL, det_tol: float = DET_TOL) -> np.ndarray:
    g = np.asarray(g, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise NotSpecialUnitary(f"expected a square matrix, got shape {g.shape}")
    n = g.shape[0]
    err = np.linalg.norm(g.conj().T @ g - np.eye(n))
    if err > unitary_tol:
        raise NotSpecialUnitary(f"not unitary: ||U*U - I|| = {err:.3e}")
    det_err = abs(np.linalg.det(g) - 1)
    if det_err > det_tol:
        raise NotSpecialUnitary(f"determinant off by {det_err:.3e}")
    return g


def build_sigma(n: int) -> np.ndarray:
    """The n-cycle ``e_i -> e_(i+1)`` as a matrix, scaled into SU(n) when ``n`` is even."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    sigma = np.roll(np.eye(n), 1, axis=0).astype(complex)
    if n % 2 == 0:
        sigma *= np.exp(1j * np.pi / n)
    return sigma


def shift_action(h: np.ndarray, power: int = 1) -> np.ndarray:
    """Coordinates of ``sigma^power diag(h) sigma^-power``."""
    return np.roll(h, power)


def torus_log(d: np.ndarray) -> np.ndarray:
    """Zero-sum real ``theta`` with ``exp(i theta) = d``."""
    d = np.asarray(d, dtype=complex)
    if np.any(np.abs(np.abs(d) - 1) > UNITARY_TOL):
        raise NotSpecialUnitary("diagonal entries must have unit modulus")
    if abs(np.prod(d) - 1) > TORUS_DET_TOL:
        raise NotSpecialUnitary("diagonal entries must multiply to 1")
    theta = np.angle(d)
    theta[theta <= -np.pi] = np.pi
    k = int(round(theta.sum() / (2 * np.pi)))
    if k:
        s = 1 if k > 0 else -1
        # stable sort keeps the lowest index first among ties
        order = np.argsort(-s * theta, kind="stable")
        theta[order[: abs(k)]] -= 2 * np.pi * s
    return theta


def _p_at_roots(p: LaurentPoly, n: int) -> np.ndarray:
    """``p`` at the eigenvalue of the shift on Fourier mode ``l``, for each ``l``."""
    # roll by +1 multiplies numpy's DFT coefficient l by exp(-2 pi i l / n)
    return np.array([p.eval_unit_circle(n, (-l) % n) for l in range(n)])


def solve_cartan(p: LaurentPoly, gbar: np.ndarray) -> np.ndarray:
    """Solve ``sum_j p_j P^j h = gbar`` for zero-sum ``h`` by diagonalizing the shift."""
    gbar = np.asarray(gbar, dtype=float)
    n = gbar.shape[0]
    if n == 1:
        return np.zeros(1)
    values = _p_at_roots(p, n)
    if np.min(np.abs(values[1:])) < SINGULAR_TOL:
        raise ValueError("polynomial vanishes at an n-th root of unity; n is not certified")
    g_hat = np.fft.fft(gbar)
    h_hat = np.zeros(n, dtype=complex)
    h_hat[1:] = g_hat[1:] / values[1:]
    h = np.fft.ifft(h_hat).real
    return h - h.mean()


def apply_poly(p: LaurentPoly, h: np.ndarray) -> np.ndarray:
    """``sum_j p_j P^j h`` computed directly."""
    out = np.zeros_like(h, dtype=float)
    for j, c in p.items():
        out += c * shift_action(h, j)
    return out


def _mpow(u: np.ndarray, e: int) -> np.ndarray:
    return np.linalg.matrix_power(u if e > 0 else u.conj().T, abs(e))


def evaluate_word(w: Word, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``w(u, v)`` by multiplying syllable powers left to right."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    out = np.eye(u.shape[0], dtype=complex)
    for g, e in w.syllables:
        out = out @ _mpow(u if g == Generator.A else v, e)
    return out


def residual(w: Word, u: np.ndarray, v: np.ndarray, g: np.ndarray) -> float:
    return float(np.linalg.norm(evaluate_word(w, u, v) - g))


def diagonalize(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unitary ``z`` and eigenvalues ``d`` with ``g = z diag(d) z*``.

    Eigenvalues come in descending principal argument; each eigenvector's
    first non-negligible entry is made real and positive.
    """
    t, z = scipy.linalg.schur(np.asarray(g, dtype=complex), output="complex")
    d = np.diag(t).copy()
    order = np.argsort(-np.angle(d), kind="stable")
    z = z[:, order]
    d = d[order]
    for j in range(z.shape[1]):
        col = z[:, j]
        lead = np.flatnonzero(np.abs(col) > 1e-8)[0]
        z[:, j] = col * (abs(col[lead]) / col[lead])
    return z, d


def _trivial(n: int) -> WitnessResult:
    one = np.eye(n, dtype=complex)
    return WitnessResult(one, one, 0.0)


def witness_from_diagonal(cert: Certificate, z: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pair mapping to ``z diag(d) z*`` for a word in ``F'`` with a certificate."""
    n = len(d)
    gbar = torus_log(d)
    hbar = solve_cartan(cert.polynomial, gbar)
    h = np.diag(np.exp(1j * hbar))
    sigma = build_sigma(n)
    back = cert.back_substitution
    u0 = evaluate_word(back.image_a, sigma, h)
    v0 = evaluate_word(back.image_b, sigma, h)
    zs = z.conj().T
    return z @ u0 @ zs, z @ v0 @ zs


def witness_derived(cert: Certificate, n: int, g: np.ndarray) -> WitnessResult:
    if cert.classification != Classification.IN_F1_NOT_F2:
        raise ValueError(f"certificate is for a {cert.classification.value} word")
    g = check_su(g)
    if g.shape[0] != n:
        raise ValueError(f"target is {g.shape[0]}x{g.shape[0]}, expected n={n}")
    if n == 1:
        return _trivial(1)
    if not cert.covers(n):
        raise NotCertified(n, bad_divisors(cert.analysis, n))
    z, d = diagonalize(g)
    u, v = witness_from_diagonal(cert, z, d)
    return WitnessResult(u, v, residual(cert.word, u, v, g))


def witness_nonderived(w: Word, n: int, g: np.ndarray) -> WitnessResult:
    """Pair ``(h, 1)`` (or ``(1, h)``) with ``h^k = g``, ``k`` an exponent sum of ``w``."""
    sa, sb = exponent_sums(w)
    if sa == 0 and sb == 0:
        raise ValueError("word lies in the derived subgroup")
    g = check_su(g)
    if g.shape[0] != n:
        raise ValueError(f"target is {g.shape[0]}x{g.shape[0]}, expected n={n}")
    if n == 1:
        return _trivial(1)
    k = sa if sa else sb
    z, d = diagonalize(g)
    h = z @ np.diag(np.exp(1j * torus_log(d) / k)) @ z.conj().T
    one = np.eye(n, dtype=complex)
    u, v = (h, one) if sa else (one, h)
    return WitnessResult(u, v, residual(w, u, v, g))


def find_witness(cert: Certificate, n: int, g: np.ndarray) -> WitnessResult:
    if cert.classification == Classification.NOT_IN_F1:
        return witness_nonderived(cert.word, n, g)
    if cert.classification == Classification.IN_F2:
        raise NotCertified(n, [])
    return witness_derived(cert, n, g)


def haar_random_su(n: int, seed: int | np.random.Generator | None = None) -> np.ndarray:
    """Haar-random element of SU(n), deterministic for an integer seed."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        return np.ones((1, 1), dtype=complex)
    rng = np.random.default_rng(seed)
    x = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(x)
    diag = np.diag(r)
    q = q * (diag / np.abs(diag))
    return q / np.linalg.det(q) ** (1 / n)
