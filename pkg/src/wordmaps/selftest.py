"""Built-in consistency checks run by ``wordmaps selftest``."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator

from .certify import certify, engel_certificate
from .freegroup import (
    BasisMap,
    Generator,
    Word,
    commutator,
    conjugate,
    goto_rewrite_neg,
    goto_rewrite_pos,
    parse,
    random_derived_word,
    random_word,
    substitute,
)
from .laurent import LaurentPoly, cyclotomic, divisors
from .metabelian import affine_poly, derived_class, fox_derivatives, fox_poly, in_derived
from .witness import find_witness, haar_random_su

A = Word.gen(Generator.A)
B = Word.gen(Generator.B)
C = A * B
C_IS_AB = BasisMap(C, B)


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""


def _c(k: int) -> Word:
    return C ** k


def _b(k: int) -> Word:
    return B ** k


def _prod(*ws: Word) -> Word:
    out = Word()
    for w in ws:
        out = out * w
    return out


def _conjugation_identities(bound: int = 8) -> Iterator[tuple[str, Word, Word]]:
    for n in range(-bound, bound + 1):
        for m in range(-bound, bound + 1):
            if n == 0 or m == 0:
                continue
            k = commutator
            yield (f"a.[c^n,b^m] n={n} m={m}", conjugate(A, k(_c(n), _b(m))),
                   _prod(k(C, _b(-1)), k(_b(-1), _c(n + 1)), k(_c(n + 1), _b(m - 1)), k(_b(m - 1), C)))
            yield (f"a^-1.[c^n,b^m] n={n} m={m}", conjugate(~A, k(_c(n), _b(m))),
                   _prod(k(B, _c(n - 1)), k(_c(n - 1), _b(m + 1)), k(_b(m + 1), _c(-1)), k(_c(-1), B)))
            yield (f"a.[b^m,c^n] n={n} m={m}", conjugate(A, k(_b(m), _c(n))),
                   _prod(k(C, _b(m - 1)), k(_b(m - 1), _c(n + 1)), k(_c(n + 1), _b(-1)), k(_b(-1), C)))
            yield (f"a^-1.[b^m,c^n] n={n} m={m}", conjugate(~A, k(_b(m), _c(n))),
                   _prod(k(B, _c(-1)), k(_c(-1), _b(m + 1)), k(_b(m + 1), _c(n - 1)), k(_c(n - 1), B)))


def _rewrite_identities(bound: int = 8) -> Iterator[tuple[str, Word, Word]]:
    for n in range(1, bound + 1):
        for m in range(-bound, bound + 1):
            yield (f"[a^n,b^m] n={n} m={m}", substitute(goto_rewrite_pos(n, m), C_IS_AB),
                   commutator(A ** n, B ** m))
            yield (f"[a^-n,b^m] n={n} m={m}", substitute(goto_rewrite_neg(n, m), C_IS_AB),
                   commutator(A ** -n, B ** m))


def _commutator_rules(rng: random.Random, count: int = 200) -> Iterator[tuple[str, Word, Word]]:
    for i in range(count):
        x, y, z = (random_word(rng, 12) for _ in range(3))
        yield (f"deriv-1 #{i}", commutator(x, y * z), commutator(x, y) * conjugate(y, commutator(x, z)))
        yield (f"deriv-2 #{i}", commutator(x * y, z), conjugate(x, commutator(y, z)) * commutator(x, z))


def _run_pairs(name: str, pairs: Iterator[tuple[str, Word, Word]]) -> CheckResult:
    count = 0
    for label, lhs, rhs in pairs:
        count += 1
        if lhs != rhs:
            return CheckResult(name, False, count, f"{label}: {lhs} != {rhs}")
    return CheckResult(name, True, count)


def check_symbolic(seed: int) -> list[CheckResult]:
    rng = random.Random(seed)
    return [
        _run_pairs("conjugating [c^n,b^m] and [b^m,c^n] by a and a^-1", _conjugation_identities()),
        _run_pairs("[a^n,b^m] and [a^-n,b^m] rewritten over c = ab", _rewrite_identities()),
        _run_pairs("commutator expansion rules", _commutator_rules(rng)),
    ]


def check_oracles(seed: int, count: int = 300) -> list[CheckResult]:
    rng = random.Random(seed)
    routes = CheckResult("three polynomial routes agree", True, 0)
    magnus = CheckResult("class vanishes iff Fox derivatives vanish", True, 0)
    for _ in range(count):
        w = random_derived_word(rng, 40)
        routes.cases += 1
        p1 = derived_class(w).to_poly()
        p2, p3 = affine_poly(w), fox_poly(w)
        if routes.passed and not p1 == p2 == p3:
            routes.passed, routes.detail = False, f"{w}: {p1} / {p2} / {p3}"
        for v in (w, commutator(w, random_derived_word(rng, 12))):
            magnus.cases += 1
            fox_zero = not any(fox_derivatives(v))
            if magnus.passed and (not derived_class(v)) != fox_zero:
                magnus.passed, magnus.detail = False, str(v)
    cyclo = CheckResult("product of Phi_d over d | m is t^m - 1", True, 0)
    for m in range(1, 61):
        cyclo.cases += 1
        prod = LaurentPoly.constant(1)
        for d in divisors(m):
            prod = prod * cyclotomic(d)
        if prod != LaurentPoly({m: 1, 0: -1}):
            cyclo.passed, cyclo.detail = False, f"m={m}"
            break
    return [routes, magnus, cyclo]


SWEEP_WORDS = ("[a,b]", "[a,b]^2", "a^2 b a^-1 b a^-1 b^-2",
               "[a,b][a,b^-1][a^-1,b][a^-1,b^-1]")


def check_witnesses(seed: int, tol: float, dims=range(2, 9), targets: int = 10) -> list[CheckResult]:
    certs = [certify(parse(s)) for s in SWEEP_WORDS] + [engel_certificate(k) for k in range(1, 5)]
    result = CheckResult(f"witness residuals <= {tol:g}", True, 0)
    worst = 0.0
    for ci, cert in enumerate(certs):
        if in_derived(cert.word, 2):
            result.passed, result.detail = False, f"{cert.word} classified in F''"
            break
        for n in dims:
            if not cert.covers(n):
                continue
            for s in range(targets):
                g = haar_random_su(n, [seed, ci, n, s])
                r = find_witness(cert, n, g).residual
                result.cases += 1
                worst = max(worst, r)
                if r > tol and result.passed:
                    result.passed = False
                    result.detail = f"{cert.word}, n={n}, target {s}: residual {r:.3e}"
    if result.passed:
        result.detail = f"max residual {worst:.2e}"
    return [result]


def run(seed: int = 0, tol: float = 1e-8, quick: bool = False,
        report: Callable[[CheckResult], None] | None = None) -> list[CheckResult]:
    suites = [lambda: check_symbolic(seed)]
    if not quick:
        suites += [lambda: check_oracles(seed), lambda: check_witnesses(seed, tol)]
    results = []
    for suite in suites:
        for res in suite():
            results.append(res)
            if report:
                report(res)
    return results
