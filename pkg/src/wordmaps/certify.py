"""Surjectivity certificates for word maps on SU(n).

A certificate records a change of basis of the free group (a sequence of
elementary Nielsen moves plus a choice of which new generator carries ``t``)
under which the word's polynomial is nonzero, together with the exact set of
orders ``m`` whose primitive roots of unity the polynomial kills. The word map
is then surjective on SU(n) for every ``n`` with no divisor in that set.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from . import __version__
from .freegroup import BasisMap, Generator, Word, commutator, parse, render, substitute
from .laurent import LaurentPoly, RootAnalysis, analyze_roots
from .metabelian import (
    Affine,
    affine_image,
    derived_class,
    in_derived,
    p_poly,
)

XY = ("x", "y")


class Classification(str, Enum):
    NOT_IN_F1 = "NotInF1"
    IN_F1_NOT_F2 = "InF1NotF2"
    IN_F2 = "InF2"


class Status(str, Enum):
    ALL_N = "AllN"
    BAD_SET = "BadSet"
    INAPPLICABLE = "Inapplicable"


class OrderedBasis(str, Enum):
    FIRST_SECOND = "FirstSecond"
    SECOND_FIRST = "SecondFirst"


class SearchExhausted(RuntimeError):
    """The guaranteed-termination loop hit its configured cap."""


class CertificateError(ValueError):
    """A certificate failed to parse or does not check out."""


@dataclass(frozen=True)
class NielsenMove:
    """Elementary change of the current basis ``(x, y)``.

    ``SwapAB``: ``(y, x)``; ``InvertA``: ``(x^-1, y)``; ``InvertB``:
    ``(x, y^-1)``; ``RightMultA(q)``: ``(x y^q, y)``.
    """

    kind: str
    q: int | None = None

    KINDS = ("SwapAB", "InvertA", "InvertB", "RightMultA")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown move {self.kind!r}")
        if (self.kind == "RightMultA") != (self.q is not None):
            raise ValueError("q is required for RightMultA and only for it")
        if self.q == 0:
            raise ValueError("RightMultA needs q != 0")

    def undo_map(self) -> BasisMap:
        """Old basis elements written in the new ones."""
        A, B = Word.gen(Generator.A), Word.gen(Generator.B)
        if self.kind == "SwapAB":
            return BasisMap(B, A)
        if self.kind == "InvertA":
            return BasisMap(~A, B)
        if self.kind == "InvertB":
            return BasisMap(A, ~B)
        return BasisMap(A * Word.gen(Generator.B, -self.q), B)

    def forward_map(self) -> BasisMap:
        """New basis elements written in the old ones."""
        A, B = Word.gen(Generator.A), Word.gen(Generator.B)
        if self.kind == "RightMultA":
            return BasisMap(A * Word.gen(Generator.B, self.q), B)
        return self.undo_map()

    def to_json(self) -> dict:
        return {"kind": self.kind} if self.q is None else {"kind": self.kind, "q": self.q}

    @classmethod
    def from_json(cls, d: dict) -> "NielsenMove":
        return cls(d["kind"], d.get("q"))

    def __str__(self) -> str:
        return self.kind if self.q is None else f"{self.kind}({self.q})"


SWAP = NielsenMove("SwapAB")
INVERT_A = NielsenMove("InvertA")
INVERT_B = NielsenMove("InvertB")


def back_substitution(moves: Sequence[NielsenMove], ordering: OrderedBasis) -> BasisMap:
    """Original ``a, b`` as words in the final ordered basis (``A`` carries ``t``)."""
    back = BasisMap.identity()
    for mv in moves:
        back = back.then(mv.undo_map())
    if ordering == OrderedBasis.SECOND_FIRST:
        back = back.then(BasisMap.swap())
    return back


def new_basis(moves: Sequence[NielsenMove], ordering: OrderedBasis) -> tuple[Word, Word]:
    """The final ordered basis as words in the original ``a, b``."""
    x, y = Word.gen(Generator.A), Word.gen(Generator.B)
    for mv in moves:
        x, y = (substitute(w, BasisMap(x, y)) for w in (mv.forward_map().image_a,
                                                         mv.forward_map().image_b))
    return (x, y) if ordering == OrderedBasis.FIRST_SECOND else (y, x)


def classify(w: Word) -> Classification:
    if not in_derived(w, 1):
        return Classification.NOT_IN_F1
    if in_derived(w, 2):
        return Classification.IN_F2
    return Classification.IN_F1_NOT_F2


@dataclass(frozen=True)
class Certificate:
    word: Word
    classification: Classification
    moves: tuple[NielsenMove, ...]
    ordered_basis: OrderedBasis
    back_substitution: BasisMap
    polynomial: LaurentPoly
    analysis: RootAnalysis | None
    status: Status
    tool_version: str = field(default=__version__)

    @property
    def bad_set(self) -> frozenset[int]:
        return self.analysis.bad_set if self.analysis else frozenset()

    def covers(self, n: int) -> bool:
        """Whether the certificate proves surjectivity on SU(n)."""
        if self.status == Status.INAPPLICABLE:
            return False
        if n < 2 or self.analysis is None:
            return True
        return not any(n % m == 0 for m in self.analysis.bad_set)

    def describe_n(self) -> str:
        if self.status == Status.INAPPLICABLE:
            return "none (method inapplicable)"
        if self.analysis is None:
            return "all n >= 2"
        return self.analysis.describe()

    def to_dict(self) -> dict:
        a = self.analysis
        return {
            "word": render(self.word),
            "classification": self.classification.value,
            "moves": [m.to_json() for m in self.moves],
            "ordered_basis": self.ordered_basis.value,
            "back_substitution": [render(self.back_substitution.image_a, XY),
                                  render(self.back_substitution.image_b, XY)],
            "polynomial": {str(k): str(v) for k, v in self.polynomial.items()},
            "bad_set": sorted(self.bad_set),
            "span": a.span if a else 0,
            "lpf_bound": a.lpf_bound if a else 2,
            "status": self.status.value,
            "tool_version": self.tool_version,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict, verify: bool = True) -> "Certificate":
        try:
            word = parse(d["word"])
            moves = tuple(NielsenMove.from_json(m) for m in d["moves"])
            ordering = OrderedBasis(d["ordered_basis"])
            back = BasisMap(*(parse(s, XY) for s in d["back_substitution"]))
            poly = LaurentPoly({int(k): int(v) for k, v in d["polynomial"].items()})
            classification = Classification(d["classification"])
            status = Status(d["status"])
            analysis = None
            if poly:
                analysis = RootAnalysis(frozenset(int(m) for m in d["bad_set"]),
                                        poly.eval_at_one() == 0, int(d["span"]),
                                        int(d["lpf_bound"]))
            cert = cls(word, classification, moves, ordering, back, poly, analysis,
                       status, d.get("tool_version", __version__))
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateError(f"malformed certificate: {exc}") from exc
        if verify:
            verify_certificate(cert)
        return cert

    @classmethod
    def from_json(cls, text: str, verify: bool = True) -> "Certificate":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(d, verify=verify)


def verify_certificate(cert: Certificate) -> None:
    """Recompute everything a certificate claims; raise :class:`CertificateError` on mismatch."""
    def fail(msg: str):
        raise CertificateError(msg)

    cls_ = classify(cert.word)
    if cls_ != cert.classification:
        fail(f"classification is {cls_.value}, certificate says {cert.classification.value}")
    if back_substitution(cert.moves, cert.ordered_basis) != cert.back_substitution:
        fail("back substitution does not match the recorded moves")
    if cls_ == Classification.IN_F2:
        if cert.status != Status.INAPPLICABLE:
            fail("words in F'' cannot be certified")
        return
    if cls_ == Classification.NOT_IN_F1:
        if cert.status != Status.ALL_N or cert.polynomial:
            fail("words outside F' carry status AllN and no polynomial")
        return
    p = p_poly(cert.word, cert.back_substitution)
    if p != cert.polynomial:
        fail(f"polynomial recomputes to {p}, certificate says {cert.polynomial}")
    if not p:
        fail("polynomial is zero")
    analysis = analyze_roots(p)
    if analysis != cert.analysis:
        fail(f"root analysis recomputes to {analysis}")
    expected = Status.ALL_N if not analysis.bad_set else Status.BAD_SET
    if cert.status != expected:
        fail(f"status should be {expected.value}")


def _make(w: Word, cls_: Classification, moves: Sequence[NielsenMove],
          ordering: OrderedBasis) -> Certificate:
    back = back_substitution(moves, ordering)
    if cls_ != Classification.IN_F1_NOT_F2:
        status = Status.ALL_N if cls_ == Classification.NOT_IN_F1 else Status.INAPPLICABLE
        return Certificate(w, cls_, tuple(moves), ordering, back, LaurentPoly(), None, status)
    p = p_poly(w, back)
    analysis = analyze_roots(p)
    status = Status.ALL_N if not analysis.bad_set else Status.BAD_SET
    return Certificate(w, cls_, tuple(moves), ordering, back, p, analysis, status)


# --- sign normalization ---------------------------------------------------

def normalize_signs(w: Word) -> tuple[Word, list[NielsenMove]]:
    """Invert generators so the class has its largest ``|n|`` at negative ``n``
    and, among those terms, a positive largest ``m``."""
    if classify(w) != Classification.IN_F1_NOT_F2:
        raise ValueError("normalize_signs needs a word in F' \\ F''")
    moves: list[NielsenMove] = []
    cls_ = derived_class(w)
    top = max(abs(n) for n, _ in cls_.coeffs)
    # tie-break on (sign of n, m): a negative n attaining the max wins
    if not any(n == -top for n, _ in cls_.coeffs):
        moves.append(INVERT_A)
    cur = w
    for mv in moves:
        cur = substitute(cur, mv.undo_map())
    cls_ = derived_class(cur)
    m_max = max(m for n, m in cls_.coeffs if n == -top)
    if m_max < 0:
        moves.append(INVERT_B)
        cur = substitute(cur, INVERT_B.undo_map())
    return cur, moves


# --- basis search ---------------------------------------------------------

def _rank(analysis: RootAnalysis, index: int) -> tuple:
    return (bool(analysis.bad_set), len(analysis.bad_set), analysis.span, index)


def _affine_pair(back: BasisMap) -> tuple[Affine, Affine]:
    return affine_image(back.image_a), affine_image(back.image_b)


def _eval_candidate(w: Word, back: BasisMap) -> LaurentPoly:
    result = affine_image(w, _affine_pair(back))
    return result.trans


def _score_batch(args: tuple[Word, list[BasisMap]]) -> list[tuple[LaurentPoly, RootAnalysis | None]]:
    w, backs = args
    out = []
    for back in backs:
        p = _eval_candidate(w, back)
        out.append((p, analyze_roots(p) if p else None))
    return out


def _move_alphabet(max_q: int) -> list[NielsenMove]:
    moves = [SWAP, INVERT_A, INVERT_B]
    for q in range(1, max_q + 1):
        moves += [NielsenMove("RightMultA", q), NielsenMove("RightMultA", -q)]
    return moves


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("WORDMAP_THREADS", "1")))
    except ValueError:
        return 1


STAGE0 = (
    ((), OrderedBasis.FIRST_SECOND),
    ((), OrderedBasis.SECOND_FIRST),
    ((INVERT_A,), OrderedBasis.FIRST_SECOND),
    ((INVERT_B,), OrderedBasis.SECOND_FIRST),
)


def search_basis(w: Word, max_q: int = 16, max_depth: int = 3,
                 hard_cap_q: int = 512) -> Certificate:
    """Find a basis in which the polynomial of ``w`` is nonzero.

    Stage 0 tries the identity basis in both orders; if none of those has an
    empty bad set, stage 1 runs a breadth-first search over move sequences,
    stopping at the first depth that yields an empty bad set. The best
    candidate seen wins. If every candidate had a zero polynomial, stage 2
    normalizes signs and walks ``a -> a b^q`` for ``q = 1, 2, ...`` with ``b``
    carrying ``t``, which must terminate for words outside ``F''``.
    """
    if min(max_q, max_depth, hard_cap_q) < 1:
        raise ValueError("search bounds must be positive")
    cls_ = classify(w)
    if cls_ != Classification.IN_F1_NOT_F2:
        return _make(w, cls_, (), OrderedBasis.FIRST_SECOND)

    best: tuple | None = None  # (rank, moves, ordering)
    index = 0

    def consider(moves, ordering, p, analysis):
        nonlocal best, index
        if p:
            key = _rank(analysis, index)
            if best is None or key < best[0]:
                best = (key, tuple(moves), ordering)
        index += 1

    for moves, ordering in STAGE0:
        back = back_substitution(moves, ordering)
        p = _eval_candidate(w, back)
        consider(moves, ordering, p, analyze_roots(p) if p else None)
    if best is not None and not best[0][0]:
        return _make(w, cls_, best[1], best[2])

    alphabet = _move_alphabet(max_q)
    seen = {back_substitution(m, o) for m, o in STAGE0}
    frontier: list[tuple[NielsenMove, ...]] = [()]
    workers = _threads()
    for _depth in range(max_depth):
        level: list[tuple[tuple[NielsenMove, ...], OrderedBasis, BasisMap]] = []
        next_frontier = []
        for seq in frontier:
            base = back_substitution(seq, OrderedBasis.FIRST_SECOND)
            for mv in alphabet:
                if seq and _redundant(seq[-1], mv):
                    continue
                new_seq = seq + (mv,)
                back_fs = base.then(mv.undo_map())
                next_frontier.append(new_seq)
                for ordering, back in ((OrderedBasis.FIRST_SECOND, back_fs),
                                       (OrderedBasis.SECOND_FIRST, back_fs.then(BasisMap.swap()))):
                    if back in seen:
                        continue
                    seen.add(back)
                    level.append((new_seq, ordering, back))
        scored = _score_level(w, [b for _, _, b in level], workers)
        for (seq, ordering, _), (p, analysis) in zip(level, scored):
            consider(seq, ordering, p, analysis)
        if best is not None and not best[0][0]:
            break
        frontier = next_frontier
    if best is not None:
        return _make(w, cls_, best[1], best[2])

    return fallback_basis(w, hard_cap_q)


def fallback_basis(w: Word, hard_cap_q: int = 512) -> Certificate:
    """Normalize signs, then try ``a -> a b^q`` for ``q = 1, 2, ...`` with ``b`` carrying ``t``.

    For a word outside ``F''`` the polynomial in this basis is eventually
    nonzero; ``hard_cap_q`` bounds the walk.
    """
    sign_moves = normalize_signs(w)[1]
    for q in range(1, hard_cap_q + 1):
        moves = tuple(sign_moves) + (NielsenMove("RightMultA", q),)
        back = back_substitution(moves, OrderedBasis.SECOND_FIRST)
        if _eval_candidate(w, back):
            return _make(w, Classification.IN_F1_NOT_F2, moves, OrderedBasis.SECOND_FIRST)
    raise SearchExhausted(f"no nonzero polynomial for q <= {hard_cap_q}")


def _redundant(prev: NielsenMove, mv: NielsenMove) -> bool:
    if prev.kind == mv.kind and prev.kind in ("SwapAB", "InvertA", "InvertB"):
        return True
    return prev.kind == mv.kind == "RightMultA"


def _score_level(w: Word, backs: list[BasisMap], workers: int):
    if workers <= 1 or len(backs) < 256:
        return _score_batch((w, backs))
    size = -(-len(backs) // workers)
    chunks = [(w, backs[i:i + size]) for i in range(0, len(backs), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_score_batch, chunks))
    return [item for part in parts for item in part]


def certify(w: Word, max_q: int = 16, max_depth: int = 3, hard_cap_q: int = 512) -> Certificate:
    cert = search_basis(w, max_q, max_depth, hard_cap_q)
    verify_certificate(cert)
    return cert


# --- Engel words ----------------------------------------------------------

def engel(k: int) -> Word:
    """``e_0 = a``, ``e_k = [e_(k-1), b]``."""
    if k < 0:
        raise ValueError(f"Engel index must be >= 0, got {k}")
    w = Word.gen(Generator.A)
    b = Word.gen(Generator.B)
    for _ in range(k):
        w = commutator(w, b)
    return w


def engel_polynomial(k: int) -> LaurentPoly:
    return (1 - LaurentPoly.monomial(1)) ** k


def engel_certificate(k: int) -> Certificate:
    """Certificate for ``e_k`` in the swapped basis ``(b, a)``.

    The polynomial is ``(1 - t)^k``; it is recomputed from the word and
    checked against the closed form.
    """
    if k < 1:
        raise ValueError(f"Engel certificates need k >= 1, got {k}")
    cert = _make(engel(k), Classification.IN_F1_NOT_F2, (SWAP,), OrderedBasis.FIRST_SECOND)
    closed = engel_polynomial(k)
    if cert.polynomial != closed:
        raise ArithmeticError(f"p(e_{k}) = {cert.polynomial}, expected {closed}")
    return cert


def certify_many(words: Iterable[Word], **bounds) -> list[Certificate]:
    return [certify(w, **bounds) for w in words]
