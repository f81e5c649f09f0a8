"""The metabelian quotient F'/F'' and the polynomial attached to a word.

``F'`` is free on the commutators ``[a^n, b^m]`` (``nm != 0``), so ``F'/F''`` is
free abelian on their classes ``xi(n, m)``. The polynomial of a word in ``F'``
is the image of its class under ``xi(n, m) -> m (t^n - 1)``.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .freegroup import BasisMap, Generator, Word, exponent_sums, substitute
from .laurent import LaurentPoly


class NotInDerivedSubgroup(ValueError):
    """The word has nonzero exponent sums, so it is not in ``F'``."""


class InconsistentRoutes(RuntimeError):
    """Two independent computations of the same polynomial disagreed."""


def _accumulate(out: dict, key, value: int) -> None:
    s = out.get(key, 0) + value
    if s:
        out[key] = s
    else:
        out.pop(key, None)


class DerivedClass:
    """Finitely supported integer combination of the ``xi(n, m)``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[tuple[int, int], int] | None = None):
        c: dict[tuple[int, int], int] = {}
        for (n, m), v in (coeffs or {}).items():
            if n == 0 or m == 0:
                continue
            _accumulate(c, (int(n), int(m)), int(v))
        self._c = c

    @classmethod
    def xi(cls, n: int, m: int, coeff: int = 1) -> "DerivedClass":
        return cls({(n, m): coeff})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int, int]]) -> "DerivedClass":
        """Sum of ``coeff * xi(n, m)`` over ``(n, m, coeff)``; zero indices vanish."""
        c: dict[tuple[int, int], int] = {}
        for n, m, v in terms:
            if n and m:
                _accumulate(c, (n, m), v)
        out = cls()
        out._c = c
        return out

    @property
    def coeffs(self) -> dict[tuple[int, int], int]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._c
        if not isinstance(other, DerivedClass):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __add__(self, other: "DerivedClass") -> "DerivedClass":
        out = DerivedClass()
        out._c = dict(self._c)
        for k, v in other._c.items():
            _accumulate(out._c, k, v)
        return out

    def __neg__(self) -> "DerivedClass":
        out = DerivedClass()
        out._c = {k: -v for k, v in self._c.items()}
        return out

    def __sub__(self, other: "DerivedClass") -> "DerivedClass":
        return self + (-other)

    def __rmul__(self, k: int) -> "DerivedClass":
        out = DerivedClass()
        out._c = {key: k * v for key, v in self._c.items()} if k else {}
        return out

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for (n, m), c in self.items():
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{abs(c)}·"
            parts.append((sign, f"{mag}ξ({n},{m})"))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"DerivedClass({self})"

    def to_poly(self) -> LaurentPoly:
        """Image under ``xi(n, m) -> m (t^n - 1)``."""
        out: dict[int, int] = {}
        for (n, m), c in self._c.items():
            _accumulate(out, n, c * m)
            _accumulate(out, 0, -c * m)
        return LaurentPoly(out)


def act_generator(g: Generator, sign: int, cls: DerivedClass) -> DerivedClass:
    """Conjugation action of ``g^sign`` on a class.

    ``a^s . xi(n, m) = xi(n + s, m) - xi(s, m)`` and
    ``b^s . xi(n, m) = xi(n, m + s) - xi(n, s)`` for ``s = +-1``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    terms = []
    for (n, m), c in cls._c.items():
        if g == Generator.A:
            terms += [(n + sign, m, c), (sign, m, -c)]
        else:
            terms += [(n, m + sign, c), (n, sign, -c)]
    return DerivedClass.from_terms(terms)


def derived_class(w: Word) -> DerivedClass:
    """Class of ``w`` in ``F'/F''``.

    Reidemeister-Schreier scan over the transversal ``a^i b^j``: a syllable
    ``a^e`` read at coset ``(i, j)`` contributes ``a^i . (xi(1, j))`` summed over
    its letters, which telescopes to ``xi(i, j) - xi(i + e, j)``; ``b``
    syllables contribute nothing.
    """
    sa, sb = exponent_sums(w)
    if sa or sb:
        raise NotInDerivedSubgroup(f"exponent sums ({sa}, {sb}) are not zero")
    terms = []
    i = j = 0
    for g, e in w.syllables:
        if g == Generator.A:
            if j:
                terms += [(i, j, 1), (i + e, j, -1)]
            i += e
        else:
            j += e
    return DerivedClass.from_terms(terms)


# --- Fox calculus ---------------------------------------------------------

class BivariatePoly:
    """Element of ``Z[x^+-1, y^+-1]`` stored as ``{(i, j): coeff}``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[tuple[int, int], int] | None = None):
        c: dict[tuple[int, int], int] = {}
        for k, v in (coeffs or {}).items():
            _accumulate(c, k, v)
        self._c = c

    @property
    def coeffs(self) -> dict[tuple[int, int], int]:
        return dict(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._c
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def specialize_y(self, y: int = 1) -> LaurentPoly:
        """Set ``y = 1`` (the only specialization needed) and rename ``x`` to ``t``."""
        if y != 1:
            raise ValueError("only y = 1 is supported")
        out: dict[int, int] = {}
        for (i, _), c in self._c.items():
            _accumulate(out, i, c)
        return LaurentPoly(out)

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for (i, j), c in sorted(self._c.items(), reverse=True):
            mono = "".join(
                s if e == 1 else f"{s}^{e}" for s, e in (("x", i), ("y", j)) if e
            )
            mag = abs(c)
            body = mono if mono and mag == 1 else f"{mag}{mono}"
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"BivariatePoly({self})"


def fox_derivatives(w: Word) -> tuple[BivariatePoly, BivariatePoly]:
    """Abelianized left Fox derivatives ``(D_a w, D_b w)``."""
    da: dict[tuple[int, int], int] = {}
    db: dict[tuple[int, int], int] = {}
    i = j = 0
    for g, e in w.syllables:
        target = da if g == Generator.A else db
        steps = range(e) if e > 0 else range(e, 0)
        sign = 1 if e > 0 else -1
        for k in steps:
            key = (i + k, j) if g == Generator.A else (i, j + k)
            _accumulate(target, key, sign)
        if g == Generator.A:
            i += e
        else:
            j += e
    return BivariatePoly(da), BivariatePoly(db)


def in_derived(w: Word, level: int) -> bool:
    """Membership in ``F'`` (level 1) or ``F''`` (level 2)."""
    if level not in (1, 2):
        raise ValueError("level must be 1 or 2")
    if exponent_sums(w) != (0, 0):
        return False
    if level == 1:
        return True
    da, db = fox_derivatives(w)
    return not da and not db


# --- the polynomial -------------------------------------------------------

class Affine:
    """The map ``f -> t^shift * f + trans`` on ``Z[t, t^-1]``.

    Composition ``(s, p)(r, q) = (s + r, p + t^s q)``. Sending the t-carrying
    generator to ``(1, 0)`` and the other to ``(0, 1)`` maps ``[x^n, y^m]`` to
    ``(0, m (t^n - 1))``, so the translation part of a word in ``F'`` is its
    polynomial.
    """

    __slots__ = ("shift", "trans")

    def __init__(self, shift: int = 0, trans: LaurentPoly | None = None):
        self.shift = shift
        self.trans = trans if trans is not None else LaurentPoly()

    def __mul__(self, other: "Affine") -> "Affine":
        return Affine(self.shift + other.shift, self.trans + other.trans.shift(self.shift))

    def inverse(self) -> "Affine":
        return Affine(-self.shift, -self.trans.shift(-self.shift))

    def __pow__(self, k: int) -> "Affine":
        if k < 0:
            return self.inverse() ** -k
        if self.shift == 0:
            return Affine(0, self.trans * k)
        # trans * (1 + t^s + ... + t^(s(k-1)))
        geometric = LaurentPoly({self.shift * r: 1 for r in range(k)})
        return Affine(self.shift * k, self.trans * geometric)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Affine) and (self.shift, self.trans) == (other.shift, other.trans)

    def __repr__(self) -> str:
        return f"Affine({self.shift}, {self.trans})"


_T_CARRIER = Affine(1, LaurentPoly())
_OTHER = Affine(0, LaurentPoly.constant(1))


def affine_image(w: Word, images: tuple[Affine, Affine] = (_T_CARRIER, _OTHER)) -> Affine:
    out = Affine()
    for g, e in w.syllables:
        out = out * images[g] ** e
    return out


def affine_poly(w: Word, basis: BasisMap | None = None) -> LaurentPoly:
    """Polynomial by direct affine evaluation, without rewriting ``w``."""
    images = (_T_CARRIER, _OTHER)
    if basis is not None:
        images = (affine_image(basis.image_a), affine_image(basis.image_b))
    result = affine_image(w, images)
    if result.shift != 0:
        raise NotInDerivedSubgroup("word is not in the derived subgroup")
    return result.trans


def p_poly(w: Word, basis: BasisMap | None = None) -> LaurentPoly:
    """Polynomial of ``w`` in a new ordered basis.

    ``basis`` is the back-substitution: ``image_a``/``image_b`` express the old
    generators as words in the new ones, the new generator ``A`` carrying
    ``t``. ``None`` means the identity basis. Computed twice, through the
    derived class and through affine evaluation; a mismatch raises
    :class:`InconsistentRoutes`.
    """
    if exponent_sums(w) != (0, 0):
        raise NotInDerivedSubgroup(f"exponent sums {exponent_sums(w)} are not zero")
    rewritten = w if basis is None else substitute(w, basis)
    via_class = derived_class(rewritten).to_poly()
    via_affine = affine_poly(w, basis)
    if via_class != via_affine:
        raise InconsistentRoutes(f"class route {via_class} != affine route {via_affine}")
    return via_class


def fox_poly(w: Word) -> LaurentPoly:
    """Third route: ``D_b(w)`` at ``x = t, y = 1``."""
    return fox_derivatives(w)[1].specialize_y(1)
