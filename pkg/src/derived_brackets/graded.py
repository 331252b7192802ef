"""Graded-vector-space substrate: Koszul signs, unshuffles, degree shifts,
and sparse exact-rational elements of a finitely generated graded space.

All scalars are ``fractions.Fraction`` (always reduced, positive denominator);
no floating point appears anywhere in this package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

ONE = Fraction(1)
MINUS_ONE = Fraction(-1)
ZERO = Fraction(0)


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction or 'p/q' string to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return Fraction(int(value[0]), int(value[1]))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class Permutation:
    """A permutation of {1..n}, stored as the tuple of 1-based images."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a bijection of 1..{len(images)}: {images}")
        self.images = images

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation{self.images}"

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for pos, img in enumerate(self.images, start=1):
            inv[img - 1] = pos
        return Permutation(inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """(self . other)(i) = self(other(i))."""
        if len(self) != len(other):
            raise ValueError("size mismatch in permutation composition")
        return Permutation(self(other(i)) for i in range(1, len(self) + 1))

    def sign(self) -> int:
        seen = [False] * len(self.images)
        sign = 1
        for start in range(len(self.images)):
            if seen[start]:
                continue
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = self.images[j] - 1
                length += 1
            if length % 2 == 0:
                sign = -sign
        return sign


def identity_permutation(n: int) -> Permutation:
    return Permutation(range(1, n + 1))


def koszul_sign(sigma: Permutation, degrees: list[int] | tuple[int, ...]) -> Fraction:
    """Koszul sign eps(sigma; v_1..v_n) for elements of the given degrees.

    The transposition of two adjacent elements u, w contributes (-1)^{|u||w|};
    the sign of an arbitrary permutation is the product over any decomposition
    into adjacent transpositions (computed here by bubble sort, O(n^2)).
    """
    if len(degrees) != len(sigma):
        raise ValueError("degrees/permutation size mismatch")
    seq = list(sigma.images)
    sign = 1
    # Bubble-sort seq to the identity; swapping entries i, j transposes v_i, v_j.
    for k in range(len(seq)):
        for pos in range(len(seq) - 1 - k):
            if seq[pos] > seq[pos + 1]:
                di = degrees[seq[pos] - 1]
                dj = degrees[seq[pos + 1] - 1]
                if (di * dj) % 2 == 1:
                    sign = -sign
                seq[pos], seq[pos + 1] = seq[pos + 1], seq[pos]
    return Fraction(sign)


def chi_sign(sigma: Permutation, degrees: list[int] | tuple[int, ...]) -> Fraction:
    """chi(sigma) = eps(sigma) * sign(sigma)."""
    return koszul_sign(sigma, degrees) * sigma.sign()


def unshuffles(i: int, n: int) -> list[Permutation]:
    """All (i, n-i)-unshuffles: sigma(1)<...<sigma(i) and sigma(i+1)<...<sigma(n)."""
    if i < 0 or n < 0 or i > n:
        raise ValueError(f"invalid unshuffle type ({i}, {n - i})")
    out = []
    universe = range(1, n + 1)
    for front in itertools.combinations(universe, i):
        back = tuple(x for x in universe if x not in front)
        out.append(Permutation(front + back))
    return out


def decalage_sign(degrees: list[int] | tuple[int, ...]) -> Fraction:
    """Degree-shift sign (-1)^{(n-1)|v_1| + (n-2)|v_2| + ... + |v_{n-1}|}.

    ``degrees`` are the degrees before the shift.  This is the sign relating
    an antisymmetric degree-(2-n) bracket on V to the symmetric degree-1
    bracket on V[1].
    """
    n = len(degrees)
    exponent = sum((n - idx) * d for idx, d in enumerate(degrees, start=1))
    return MINUS_ONE if exponent % 2 else ONE


@dataclass(frozen=True)
class GradedSpace:
    """A finite graded basis: ordered (name, degree) pairs with unique names."""

    basis: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.basis]
        if len(set(names)) != len(names):
            raise ValueError("duplicate basis names")
        object.__setattr__(self, "_degrees", {n: d for n, d in self.basis})

    @staticmethod
    def of(pairs: Iterable[tuple[str, int]]) -> "GradedSpace":
        return GradedSpace(tuple((str(n), int(d)) for n, d in pairs))

    def degree_of(self, name: str) -> int:
        try:
            return self._degrees[name]
        except KeyError:
            raise KeyError(f"unknown basis monomial {name!r}") from None

    def names(self) -> list[str]:
        return [n for n, _ in self.basis]

    def zero(self) -> "HomElt":
        return HomElt(self, {})

    def gen(self, name: str, coef=1) -> "HomElt":
        self.degree_of(name)
        return HomElt(self, {name: as_fraction(coef)})

    def element(self, terms: Mapping[str, object]) -> "HomElt":
        return HomElt(self, {k: as_fraction(v) for k, v in terms.items()})


class HomElt:
    """Sparse rational linear combination of basis monomials of a GradedSpace.

    Never stores zero coefficients.  Supports +, -, scalar multiplication by
    exact rationals, and homogeneity queries.
    """

    __slots__ = ("space", "terms")

    def __init__(self, space: GradedSpace, terms: Mapping[str, Fraction]):
        clean = {}
        for name, coef in terms.items():
            space.degree_of(name)
            coef = as_fraction(coef)
            if coef != 0:
                clean[name] = coef
        self.space = space
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        degs = {self.space.degree_of(n) for n in self.terms}
        return len(degs) <= 1

    def degree(self) -> int | None:
        """Degree if homogeneous and nonzero, else None."""
        degs = {self.space.degree_of(n) for n in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def components(self) -> list[tuple[int, "HomElt"]]:
        by_degree: dict[int, dict[str, Fraction]] = {}
        for name, coef in self.terms.items():
            by_degree.setdefault(self.space.degree_of(name), {})[name] = coef
        return [(d, HomElt(self.space, t)) for d, t in sorted(by_degree.items())]

    def coefficient(self, name: str) -> Fraction:
        return self.terms.get(name, ZERO)

    def _require_same_space(self, other: "HomElt"):
        if self.space is not other.space and self.space != other.space:
            raise ValueError("elements live in different graded spaces")

    def __add__(self, other: "HomElt") -> "HomElt":
        self._require_same_space(other)
        terms = dict(self.terms)
        for name, coef in other.terms.items():
            new = terms.get(name, ZERO) + coef
            if new == 0:
                terms.pop(name, None)
            else:
                terms[name] = new
        return HomElt(self.space, terms)

    def __sub__(self, other: "HomElt") -> "HomElt":
        return self + (-other)

    def __neg__(self) -> "HomElt":
        return HomElt(self.space, {n: -c for n, c in self.terms.items()})

    def scale(self, scalar) -> "HomElt":
        scalar = as_fraction(scalar)
        if scalar == 0:
            return HomElt(self.space, {})
        return HomElt(self.space, {n: c * scalar for n, c in self.terms.items()})

    def __mul__(self, scalar) -> "HomElt":
        return self.scale(scalar)

    def __rmul__(self, scalar) -> "HomElt":
        return self.scale(scalar)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HomElt)
            and self.space == other.space
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.space, frozenset(self.terms.items())))

    def __iter__(self) -> Iterator[tuple[str, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for name, coef in sorted(self.terms.items()):
            if coef == 1:
                parts.append(name)
            elif coef == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{coef}*{name}")
        return " + ".join(parts).replace("+ -", "- ")
