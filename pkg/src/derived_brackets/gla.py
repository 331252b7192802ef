"""Finite-dimensional graded Lie algebras given by structure constants.

Structure constants are stored only for basis pairs (i, j) with i <= j; the
reversed entry is produced by the graded antisymmetry sign, so inconsistent
tables cannot be entered.  Validation (degree additivity, antisymmetry on the
even diagonal, graded Jacobi) is report-based, never exception-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .graded import GradedSpace, HomElt, as_fraction


@dataclass(frozen=True)
class Violation:
    kind: str  # "degree" | "antisymmetry" | "jacobi" | "differential"
    where: tuple[str, ...]
    residual: str

    def __str__(self) -> str:
        return f"{self.kind} violated at {self.where}: residual {self.residual}"


@dataclass(frozen=True)
class GlaReport:
    ok: bool
    violations: tuple[Violation, ...] = ()

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"kind": v.kind, "where": list(v.where), "residual": v.residual}
                for v in self.violations
            ],
        }


class StructureGLA:
    """Graded Lie algebra on a finite graded basis, defined by a table
    (i, j) -> [b_i, b_j] for i <= j in basis order.

    Reversed entries are folded in through the antisymmetry sign, so the
    stored table cannot be antisymmetry-inconsistent; loaders may attach
    ``input_conflicts`` describing contradictions found in raw input, which
    :func:`verify_gla` then reports."""

    input_conflicts: tuple = ()

    def __init__(self, space: GradedSpace, table: dict[tuple[str, str], HomElt]):
        self.space = space
        index = {name: k for k, name in enumerate(space.names())}
        self._index = index
        stored: dict[tuple[str, str], HomElt] = {}
        for (left, right), value in table.items():
            if left not in index or right not in index:
                raise KeyError(f"bracket entry uses unknown basis name ({left}, {right})")
            if value.space != space:
                raise ValueError("bracket value lives in a different space")
            if index[left] > index[right]:
                # normalize to i <= j: [b_i, b_j] = -(-1)^{|b_i||b_j|} [b_j, b_i]
                dl = space.degree_of(left)
                dr = space.degree_of(right)
                key = (right, left)
                value = value.scale(-(Fraction(-1) ** ((dl * dr) % 2)))
                stored[key] = stored.get(key, space.zero()) + value
            else:
                stored[(left, right)] = stored.get((left, right), space.zero()) + value
        self.table = {k: v for k, v in stored.items() if not v.is_zero()}

    # -- basics --------------------------------------------------------------

    def zero(self) -> HomElt:
        return self.space.zero()

    def gen(self, name: str, coef=1) -> HomElt:
        return self.space.gen(name, coef)

    def degree(self, x: HomElt) -> int | None:
        return x.degree()

    def basis_elements(self) -> list[HomElt]:
        return [self.space.gen(n) for n in self.space.names()]

    def _pair_bracket(self, left: str, right: str) -> HomElt:
        i, j = self._index[left], self._index[right]
        if i <= j:
            return self.table.get((left, right), self.space.zero())
        dl = self.space.degree_of(left)
        dr = self.space.degree_of(right)
        base = self.table.get((right, left), self.space.zero())
        sign = -(Fraction(-1) ** ((dl * dr) % 2))
        return base.scale(sign)

    def bracket(self, x: HomElt, y: HomElt) -> HomElt:
        """Bilinear extension of the structure-constant table."""
        if x.space != self.space or y.space != self.space:
            raise ValueError("bracket arguments belong to a different algebra")
        out = self.space.zero()
        for ln, lc in x.terms.items():
            for rn, rc in y.terms.items():
                base = self._pair_bracket(ln, rn)
                if not base.is_zero():
                    out = out + base.scale(lc * rc)
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, StructureGLA)
            and self.space == other.space
            and self.table == other.table
        )

    def __hash__(self) -> int:
        return hash((self.space, frozenset(self.table.keys())))


def verify_gla(algebra: StructureGLA) -> GlaReport:
    """Check degree additivity, graded antisymmetry (even diagonal) and graded
    Jacobi on all basis pairs/triples.  Bilinearity extends the axioms."""
    space = algebra.space
    violations: list[Violation] = []
    names = space.names()

    for ln in names:
        for rn in names:
            value = algebra._pair_bracket(ln, rn)
            if value.is_zero():
                continue
            expected = space.degree_of(ln) + space.degree_of(rn)
            for mono in value.terms:
                if space.degree_of(mono) != expected:
                    violations.append(
                        Violation("degree", (ln, rn), repr(value))
                    )
                    break

    # the stored table covers i <= j; the only independent antisymmetry check
    # is the diagonal in even degree, where [b, b] = -[b, b] forces zero
    for name in names:
        if space.degree_of(name) % 2 == 0:
            diag = algebra._pair_bracket(name, name)
            if not diag.is_zero():
                violations.append(Violation("antisymmetry", (name, name), repr(diag)))

    violations.extend(getattr(algebra, "input_conflicts", ()))

    for an in names:
        da = space.degree_of(an)
        a = space.gen(an)
        for bn in names:
            db = space.degree_of(bn)
            b = space.gen(bn)
            for cn in names:
                c = space.gen(cn)
                lhs = algebra.bracket(a, algebra.bracket(b, c))
                rhs = algebra.bracket(algebra.bracket(a, b), c) + algebra.bracket(
                    b, algebra.bracket(a, c)
                ).scale(Fraction(-1) ** ((da * db) % 2))
                residual = lhs - rhs
                if not residual.is_zero():
                    violations.append(Violation("jacobi", (an, bn, cn), repr(residual)))

    return GlaReport(ok=not violations, violations=tuple(violations))


@dataclass(frozen=True)
class LinearMap:
    """A degree-homogeneous linear map given on the basis of a GradedSpace."""

    space: GradedSpace
    images: dict[str, HomElt] = field(default_factory=dict)
    degree_shift: int = 0

    def __call__(self, x: HomElt) -> HomElt:
        if x.space != self.space:
            raise ValueError("argument belongs to a different space")
        out = self.space.zero()
        for name, coef in x.terms.items():
            img = self.images.get(name)
            if img is not None:
                out = out + img.scale(coef)
        return out

    def compose(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(
            self.space,
            {n: self(img) for n, img in other.images.items()},
            self.degree_shift + other.degree_shift,
        )

    def is_zero(self) -> bool:
        return all(img.is_zero() for img in self.images.values())


def adjoint(algebra: StructureGLA, delta: HomElt) -> LinearMap:
    """The inner derivation D = [delta, .] for a homogeneous degree-1 delta.

    D o D = (1/2) [ [delta, delta], . ], so D squares to zero exactly when
    [delta, delta] = 0.
    """
    if not delta.is_zero() and delta.degree() != 1:
        raise ValueError("adjoint requires a homogeneous element of degree 1")
    if not delta.is_homogeneous():
        raise ValueError("adjoint requires a homogeneous element")
    images = {
        name: algebra.bracket(delta, algebra.gen(name))
        for name in algebra.space.names()
    }
    return LinearMap(algebra.space, images, degree_shift=1)


@dataclass(frozen=True)
class DGLA:
    """A graded Lie algebra with a homological degree-1 derivation."""

    algebra: StructureGLA
    differential: LinearMap

    def verify(self) -> GlaReport:
        base = verify_gla(self.algebra)
        violations = list(base.violations)
        d = self.differential
        space = self.algebra.space
        for name in space.names():
            img = d(space.gen(name))
            if img.is_zero():
                continue
            for mono in img.terms:
                if space.degree_of(mono) != space.degree_of(name) + 1:
                    violations.append(Violation("differential", (name,), repr(img)))
                    break
        for name in space.names():
            dd = d(d(space.gen(name)))
            if not dd.is_zero():
                violations.append(Violation("differential", ("d^2", name), repr(dd)))
        for ln in space.names():
            for rn in space.names():
                a, b = space.gen(ln), space.gen(rn)
                lhs = d(self.algebra.bracket(a, b))
                rhs = self.algebra.bracket(d(a), b) + self.algebra.bracket(
                    a, d(b)
                ).scale(Fraction(-1) ** (space.degree_of(ln) % 2))
                if not (lhs - rhs).is_zero():
                    violations.append(
                        Violation("differential", ("leibniz", ln, rn), repr(lhs - rhs))
                    )
        return GlaReport(ok=not violations, violations=tuple(violations))


# -- JSON interchange ---------------------------------------------------------
#
# { "basis": [{"name": .., "degree": ..}, ..],
#   "brackets": [{"left": .., "right": ..,
#                 "result": [{"coef_num": .., "coef_den": .., "basis": ..}, ..]}, ..] }
# Unlisted pairs default to zero.


def element_to_json(x: HomElt) -> list[dict]:
    return [
        {"coef_num": c.numerator, "coef_den": c.denominator, "basis": n}
        for n, c in sorted(x.terms.items())
    ]


def element_from_json(space: GradedSpace, data: list[dict]) -> HomElt:
    terms: dict[str, Fraction] = {}
    for item in data:
        coef = Fraction(int(item["coef_num"]), int(item.get("coef_den", 1)))
        name = item["basis"]
        terms[name] = terms.get(name, Fraction(0)) + coef
    return HomElt(space, terms)


def gla_to_json(algebra: StructureGLA) -> dict:
    return {
        "basis": [{"name": n, "degree": d} for n, d in algebra.space.basis],
        "brackets": [
            {"left": l, "right": r, "result": element_to_json(v)}
            for (l, r), v in sorted(algebra.table.items())
        ],
    }


def gla_from_json(data: dict) -> StructureGLA:
    space = GradedSpace.of((b["name"], int(b["degree"])) for b in data["basis"])
    raw: dict[tuple[str, str], HomElt] = {}
    for entry in data.get("brackets", []):
        key = (entry["left"], entry["right"])
        value = element_from_json(space, entry["result"])
        if key in raw:
            value = value + raw[key]
        raw[key] = value

    # a file listing both orders of a pair must list them consistently; the
    # folded table cannot represent the contradiction, so detect and record it
    conflicts: list[Violation] = []
    table: dict[tuple[str, str], HomElt] = {}
    order = {name: k for k, name in enumerate(space.names())}
    handled: set[tuple[str, str]] = set()
    for (left, right), value in raw.items():
        lo, hi = sorted((left, right), key=lambda n: order[n])
        if (lo, hi) in handled:
            continue
        handled.add((lo, hi))
        reverse = (right, left)
        if left != right and reverse in raw:
            dl = space.degree_of(left)
            dr = space.degree_of(right)
            expected = value.scale(-(Fraction(-1) ** ((dl * dr) % 2)))
            if raw[reverse] != expected:
                conflicts.append(
                    Violation("antisymmetry", reverse, repr(raw[reverse] - expected))
                )
            table[(left, right)] = value  # the first-listed order wins
        else:
            table[(left, right)] = value

    algebra = StructureGLA(space, table)
    algebra.input_conflicts = tuple(conflicts)
    return algebra


def load_gla(path: str) -> StructureGLA:
    with open(path, "r", encoding="utf-8") as fh:
        return gla_from_json(json.load(fh))


def save_gla(algebra: StructureGLA, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(gla_to_json(algebra), fh, indent=2, sort_keys=True)
        fh.write("\n")


def sample_gla() -> StructureGLA:
    """The two-generator algebra with [h, e] = e (h in degree 0, e in degree 1)."""
    space = GradedSpace.of([("h", 0), ("e", 1)])
    return StructureGLA(space, {("h", "e"): space.gen("e")})
