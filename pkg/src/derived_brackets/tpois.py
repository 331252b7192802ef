"""The twisted-Poisson homotopy algebra on R^m and its gauge geometry.

Carrier: pairs (form part in Omega^{>=1}[3], multivector part in X^*[2]), so a
q-form sits in degree q-3 and an arity-s multivector in degree s-2.  The only
non-vanishing multibrackets are

  a) unary: (H, pi) -> (-dH, 0),
  b) binary on multivectors: {pi1, pi2} = [pi1, pi2] (-1)^{a1+1},
  c) one q-form H with exactly q multivectors (arities a_i >= 1):
     {H, pi_1, .., pi_n} = (-1)^{sum a_i (n-i)} (pi_1^sharp ^..^ pi_n^sharp) H,

every other pattern is zero.  These closed formulas are cross-validated
against the coordinate-model oracle (see qgeom), which is the authority for
all signs.

Maurer-Cartan points are the pairs with dH = 0 and [pi, pi] = 2 wedge3(pi)(H);
the gauge field of a degree -1 direction (B, X) evaluates, by summing the
series over the brackets above, to

    Y^{(B,X)}|_{(H,pi)} = (-dB, [X, pi] + wedge2(pi)(B + i_X H)),

and the infinitesimal generator of the 2-form/affine-diffeomorphism action is
Z^{(B,X)}|_{(H,pi)} = (-d(i_X H + B), wedge2(pi)(B) - [X, pi]) with the exact
correspondence Z^{(B + i_X H, -X)} = Y^{(B,X)} on Maurer-Cartan points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .graded import ZERO, as_fraction
from .linfty import LInftyOne
from .polygeo import (
    Mono,
    PolyForm,
    PolyMultivector,
    contract_form,
    de_rham,
    form,
    multi_sharp,
    mv,
    poly_add,
    poly_diff,
    poly_mul,
    poly_scale,
    schouten,
)

ONE_HALF = Fraction(1, 2)


class TPoisElement:
    """Pair (form part, multivector part); forms must have degree >= 1."""

    __slots__ = ("form_part", "mv_part")

    def __init__(self, form_part: PolyForm, mv_part: PolyMultivector):
        if form_part.dims != mv_part.dims or form_part.dims[1] != 0:
            raise ValueError("both parts must live on the same plain base R^m")
        if 0 in form_part.form_degrees():
            raise ValueError("the form part lives in degrees >= 1")
        self.form_part = form_part
        self.mv_part = mv_part

    @staticmethod
    def zero(m: int) -> "TPoisElement":
        return TPoisElement(PolyForm.zero((m, 0)), PolyMultivector.zero((m, 0)))

    @staticmethod
    def of_form(h: PolyForm) -> "TPoisElement":
        return TPoisElement(h, PolyMultivector.zero(h.dims))

    @staticmethod
    def of_mv(u: PolyMultivector) -> "TPoisElement":
        return TPoisElement(PolyForm.zero(u.dims), u)

    @property
    def dims(self):
        return self.form_part.dims

    def is_zero(self) -> bool:
        return self.form_part.is_zero() and self.mv_part.is_zero()

    def degree(self) -> int | None:
        degs = set()
        for q in self.form_part.form_degrees():
            degs.add(q - 3)
        for (_, w) in self.mv_part.terms:
            degs.add(len(w) - 2)
        if len(degs) == 1:
            return degs.pop()
        return None

    def components(self) -> list[tuple[int, "TPoisElement"]]:
        m = self.dims[0]
        by: dict[int, TPoisElement] = {}
        for q, part in self.form_part.components():
            d = q - 3
            prev = by.get(d, TPoisElement.zero(m))
            by[d] = TPoisElement(prev.form_part + part, prev.mv_part)
        for s, part in self.mv_part.components():
            d = s + 1 - 2  # components() of multivectors reports arity - 1
            prev = by.get(d, TPoisElement.zero(m))
            by[d] = TPoisElement(prev.form_part, prev.mv_part + part)
        return sorted(by.items())

    def __add__(self, other: "TPoisElement") -> "TPoisElement":
        return TPoisElement(self.form_part + other.form_part, self.mv_part + other.mv_part)

    def __sub__(self, other: "TPoisElement") -> "TPoisElement":
        return TPoisElement(self.form_part - other.form_part, self.mv_part - other.mv_part)

    def __neg__(self) -> "TPoisElement":
        return TPoisElement(-self.form_part, -self.mv_part)

    def scale(self, scalar) -> "TPoisElement":
        return TPoisElement(self.form_part.scale(scalar), self.mv_part.scale(scalar))

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TPoisElement)
            and self.form_part == other.form_part
            and self.mv_part == other.mv_part
        )

    def __hash__(self) -> int:
        return hash((self.form_part, self.mv_part))

    def __repr__(self) -> str:
        return f"({self.form_part!r} ; {self.mv_part!r})"


# -- the direct multibrackets -----------------------------------------------------


def _family_c(h: PolyForm, pis: list[PolyMultivector]) -> PolyMultivector:
    """{H, pi_1, .., pi_n} for homogeneous inputs: nonzero only when the form
    degree equals the number of multivector arguments."""
    n = len(pis)
    dims = h.dims
    out = PolyMultivector.zero(dims)
    h_part = h.degree_part(n)
    if h_part.is_zero():
        return out
    arity_lists = [sorted(pi.arities()) for pi in pis]
    for arities in itertools.product(*arity_lists):
        parts = [pi.arity_part(a) for pi, a in zip(pis, arities)]
        if any(a < 1 for a in arities):
            continue  # functions contract to zero
        exponent = sum(a * (n - i) for i, a in enumerate(arities, start=1))
        sign = -1 if exponent % 2 else 1
        value = multi_sharp(parts, h_part)
        if not value.is_zero():
            out = out + value.scale(sign)
    return out


def _family_b(p1: PolyMultivector, p2: PolyMultivector) -> PolyMultivector:
    """{pi1, pi2} = [pi1, pi2] (-1)^{a1 + 1} summed over the arities of pi1."""
    out = PolyMultivector.zero(p1.dims)
    for arity in sorted(p1.arities()):
        sign = 1 if (arity + 1) % 2 == 0 else -1
        value = schouten(p1.arity_part(arity), p2)
        if not value.is_zero():
            out = out + value.scale(sign)
    return out


def tpois_bracket(n: int, args: tuple[TPoisElement, ...]) -> TPoisElement:
    """Multibracket of the twisted-Poisson algebra on a tuple of n elements.

    Arguments may be inhomogeneous; the value is computed multilinearly.
    Vanishing patterns (two or more forms at arity >= 3, three or more
    multivectors with no form, form-degree mismatches) return zero rather
    than raising.
    """
    if len(args) != n or n < 1:
        raise ValueError(f"expected {n} >= 1 arguments")
    m = args[0].dims[0]
    zero = TPoisElement.zero(m)
    for arg in args:
        if arg.dims != (m, 0):
            raise ValueError("ambient space mismatch")
    if n == 1:
        return TPoisElement.of_form(-de_rham(args[0].form_part))
    expanded = []
    for arg in args:
        if arg.is_zero():
            return zero
        if arg.degree() is not None:
            expanded.append([arg])
        else:
            expanded.append([part for _, part in arg.components()])
    total = zero
    for combo in itertools.product(*expanded):
        total = total + _bracket_homogeneous(n, combo)
    return total


def _bracket_homogeneous(n: int, combo: tuple[TPoisElement, ...]) -> TPoisElement:
    """Bracket of homogeneous elements; each slot may still mix a form and a
    multivector constituent of the same degree."""
    m = combo[0].dims[0]
    zero = TPoisElement.zero(m)
    degrees = [e.degree() for e in combo]
    options = []
    for e in combo:
        opts = []
        if not e.form_part.is_zero():
            opts.append(("form", e.form_part))
        if not e.mv_part.is_zero():
            opts.append(("mv", e.mv_part))
        options.append(opts)
    total = zero
    for pattern in itertools.product(*options):
        kinds = [k for k, _ in pattern]
        n_forms = kinds.count("form")
        if n_forms >= 2:
            continue
        if n_forms == 0:
            if n == 2:
                total = total + TPoisElement.of_mv(
                    _family_b(pattern[0][1], pattern[1][1])
                )
            continue
        pos = kinds.index("form")
        h = pattern[pos][1]
        pis = [p for k, p in pattern if k == "mv"]
        # Koszul sign for moving the form to the front of the tuple
        sign = 1
        if degrees[pos] % 2 == 1 and sum(degrees[:pos]) % 2 == 1:
            sign = -1
        value = _family_c(h, pis)
        if not value.is_zero():
            total = total + TPoisElement.of_mv(value.scale(sign))
    return total


def tpois_linfty(m: int, max_relation_arity: int = 5) -> LInftyOne:
    """Handle for the twisted-Poisson algebra on R^m.  Forms on R^m die above
    degree m, so brackets of arity > m+1 vanish and every series is finite."""
    zero = TPoisElement.zero(m)
    bound = max(m + 1, 2)

    def m_eval(k: int, args: tuple) -> TPoisElement:
        if k == 0:
            raise ValueError("the twisted-Poisson algebra is not curved")
        split: list[TPoisElement] = []
        for arg in args:
            if arg.is_zero():
                return zero
            split.append(arg)
        # decompose inhomogeneous arguments (multilinearity)
        expanded = [
            [part for _, part in a.components()] if a.degree() is None else [a]
            for a in split
        ]
        total = zero
        for combo in itertools.product(*expanded):
            total = total + tpois_bracket(k, tuple(combo))
        return total

    return LInftyOne(
        degree=lambda e: e.degree(),
        components=lambda e: e.components(),
        m=m_eval,
        zero=zero,
        curved=False,
        termination_bound=bound,
        max_arity=bound,
        max_relation_arity=max_relation_arity,
        name=f"twisted-poisson-R{m}",
    )


# -- closed forms: MC residual and gauge field --------------------------------------


def wedge2_tilde(pi: PolyMultivector, b: PolyForm) -> PolyMultivector:
    """(1/2) (pi^sharp ^ pi^sharp) applied to a 2-form."""
    return multi_sharp([pi, pi], b).scale(ONE_HALF)


def wedge3_tilde(pi: PolyMultivector, h: PolyForm) -> PolyMultivector:
    """(1/6) (pi^sharp ^ pi^sharp ^ pi^sharp) applied to a 3-form."""
    return multi_sharp([pi, pi, pi], h).scale(Fraction(1, 6))


def tpois_mc_residual(h: PolyForm, pi: PolyMultivector) -> tuple[PolyForm, PolyMultivector]:
    """Closed-form Maurer-Cartan test for a 3-form and a bivector:
    returns (dH, [pi,pi] - 2 wedge3(pi)(H)); the pair (H[3], pi[2]) is
    Maurer-Cartan exactly when both components vanish.

    The series over the multibrackets evaluates to (-dH, -(1/2) of the second
    component); the normalization is pinned by the oracle-equality tests.
    """
    if not h.is_zero() and h.form_degrees() != {3}:
        raise ValueError("expected a 3-form")
    if not pi.is_zero() and pi.arities() != {2}:
        raise ValueError("expected a bivector")
    jac = schouten(pi, pi)
    twist_term = wedge3_tilde(pi, h).scale(2)
    return de_rham(h), jac - twist_term


def is_twisted_poisson(h: PolyForm, pi: PolyMultivector) -> bool:
    dh, residual = tpois_mc_residual(h, pi)
    return dh.is_zero() and residual.is_zero()


def gauge_Y(
    b: PolyForm, x: PolyMultivector, h: PolyForm, pi: PolyMultivector
) -> tuple[PolyForm, PolyMultivector]:
    """Value of the gauge field of the degree -1 direction (B, X) at (H, pi):

        ( -dB , [X, pi] + wedge2(pi)(B + i_X H) ).

    This is the exact sum of the gauge series over the multibrackets (the
    wedge2 argument's sign is fixed by the oracle, see the module docstring).
    """
    moved = b + contract_form(x, h)
    return -de_rham(b), schouten(x, pi) + wedge2_tilde(pi, moved)


# -- e^B graph transform -------------------------------------------------------------

# Matrices are m x m lists of "curve scalars": dict[t_power -> poly dict].
# The static case is the t-degree-0 slice.

Curve = dict[int, dict[Mono, Fraction]]


def _c_zero() -> Curve:
    return {}


def _c_const(poly: dict[Mono, Fraction]) -> Curve:
    return {0: dict(poly)} if poly else {}


def _c_add(a: Curve, b: Curve) -> Curve:
    out = {k: dict(v) for k, v in a.items()}
    for power, poly in b.items():
        merged = poly_add(out.get(power, {}), poly)
        if merged:
            out[power] = merged
        else:
            out.pop(power, None)
    return out


def _c_mul(a: Curve, b: Curve) -> Curve:
    out: Curve = {}
    for pa, qa in a.items():
        for pb, qb in b.items():
            prod = poly_mul(qa, qb)
            if not prod:
                continue
            merged = poly_add(out.get(pa + pb, {}), prod)
            if merged:
                out[pa + pb] = merged
            else:
                out.pop(pa + pb, None)
    return out


def _c_scale(a: Curve, s: Fraction) -> Curve:
    if s == 0:
        return {}
    return {p: poly_scale(q, s) for p, q in a.items()}


def _c_is_zero(a: Curve) -> bool:
    return not a


def _mat_mul(a: list[list[Curve]], b: list[list[Curve]]) -> list[list[Curve]]:
    n = len(a)
    out = [[_c_zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = _c_zero()
            for k in range(n):
                acc = _c_add(acc, _c_mul(a[i][k], b[k][j]))
            out[i][j] = acc
    return out


def _mat_identity(n: int, nvars: int) -> list[list[Curve]]:
    one = {(0,) * nvars: Fraction(1)}
    return [
        [_c_const(one) if i == j else _c_zero() for j in range(n)] for i in range(n)
    ]


def _det(matrix: list[list[Curve]]) -> Curve:
    n = len(matrix)
    total = _c_zero()
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = None
        for i in range(n):
            entry = matrix[i][perm[i]]
            prod = entry if prod is None else _c_mul(prod, entry)
            if _c_is_zero(prod):
                break
        if prod and not _c_is_zero(prod):
            total = _c_add(total, _c_scale(prod, Fraction(sign)))
    return total


def _adjugate(matrix: list[list[Curve]]) -> list[list[Curve]]:
    n = len(matrix)
    if n == 1:
        nvars = None
        for row in matrix:
            for entry in row:
                for poly in entry.values():
                    for mono in poly:
                        nvars = len(mono)
        one = {(0,) * (nvars or 0): Fraction(1)}
        return [[_c_const(one)]]
    out = [[_c_zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [matrix[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            cof = _det(minor)
            if (i + j) % 2:
                cof = _c_scale(cof, Fraction(-1))
            out[j][i] = cof  # adj = transpose of cofactors
    return out


class GraphTransformError(ValueError):
    pass


def _sharp_matrix(pi: PolyMultivector) -> list[list[Curve]]:
    """M[j][b]: the coefficient of d_b in pi^sharp(dx_j)."""
    m = pi.dims[0]
    nvars = m
    out = [[_c_zero() for _ in range(m)] for _ in range(m)]
    for (mono, wedge), coef in pi.terms.items():
        if len(wedge) != 2:
            raise ValueError("sharp matrices are for bivectors")
        a, b = wedge
        out[a][b] = _c_add(out[a][b], _c_const({mono: coef}))
        out[b][a] = _c_add(out[b][a], _c_const({mono: -coef}))
    del nvars
    return out


def _flat_matrix_curve(b_curve: dict[int, PolyForm], m: int) -> list[list[Curve]]:
    """F[j][c]: the coefficient of dx_c in i_{d_j}(B_t) for a 2-form curve."""
    out = [[_c_zero() for _ in range(m)] for _ in range(m)]
    for power, b_form in b_curve.items():
        for (mono, wedge), coef in b_form.terms.items():
            if len(wedge) != 2:
                raise ValueError("flat matrices are for 2-forms")
            a, c = wedge
            out[a][c] = _c_add(out[a][c], {power: {mono: coef}})
            out[c][a] = _c_add(out[c][a], {power: {mono: -coef}})
    return out


def _bivector_from_sharp(matrix: list[list[Curve]], m: int) -> dict[int, PolyMultivector]:
    """Rebuild a bivector curve from its sharp matrix, asserting antisymmetry."""
    by_power: dict[int, dict] = {}
    for j in range(m):
        diag = matrix[j][j]
        if not _c_is_zero(diag):
            raise GraphTransformError("graph transform produced a non-antisymmetric matrix")
        for b in range(j + 1, m):
            upper = matrix[j][b]
            lower = matrix[b][j]
            if not _c_is_zero(_c_add(upper, lower)):
                raise GraphTransformError(
                    "graph transform produced a non-antisymmetric matrix"
                )
            for power, poly in upper.items():
                for mono, coef in poly.items():
                    by_power.setdefault(power, {})[(mono, (j, b))] = coef
    return {
        power: PolyMultivector((m, 0), terms) for power, terms in by_power.items()
    }


def e_b_pi(b: PolyForm, pi: PolyMultivector) -> PolyMultivector:
    """The bivector whose graph is the B-field shear of graph(pi): the unique
    solution of (e^B pi)^sharp = pi^sharp (1 + B^flat pi^sharp)^{-1}.

    Well-defined in the polynomial category only when det(1 + B^flat pi^sharp)
    is a nonzero rational constant; the determinant and inverse are computed
    through the adjugate, and antisymmetry of the result is asserted.
    """
    numerator, det = _graph_transform_curve({0: b}, pi)
    if set(det) - {0}:
        raise GraphTransformError("unexpected t-dependence in a static transform")
    const = det.get(0, {}).get((0,) * pi.dims[0], Fraction(0))
    result = numerator.get(0, PolyMultivector.zero(pi.dims))
    return result.scale(Fraction(1) / const)


def _graph_transform_curve(
    b_curve: dict[int, PolyForm], pi: PolyMultivector
) -> tuple[dict[int, PolyMultivector], Curve]:
    """Numerator curve and scalar determinant of e^{B_t} pi.

    The true transform is numerator / det; the determinant must be free of the
    spatial variables (else the transform leaves the polynomial category) and
    not identically zero (else the sheared graph is not a graph).
    """
    m = pi.dims[0]
    if not pi.is_zero() and pi.arities() != {2}:
        raise ValueError("graph transforms apply to bivectors")
    sharp = _sharp_matrix(pi)
    flat = _flat_matrix_curve(b_curve, m)
    # K[j][c] = sum_b sharp[j][b] flat[b][c];  N = 1 + K acting on covectors
    k_mat = _mat_mul(sharp, flat)
    n_mat = _mat_identity(m, m)
    for i in range(m):
        for j in range(m):
            n_mat[i][j] = _c_add(n_mat[i][j], k_mat[i][j])
    det = _det(n_mat)
    if _c_is_zero(det):
        raise GraphTransformError("sheared graph is not a graph (determinant vanishes)")
    unit_mono = (0,) * m
    for power, poly in det.items():
        if set(poly) - {unit_mono}:
            raise GraphTransformError(
                "graph transform leaves the polynomial category "
                "(determinant depends on the spatial variables)"
            )
    adj = _adjugate(n_mat)
    # rho^sharp = pi^sharp o (N^{-1}); numerator uses the adjugate
    rho = _mat_mul(adj, sharp)
    numerator = _bivector_from_sharp(rho, m)
    return numerator, det


# -- affine diffeomorphisms and the 2-form semidirect action -------------------------


class AffineDiffeo:
    """x -> A x + b with an invertible rational matrix A."""

    __slots__ = ("matrix", "translation")

    def __init__(self, matrix, translation):
        self.matrix = tuple(tuple(as_fraction(e) for e in row) for row in matrix)
        self.translation = tuple(as_fraction(e) for e in translation)
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix) or len(self.translation) != n:
            raise ValueError("inconsistent affine data")
        if _rational_det(self.matrix) == 0:
            raise ValueError("affine map must be invertible")

    @staticmethod
    def identity(m: int) -> "AffineDiffeo":
        return AffineDiffeo(
            [[1 if i == j else 0 for j in range(m)] for i in range(m)], [0] * m
        )

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def inverse(self) -> "AffineDiffeo":
        inv = _rational_inverse(self.matrix)
        trans = tuple(
            -sum(inv[i][j] * self.translation[j] for j in range(self.dim))
            for i in range(self.dim)
        )
        return AffineDiffeo(inv, trans)

    def compose(self, other: "AffineDiffeo") -> "AffineDiffeo":
        """self after other."""
        n = self.dim
        matrix = [
            [sum(self.matrix[i][k] * other.matrix[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
        trans = [
            sum(self.matrix[i][k] * other.translation[k] for k in range(n))
            + self.translation[i]
            for i in range(n)
        ]
        return AffineDiffeo(matrix, trans)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AffineDiffeo)
            and self.matrix == other.matrix
            and self.translation == other.translation
        )

    def _substitute(self, poly: dict[Mono, Fraction], matrix, translation) -> dict[Mono, Fraction]:
        """x_i -> sum_j matrix[i][j] x_j + translation[i] inside a polynomial."""
        m = self.dim
        out: dict[Mono, Fraction] = {}
        for mono, coef in poly.items():
            acc = {(0,) * m: coef}
            for var, e in enumerate(mono):
                if e == 0:
                    continue
                linear = {}
                for j in range(m):
                    if matrix[var][j] != 0:
                        key = tuple(1 if t == j else 0 for t in range(m))
                        linear[key] = matrix[var][j]
                if translation[var] != 0:
                    linear[(0,) * m] = linear.get((0,) * m, ZERO) + translation[var]
                for _ in range(e):
                    acc = poly_mul(acc, linear) if linear else {}
            out = poly_add(out, acc)
        return out

    def pullback_form(self, w: PolyForm) -> PolyForm:
        """phi^* w: coefficients at phi(x), legs dx_i -> sum_j A_ij dx_j."""
        if w.dims != (self.dim, 0):
            raise ValueError("dimension mismatch")
        out = PolyForm.zero(w.dims)
        for (mono, wedge), coef in w.terms.items():
            poly = self._substitute({mono: coef}, self.matrix, self.translation)
            legs = []
            for leg in wedge:
                legs.append(
                    [(self.matrix[leg][j], j) for j in range(self.dim) if self.matrix[leg][j] != 0]
                )
            for mono2, coef2 in poly.items():
                for choice in itertools.product(*legs):
                    scalar = coef2
                    for c, _ in choice:
                        scalar *= c
                    out = out + form(w.dims, scalar, mono2, tuple(j for _, j in choice))
        return out

    def pushforward_mv(self, u: PolyMultivector) -> PolyMultivector:
        """phi_* u: coefficients at phi^{-1}(x), legs d_i -> sum_j A_ji d_j."""
        if u.dims != (self.dim, 0):
            raise ValueError("dimension mismatch")
        inverse = self.inverse()
        out = PolyMultivector.zero(u.dims)
        for (mono, wedge), coef in u.terms.items():
            poly = self._substitute({mono: coef}, inverse.matrix, inverse.translation)
            legs = []
            for leg in wedge:
                legs.append(
                    [(self.matrix[j][leg], j) for j in range(self.dim) if self.matrix[j][leg] != 0]
                )
            for mono2, coef2 in poly.items():
                for choice in itertools.product(*legs):
                    scalar = coef2
                    for c, _ in choice:
                        scalar *= c
                    out = out + mv(u.dims, scalar, mono2, tuple(j for _, j in choice))
        return out

    def pushforward_form(self, w: PolyForm) -> PolyForm:
        return self.inverse().pullback_form(w)


def _rational_det(matrix) -> Fraction:
    n = len(matrix)
    rows = [list(map(Fraction, row)) for row in matrix]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, n):
            factor = rows[r][col] / rows[col][col]
            for c in range(col, n):
                rows[r][c] -= factor * rows[col][c]
    return det


def _rational_inverse(matrix):
    n = len(matrix)
    rows = [list(map(Fraction, row)) + [Fraction(1 if i == j else 0) for j in range(n)]
            for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix not invertible")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        scale = rows[col][col]
        rows[col] = [e / scale for e in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return tuple(tuple(row[n:]) for row in rows)


def group_mul(
    b1: PolyForm, phi1: AffineDiffeo, b2: PolyForm, phi2: AffineDiffeo
) -> tuple[PolyForm, AffineDiffeo]:
    """(B1, phi1) . (B2, phi2) = (B1 + (phi1^{-1})^* B2, phi1 o phi2)."""
    return b1 + phi1.inverse().pullback_form(b2), phi1.compose(phi2)


def group_act(
    b: PolyForm, phi: AffineDiffeo, h: PolyForm, pi: PolyMultivector
) -> tuple[PolyForm, PolyMultivector]:
    """(B, phi) . (H, pi) = ((phi^{-1})^* H - dB, e^B phi_* pi)."""
    new_h = phi.inverse().pullback_form(h) - de_rham(b)
    new_pi = e_b_pi(b, phi.pushforward_mv(pi))
    return new_h, new_pi


# -- symbolic-in-t flow curves --------------------------------------------------------

ScalarCurve = dict[int, Fraction]
FormCurve = dict[int, PolyForm]
MvCurve = dict[int, PolyMultivector]


class UnsupportedVectorFieldError(ValueError):
    pass


def _linear_parts(x_field: PolyMultivector) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Split a vector field into A x + b; error beyond affine or when the
    matrix part is not nilpotent (the flow would leave the polynomial world)."""
    m = x_field.dims[0]
    matrix = [[Fraction(0)] * m for _ in range(m)]
    const = [Fraction(0)] * m
    for (mono, wedge), coef in x_field.terms.items():
        if len(wedge) != 1:
            raise UnsupportedVectorFieldError("flow directions must be vector fields")
        i = wedge[0]
        total = sum(mono)
        if total == 0:
            const[i] += coef
        elif total == 1:
            j = next(v for v, e in enumerate(mono) if e)
            matrix[i][j] += coef
        else:
            raise UnsupportedVectorFieldError(
                "flow directions must be constant or linear with nilpotent matrix part"
            )
    power = [row[:] for row in matrix]
    for _ in range(m):
        if all(e == 0 for row in power for e in row):
            break
        power = [
            [sum(power[i][k] * matrix[k][j] for k in range(m)) for j in range(m)]
            for i in range(m)
        ]
    else:
        if any(e != 0 for row in power for e in row):
            raise UnsupportedVectorFieldError("matrix part of the flow is not nilpotent")
    return matrix, const


class TimeAffine:
    """x -> M(t) x + c(t) with polynomial-in-t entries (nilpotent generators)."""

    __slots__ = ("dim", "matrix", "translation")

    def __init__(self, dim: int, matrix: list[list[ScalarCurve]], translation: list[ScalarCurve]):
        self.dim = dim
        self.matrix = matrix
        self.translation = translation

    @staticmethod
    def flow(x_field: PolyMultivector, time_sign: int) -> "TimeAffine":
        """The time-(sign * t) flow of an admissible vector field A x + b."""
        m = x_field.dims[0]
        a_mat, const = _linear_parts(x_field)
        sign = Fraction(time_sign)
        # exp(sign t A) = sum_k (sign t)^k A^k / k!
        matrix: list[list[ScalarCurve]] = [
            [({0: Fraction(1)} if i == j else {}) for j in range(m)] for i in range(m)
        ]
        power = [[Fraction(1 if i == j else 0) for j in range(m)] for i in range(m)]
        for k in range(1, m + 1):
            power = [
                [sum(power[i][r] * a_mat[r][j] for r in range(m)) for j in range(m)]
                for i in range(m)
            ]
            if all(e == 0 for row in power for e in row):
                break
            coef = sign**k / math.factorial(k)
            for i in range(m):
                for j in range(m):
                    if power[i][j] != 0:
                        matrix[i][j][k] = matrix[i][j].get(k, Fraction(0)) + coef * power[i][j]
        # integral of exp(sign u A) b du from 0 to (sign t):
        # translation(t) = sum_k sign^{k+1} t^{k+1} A^k b / (k+1)!
        translation: list[ScalarCurve] = [{} for _ in range(m)]
        vec = const[:]
        for k in range(0, m + 1):
            if all(e == 0 for e in vec):
                break
            coef = sign ** (k + 1) / math.factorial(k + 1)
            for i in range(m):
                if vec[i] != 0:
                    translation[i][k + 1] = translation[i].get(k + 1, Fraction(0)) + coef * vec[i]
            vec = [sum(a_mat[i][r] * vec[r] for r in range(m)) for i in range(m)]
        return TimeAffine(m, matrix, translation)

    def _subst_curve(self, poly: dict[Mono, Fraction]) -> Curve:
        """x_i -> sum_j M_ij(t) x_j + c_i(t) inside a spatial polynomial."""
        m = self.dim
        out: Curve = {}
        for mono, coef in poly.items():
            acc: Curve = {0: {(0,) * m: coef}}
            for var, e in enumerate(mono):
                for _ in range(e):
                    linear: Curve = {}
                    for power, value in self.translation[var].items():
                        linear = _c_add(linear, {power: {(0,) * m: value}})
                    for j in range(m):
                        for power, value in self.matrix[var][j].items():
                            key = tuple(1 if t == j else 0 for t in range(m))
                            linear = _c_add(linear, {power: {key: value}})
                    acc = _c_mul(acc, linear)
            out = _c_add(out, acc)
        return out

    def pullback_form(self, w: PolyForm) -> FormCurve:
        """phi^* w as a polynomial curve of forms."""
        m = self.dim
        out: FormCurve = {}
        for (mono, wedge), coef in w.terms.items():
            coeff_curve = self._subst_curve({mono: coef})
            leg_choices = []
            for leg in wedge:
                choices = []
                for j in range(m):
                    entry = self.matrix[leg][j]
                    if entry:
                        choices.append((j, entry))
                leg_choices.append(choices)
            for choice in itertools.product(*leg_choices):
                legs = tuple(j for j, _ in choice)
                scalar: ScalarCurve = {0: Fraction(1)}
                for _, entry in choice:
                    nxt: ScalarCurve = {}
                    for pa, va in scalar.items():
                        for pb, vb in entry.items():
                            nxt[pa + pb] = nxt.get(pa + pb, Fraction(0)) + va * vb
                    scalar = nxt
                for power_c, poly in coeff_curve.items():
                    for power_s, value in scalar.items():
                        target = power_c + power_s
                        for mono2, coef2 in poly.items():
                            piece = form(w.dims, coef2 * value, mono2, legs)
                            if piece.is_zero():
                                continue
                            out[target] = out.get(target, PolyForm.zero(w.dims)) + piece
        return {p: f for p, f in out.items() if not f.is_zero()}

    def pushforward_mv(self, u: PolyMultivector, inverse: "TimeAffine") -> MvCurve:
        """phi_* u: coefficients composed with the inverse map, legs through d(phi)."""
        m = self.dim
        out: MvCurve = {}
        for (mono, wedge), coef in u.terms.items():
            coeff_curve = inverse._subst_curve({mono: coef})
            leg_choices = []
            for leg in wedge:
                choices = []
                for j in range(m):
                    entry = self.matrix[j][leg]
                    if entry:
                        choices.append((j, entry))
                leg_choices.append(choices)
            for choice in itertools.product(*leg_choices):
                legs = tuple(j for j, _ in choice)
                scalar: ScalarCurve = {0: Fraction(1)}
                for _, entry in choice:
                    nxt: ScalarCurve = {}
                    for pa, va in scalar.items():
                        for pb, vb in entry.items():
                            nxt[pa + pb] = nxt.get(pa + pb, Fraction(0)) + va * vb
                    scalar = nxt
                for power_c, poly in coeff_curve.items():
                    for power_s, value in scalar.items():
                        target = power_c + power_s
                        for mono2, coef2 in poly.items():
                            piece = mv(u.dims, coef2 * value, mono2, legs)
                            if piece.is_zero():
                                continue
                            out[target] = out.get(target, PolyMultivector.zero(u.dims)) + piece
        return {p: e for p, e in out.items() if not e.is_zero()}


def _curve_integrate(curve: FormCurve) -> FormCurve:
    """int_0^t: shift powers up and divide."""
    return {p + 1: f.scale(Fraction(1, p + 1)) for p, f in curve.items()}


def _curve_shift(curve: FormCurve, by: int) -> FormCurve:
    return {p + by: f for p, f in curve.items()}


def _curve_add(a: dict, b: dict, zero) -> dict:
    out = dict(a)
    for p, v in b.items():
        merged = out.get(p, zero) + v
        if merged.is_zero():
            out.pop(p, None)
        else:
            out[p] = merged
    return out


def _curve_scale_mv(curve: MvCurve, scalar_curve: ScalarCurve, dims) -> MvCurve:
    out: MvCurve = {}
    for p, e in curve.items():
        for q, s in scalar_curve.items():
            piece = e.scale(s)
            if piece.is_zero():
                continue
            out[p + q] = out.get(p + q, PolyMultivector.zero(dims)) + piece
    return {p: e for p, e in out.items() if not e.is_zero()}


def _curve_ddt_mv(curve: MvCurve) -> MvCurve:
    out = {}
    for p, e in curve.items():
        if p >= 1:
            out[p - 1] = e.scale(p)
    return out


def _curve_eval(curve: dict, t: Fraction, zero):
    total = zero
    for p, e in curve.items():
        total = total + e.scale(t**p)
    return total


@dataclass(frozen=True)
class FlowCurve:
    """Integral curve of the gauge field of (B, X) through (H, pi):

        t |-> ( H - t dB , pushforward by the time-(-t) flow of e^{C_t} pi )

    with C_t = D_t + int_0^t (flow_{-s})^* (B + i_X H) ds and
    dD_t/dt = -t (flow_{-t})^* (i_X dB).  The multivector component is stored
    as a polynomial numerator curve over a t-polynomial determinant."""

    dims: tuple[int, int]
    b_form: PolyForm
    x_field: PolyMultivector
    h_form: PolyForm
    pi: PolyMultivector
    form_curve: FormCurve
    mv_numerator: MvCurve
    denominator: ScalarCurve
    c_curve: FormCurve

    def form_at(self, t: Fraction) -> PolyForm:
        return _curve_eval(self.form_curve, as_fraction(t), PolyForm.zero(self.dims))

    def mv_at(self, t: Fraction) -> PolyMultivector:
        t = as_fraction(t)
        den = sum((s * t**p for p, s in self.denominator.items()), Fraction(0))
        if den == 0:
            raise GraphTransformError(f"flow leaves the polynomial category at t = {t}")
        num = _curve_eval(self.mv_numerator, t, PolyMultivector.zero(self.dims))
        return num.scale(Fraction(1) / den)

    def at(self, t: Fraction) -> tuple[PolyForm, PolyMultivector]:
        return self.form_at(t), self.mv_at(t)

    def derivative_at_zero(self) -> tuple[PolyForm, PolyMultivector]:
        form_prime = self.form_curve.get(1, PolyForm.zero(self.dims))
        n0 = self.mv_numerator.get(0, PolyMultivector.zero(self.dims))
        n1 = self.mv_numerator.get(1, PolyMultivector.zero(self.dims))
        d0 = self.denominator.get(0, Fraction(0))
        d1 = self.denominator.get(1, Fraction(0))
        if d0 != 1:
            raise GraphTransformError("flow curve not normalized at t = 0")
        return form_prime, n1 - n0.scale(d1)

    def ode_residual(self) -> MvCurve:
        """Cross-multiplied tangency identity, a polynomial identity in t:

            N' d - N d' - d [X, N] - wedge2(N)(E_t)  with
            E_t = B + i_X H - t i_X dB

        (N the numerator curve, d the determinant).  Empty dict iff satisfied.
        """
        dims = self.dims
        n_curve = self.mv_numerator
        d_curve = self.denominator
        d_prime = {p - 1: s * p for p, s in d_curve.items() if p >= 1}
        lhs = _curve_scale_mv(_curve_ddt_mv(n_curve), d_curve, dims)
        lhs = _curve_add(
            lhs,
            {p: e.scale(-1) for p, e in _curve_scale_mv(n_curve, d_prime, dims).items()},
            PolyMultivector.zero(dims),
        )
        bracket_term = {p: schouten(self.x_field, e) for p, e in n_curve.items()}
        bracket_term = _curve_scale_mv(bracket_term, d_curve, dims)
        e_curve: FormCurve = {0: self.b_form + contract_form(self.x_field, self.h_form)}
        exh = contract_form(self.x_field, de_rham(self.b_form))
        if not exh.is_zero():
            e_curve = _curve_add(e_curve, {1: -exh}, PolyForm.zero(dims))
        sharp_term: MvCurve = {}
        for p1, e1 in n_curve.items():
            for p2, e2 in n_curve.items():
                for p3, ef in e_curve.items():
                    piece = multi_sharp([e1, e2], ef).scale(ONE_HALF)
                    if piece.is_zero():
                        continue
                    target = p1 + p2 + p3
                    sharp_term[target] = (
                        sharp_term.get(target, PolyMultivector.zero(dims)) + piece
                    )
        residual = _curve_add(
            lhs,
            {p: e.scale(-1) for p, e in bracket_term.items()},
            PolyMultivector.zero(dims),
        )
        residual = _curve_add(
            residual,
            {p: e.scale(-1) for p, e in sharp_term.items()},
            PolyMultivector.zero(dims),
        )
        return {p: e for p, e in residual.items() if not e.is_zero()}

    def emit(self) -> dict:
        from .polygeo import element_to_json

        return {
            "form": [[p, element_to_json(f)] for p, f in sorted(self.form_curve.items())],
            "mv_numerator": [
                [p, element_to_json(e)] for p, e in sorted(self.mv_numerator.items())
            ],
            "denominator": [
                [p, str(s) if s.denominator != 1 else s.numerator]
                for p, s in sorted(self.denominator.items())
            ],
        }


def flow_curve(
    b: PolyForm, x_field: PolyMultivector, h: PolyForm, pi: PolyMultivector
) -> FlowCurve:
    """Symbolic integral curve of the gauge field of (B, X) starting at (H, pi).

    The flow direction must be constant or linear with nilpotent matrix part so
    that everything stays polynomial; invertibility of the graph transform is
    checked symbolically (determinant free of the spatial variables)."""
    dims = pi.dims
    if not h.is_zero() and h.form_degrees() != {3}:
        raise ValueError("flow starts at a 3-form / bivector pair")
    if not pi.is_zero() and pi.arities() != {2}:
        raise ValueError("flow starts at a 3-form / bivector pair")
    flow_minus = TimeAffine.flow(x_field, -1)
    flow_plus = TimeAffine.flow(x_field, +1)

    b_moved = b + contract_form(x_field, h)
    integrand = flow_minus.pullback_form(b_moved)
    c_curve = _curve_integrate(integrand)
    exh = contract_form(x_field, de_rham(b))
    if not exh.is_zero():
        d_integrand = _curve_shift(flow_minus.pullback_form(exh), 1)  # s * pullback
        d_curve = {p: f.scale(-1) for p, f in _curve_integrate(d_integrand).items()}
        c_curve = _curve_add(c_curve, d_curve, PolyForm.zero(dims))

    numerator, det = _graph_transform_curve(c_curve, pi)
    det_scalar: ScalarCurve = {
        p: poly.get((0,) * dims[0], Fraction(0)) for p, poly in det.items()
    }

    pushed: MvCurve = {}
    for p, e in numerator.items():
        moved = flow_minus.pushforward_mv(e, inverse=flow_plus)
        for q, piece in moved.items():
            pushed[p + q] = pushed.get(p + q, PolyMultivector.zero(dims)) + piece
    pushed = {p: e for p, e in pushed.items() if not e.is_zero()}

    form_curve: FormCurve = {0: h}
    db = de_rham(b)
    if not db.is_zero():
        form_curve[1] = -db

    return FlowCurve(
        dims=dims,
        b_form=b,
        x_field=x_field,
        h_form=h,
        pi=pi,
        form_curve=form_curve,
        mv_numerator=pushed,
        denominator=det_scalar,
        c_curve=c_curve,
    )


# -- infinitesimal generator of the group action ---------------------------------------


@dataclass(frozen=True)
class GeneratorReport:
    gauge: tuple[PolyForm, PolyMultivector]
    generator: tuple[PolyForm, PolyMultivector]
    symbolic_matches_closed_form: bool
    identity_holds: bool

    def as_dict(self) -> dict:
        return {
            "symbolic_matches_closed_form": self.symbolic_matches_closed_form,
            "identity_holds": self.identity_holds,
        }


def action_generator(
    b: PolyForm, x_field: PolyMultivector, h: PolyForm, pi: PolyMultivector
) -> tuple[PolyForm, PolyMultivector]:
    """d/dt at 0 of (tB, flow_t of X) . (H, pi), computed symbolically in t."""
    dims = pi.dims
    flow_minus = TimeAffine.flow(x_field, -1)
    flow_plus = TimeAffine.flow(x_field, +1)
    # form component: (flow_t^{-1})^* H - t dB
    h_curve = flow_minus.pullback_form(h)
    form_prime = h_curve.get(1, PolyForm.zero(dims)) - de_rham(b)
    # multivector component: e^{tB} (flow_t)_* pi
    pi_curve = flow_plus.pushforward_mv(pi, inverse=flow_minus)
    numerator, det = _graph_transform_curve_timedep({1: b}, pi_curve, dims)
    det_scalar = {p: poly.get((0,) * dims[0], Fraction(0)) for p, poly in det.items()}
    n0 = numerator.get(0, PolyMultivector.zero(dims))
    n1 = numerator.get(1, PolyMultivector.zero(dims))
    if det_scalar.get(0, Fraction(0)) != 1:
        raise GraphTransformError("generator curve not normalized at t = 0")
    mv_prime = n1 - n0.scale(det_scalar.get(1, Fraction(0)))
    return form_prime, mv_prime


def _graph_transform_curve_timedep(
    b_curve: FormCurve, pi_curve: MvCurve, dims
) -> tuple[MvCurve, Curve]:
    """Graph transform where the bivector itself is a curve: the sharp matrix
    entries become t-dependent."""
    m = dims[0]
    sharp = [[_c_zero() for _ in range(m)] for _ in range(m)]
    for power, pi in pi_curve.items():
        for (mono, wedge), coef in pi.terms.items():
            if len(wedge) != 2:
                raise ValueError("graph transforms apply to bivectors")
            a, c = wedge
            sharp[a][c] = _c_add(sharp[a][c], {power: {mono: coef}})
            sharp[c][a] = _c_add(sharp[c][a], {power: {mono: -coef}})
    flat = _flat_matrix_curve(b_curve, m)
    k_mat = _mat_mul(sharp, flat)
    n_mat = _mat_identity(m, m)
    for i in range(m):
        for j in range(m):
            n_mat[i][j] = _c_add(n_mat[i][j], k_mat[i][j])
    det = _det(n_mat)
    unit_mono = (0,) * m
    for power, poly in det.items():
        if set(poly) - {unit_mono}:
            raise GraphTransformError(
                "graph transform leaves the polynomial category"
            )
    adj = _adjugate(n_mat)
    rho = _mat_mul(adj, sharp)
    numerator = _bivector_from_sharp(rho, m)
    return numerator, det


def generator_match(
    b: PolyForm, x_field: PolyMultivector, h: PolyForm, pi: PolyMultivector
) -> GeneratorReport:
    """At a Maurer-Cartan point, verify (exactly):

      * the symbolically computed generator equals its closed form
        Z^{(B,X)} = (-d(i_X H + B), wedge2(pi)(B) - [X, pi]);
      * the correspondence Z^{(B + i_X H, -X)} = Y^{(B,X)}.
    """
    if not is_twisted_poisson(h, pi):
        raise ValueError("generator matching is defined on Maurer-Cartan points")
    symbolic = action_generator(b, x_field, h, pi)
    closed = (
        -de_rham(contract_form(x_field, h) + b),
        wedge2_tilde(pi, b) - schouten(x_field, pi),
    )
    sym_ok = symbolic[0] == closed[0] and symbolic[1] == closed[1]

    gauge = gauge_Y(b, x_field, h, pi)
    matched = action_generator(b + contract_form(x_field, h), -x_field, h, pi)
    identity_ok = matched[0] == gauge[0] and matched[1] == gauge[1]
    return GeneratorReport(
        gauge=gauge,
        generator=symbolic,
        symbolic_matches_closed_form=sym_ok,
        identity_holds=identity_ok,
    )


def mc_residual_derivative(
    h: PolyForm,
    pi: PolyMultivector,
    dh: PolyForm,
    dpi: PolyMultivector,
) -> tuple[PolyForm, PolyMultivector]:
    """First-order directional derivative of the closed-form Maurer-Cartan
    residual (dH, [pi,pi] - 2 wedge3(pi)(H)) at (h, pi) along (dh, dpi).

    On Maurer-Cartan points this vanishes along every gauge direction: the
    assertable form of the gauge fields being tangent to the solution set.
    """
    form_part = de_rham(dh)
    mv_part = schouten(pi, dpi).scale(2)
    mv_part = mv_part - multi_sharp([dpi, pi, pi], h)
    mv_part = mv_part - multi_sharp([pi, pi, pi], dh).scale(Fraction(1, 3))
    return form_part, mv_part
