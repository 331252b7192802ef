"""Polynomial Cartan calculus on R^m and on trivial bundles R^m x R^k.

Multivector fields and differential forms with exact rational polynomial
coefficients, the Schouten bracket, the de Rham differential, contraction
operators, the fiberwise polynomial degree, and the coisotropic quadruple
for a submanifold C = {p = 0}.

Conventions (all downstream signs derive from these):
  * Schouten bracket: [X, f] = X(f) for a vector field X and function f,
    [X, Y] is the Lie bracket of vector fields, extension by the graded
    Leibniz rule; multivectors of arity s are graded by s - 1.
  * Contractions act on the first wedge slot: i_xi (X ^ Y) = xi(X) Y - xi(Y) X,
    pi_sharp(xi) = i_xi(pi), and likewise B_flat(Y) = i_Y(B) for 2-forms.

Variables: x_1..x_m on the base, p_1..p_k on the fiber.  A monomial is the
tuple of m+k exponents.  Wedge factors are direction indices 0..m+k-1
(0..m-1 for the x-directions, m..m+k-1 for the p-directions).
"""

from __future__ import annotations

import itertools
import json
import os
from fractions import Fraction

from .graded import ZERO, Fraction as _Frac, as_fraction

Mono = tuple[int, ...]
Wedge = tuple[int, ...]


class TermExplosionError(RuntimeError):
    pass


def _term_cap() -> int:
    return int(os.environ.get("DB_MAX_TERMS", "200000"))


def _check_size(terms: dict) -> dict:
    if len(terms) > _term_cap():
        raise TermExplosionError(
            f"term count {len(terms)} exceeds safety cap (set DB_MAX_TERMS to raise)"
        )
    return terms


# -- scalar polynomial helpers (mono-dict -> Fraction) -------------------------


def poly_add(a: dict[Mono, Fraction], b: dict[Mono, Fraction]) -> dict[Mono, Fraction]:
    out = dict(a)
    for mono, coef in b.items():
        new = out.get(mono, ZERO) + coef
        if new == 0:
            out.pop(mono, None)
        else:
            out[mono] = new
    return out


def poly_scale(a: dict[Mono, Fraction], c: Fraction) -> dict[Mono, Fraction]:
    if c == 0:
        return {}
    return {m: v * c for m, v in a.items()}


def poly_mul(a: dict[Mono, Fraction], b: dict[Mono, Fraction]) -> dict[Mono, Fraction]:
    out: dict[Mono, Fraction] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            mono = tuple(e1 + e2 for e1, e2 in zip(ma, mb))
            new = out.get(mono, ZERO) + ca * cb
            if new == 0:
                out.pop(mono, None)
            else:
                out[mono] = new
    return _check_size(out)


def poly_diff(a: dict[Mono, Fraction], var: int) -> dict[Mono, Fraction]:
    out: dict[Mono, Fraction] = {}
    for mono, coef in a.items():
        e = mono[var]
        if e == 0:
            continue
        lowered = mono[:var] + (e - 1,) + mono[var + 1 :]
        new = out.get(lowered, ZERO) + coef * e
        if new == 0:
            out.pop(lowered, None)
        else:
            out[lowered] = new
    return out


def _subst_mono(
    mono: Mono, coef: Fraction, var: int, repl: dict[Mono, Fraction], nvars: int
) -> dict[Mono, Fraction]:
    """Substitute variable ``var`` by the polynomial ``repl`` in one term."""
    e = mono[var]
    base = {mono[:var] + (0,) + mono[var + 1 :]: coef}
    if e == 0:
        return base
    power = {(0,) * nvars: Fraction(1)}
    for _ in range(e):
        power = poly_mul(power, repl)
    return poly_mul(base, power)


def _sort_wedge(wedge: tuple[int, ...]) -> tuple[int, Wedge] | None:
    """Sort wedge indices, returning (sign, sorted) or None when repeated."""
    if len(set(wedge)) != len(wedge):
        return None
    items = list(wedge)
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return sign, tuple(items)


class _WedgeElement:
    """Shared sparse implementation for multivectors and forms."""

    __slots__ = ("dims", "terms")
    _kind = "element"

    def __init__(self, dims: tuple[int, int], terms: dict[tuple[Mono, Wedge], Fraction]):
        m, k = dims
        clean: dict[tuple[Mono, Wedge], Fraction] = {}
        for (mono, wedge), coef in terms.items():
            coef = as_fraction(coef)
            if coef == 0:
                continue
            if len(mono) != m + k:
                raise ValueError(f"monomial {mono} does not match dims {dims}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            if list(wedge) != sorted(set(wedge)) or (wedge and not 0 <= wedge[0]) or (
                wedge and wedge[-1] >= m + k
            ):
                raise ValueError(f"wedge {wedge} not strictly increasing in range")
            clean[(mono, wedge)] = coef
        self.dims = (m, k)
        self.terms = _check_size(clean)

    # construction helpers ----------------------------------------------------

    @classmethod
    def zero(cls, dims):
        return cls(dims, {})

    @classmethod
    def from_terms(cls, dims, raw: list[tuple[object, Mono, Wedge]]):
        terms: dict[tuple[Mono, Wedge], Fraction] = {}
        for coef, mono, wedge in raw:
            normalized = _sort_wedge(tuple(wedge))
            if normalized is None:
                continue
            sign, sw = normalized
            key = (tuple(mono), sw)
            terms[key] = terms.get(key, ZERO) + as_fraction(coef) * sign
        return cls(dims, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _same_kind(self, other):
        if type(self) is not type(other) or self.dims != other.dims:
            raise ValueError(f"{self._kind} ambient space mismatch")

    def __add__(self, other):
        self._same_kind(other)
        terms = dict(self.terms)
        for key, coef in other.terms.items():
            new = terms.get(key, ZERO) + coef
            if new == 0:
                terms.pop(key, None)
            else:
                terms[key] = new
        return type(self)(self.dims, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return type(self)(self.dims, {k: -c for k, c in self.terms.items()})

    def scale(self, scalar):
        scalar = as_fraction(scalar)
        if scalar == 0:
            return type(self)(self.dims, {})
        return type(self)(self.dims, {k: c * scalar for k, c in self.terms.items()})

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other) -> bool:
        return (
            type(self) is type(other)
            and self.dims == other.dims
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.dims, frozenset(self.terms.items())))

    def coefficient(self, mono: Mono, wedge: Wedge) -> Fraction:
        return self.terms.get((tuple(mono), tuple(wedge)), ZERO)

    def _repr_parts(self, symbol: str, names: list[str]) -> str:
        if not self.terms:
            return "0"
        m, k = self.dims
        var_names = [f"x{i+1}" for i in range(m)] + [f"p{j+1}" for j in range(k)]
        parts = []
        for (mono, wedge), coef in sorted(self.terms.items()):
            factors = []
            for var, e in enumerate(mono):
                if e == 1:
                    factors.append(var_names[var])
                elif e > 1:
                    factors.append(f"{var_names[var]}^{e}")
            factors.extend(names[w] for w in wedge)
            body = symbol.join(factors) if factors else "1"
            if coef == 1:
                parts.append(body)
            elif coef == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{coef}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


class PolyMultivector(_WedgeElement):
    """Polynomial-coefficient multivector field; graded by arity - 1."""

    _kind = "multivector"

    def arities(self) -> set[int]:
        return {len(w) for (_, w) in self.terms}

    def degree(self) -> int | None:
        """Degree in the shifted multivector grading (arity - 1)."""
        ar = self.arities()
        if len(ar) == 1:
            return ar.pop() - 1
        return None

    def is_homogeneous(self) -> bool:
        return len(self.arities()) <= 1

    def components(self) -> list[tuple[int, "PolyMultivector"]]:
        by: dict[int, dict] = {}
        for (mono, wedge), coef in self.terms.items():
            by.setdefault(len(wedge) - 1, {})[(mono, wedge)] = coef
        return [(d, PolyMultivector(self.dims, t)) for d, t in sorted(by.items())]

    def arity_part(self, arity: int) -> "PolyMultivector":
        terms = {k: c for k, c in self.terms.items() if len(k[1]) == arity}
        return PolyMultivector(self.dims, terms)

    def pol_degree(self) -> int | None:
        """Fiberwise polynomial degree: per term, p-degree of the coefficient
        minus the number of fiber wedge legs; None on the zero field."""
        m, _ = self.dims
        best = None
        for (mono, wedge), _coef in self.terms.items():
            fiber_deg = sum(mono[m:])
            legs = sum(1 for w in wedge if w >= m)
            value = fiber_deg - legs
            best = value if best is None else max(best, value)
        return best

    def __repr__(self) -> str:
        m, k = self.dims
        names = [f"@x{i+1}" for i in range(m)] + [f"@p{j+1}" for j in range(k)]
        return self._repr_parts("^", names)


class PolyForm(_WedgeElement):
    """Polynomial-coefficient differential form; graded by form degree."""

    _kind = "form"

    def form_degrees(self) -> set[int]:
        return {len(w) for (_, w) in self.terms}

    def degree(self) -> int | None:
        degs = self.form_degrees()
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous(self) -> bool:
        return len(self.form_degrees()) <= 1

    def components(self) -> list[tuple[int, "PolyForm"]]:
        by: dict[int, dict] = {}
        for (mono, wedge), coef in self.terms.items():
            by.setdefault(len(wedge), {})[(mono, wedge)] = coef
        return [(d, PolyForm(self.dims, t)) for d, t in sorted(by.items())]

    def degree_part(self, q: int) -> "PolyForm":
        terms = {k: c for k, c in self.terms.items() if len(k[1]) == q}
        return PolyForm(self.dims, terms)

    def __repr__(self) -> str:
        m, k = self.dims
        names = [f"dx{i+1}" for i in range(m)] + [f"dp{j+1}" for j in range(k)]
        return self._repr_parts("^", names)


# -- constructors ---------------------------------------------------------------


def unit_mono(dims: tuple[int, int]) -> Mono:
    return (0,) * (dims[0] + dims[1])


def mv(dims, coef, mono=None, wedge=()) -> PolyMultivector:
    mono = unit_mono(dims) if mono is None else tuple(mono)
    return PolyMultivector.from_terms(dims, [(coef, mono, tuple(wedge))])


def form(dims, coef, mono=None, wedge=()) -> PolyForm:
    mono = unit_mono(dims) if mono is None else tuple(mono)
    return PolyForm.from_terms(dims, [(coef, mono, tuple(wedge))])


def coordinate_vector(dims, direction: int) -> PolyMultivector:
    return mv(dims, 1, None, (direction,))


def wedge_mv(u: PolyMultivector, v: PolyMultivector) -> PolyMultivector:
    u._same_kind(v)
    raw = []
    for (mu, wu), cu in u.terms.items():
        for (mv_, wv), cv in v.terms.items():
            mono = tuple(a + b for a, b in zip(mu, mv_))
            raw.append((cu * cv, mono, wu + wv))
    return PolyMultivector.from_terms(u.dims, raw)


def wedge_form(a: PolyForm, b: PolyForm) -> PolyForm:
    a._same_kind(b)
    raw = []
    for (ma, wa), ca in a.terms.items():
        for (mb, wb), cb in b.terms.items():
            mono = tuple(e1 + e2 for e1, e2 in zip(ma, mb))
            raw.append((ca * cb, mono, wa + wb))
    return PolyForm.from_terms(a.dims, raw)


# -- Schouten bracket -----------------------------------------------------------


def schouten(u: PolyMultivector, v: PolyMultivector) -> PolyMultivector:
    """Schouten bracket of polynomial multivector fields.

    For terms f*P (arity a) and g*Q (arity b) with constant coordinate wedges
    P = d_{w_1}^..^d_{w_a} and Q = d_{q_1}^..^d_{q_b}:

        [fP, gQ] = sum_i (-1)^{a-i} f (dg/dw_i) (P\\w_i)^Q
                 + (-1)^{a(b-1)} g sum_j (-1)^j (df/dq_j) (Q\\q_j)^P
    """
    u._same_kind(v)
    dims = u.dims
    raw: list[tuple[Fraction, Mono, Wedge]] = []
    for (fm, P), fc in u.terms.items():
        a = len(P)
        for (gm, Q), gc in v.terms.items():
            b = len(Q)
            for i, w in enumerate(P, start=1):
                dg = poly_diff({gm: gc}, w)
                if not dg:
                    continue
                sign = 1 if (a - i) % 2 == 0 else -1
                rest = P[:i - 1] + P[i:]
                for mono_g, coef_g in dg.items():
                    mono = tuple(e1 + e2 for e1, e2 in zip(fm, mono_g))
                    raw.append((fc * coef_g * sign, mono, rest + Q))
            outer = 1 if (a * (b - 1)) % 2 == 0 else -1
            for j, q in enumerate(Q, start=1):
                df = poly_diff({fm: fc}, q)
                if not df:
                    continue
                sign = outer * (1 if j % 2 == 0 else -1)
                rest = Q[:j - 1] + Q[j:]
                for mono_f, coef_f in df.items():
                    mono = tuple(e1 + e2 for e1, e2 in zip(mono_f, gm))
                    raw.append((gc * coef_f * sign, mono, rest + P))
    return PolyMultivector.from_terms(dims, raw)


# -- de Rham, contractions --------------------------------------------------------


def de_rham(w: PolyForm) -> PolyForm:
    m, k = w.dims
    raw = []
    for (mono, wedge), coef in w.terms.items():
        for var in range(m + k):
            d = poly_diff({mono: coef}, var)
            for mono2, coef2 in d.items():
                raw.append((coef2, mono2, (var,) + wedge))
    return PolyForm.from_terms(w.dims, raw)


def contract_form(x: PolyMultivector, w: PolyForm) -> PolyForm:
    """Interior product i_X w of a vector field into a form (first slot)."""
    if x.dims != w.dims:
        raise ValueError("ambient space mismatch in contraction")
    if not x.is_zero() and x.arities() != {1}:
        raise ValueError("contract_form expects a vector field (arity 1)")
    raw = []
    for (mx, wx), cx in x.terms.items():
        direction = wx[0]
        for (mw, ww), cw in w.terms.items():
            for pos, leg in enumerate(ww):
                if leg != direction:
                    continue
                sign = 1 if pos % 2 == 0 else -1
                mono = tuple(a + b for a, b in zip(mx, mw))
                raw.append((cx * cw * sign, mono, ww[:pos] + ww[pos + 1 :]))
    return PolyForm.from_terms(w.dims, raw)


def sharp(pi: PolyMultivector, xi: PolyForm) -> PolyMultivector:
    """pi_sharp(xi) = i_xi(pi), contraction of a 1-form in the first wedge slot.

    Identically zero on arity-0 multivectors.
    """
    if pi.dims != xi.dims:
        raise ValueError("ambient space mismatch in sharp")
    if not xi.is_zero() and xi.form_degrees() != {1}:
        raise ValueError("sharp expects a 1-form")
    raw = []
    for (mxi, wxi), cxi in xi.terms.items():
        direction = wxi[0]
        for (mpi, wpi), cpi in pi.terms.items():
            for pos, leg in enumerate(wpi):
                if leg != direction:
                    continue
                sign = 1 if pos % 2 == 0 else -1
                mono = tuple(a + b for a, b in zip(mxi, mpi))
                raw.append((cxi * cpi * sign, mono, wpi[:pos] + wpi[pos + 1 :]))
    return PolyMultivector.from_terms(pi.dims, raw)


def multi_sharp(pis: list[PolyMultivector], w: PolyForm) -> PolyMultivector:
    """Antisymmetrized multi-contraction
    (pi_1^sharp ^ ... ^ pi_n^sharp)(xi_1^..^xi_n)
      = sum_{sigma in S_n} sign(sigma) pi_1^sharp(xi_sigma(1)) ^ ... ^ pi_n^sharp(xi_sigma(n)),
    extended bilinearly from decomposable forms."""
    n = len(pis)
    if n == 0:
        raise ValueError("multi_sharp needs at least one multivector")
    dims = pis[0].dims
    for pi in pis:
        if pi.dims != dims:
            raise ValueError("ambient space mismatch in multi_sharp")
        if any(a < 1 for a in pi.arities()):
            raise ValueError("multi_sharp arguments must have arity >= 1")
    if w.dims != dims:
        raise ValueError("ambient space mismatch in multi_sharp")
    if not w.is_zero() and w.form_degrees() != {n}:
        raise ValueError(f"multi_sharp of {n} multivectors expects a {n}-form")
    out = PolyMultivector.zero(dims)
    for (mono, wedge), coef in w.terms.items():
        covectors = [form(dims, 1, None, (leg,)) for leg in wedge]
        for perm in itertools.permutations(range(n)):
            sign = _perm_sign(perm)
            product = mv(dims, coef * sign, mono, ())
            for i in range(n):
                product = wedge_mv(product, sharp(pis[i], covectors[perm[i]]))
                if product.is_zero():
                    break
            out = out + product
    return out


def _perm_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


# -- coisotropic model C = {p = 0} in R^m x R^k ----------------------------------


def coiso_projection(u: PolyMultivector) -> PolyMultivector:
    """Restrict to C (set p = 0 in coefficients) and keep only terms whose
    wedge factors are all fiber directions."""
    m, k = u.dims
    terms = {}
    for (mono, wedge), coef in u.terms.items():
        if any(mono[m:]):
            continue
        if any(w < m for w in wedge):
            continue
        terms[(mono, wedge)] = coef
    return PolyMultivector(u.dims, terms)


def is_vertical_section(phi: PolyMultivector) -> bool:
    """True when phi is in Gamma(nu C): arity-1, fiber directions, base coefficients."""
    m, _ = phi.dims
    for (mono, wedge), _c in phi.terms.items():
        if len(wedge) != 1 or wedge[0] < m or any(mono[m:]):
            return False
    return True


def fiber_translate(u: PolyMultivector, phi: PolyMultivector) -> PolyMultivector:
    """Pushforward of u along the time-1 flow of the vertical section phi
    (the fiber translation (x, p) -> (x, p + phi(x))).

    Coefficients undergo p_j -> p_j - phi_j(x); each base wedge leg @x_i picks
    up sum_j (d phi_j / d x_i) @p_j from the differential of the translation.
    Equals e^{[., phi]} u exactly (the adjoint series terminates).
    """
    if u.dims != phi.dims:
        raise ValueError("ambient space mismatch in fiber_translate")
    if not is_vertical_section(phi):
        raise ValueError("fiber_translate expects a vertical, base-coefficient section")
    m, k = u.dims
    nvars = m + k
    comp: dict[int, dict[Mono, Fraction]] = {}
    for (mono, wedge), coef in phi.terms.items():
        comp[wedge[0] - m] = poly_add(comp.get(wedge[0] - m, {}), {mono: coef})

    out = PolyMultivector.zero(u.dims)
    for (mono, wedge), coef in u.terms.items():
        # substitute p_j -> p_j - phi_j(x) in the coefficient
        poly = {mono: coef}
        for j, phi_j in comp.items():
            var = m + j
            repl = poly_add(
                {tuple(1 if t == var else 0 for t in range(nvars)): Fraction(1)},
                poly_scale(phi_j, Fraction(-1)),
            )
            new_poly: dict[Mono, Fraction] = {}
            for mono2, coef2 in poly.items():
                new_poly = poly_add(new_poly, _subst_mono(mono2, coef2, var, repl, nvars))
            poly = new_poly
        # transport each wedge leg through the differential of the translation
        legs: list[PolyMultivector] = []
        for w in wedge:
            leg = coordinate_vector(u.dims, w)
            if w < m:
                for j, phi_j in comp.items():
                    d = poly_diff(phi_j, w)
                    for mono3, coef3 in d.items():
                        leg = leg + mv(u.dims, coef3, mono3, (m + j,))
            legs.append(leg)
        for mono2, coef2 in poly.items():
            term = mv(u.dims, coef2, mono2, ())
            for leg in legs:
                term = wedge_mv(term, leg)
                if term.is_zero():
                    break
            out = out + term
    return out


# -- JSON element literals --------------------------------------------------------
#
# { "dims": {"base": m, "fiber": k},
#   "terms": [{"coef": int | "p/q" | [num, den],
#              "monomial": {"x1": e, .., "p1": e, ..},
#              "wedge": [1-based direction indices]}] }


def _var_index(name: str, dims: tuple[int, int]) -> int:
    m, k = dims
    kind, num = name[0], int(name[1:])
    if kind == "x" and 1 <= num <= m:
        return num - 1
    if kind == "p" and 1 <= num <= k:
        return m + num - 1
    raise ValueError(f"unknown variable {name!r} for dims {dims}")


def _element_from_json(cls, data: dict):
    dims = (int(data["dims"]["base"]), int(data["dims"].get("fiber", 0)))
    m, k = dims
    raw = []
    for item in data.get("terms", []):
        mono = [0] * (m + k)
        for name, e in item.get("monomial", {}).items():
            mono[_var_index(name, dims)] = int(e)
        wedge = tuple(int(w) - 1 for w in item.get("wedge", ()))
        raw.append((as_fraction(item.get("coef", 1)), tuple(mono), wedge))
    return cls.from_terms(dims, raw)


def mv_from_json(data: dict) -> PolyMultivector:
    return _element_from_json(PolyMultivector, data)


def form_from_json(data: dict) -> PolyForm:
    return _element_from_json(PolyForm, data)


def element_to_json(u: _WedgeElement) -> dict:
    m, k = u.dims
    var_names = [f"x{i+1}" for i in range(m)] + [f"p{j+1}" for j in range(k)]
    terms = []
    for (mono, wedge), coef in sorted(u.terms.items()):
        monomial = {var_names[v]: e for v, e in enumerate(mono) if e}
        terms.append(
            {
                "coef": str(coef) if coef.denominator != 1 else coef.numerator,
                "monomial": monomial,
                "wedge": [w + 1 for w in wedge],
            }
        )
    return {"dims": {"base": m, "fiber": k}, "terms": terms}


def mv_load(path: str) -> PolyMultivector:
    with open(path, "r", encoding="utf-8") as fh:
        return mv_from_json(json.load(fh))


# -- the coisotropic quadruple -------------------------------------------------------


def vertical_sample_basis(dims: tuple[int, int], max_arity: int = 2) -> list[PolyMultivector]:
    """Fiberwise-constant vertical multivectors with affine base coefficients."""
    m, k = dims
    out = []
    monos = [unit_mono(dims)]
    for i in range(m):
        monos.append(tuple(1 if t == i else 0 for t in range(m + k)))
    for arity in range(1, max_arity + 1):
        for wedge in itertools.combinations(range(m, m + k), arity):
            for mono in monos:
                out.append(mv(dims, 1, mono, wedge))
    return out


def multivector_sample_basis(dims: tuple[int, int], max_arity: int = 2) -> list[PolyMultivector]:
    """A small spanning sample of low-degree multivectors for validation."""
    m, k = dims
    out = []
    monos = [unit_mono(dims)]
    for var in range(m + k):
        monos.append(tuple(1 if t == var else 0 for t in range(m + k)))
    for arity in range(0, max_arity + 1):
        for wedge in itertools.combinations(range(m + k), arity):
            for mono in monos:
                elt = mv(dims, 1, mono, wedge)
                if not elt.is_zero():
                    out.append(elt)
    return out


def coiso_vdata(pi: PolyMultivector, name: str = ""):
    """Quadruple for simultaneous deformations of a fiberwise polynomial
    Poisson bivector and of the zero section C = {p = 0}:

        (multivector fields[1], vertical constant multivectors[1],
         restrict-to-C-and-project, pi)

    Raises when [pi, pi] != 0 (the residual is attached to the error); curved
    exactly when the projection of pi survives, i.e. when C fails to be
    coisotropic."""
    from .linfty import Filtration
    from .vdata import VData

    jacobiator = schouten(pi, pi)
    if not jacobiator.is_zero():
        raise ValueError(f"not a Poisson bivector; [pi, pi] = {jacobiator!r}")
    if not pi.is_zero() and pi.arities() != {2}:
        raise ValueError("the structure element must be a bivector")
    dims = pi.dims
    if dims[1] == 0:
        raise ValueError("the coisotropic model needs a positive fiber dimension")
    pol = pi.pol_degree()
    pol = 0 if pol is None else max(pol, 0)
    max_arity = pol + 2

    def fdeg(u: PolyMultivector) -> int:
        p = u.pol_degree()
        return 2**30 if p is None else -p

    filtration = Filtration(
        degree=fdeg,
        series_bound=lambda phi: pol + 14,
    )

    return VData(
        bracket=schouten,
        degree=lambda u: u.degree(),
        components=lambda u: u.components(),
        project=coiso_projection,
        delta=pi,
        zero=PolyMultivector.zero(dims),
        in_a=lambda u: coiso_projection(u) == u,
        sample_basis=tuple(multivector_sample_basis(dims)),
        a_basis=tuple(vertical_sample_basis(dims)),
        curved=not coiso_projection(pi).is_zero(),
        filtration=filtration,
        series_bound=lambda phi: pol + 14,
        max_arity=max_arity,
        name=name or f"coisotropic-R{dims[0]}xR{dims[1]}",
    )
