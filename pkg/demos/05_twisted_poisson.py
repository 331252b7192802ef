"""Twisted Poisson pairs on R^3: brackets, the oracle, gauge flows.

The pair (H, pi) of a 3-form and a bivector is flat for the direct-sum
algebra exactly when dH = 0 and [pi, pi] = 2 wedge3(pi)(H).  Every bracket
is double-checked against the graded coordinate model, the gauge field is
summed from the brackets and compared with its closed form, and the flow of
a gauge direction is produced symbolically in t.
"""

from fractions import Fraction

from derived_brackets.linfty import gauge_field, mc_residual
from derived_brackets.polygeo import de_rham, form, mv
from derived_brackets.qgeom import oracle_bracket
from derived_brackets.tpois import (
    AffineDiffeo,
    TPoisElement,
    e_b_pi,
    flow_curve,
    gauge_Y,
    group_act,
    is_twisted_poisson,
    tpois_bracket,
    tpois_linfty,
    tpois_mc_residual,
)

D3 = (3, 0)
H = form(D3, 1, None, (0, 1, 2))         # dx1^dx2^dx3
pi = mv(D3, 1, None, (0, 1))             # @x1^@x2

print("== the flatness test ==")
dh, res = tpois_mc_residual(H, pi)
print("dH =", dh, "  [pi,pi] - 2 wedge3(pi)(H) =", res)
print("(H, pi) is a twisted Poisson pair:", is_twisted_poisson(H, pi))

bad = pi + mv(D3, 1, (0, 1, 0), (1, 2))
print("perturbed pair flat:", is_twisted_poisson(H, bad))

print()
print("== brackets against the coordinate model ==")
X = mv(D3, 1, None, (0,))
value = tpois_bracket(
    4, (TPoisElement.of_form(H), TPoisElement.of_mv(X),
        TPoisElement.of_mv(pi), TPoisElement.of_mv(pi))
)
o_form, o_mv = oracle_bracket(3, [H, X, pi, pi])
print("direct {H, X, pi, pi} =", value.mv_part)
print("oracle {H, X, pi, pi} =", o_mv)

print()
print("== the gauge field, series versus closed form ==")
B = form(D3, 2, (0, 0, 1), (0, 2))       # 2 x3 dx1^dx3
Xg = mv(D3, 1, None, (1,))
gf, gm = gauge_Y(B, Xg, H, pi)
algebra = tpois_linfty(3)
series = gauge_field(algebra, TPoisElement(B, Xg), TPoisElement(H, pi))
print("closed form:", (gf, gm))
print("equal to the series:", series.form_part == gf and series.mv_part == gm)

print()
print("== the 2-form shear and the affine action ==")
shear = form(D3, Fraction(1, 2), None, (0, 1))
print("e^B pi for B = (1/2) dx1^dx2:", e_b_pi(shear, pi))
phi = AffineDiffeo([[1, 1, 0], [0, 1, 0], [0, 0, 2]], [0, 0, 1])
nh, npi = group_act(form(D3, 1, None, (1, 2)), phi, H, pi)
print("acted pair stays flat:", is_twisted_poisson(nh, npi))

print()
print("== a symbolic flow curve ==")
Bf = form(D3, 1, None, (0, 1)) + form(D3, 1, (0, 0, 1), (1, 2))  # dx1^dx2 + x3 dx2^dx3
Xf = mv(D3, 1, None, (0,))               # constant field
curve = flow_curve(Bf, Xf, H, pi)
print("starts at (H, pi):        ", curve.at(Fraction(0)) == (H, pi))
print("tangency identity in t:   ", curve.ode_residual() == {})
print("derivative at 0 == gauge: ", curve.derivative_at_zero() == gauge_Y(Bf, Xf, H, pi))
print("denominator in t:         ", dict(curve.denominator))
ft, mt = curve.at(Fraction(3, 2))
print("position at t = 3/2:      ", (ft, mt))
print()
print("flat all along the flow  :", is_twisted_poisson(ft, mt))
