"""Coisotropic geometry in the bundle model R^1 x R^2 with C = {p = 0}.

A fiberwise polynomial Poisson bivector produces a (possibly curved)
quadruple whose small algebra governs deformations of C: a vertical section
is a flat point exactly when its graph is coisotropic, which the script
checks through the independent fiber-translation route.  The flatness series
stops after |pi|_pol + 2 terms, and that bound is exact.
"""

import random

from derived_brackets.linfty import mc_residual
from derived_brackets.polygeo import (
    coiso_projection,
    coiso_vdata,
    fiber_translate,
    mv,
)
from derived_brackets.sampling import random_coiso_poisson, random_vertical_section
from derived_brackets.vdata import small_algebra, validate_vdata

DIMS = (1, 2)  # base coordinate x1, fiber coordinates p1, p2

print("== flat versus curved quadruples ==")
flat_pi = mv(DIMS, 1, None, (0, 1))        # dx-leg wedge dp1: C stays coisotropic
curved_pi = mv(DIMS, 1, None, (1, 2))      # purely vertical: C is not coisotropic
print("pi = @x^@p1  -> curved:", coiso_vdata(flat_pi).curved)
print("pi = @p1^@p2 -> curved:", coiso_vdata(curved_pi).curved)
print("both validate:", validate_vdata(coiso_vdata(flat_pi)).ok,
      validate_vdata(coiso_vdata(curved_pi)).ok)

print()
print("== flat points are coisotropic graphs ==")
rng = random.Random(7)
for _ in range(6):
    pi = random_coiso_poisson(rng, DIMS, 2)
    phi = random_vertical_section(rng, DIMS, 1)
    algebra = small_algebra(coiso_vdata(pi))
    residual = mc_residual(algebra, phi).residual
    translated = coiso_projection(fiber_translate(pi, phi))
    print(
        f"  |pi|_pol = {pi.pol_degree():>2}   series residual zero: "
        f"{str(residual.is_zero()):5s}   translated projection zero: "
        f"{str(translated.is_zero()):5s}   equal as elements: {residual == translated}"
    )

print()
print("== the sharp termination bound ==")
pi = random_coiso_poisson(rng, DIMS, 2)
phi = random_vertical_section(rng, DIMS, 2)
algebra = small_algebra(coiso_vdata(pi))
bound = max(pi.pol_degree() or 0, 0) + 2
print(f"|pi|_pol = {pi.pol_degree()}; summands vanish beyond n = {bound}:")
for n in range(1, bound + 3):
    value = algebra.m(n, (phi,) * n)
    print(f"  n = {n}: zero = {value.is_zero()}")
