"""From a quadruple (L, a, P, Delta) to its two derived-bracket algebras.

The shipped nilpotent six-element algebra makes every series finite and every
computation exact, so the higher structure is easy to inspect by hand.
"""

import random

from derived_brackets.gla import verify_gla
from derived_brackets.linfty import mc_residual, relations_residual
from derived_brackets.sampling import (
    fixture_gla,
    fixture_mc_small,
    fixture_vdata,
    random_fixture_pair,
)
from derived_brackets.vdata import BigElt, big_algebra, p_phi, small_algebra, validate_vdata

algebra = fixture_gla()
print("structure constants validate:", verify_gla(algebra).ok)

v = fixture_vdata()
print("quadruple validates:         ", validate_vdata(v).ok)
space = v.zero.space

small = small_algebra(v)
print()
print("== the small algebra on the abelian part ==")
a, c = space.gen("a"), space.gen("c")
print("m1(a)    =", small.m(1, (a,)))
print("m2(a, a) =", small.m(2, (a, a)))
print("m3(a, a, a) =", small.m(3, (a, a, a)), " (the tower stops)")

phi = space.element({"a": 2, "c": -3})  # on the branch t + 2s = -2... check:
report = mc_residual(small, phi)
print("residual of 2a - 3c:", report.residual, " -> Maurer-Cartan:", report.residual.is_zero())

rng = random.Random(0)
phi = fixture_mc_small(rng)
print("an engineered flat point:", phi, "->", mc_residual(small, phi).residual)

print()
print("== the deformed projection ==")
proj = p_phi(v, phi)
print("P_phi(u) =", proj(space.gen("u")), "  (zero exactly because phi is flat)")
print("P_phi(v) =", proj(space.gen("v")))

print()
print("== the big algebra on L[1] (+) a ==")
big = big_algebra(v)
x = BigElt(space.gen("u"), space.zero())
y = BigElt(space.zero(), a)
print("d(u[1])        =", big.m(1, (x,)))
print("{u[1], a}      =", big.m(2, (x, y)))
print("{u[1], a, a}   =", big.m(3, (x, y, y)))

print()
print("higher-Jacobi residuals on random homogeneous tuples:")
for n in range(1, 5):
    args = tuple(random_fixture_pair(rng, rng.choice([-1, 0, 1])) for _ in range(n))
    print(f"  arity {n}: residual zero = {relations_residual(big, n, args).is_zero()}")
