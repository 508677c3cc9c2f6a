"""The closed-form index, dimension and sign arithmetic.

Everything is exact integer parity arithmetic: double-point indices from
phase floors, virtual dimensions of the moduli spaces, and the orientation
signs for boundary splittings, chain insertions and fibre products.
"""

from fractions import Fraction as F

from ainfkit import (
    SignQuery,
    eta_from_phases,
    shifted_degree,
    sign_boundary_insertion,
    sign_fibre_product,
    sign_zeta,
    vdim_formulas,
)

# the immersed-sphere phase data, in every ambient dimension
for n in (2, 3, 5, 8):
    r_minus = [F(-1, 4)] * n
    r_plus = [F(5, 4)] + [F(1, 4)] * (n - 1)
    print(f"n = {n}: eta = {eta_from_phases(n, r_minus, r_plus)},"
          f" partner = {eta_from_phases(n, r_plus, r_minus)}")

# shifted cohomological degrees: the grading every sign formula uses
print("top manifold chain:", shifted_degree("manifold", 3, n=3))
print("double-point point chain:", shifted_degree("double-point", 0, eta=4))

# virtual dimensions
print("main vdim:", vdim_formulas("main", maslov=2, k=3, n=4, etas=[2, 1]))
print("with chains:", vdim_formulas("withChains", maslov=2, n=4, degs=[1, -1, 0]))
print("modified = main + sum(etas):",
      vdim_formulas("modified", maslov=2, k=3, n=4))
print("virtual-chain degree:", vdim_formulas("vcDegree", mu=1, degs=[1, 0]))

# boundary splitting signs, embedded case: zeta2 collapses to a closed form
q = SignQuery(n=2, i=1, k1=1, k2=2)
print("zeta2 (I empty):", sign_zeta("zeta2", q), "= (-1)^(n+i+k2(k1+i))")

# the identity-chain normalization pins zeta3 to +1
q3 = SignQuery(n=3, k=3, degs=[-1, 4 - 1, -1], eta_by_index={2: 4})
print("zeta3 at identity chains:", sign_zeta("zeta3", q3))

# insertion signs compose: split x insert = vcSplit for even Maslov
degs = [1, 0, 2]
split = sign_boundary_insertion("split", SignQuery(n=3, i=2, k2=1, degs=degs))
g_deg = 1 - 2 + degs[1]
insert = sign_boundary_insertion("insert", SignQuery(i=2, deg_f=g_deg, degs=degs))
vc = sign_boundary_insertion("vcSplit", SignQuery(n=3, i=2, degs=degs))
print("split * insert = vcSplit:", split * insert == vc)

# fibre-product conventions
print("swap twice:", sign_fibre_product("swap", 2, 3, 1) ** 2)
print("boundaryLeft(2, 1):", sign_fibre_product("boundaryLeft", 2, 1))
