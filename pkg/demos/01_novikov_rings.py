"""Truncated Novikov rings: exact arithmetic with an energy cutoff.

Elements are finite sums of terms q*T^lam*e^mu with exact rational q and lam.
Every element carries a cutoff E; all identities hold modulo F^{>E}, the
ideal of terms with energy beyond E.
"""

from fractions import Fraction as F

from ainfkit import NovikovElement, nov_invert, nov_mul, nov_sub, nov_valuation
from ainfkit import nov_flavor_check

E = F(4)

# build 1 - T and invert it: the geometric series truncated at E
one = NovikovElement.unit("nov0", E)
t = NovikovElement.monomial(1, 1, 0, "nov0", E)
series = nov_invert(nov_sub(one, t))
print("1/(1-T) mod F^{>4}      =", series)
print("check (1-T) * series    =", nov_mul(nov_sub(one, t), series))

# valuations measure the leading energy; the cutoff truncates products
a = NovikovElement.make([(3, F(1, 2), 0), (1, 2, 0)], "nov0", E)
print("valuation(3T^(1/2)+T^2) =", nov_valuation(a))
big = NovikovElement.monomial(1, 3, 0, "nov0", E)
print("T^3 * T^3 mod F^{>4}    =", nov_mul(big, big), "(truncated away)")

# the unit flavors allow negative powers: e is invertible of degree 2
te2 = NovikovElement.monomial(1, 1, 2, "nov", E)
print("(T e^2)^(-1)            =", nov_invert(te2))

# flavor diagnostics: which lattice does an element live on?
half = NovikovElement.monomial(1, F(1, 2), 0, "nov0", E)
print("T^(1/2) against novN    ->", nov_flavor_check(half, "novN"))
minus = NovikovElement.monomial(1, -1, 0, "nov", E)
print("T^(-1) against novZ     ->", nov_flavor_check(minus, "novZ") or "clean")
