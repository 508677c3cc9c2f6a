"""Wall-crossing under energy rescaling, and the Legendrian energy lattice.

Shifting double-point energies by c transports a bounding cochain by T^(-c);
when the transported valuation reaches zero the cochain stops bounding: a
wall.  Over the integer-lattice rings of Legendrian lifts, stored energies
must differ from signed sums of a-offsets by nonnegative integers, which is
exactly what rules the wall out.
"""

from fractions import Fraction as F

from ainfkit import (
    DoublePoint,
    EnergyMonoid,
    NovikovElement,
    OperationTable,
    legendrian_validate,
    make_presentation,
    rescale_regrade,
)

G = EnergyMonoid.make([(1, 0)])
points = [DoublePoint("p", "q", 2), DoublePoint("q", "p", 1)]
t1 = OperationTable(1, F(1), 0, "algebra", {("q:p",): {"p:q": F(1)}})
pres = make_presentation(3, {}, points, G, "cy0", F(2), [t1])
b = {"p:q": NovikovElement.monomial(1, F(1, 2), 0, "cy0", F(2))}

for c in (F(1, 4), F(3, 4)):
    report = rescale_regrade(pres, {("p", "q"): {"c": c}, ("q", "p"): {"c": -c}}, b)
    print(f"c = {c}:")
    print("  transported valuation:", report.transported_valuation,
          "wall:", report.wall, "algebra wall:", report.algebra_wall)
    if report.presentation:
        print("  intertwining m' Xi = Xi m verified:", report.intertwining_checked)

# e-regrades shift double-point degrees by 2d and the table e-powers with them
pres_nov = make_presentation(3, {}, points, G, "nov0", F(2), [t1])
regraded = rescale_regrade(pres_nov, {("p", "q"): {"d": 1}, ("q", "p"): {"d": -1}})
print("regraded degrees:", dict(regraded.presentation.space.basis))

# the Legendrian lattice: energies live in N + signed a-offsets
pts = [DoublePoint("p", "q", 2, a_value=F(1, 3)),
       DoublePoint("q", "p", 1, a_value=F(2, 3))]
for lam in (F(4, 3), F(1, 2)):
    t = OperationTable(1, lam, 0, "algebra", {("q:p",): {"p:q": F(1)}})
    lp = make_presentation(3, {}, pts, EnergyMonoid.make([(lam, 0)]),
                           "novN", F(3), [t])
    print(f"table energy {lam}:", legendrian_validate(lp))
