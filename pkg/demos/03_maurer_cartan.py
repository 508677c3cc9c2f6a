"""Twisting and the Maurer-Cartan equation.

The fixture has one unit of curvature: m_1(x) = y and m_0 = T y.  Twisting by
b = -T x cancels the curvature, and the greedy solver finds exactly that b.
An obstructed fixture returns the blocking cohomology class instead.
"""

from fractions import Fraction as F

from ainfkit import (
    BoundingCochain,
    EnergyMonoid,
    GradedSpace,
    NovikovElement,
    Obstruction,
    OperationSystem,
    OperationTable,
    mc_residual,
    mc_solve,
    twist,
)

G = EnergyMonoid.make([(1, 0)])
space = GradedSpace.make([("x", 0), ("y", 1)])
alg = OperationSystem.algebra(space, G, "nov0", F(3), [
    OperationTable(1, F(0), 0, "algebra", {("x",): {"y": F(1)}}),
    OperationTable(0, F(1), 0, "algebra", {(): {"y": F(1)}}),
])

residual, ok = mc_residual(alg, {})
print("residual of b = 0:", {l: str(v) for l, v in residual.items()}, "zero?", ok)

b = {"x": NovikovElement.monomial(-1, 1, 0, "nov0", F(3))}
residual, ok = mc_residual(alg, b)
print("residual of b = -T x:", residual, "zero?", ok)

twisted = twist(alg, b)
print("twisted operation keys:", sorted((k, str(l), m) for k, l, m in twisted.tables),
      "(no arity-0 key: the twist is strict)")

solution = mc_solve(alg)
assert isinstance(solution, BoundingCochain)
print("solver found b =", {l: str(v) for l, v in solution.element.items()})

# an obstructed fixture: curvature on a minimal model survives in cohomology
obstructed = OperationSystem.algebra(
    GradedSpace.make([("v", 1)]), G, "nov0", F(3),
    [OperationTable(0, F(1), 0, "algebra", {(): {"v": F(1)}})])
out = mc_solve(obstructed)
assert isinstance(out, Obstruction)
print("obstructed fixture:", out)
