"""Immersed-Lagrangian presentations and their Floer cohomology.

The immersed-sphere preset has one transverse double point whose indices are
computed from phase data.  Its rank-and-index criteria give a unique bounding
cochain 0, and with empty operations the Floer groups are the shifted
homology of the presentation space.  A second example shows torsion over the
0-flavor ring, and a disjoint union decomposing into sectors.
"""

from fractions import Fraction as F

from ainfkit import (
    DoublePoint,
    EnergyMonoid,
    GradedSpace,
    OperationSystem,
    OperationTable,
    acyclicity_feasible,
    bc_criteria,
    hf_compute,
    make_presentation,
    sector_project,
    union_sectors,
    whitney_preset,
)
from ainfkit.floer import LagrangianPresentation

pres = whitney_preset(3)
print("generator degrees:", sorted(d for _, d in pres.space.basis))
print(bc_criteria(pres))
dims = {}
for _, d in pres.space.basis:
    dims[d] = dims.get(d, 0) + 1
print("acyclic differential feasible:", acyclicity_feasible(dims))
print(hf_compute(pres, {}))

# torsion from a positive-energy differential, visible over the 0-flavor ring
G = EnergyMonoid.make([(1, 0)])
space = GradedSpace.make([("u", 0), ("v", 1)])
t = OperationTable(1, F(1), 0, "algebra", {("u",): {"v": F(1)}})
for flavor in ("cy", "cy0"):
    alg = OperationSystem.algebra(space, G, flavor, F(2), [t])
    print(hf_compute(LagrangianPresentation(3, {}, [], alg), {}))

# disjoint unions decompose into sectors; mixed generators come from
# intersection points of the two Lagrangians
points = [DoublePoint("p", "q", 2), DoublePoint("q", "p", 1)]
presA = make_presentation(3, {0: 1}, points, G, "cy0", F(2), prefix="A.")
presB = make_presentation(3, {0: 1}, points, G, "cy0", F(2), prefix="B.")
cross = [DoublePoint("x", "y", 2), DoublePoint("y", "x", 1)]
union = union_sectors(presA, presB, cross)
print("sectors:", union.sectors)
ab = sector_project(union, "AB")
print("AB sector basis:", ab.source.basis)
print(hf_compute(union, {}))
