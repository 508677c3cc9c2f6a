"""Relation checking and tree-sum minimal models.

The running example is the non-formal nilmanifold-style dga with df = e1 e2,
encoded in shifted degrees (operations have degree +1).  Its minimal model,
assembled by sums over planar rooted trees with -H on internal edges, carries
a nonzero triple product: the Massey product survives where the cup product
dies.
"""

from fractions import Fraction as F

from ainfkit import (
    EnergyMonoid,
    GradedSpace,
    OperationSystem,
    OperationTable,
    check_morphism,
    check_relations,
    enumerate_trees,
    minimal_model,
)

# how many strict trees feed each arity of the transfer
print("strict planar trees by leaf count:",
      {k: len(enumerate_trees(k, "strict")) for k in range(2, 7)})

degrees = {"e1": 1, "e2": 1, "f": 1, "e12": 2, "e1f": 2, "e2f": 2, "e12f": 3}
products = {
    ("e1", "e2"): 1, ("e2", "e1"): -1,
    ("e1", "f"): 1, ("f", "e1"): -1,
    ("e2", "f"): 1, ("f", "e2"): -1,
}
wedge3 = {("e1", "e2f"): 1, ("e2f", "e1"): 1, ("e2", "e1f"): -1,
          ("e1f", "e2"): -1, ("f", "e12"): 1, ("e12", "f"): 1}
out_label = {("e1", "e2"): "e12", ("e2", "e1"): "e12",
             ("e1", "f"): "e1f", ("f", "e1"): "e1f",
             ("e2", "f"): "e2f", ("f", "e2"): "e2f"}

space = GradedSpace.make([(l, d - 1) for l, d in degrees.items()])
m2 = {}
for (a, b), coeff in products.items():
    sign = -1 if (degrees[a] - 1) % 2 else 1
    m2[(a, b)] = {out_label[(a, b)]: F(sign * coeff)}
for (a, b), coeff in wedge3.items():
    sign = -1 if (degrees[a] - 1) % 2 else 1
    m2[(a, b)] = {"e12f": F(sign * coeff)}

alg = OperationSystem.algebra(
    space, EnergyMonoid.make([(1, 0)]), "nov0", F(2),
    [OperationTable(1, F(0), 0, "algebra", {("f",): {"e12": F(1)}}),
     OperationTable(2, F(0), 0, "algebra", m2)])

print("dga relations:", check_relations(alg, 4))

model, incl = minimal_model(alg, kmax=4)
print("minimal model basis:", model.source.basis)
print("model relations:", check_relations(model, 4))
print("inclusion morphism:", check_morphism(incl, model, alg, 4))

n3 = model.table(3, F(0), 0)
print("nonzero triple products (the Massey product):")
for inputs, outs in sorted(n3.entries.items()):
    for out, q in sorted(outs.items()):
        print(f"  n_3{inputs} = {q} * {out}")
