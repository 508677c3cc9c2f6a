"""Homotopy inverses of strict surjections, and level-N assembly from
partial tables on a filtered space.

A strict surjective quasi-isomorphism p admits an explicit tree-sum inverse q
with p o q equal to the identity on the nose, even in the presence of
curvature in the collapsed directions.  The same tree engine, run with the
parity-dependent edge sign and a filtration splitting, assembles a level-N
algebra from tables that are only defined within an index budget.
"""

from fractions import Fraction as F

from ainfkit import (
    EnergyMonoid,
    GeometricData,
    GradedSpace,
    OperationSystem,
    OperationTable,
    ank_from_geometric,
    check_morphism,
    check_relations,
    compose_morphisms,
    homotopy_inverse_strict,
    monoid_elements,
    monoid_norm,
)

G = EnergyMonoid.make([(1, 0)])
E = F(3)

# --- strict inverse: project {x, y, z; d(x) = y, m_0 = T y} onto span{z} ---
space = GradedSpace.make([("x", 0), ("y", 1), ("z", 0)])
alg = OperationSystem.algebra(space, G, "nov0", E, [
    OperationTable(1, F(0), 0, "algebra", {("x",): {"y": F(1)}}),
    OperationTable(0, F(1), 0, "algebra", {(): {"y": F(1)}}),
])
target = GradedSpace.make([("z", 0)])
D = OperationSystem.algebra(target, G, "nov0", E, [])
p = OperationSystem.morphism(space, target, G, "nov0", E, [
    OperationTable(1, F(0), 0, "morphism", {("z",): {"z": F(1)}})])

q = homotopy_inverse_strict(p, alg, D, kmax=3)
print("q as a morphism:", check_morphism(q, D, alg, 3))
print("q tables:")
for (k, lam, mu), t in sorted(q.tables.items()):
    print(f"  q_{k}^({lam},{mu}):", dict(t.entries))
pq = compose_morphisms(p, q)
print("p o q tables equal the identity:",
      {k: dict(t.entries) for k, t in pq.tables.items()})

# --- geometric assembly: trivial filtration reproduces the input tables ---
declared = set()
n_level = 2
n_prime = n_level * (n_level + 2)
for lam, mu in monoid_elements(G, E):
    n = monoid_norm(G, (lam, mu))
    for k in range(0, max(n_prime + 1 - n, 0) + 1):
        if n + k - 1 <= n_prime:
            declared.add((k, lam, mu))
geo = GeometricData(space, {l: 0 for l, _ in space.basis}, G, E, "nov0",
                    declared, {key: t.entries for key, t in alg.tables.items()})
out = ank_from_geometric(geo, n_level, ambient_parity=3)
print("assembled level-2 algebra keys:",
      sorted((k, str(l), m) for k, l, m in out.tables))
print("assembled relations:", check_relations(out, n_level))
