"""Graded rational spaces, sparse multilinear operation tables, and the
Koszul-signed defect tensor of the filtered A-infinity relations.

An OperationSystem stores one family of multilinear maps (the m_k of an
algebra, the f_k of a morphism, or the H_k of a homotopy) as sparse rational
tables indexed by (arity k, energy lam, e-power mu).  Degree shifts per role:

    algebra    deg(out) = sum deg(in) + 1 - 2*mu
    morphism   deg(out) = sum deg(in)     - 2*mu
    homotopy   deg(out) = sum deg(in) - 1 - 2*mu

Signs are always recomputed from the stored integer degrees; they are never
cached anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import DegreeError, NotAComplexError, NotInMonoidError, UnknownBasisError
from .gapped import EnergyMonoid
from .novikov import NovikovElement, as_fraction, nov_add, nov_mul

ROLE_SHIFT = {"algebra": 1, "morphism": 0, "homotopy": -1}


@dataclass(frozen=True)
class GradedSpace:
    """Ordered basis of (label, degree); order fixes pivoting downstream."""

    basis: tuple  # of (label, degree)

    def __post_init__(self):
        labels = [l for l, _ in self.basis]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate basis labels")

    @staticmethod
    def make(pairs) -> "GradedSpace":
        return GradedSpace(tuple((str(l), int(d)) for l, d in pairs))

    @property
    def labels(self):
        return tuple(l for l, _ in self.basis)

    def degree(self, label) -> int:
        for l, d in self.basis:
            if l == label:
                return d
        raise UnknownBasisError(label)

    def has(self, label) -> bool:
        return any(l == label for l, _ in self.basis)

    def labels_of_degree(self, d):
        return [l for l, dd in self.basis if dd == d]

    def degrees(self):
        return sorted({d for _, d in self.basis})

    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis


# A sparse Q-multilinear table: {input label tuple: {output label: coeff}}
def table_entries(pairs):
    out = {}
    for inputs, outputs in pairs:
        tgt = out.setdefault(tuple(inputs), {})
        for label, coeff in outputs.items():
            c = tgt.get(label, Fraction(0)) + as_fraction(coeff)
            if c:
                tgt[label] = c
            else:
                tgt.pop(label, None)
    return {k: v for k, v in out.items() if v}


@dataclass
class OperationTable:
    k: int
    lam: Fraction
    mu: int
    role: str
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lam = as_fraction(self.lam)
        if self.role not in ROLE_SHIFT:
            raise ValueError(f"unknown role {self.role!r}")
        self.entries = {
            tuple(k): {o: as_fraction(c) for o, c in v.items() if c}
            for k, v in self.entries.items()
        }
        self.entries = {k: v for k, v in self.entries.items() if v}

    @property
    def key(self):
        return (self.k, self.lam, self.mu)

    def shift(self) -> int:
        return ROLE_SHIFT[self.role] - 2 * self.mu


def _check_table_degrees(table: OperationTable, source: GradedSpace, target: GradedSpace):
    for inputs, outputs in table.entries.items():
        if len(inputs) != table.k:
            raise DegreeError(f"entry arity {len(inputs)} != k={table.k}")
        din = sum(source.degree(l) for l in inputs)
        for out_label, _ in outputs.items():
            if target.degree(out_label) != din + table.shift():
                raise DegreeError(
                    f"entry {inputs} -> {out_label} violates the {table.role} "
                    f"degree shift at (k={table.k}, lam={table.lam}, mu={table.mu})"
                )


@dataclass
class OperationSystem:
    """Graded basis plus the sparse structure-constant tables of one family."""

    source: GradedSpace
    target: GradedSpace
    monoid: EnergyMonoid
    flavor: str
    cutoff: Fraction
    role: str
    tables: dict = field(default_factory=dict)  # (k, lam, mu) -> OperationTable

    def __post_init__(self):
        self.cutoff = as_fraction(self.cutoff)
        fixed = {}
        for table in self.tables.values():
            if table.role != self.role:
                raise ValueError(f"table role {table.role} != system role {self.role}")
            if self.flavor in ("cy", "cy0") and table.mu != 0:
                raise ValueError(
                    f"flavor violation: e-power {table.mu} in a {self.flavor} system"
                )
            if table.lam > self.cutoff:
                continue
            if not self.monoid.contains((table.lam, table.mu)):
                raise NotInMonoidError(
                    f"table key (lam={table.lam}, mu={table.mu}) is not in the monoid"
                )
            if table.key in fixed:
                raise ValueError(f"duplicate table key {table.key}")
            _check_table_degrees(table, self.source, self.target)
            if table.entries:
                fixed[table.key] = table
        self.tables = fixed

    # -- convenience ------------------------------------------------------

    @staticmethod
    def algebra(space, monoid, flavor, cutoff, tables=()):
        return OperationSystem(space, space, monoid, flavor, cutoff, "algebra",
                               {t.key: t for t in tables})

    @staticmethod
    def morphism(source, target, monoid, flavor, cutoff, tables=()):
        return OperationSystem(source, target, monoid, flavor, cutoff, "morphism",
                               {t.key: t for t in tables})

    @staticmethod
    def homotopy(source, target, monoid, flavor, cutoff, tables=()):
        return OperationSystem(source, target, monoid, flavor, cutoff, "homotopy",
                               {t.key: t for t in tables})

    def table(self, k, lam, mu) -> OperationTable | None:
        return self.tables.get((k, as_fraction(lam), mu))

    def arities(self):
        return sorted({k for k, _, _ in self.tables})

    def keys_of_arity(self, k):
        return sorted(((lam, mu) for kk, lam, mu in self.tables if kk == k))

    def q_apply(self, k, lam, mu, labels) -> dict:
        """Single-table application to a basis tuple; {} if table absent."""
        t = self.table(k, lam, mu)
        if t is None:
            return {}
        return dict(t.entries.get(tuple(labels), {}))

    def with_tables(self, tables):
        return OperationSystem(self.source, self.target, self.monoid, self.flavor,
                               self.cutoff, self.role, {t.key: t for t in tables})

    def zero_vector(self):
        return {}

    def describe(self):
        return {
            "role": self.role,
            "flavor": self.flavor,
            "cutoff": str(self.cutoff),
            "keys": [(k, str(l), m) for k, l, m in sorted(self.tables)],
        }


# -- vectors over the Novikov ring ------------------------------------------
# A vector is a dict {basis label: NovikovElement}; absent labels mean zero.

def vec_add(u: dict, v: dict) -> dict:
    out = dict(u)
    for label, val in v.items():
        out[label] = nov_add(out[label], val) if label in out else val
    return {l: x for l, x in out.items() if not x.is_zero()}


def vec_scale(v: dict, scalar: NovikovElement) -> dict:
    out = {}
    for label, val in v.items():
        prod = nov_mul(val, scalar)
        if not prod.is_zero():
            out[label] = prod
    return out


def vec_is_zero(v: dict) -> bool:
    return all(x.is_zero() for x in v.values())


def vec_from_q(qvec: dict, flavor, cutoff, lam=0, mu=0) -> dict:
    return {
        label: NovikovElement.monomial(c, lam, mu, flavor, cutoff)
        for label, c in qvec.items() if c
    }


def apply_operation(sys: OperationSystem, k: int, inputs) -> dict:
    """Full filtered application: sum over stored (lam, mu) of
    T^lam e^mu times the multilinear extension of the Q-table.

    ``inputs`` is a sequence of k vectors over the source space.  The scalars
    T, e are even, so the multilinear extension introduces no Koszul signs.
    """
    if len(inputs) != k:
        raise ValueError(f"expected {k} inputs, got {len(inputs)}")
    for vec in inputs:
        for label in vec:
            if not sys.source.has(label):
                raise UnknownBasisError(label)
    out = {}
    for (kk, lam, mu), table in sys.tables.items():
        if kk != k:
            continue
        for in_labels, outputs in table.entries.items():
            scalar = None
            ok = True
            for slot, label in enumerate(in_labels):
                coeff = inputs[slot].get(label)
                if coeff is None:
                    ok = False
                    break
                scalar = coeff if scalar is None else nov_mul(scalar, coeff)
            if not ok:
                continue
            if scalar is None:  # k == 0
                scalar = NovikovElement.unit(sys.flavor, sys.cutoff)
            scalar = scalar.shift(lam, mu)
            if scalar.is_zero():
                continue
            for out_label, q in outputs.items():
                term = scalar.scale(q)
                if term.is_zero():
                    continue
                out[out_label] = (
                    nov_add(out[out_label], term) if out_label in out else term
                )
    return {l: x for l, x in out.items() if not x.is_zero()}


def prefix_degree_sign(space: GradedSpace, labels) -> int:
    """(-1)^(sum of degrees of ``labels``)."""
    return -1 if sum(space.degree(l) for l in labels) % 2 else 1


def relation_defect(alg: OperationSystem, k: int, lam, mu) -> dict:
    """Left side of the filtered A-infinity relation at (k, lam, mu).

    Returns the sparse defect table {(input tuple, output label): coeff}; the
    relation at this key holds iff the table is empty.  Assembled by stitching
    pairs of stored table entries, so cost is (entries x entries), not
    (basis^k).
    """
    if alg.role != "algebra":
        raise ValueError("relation_defect needs an algebra")
    lam = as_fraction(lam)
    defect = {}
    for (k2, lam2, mu2), inner in alg.tables.items():
        lam1, mu1 = lam - lam2, mu - mu2
        if lam1 < 0 or not alg.monoid.contains((lam1, mu1)):
            continue
        k1 = k - k2 + 1
        if k1 < 1:
            continue
        outer = alg.table(k1, lam1, mu1)
        if outer is None:
            continue
        for in_outer, out_outer in outer.entries.items():
            for i in range(1, k1 + 1):
                slot_label = in_outer[i - 1]
                sign = prefix_degree_sign(alg.source, in_outer[: i - 1])
                for in_inner, out_inner in inner.entries.items():
                    q_in = out_inner.get(slot_label)
                    if not q_in:
                        continue
                    full_inputs = in_outer[: i - 1] + in_inner + in_outer[i:]
                    for out_label, q_out in out_outer.items():
                        key = (full_inputs, out_label)
                        c = defect.get(key, Fraction(0)) + sign * q_in * q_out
                        if c:
                            defect[key] = c
                        else:
                            defect.pop(key, None)
    return defect


def cohomology_ranks(space: GradedSpace, d_table: OperationTable) -> dict:
    """Per-degree Betti numbers of (space, d) over Q by exact row reduction."""
    if d_table.k != 1 or d_table.lam != 0 or d_table.mu != 0:
        raise ValueError("differential must be the (1, 0, 0) table")
    # check d*d = 0
    for inputs, outputs in d_table.entries.items():
        acc = {}
        for mid, c1 in outputs.items():
            for out, c2 in d_table.entries.get((mid,), {}).items():
                acc[out] = acc.get(out, Fraction(0)) + c1 * c2
        if any(acc.values()):
            raise NotAComplexError(f"d(d({inputs[0]})) != 0")
    ranks = {}
    degs = space.degrees()
    rank_at = {}
    for d in degs:
        dom = space.labels_of_degree(d)
        cod = space.labels_of_degree(d + 1)
        mat = [
            [d_table.entries.get((l,), {}).get(out, Fraction(0)) for l in dom]
            for out in cod
        ]
        rank_at[d] = linalg.rank(mat) if dom and cod else 0
    for d in degs:
        dim_d = len(space.labels_of_degree(d))
        b = dim_d - rank_at.get(d, 0) - rank_at.get(d - 1, 0)
        if b:
            ranks[d] = b
    return ranks
