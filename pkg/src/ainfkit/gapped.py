"""The discrete energy monoid, its norm, gapped validation and truncation.

The monoid G lives in [0, infinity) x Z, is given by finitely many generators
with positive energy, and automatically contains (0, 0).  The norm of a
nonzero element is

    max{ d : (lam, mu) = sum of d nonzero G-elements }  +  floor(lam),

with norm((0,0)) = 0.  It governs the A_{N,0} budget: a table at key
(k, lam, mu) is admitted at level N iff norm((lam, mu)) + k - 1 <= N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import GappedViolationError, NotInMonoidError
from .novikov import as_fraction


@dataclass(frozen=True)
class EnergyMonoid:
    generators: tuple  # of (lam, mu), lam > 0 strictly, deduplicated, sorted

    @staticmethod
    def make(generators) -> "EnergyMonoid":
        gens = []
        for lam, mu in generators:
            lam, mu = as_fraction(lam), int(mu)
            if lam == 0:
                if mu != 0:
                    raise GappedViolationError(
                        f"generator (0, {mu}) breaks G ∩ ({{0}}×Z) = {{(0,0)}}"
                    )
                continue  # (0,0) is always present
            if lam < 0:
                raise GappedViolationError(f"generator energy {lam} < 0")
            gens.append((lam, mu))
        return EnergyMonoid(tuple(sorted(set(gens))))

    @property
    def lambda0(self):
        """Minimal positive generator energy; +inf for the trivial monoid."""
        return min((l for l, _ in self.generators), default=math.inf)

    def contains(self, key) -> bool:
        lam, mu = as_fraction(key[0]), int(key[1])
        if (lam, mu) == (0, 0):
            return True
        if lam <= 0:
            return False
        return (lam, mu) in set(monoid_elements(self, lam))

    def positive_energies(self, bound):
        """Distinct positive energies of monoid elements with lam <= bound."""
        return sorted({l for l, _ in monoid_elements(self, bound) if l > 0})


@lru_cache(maxsize=None)
def monoid_elements(G: EnergyMonoid, bound) -> tuple:
    """All monoid elements with energy <= bound, sorted; includes (0, 0).

    One shared cache per (G, bound) serves membership, norms and every
    truncation enumeration.
    """
    bound = as_fraction(bound)
    if bound < 0:
        raise ValueError("bound must be >= 0")
    frontier = {(Fraction(0), 0)}
    elements = {(Fraction(0), 0)}
    while frontier:
        new = set()
        for lam, mu in frontier:
            for gl, gm in G.generators:
                cand = (lam + gl, mu + gm)
                if cand[0] <= bound and cand not in elements:
                    new.add(cand)
        elements |= new
        frontier = new
    return tuple(sorted(elements))


@lru_cache(maxsize=None)
def _max_decomposition_length(G: EnergyMonoid, key) -> int:
    """Max d with key = sum of d nonzero monoid elements, by DP over G."""
    lam, mu = key
    if (lam, mu) == (0, 0):
        return 0
    elems = [e for e in monoid_elements(G, lam) if e != (Fraction(0), 0)]
    elem_set = set(elems)
    if (lam, mu) not in elem_set:
        raise NotInMonoidError(f"({lam}, {mu}) is not in the monoid")
    best = {}

    def go(x):
        if x in best:
            return best[x]
        out = 1
        for g in elems:
            rest = (x[0] - g[0], x[1] - g[1])
            if rest[0] > 0 and rest in elem_set:
                out = max(out, 1 + go(rest))
            # rest == (0,0) corresponds to the single-part decomposition x = g
        best[x] = out
        return out

    return go((lam, mu))


def monoid_norm(G: EnergyMonoid, key) -> int:
    lam, mu = as_fraction(key[0]), int(key[1])
    if (lam, mu) == (0, 0):
        return 0
    if not G.contains((lam, mu)):
        raise NotInMonoidError(f"({lam}, {mu}) is not in the monoid")
    return _max_decomposition_length(G, (lam, mu)) + math.floor(lam)


def budget_admits(G: EnergyMonoid, key, k: int, level: int) -> bool:
    return monoid_norm(G, key) + k - 1 <= level


@dataclass
class GappedReport:
    ok: bool
    failures: list

    def __str__(self):
        if self.ok:
            return "gapped: pass"
        return "gapped: FAIL\n" + "\n".join(f"  - {f}" for f in self.failures)


def validate_gapped(alg) -> GappedReport:
    """Check (i) keys lie in G, (ii) m_0^{0,0} = 0, (iii) degree shifts hold.

    (iii) is enforced at construction; re-checked here so that a report on
    hand-assembled data is complete.
    """
    from .gradedcore import _check_table_degrees  # cycle-free at call time

    failures = []
    for (k, lam, mu), table in alg.tables.items():
        if not alg.monoid.contains((lam, mu)):
            failures.append(f"(i) key (k={k}, lam={lam}, mu={mu}) is not in G")
        if (k, lam, mu) == (0, Fraction(0), 0) and table.entries:
            failures.append("(ii) m_0^{0,0} != 0")
        try:
            _check_table_degrees(table, alg.source, alg.target)
        except Exception as exc:  # DegreeError
            failures.append(f"(iii) {exc}")
    return GappedReport(not failures, failures)


def truncate_level(alg, level: int):
    """Keep exactly the tables with norm((lam, mu)) + k - 1 <= level."""
    kept = [
        t for (k, lam, mu), t in alg.tables.items()
        if budget_admits(alg.monoid, (lam, mu), k, level)
    ]
    return alg.with_tables(kept)
