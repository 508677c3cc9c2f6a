"""The filtered A-infinity calculus: relation checking, the bar complex,
morphisms, composition, homotopies, and weak homotopy equivalence.

All verifications run componentwise: for each target key (k, lam, mu) the
relevant identity is assembled as a sparse rational table by stitching stored
table entries together, so the cost scales with the number of structure
constants rather than with basis^k.

Index conventions.  The extracted statements of the morphism and homotopy
relations are taken in the componentwise form induced by the bar complex:

* algebra relation at (k, lam, mu):
    sum over insertions of m_{k2} into m_{k1} (k1 + k2 = k + 1, position
    i = 1..k1) with sign (-1)^(deg a_1 + ... + deg a_{i-1}) and all key
    decompositions, equals zero;
* morphism relation: sum over insertions of m into f (same signs) equals the
  sum over block splittings n_r(f(block_1), ..., f(block_r)), where in the
  filtered case blocks may be empty (f_0 insertions) and r = 0 contributes the
  bare n_0 at k = 0;
* homotopy relation: f_k - g_k equals the block sum with one H-block
  surrounded by f-blocks (left) and g-blocks (right), plus the signed
  insertion sum of m into H.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import MalformedMorphismError
from .gapped import monoid_elements, monoid_norm, validate_gapped
from .gradedcore import (
    GradedSpace,
    OperationSystem,
    OperationTable,
    prefix_degree_sign,
    relation_defect,
)
from .novikov import NovikovElement, as_fraction, nov_add


# ---------------------------------------------------------------------------
# reports

@dataclass
class CheckReport:
    ok: bool
    failures: list  # of (kind, (k, lam, mu), witness)
    note: str = ""

    def __str__(self):
        if self.ok:
            return "check: pass" + (f" ({self.note})" if self.note else "")
        lines = ["check: FAIL"]
        for kind, key, witness in self.failures:
            lines.append(f"  - {kind} at (k={key[0]}, lam={key[1]}, mu={key[2]}), witness {witness}")
        return "\n".join(lines)


def _first_witness(defect: dict):
    return min(defect.keys()) if defect else None


def _budgeted_keys(alg_or_sys, level):
    """All (k, lam, mu) with lam <= cutoff and norm + k - 1 <= level."""
    G = alg_or_sys.monoid
    out = []
    for lam, mu in monoid_elements(G, alg_or_sys.cutoff):
        n = monoid_norm(G, (lam, mu))
        for k in range(0, max(level + 1 - n, 0) + 1):
            if n + k - 1 <= level:
                out.append((k, lam, mu))
    return sorted(out)


# ---------------------------------------------------------------------------
# generic stitching helpers

def _insertion_sum(outer: OperationSystem, inner: OperationSystem, k, key):
    """sum_{i, splits} (-1)^(deg prefix) outer_{k1}(..., inner_{k2}(block), ...)

    as a sparse table over the inner system's source basis.  This is the left
    side of the algebra/morphism relations and the second sum of the homotopy
    relation, depending on which families are passed.
    """
    lam, mu = key
    space = inner.source
    defect = {}
    for (k2, lam2, mu2), inner_t in inner.tables.items():
        lam1, mu1 = lam - lam2, mu - mu2
        if lam1 < 0 or not outer.monoid.contains((lam1, mu1)):
            continue
        k1 = k - k2 + 1
        if k1 < 1:
            continue
        outer_t = outer.table(k1, lam1, mu1)
        if outer_t is None:
            continue
        for in_outer, out_outer in outer_t.entries.items():
            for i in range(1, k1 + 1):
                slot_label = in_outer[i - 1]
                sign = prefix_degree_sign(space, in_outer[: i - 1])
                for in_inner, out_inner in inner_t.entries.items():
                    q_in = out_inner.get(slot_label)
                    if not q_in:
                        continue
                    full = in_outer[: i - 1] + in_inner + in_outer[i:]
                    for out_label, q_out in out_outer.items():
                        dkey = (full, out_label)
                        c = defect.get(dkey, Fraction(0)) + sign * q_in * q_out
                        if c:
                            defect[dkey] = c
                        else:
                            defect.pop(dkey, None)
    return defect


def _producers(fam: OperationSystem):
    """Index the family's entries by output label.

    Returns {label: [(s, (lam, mu), in_labels, coeff)]}.
    """
    prod = defaultdict(list)
    for (s, lam, mu), table in fam.tables.items():
        for in_labels, outs in table.entries.items():
            for out_label, c in outs.items():
                prod[out_label].append((s, (lam, mu), in_labels, c))
    return prod


def _assignments(slot_specs, k, key):
    """Enumerate slot fillings with total arity k and total key ``key``.

    ``slot_specs`` is a list of per-slot producer lists.  Yields
    (inputs tuple, coefficient).  Prunes on negative energy budget.
    """
    lam, mu = key

    def go(idx, k_rem, lam_rem, mu_rem):
        if idx == len(slot_specs):
            if k_rem == 0 and lam_rem == 0 and mu_rem == 0:
                yield ((), Fraction(1))
            return
        for s, (l, m), in_labels, c in slot_specs[idx]:
            if s > k_rem or l > lam_rem:
                continue
            for rest_inputs, rest_c in go(idx + 1, k_rem - s, lam_rem - l, mu_rem - m):
                yield (in_labels + rest_inputs, c * rest_c)

    yield from go(0, k, lam, mu)


def _block_sum(n_alg: OperationSystem, families_for_slot, k, key):
    """sum over n_r entries with slots filled by block producers.

    ``families_for_slot(r)`` yields one or more tuples (producer list per
    slot, extra sign); for morphisms there is a single choice (all slots f),
    for homotopies one choice per position of the H-block.
    """
    lam, mu = key
    out = {}
    for (r, lam0, mu0), table in n_alg.tables.items():
        lam_rest, mu_rest = lam - lam0, mu - mu0
        if lam_rest < 0:
            continue
        for slot_producer_maps, sign in families_for_slot(r):
            for in_labels, outs in table.entries.items():
                slot_specs = [slot_producer_maps[j].get(in_labels[j], ())
                              for j in range(r)]
                if any(not spec for spec in slot_specs):
                    continue
                if r == 0 and k != 0:
                    continue
                for inputs, coeff in _assignments(slot_specs, k, (lam_rest, mu_rest)):
                    for out_label, q in outs.items():
                        dkey = (inputs, out_label)
                        c = out.get(dkey, Fraction(0)) + sign * coeff * q
                        if c:
                            out[dkey] = c
                        else:
                            out.pop(dkey, None)
    return out


def _table_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for key, c in b.items():
        v = out.get(key, Fraction(0)) - c
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


# ---------------------------------------------------------------------------
# relation checking

def check_relations(alg: OperationSystem, level: int) -> CheckReport:
    """Verify the filtered A-infinity relations on every budgeted key.

    Budget: lam <= cutoff and norm((lam, mu)) + k - 1 <= level.  The witness
    for a failing key is the lexicographically first nonzero defect entry.
    """
    gapped = validate_gapped(alg)
    if not gapped.ok:
        return CheckReport(False, [("gapped", (0, Fraction(0), 0), f) for f in gapped.failures])
    failures = []
    for k, lam, mu in _budgeted_keys(alg, level):
        defect = relation_defect(alg, k, lam, mu)
        if defect:
            failures.append(("relation", (k, lam, mu), _first_witness(defect)))
    return CheckReport(not failures, failures, note=f"level {level}")


# ---------------------------------------------------------------------------
# bar complex

@dataclass(frozen=True)
class BarWord:
    """Tensor word of basis labels with a Novikov coefficient."""

    coeff: NovikovElement
    letters: tuple

    def degree(self, space: GradedSpace) -> int:
        return sum(space.degree(l) for l in self.letters)


def _merge_words(words):
    acc = {}
    for w in words:
        if w.letters in acc:
            acc[w.letters] = nov_add(acc[w.letters], w.coeff)
        else:
            acc[w.letters] = w.coeff
    return [BarWord(c, ls) for ls, c in sorted(acc.items()) if not c.is_zero()]


def bar_differential(alg: OperationSystem, word: BarWord):
    """The coderivation d-bar on one word, as a merged list of words.

    Insertion of m_k at position l carries (-1)^(deg a_1 + ... + deg a_{l-1});
    on the empty word, d-bar gives the length-one word m_0.
    """
    out = []
    n = len(word.letters)
    for (k, lam, mu), table in alg.tables.items():
        for l in range(1, n - k + 2):
            block = word.letters[l - 1: l - 1 + k]
            outs = table.entries.get(block)
            if not outs:
                continue
            sign = prefix_degree_sign(alg.source, word.letters[: l - 1])
            scalar = word.coeff.shift(lam, mu).scale(sign)
            if scalar.is_zero():
                continue
            for out_label, q in outs.items():
                ww = word.letters[: l - 1] + (out_label,) + word.letters[l - 1 + k:]
                out.append(BarWord(scalar.scale(q), ww))
    return _merge_words(out)


def bar_transport(f: OperationSystem, word: BarWord):
    """The coalgebra morphism f-bar on one word: sum over block splittings
    (empty blocks insert f_0 letters), merged.  Truncation at the cutoff makes
    the f_0 insertions finite."""
    results = []

    def go(rest, letters_acc, coeff):
        if coeff.is_zero():
            return
        if not rest:
            results.append(BarWord(coeff, tuple(letters_acc)))
            # further trailing f_0 blocks
            _emit_empty(rest, letters_acc, coeff, trailing=True)
            return
        # empty block (f_0 insertion)
        _emit_empty(rest, letters_acc, coeff, trailing=False)
        # nonempty block
        for s in range(1, len(rest) + 1):
            block = tuple(rest[:s])
            for (kk, lam, mu), table in f.tables.items():
                if kk != s:
                    continue
                outs = table.entries.get(block)
                if not outs:
                    continue
                scalar = coeff.shift(lam, mu)
                for out_label, q in outs.items():
                    go(rest[s:], letters_acc + [out_label], scalar.scale(q))

    def _emit_empty(rest, letters_acc, coeff, trailing):
        for (kk, lam, mu), table in f.tables.items():
            if kk != 0:
                continue
            outs = table.entries.get(())
            if not outs:
                continue
            scalar = coeff.shift(lam, mu)
            if scalar.is_zero():
                continue
            for out_label, q in outs.items():
                if trailing:
                    results.append(BarWord(scalar.scale(q), tuple(letters_acc + [out_label])))
                    _emit_empty(rest, letters_acc + [out_label], scalar.scale(q), trailing=True)
                else:
                    go(rest, letters_acc + [out_label], scalar.scale(q))

    go(list(word.letters), [], word.coeff)
    return _merge_words(results)


# ---------------------------------------------------------------------------
# morphisms

def _require_morphism(f: OperationSystem):
    if f.role != "morphism":
        raise MalformedMorphismError(f"role {f.role!r} is not a morphism")
    t = f.table(0, Fraction(0), 0)
    if t is not None and t.entries:
        raise MalformedMorphismError("f_0^{0,0} != 0")


def morphism_defect(f: OperationSystem, A: OperationSystem, B: OperationSystem,
                    k, lam, mu) -> dict:
    """LHS - RHS of the filtered morphism relation at one key."""
    lhs = _insertion_sum(f, A, k, (lam, mu))
    producers = _producers(f)

    def families(r):
        yield ([producers] * r, 1)

    rhs = _block_sum(B, families, k, (as_fraction(lam), mu))
    return _table_sub(lhs, rhs)


def check_morphism(f: OperationSystem, A: OperationSystem, B: OperationSystem,
                   level: int) -> CheckReport:
    _require_morphism(f)
    failures = []
    for k, lam, mu in _budgeted_keys(f, level):
        defect = morphism_defect(f, A, B, k, lam, mu)
        if defect:
            failures.append(("morphism", (k, lam, mu), _first_witness(defect)))
    return CheckReport(not failures, failures, note=f"level {level}")


def identity_morphism(A: OperationSystem) -> OperationSystem:
    entries = {(l,): {l: Fraction(1)} for l, _ in A.source.basis}
    t = OperationTable(1, Fraction(0), 0, "morphism", entries)
    return OperationSystem.morphism(A.source, A.target, A.monoid, A.flavor,
                                    A.cutoff, [t])


def compose_morphisms(g: OperationSystem, f: OperationSystem) -> OperationSystem:
    """(g o f)_k by block splittings, truncated at the cutoff."""
    if f.target.basis != g.source.basis:
        raise MalformedMorphismError("chain mismatch: target(f) != source(g)")
    if f.monoid != g.monoid or f.cutoff != g.cutoff or f.flavor != g.flavor:
        raise MalformedMorphismError("morphisms live over different rings")
    producers = _producers(f)
    acc = defaultdict(dict)  # (k, lam, mu) -> entries
    for (r, lam0, mu0), table in g.tables.items():
        budget = f.cutoff - lam0
        if budget < 0:
            continue
        for in_labels, outs in table.entries.items():
            slot_specs = [producers.get(in_labels[j], ()) for j in range(r)]
            if any(not spec for spec in slot_specs):
                continue
            for k_total, lam_total, mu_total, inputs, coeff in _assignments_free(slot_specs, budget):
                key = (k_total, lam0 + lam_total, mu0 + mu_total)
                tgt = acc[key].setdefault(inputs, {})
                for out_label, q in outs.items():
                    c = tgt.get(out_label, Fraction(0)) + coeff * q
                    if c:
                        tgt[out_label] = c
                    else:
                        tgt.pop(out_label, None)
    tables = [
        OperationTable(k, lam, mu, "morphism",
                       {i: o for i, o in entries.items() if o})
        for (k, lam, mu), entries in acc.items()
    ]
    return OperationSystem.morphism(f.source, g.target, f.monoid, f.flavor,
                                    f.cutoff, [t for t in tables if t.entries])


def _assignments_free(slot_specs, lam_budget):
    """Like _assignments but with free totals; yields
    (k_total, lam_total, mu_total, inputs, coeff)."""

    def go(idx, lam_rem):
        if idx == len(slot_specs):
            yield (0, Fraction(0), 0, (), Fraction(1))
            return
        for s, (l, m), in_labels, c in slot_specs[idx]:
            if l > lam_rem:
                continue
            for k_t, l_t, m_t, rest_inputs, rest_c in go(idx + 1, lam_rem - l):
                yield (s + k_t, l + l_t, m + m_t, in_labels + rest_inputs, c * rest_c)

    yield from go(0, lam_budget)


# ---------------------------------------------------------------------------
# homotopies

def homotopy_defect(H: OperationSystem, f: OperationSystem, g: OperationSystem,
                    A: OperationSystem, B: OperationSystem, k, lam, mu) -> dict:
    """f_k - g_k - (block sum with one H-slot) - (signed m-insertions into H)."""
    key = (as_fraction(lam), mu)
    target = {}
    for fam, sign in ((f, 1), (g, -1)):
        t = fam.table(k, key[0], key[1])
        if t is None:
            continue
        for inputs, outs in t.entries.items():
            for out_label, q in outs.items():
                dkey = (inputs, out_label)
                c = target.get(dkey, Fraction(0)) + sign * q
                if c:
                    target[dkey] = c
                else:
                    target.pop(dkey, None)
    f_prod, g_prod, h_prod = _producers(f), _producers(g), _producers(H)

    def families(r):
        for t in range(r):
            yield ([f_prod] * t + [h_prod] + [g_prod] * (r - 1 - t), 1)

    sum1 = _block_sum(B, families, k, key)
    sum2 = _insertion_sum(H, A, k, key)
    return _table_sub(_table_sub(target, sum1), sum2)


def check_homotopy(H: OperationSystem, f: OperationSystem, g: OperationSystem,
                   A: OperationSystem, B: OperationSystem, level: int) -> CheckReport:
    if H.role != "homotopy":
        raise MalformedMorphismError(f"role {H.role!r} is not a homotopy")
    t = H.table(0, Fraction(0), 0)
    if t is not None and t.entries:
        raise MalformedMorphismError("H_0^{0,0} != 0")
    failures = []
    for k, lam, mu in _budgeted_keys(H, level):
        defect = homotopy_defect(H, f, g, A, B, k, lam, mu)
        if defect:
            failures.append(("homotopy", (k, lam, mu), _first_witness(defect)))
    return CheckReport(not failures, failures, note=f"level {level}")


def whisker_strict(h: OperationSystem, H: OperationSystem) -> OperationSystem:
    """(h o H)_k = h_1 o H_k for a strict morphism h; a homotopy h∘f => h∘g."""
    h1 = {(kk, lam, mu): t for (kk, lam, mu), t in h.tables.items() if kk == 1}
    out = defaultdict(dict)
    for (k, lam, mu), table in H.tables.items():
        for (kk, lam1, mu1), h_t in h1.items():
            for inputs, outs in table.entries.items():
                acc = {}
                for mid, q in outs.items():
                    for out_label, q2 in h_t.entries.get((mid,), {}).items():
                        acc[out_label] = acc.get(out_label, Fraction(0)) + q * q2
                acc = {o: c for o, c in acc.items() if c}
                if acc:
                    tgt = out[(k, lam + lam1, mu + mu1)].setdefault(inputs, {})
                    for o, c in acc.items():
                        tgt[o] = tgt.get(o, Fraction(0)) + c
    tables = [OperationTable(k, lam, mu, "homotopy", e)
              for (k, lam, mu), e in out.items()]
    return OperationSystem.homotopy(H.source, h.target, H.monoid, H.flavor,
                                    H.cutoff, [t for t in tables if t.entries])


# ---------------------------------------------------------------------------
# weak homotopy equivalence

def _q_matrix(table, dom_labels, cod_labels):
    return [
        [table.get((l,), {}).get(out, Fraction(0)) for l in dom_labels]
        for out in cod_labels
    ]


def is_weak_homotopy_equiv(f: OperationSystem, A: OperationSystem,
                           B: OperationSystem):
    """Does f_1^{0,0} induce an isomorphism on Q-cohomology in every degree?

    Returns (bool, certificate) with certificate a per-degree list of
    (degree, dim H(A), dim H(B), rank of the induced map).
    """
    dA = A.table(1, Fraction(0), 0)
    dB = B.table(1, Fraction(0), 0)
    f1 = f.table(1, Fraction(0), 0)
    dA_e = dA.entries if dA else {}
    dB_e = dB.entries if dB else {}
    f1_e = f1.entries if f1 else {}
    degrees = sorted(set(A.source.degrees()) | set(B.target.degrees()))
    cert = []
    ok = True
    for d in degrees:
        domA = A.source.labels_of_degree(d)
        codA = A.source.labels_of_degree(d + 1)
        prevA = A.source.labels_of_degree(d - 1)
        domB = B.target.labels_of_degree(d)
        codB = B.target.labels_of_degree(d + 1)
        prevB = B.target.labels_of_degree(d - 1)

        zA = linalg.kernel_basis(_q_matrix(dA_e, domA, codA), len(domA)) if domA else []
        imA = [[dA_e.get((l,), {}).get(out, Fraction(0)) for out in domA] for l in prevA]
        hA = len(zA) - linalg.rank(imA)
        zB = linalg.kernel_basis(_q_matrix(dB_e, domB, codB), len(domB)) if domB else []
        imB = [[dB_e.get((l,), {}).get(out, Fraction(0)) for out in domB] for l in prevB]
        rB = linalg.rank(imB)
        hB = len(zB) - rB

        # induced map: images of cycle basis vectors, modulo boundaries of B
        img_rows = [list(r) for r in imB if any(r)]
        fz_rows = []
        for z in zA:
            v = {out: Fraction(0) for out in domB}
            for j, l in enumerate(domA):
                if z[j]:
                    for out, q in f1_e.get((l,), {}).items():
                        v[out] += z[j] * q
            fz_rows.append([v[out] for out in domB])
        base = linalg.rank(img_rows)
        rk = linalg.rank(img_rows + fz_rows) - base
        cert.append((d, hA, hB, rk))
        if hA != hB or rk != hA:
            ok = False
    return ok, cert
