"""Matrices over the truncated Novikov rings.

Used for inverting the linear part of strict morphisms, for gauge/rescaling
transports, and for the valuation-aware Smith reduction behind Floer
cohomology.  All arithmetic is exact on the truncated representation: every
statement is mod F^{>E}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NotInvertibleError
from .novikov import NovikovElement, nov_add, nov_invert, nov_mul, nov_valuation


@dataclass
class NovMatrix:
    rows: tuple  # row labels
    cols: tuple  # column labels
    flavor: str
    cutoff: Fraction
    data: dict = field(default_factory=dict)  # (row, col) -> NovikovElement

    def get(self, r, c) -> NovikovElement:
        v = self.data.get((r, c))
        return v if v is not None else NovikovElement.zero(self.flavor, self.cutoff)

    def set(self, r, c, value: NovikovElement):
        if value.is_zero():
            self.data.pop((r, c), None)
        else:
            self.data[(r, c)] = value

    def copy(self) -> "NovMatrix":
        return NovMatrix(self.rows, self.cols, self.flavor, self.cutoff, dict(self.data))

    @staticmethod
    def identity(labels, flavor, cutoff) -> "NovMatrix":
        m = NovMatrix(tuple(labels), tuple(labels), flavor, cutoff)
        one = NovikovElement.unit(flavor, cutoff)
        for l in labels:
            m.data[(l, l)] = one
        return m

    @staticmethod
    def from_linear_tables(sys) -> "NovMatrix":
        """Sum over stored k=1 tables of T^lam e^mu times the Q-matrix."""
        m = NovMatrix(sys.target.labels, sys.source.labels, sys.flavor, sys.cutoff)
        for (k, lam, mu), table in sys.tables.items():
            if k != 1:
                continue
            for (src,), outs in table.entries.items():
                for dst, q in outs.items():
                    term = NovikovElement.monomial(q, lam, mu, sys.flavor, sys.cutoff)
                    m.set(dst, src, nov_add(m.get(dst, src), term))
        return m

    def apply(self, vec: dict) -> dict:
        out = {}
        for (r, c), val in self.data.items():
            x = vec.get(c)
            if x is None:
                continue
            term = nov_mul(val, x)
            if term.is_zero():
                continue
            out[r] = nov_add(out[r], term) if r in out else term
        return {k: v for k, v in out.items() if not v.is_zero()}

    def matmul(self, other: "NovMatrix") -> "NovMatrix":
        assert self.cols == other.rows
        out = NovMatrix(self.rows, other.cols, self.flavor, self.cutoff)
        by_row = {}
        for (r, c), v in self.data.items():
            by_row.setdefault(r, []).append((c, v))
        by_col = {}
        for (r, c), v in other.data.items():
            by_col.setdefault(c, []).append((r, v))
        for r, left in by_row.items():
            for c, right in by_col.items():
                acc = None
                left_map = dict(left)
                for mid, v2 in right:
                    v1 = left_map.get(mid)
                    if v1 is None:
                        continue
                    term = nov_mul(v1, v2)
                    acc = term if acc is None else nov_add(acc, term)
                if acc is not None and not acc.is_zero():
                    out.data[(r, c)] = acc
        return out

    def inverse(self) -> "NovMatrix":
        """Gauss elimination with minimal-valuation pivoting.

        Requires a square matrix whose energy-0 part is invertible; raises
        NotInvertibleError otherwise.
        """
        if set(self.rows) != set(self.cols) and len(self.rows) != len(self.cols):
            raise NotInvertibleError("matrix is not square")
        n = len(self.rows)
        work = self.copy()
        aug = NovMatrix.identity(self.rows, self.flavor, self.cutoff)
        # map output coordinates: inverse has rows = self.cols, cols = self.rows
        used_rows, used_cols = set(), set()
        pivots = []
        for _ in range(n):
            best = None
            for (r, c), v in sorted(work.data.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
                if r in used_rows or c in used_cols or v.is_zero():
                    continue
                val = nov_valuation(v)
                if val != 0:
                    continue
                best = (r, c)
                break
            if best is None:
                raise NotInvertibleError("energy-0 part is not invertible")
            r0, c0 = best
            inv = nov_invert(work.get(r0, c0))
            for c in list(work.cols):
                work.set(r0, c, nov_mul(work.get(r0, c), inv))
            for c in list(aug.cols):
                aug.set(r0, c, nov_mul(aug.get(r0, c), inv))
            for r in self.rows:
                if r == r0:
                    continue
                f = work.get(r, c0)
                if f.is_zero():
                    continue
                for c in list(work.cols):
                    work.set(r, c, nov_add(work.get(r, c), nov_mul(f, work.get(r0, c)).scale(-1)))
                for c in list(aug.cols):
                    aug.set(r, c, nov_add(aug.get(r, c), nov_mul(f, aug.get(r0, c)).scale(-1)))
            used_rows.add(r0)
            used_cols.add(c0)
            pivots.append((r0, c0))
        out = NovMatrix(self.cols, self.rows, self.flavor, self.cutoff)
        for r0, c0 in pivots:
            for c in aug.cols:
                v = aug.get(r0, c)
                if not v.is_zero():
                    out.data[(c0, c)] = v
        return out


def strip_e_powers(matrix: NovMatrix, row_degree, col_degree, shift: int) -> NovMatrix:
    """Remove the degree-determined e-powers from a degree-homogeneous matrix.

    For a degree-``shift`` map, the entry col -> row forces
    mu = (deg(col) + shift - deg(row)) / 2 on every term; multiplying the
    entry by e^(-mu) is the e-regrade isomorphism, and leaves ranks and
    torsion unchanged because e is a unit.
    """
    out = NovMatrix(matrix.rows, matrix.cols, matrix.flavor, matrix.cutoff)
    for (r, c), v in matrix.data.items():
        delta = col_degree(c) + shift - row_degree(r)
        if delta % 2:
            raise ValueError(f"entry {c} -> {r} breaks degree parity")
        mu = delta // 2
        for coeff, lam, m in v.terms:
            if m != mu:
                raise ValueError(
                    f"entry {c} -> {r} carries e^{m}, expected e^{mu}: not degree-homogeneous"
                )
        out.data[(r, c)] = NovikovElement.make(
            ((coeff, lam, 0) for coeff, lam, _ in v.terms), matrix.flavor, matrix.cutoff
        )
    return out


def smith_valuations(matrix: NovMatrix):
    """Valuation-aware Smith reduction: pivot on entries of minimal valuation,
    eliminate with ratios that stay in the valuation ring, and return the
    sorted list of diagonal valuations.  The rank is the list's length.

    Over unit flavors this is plain elimination (every nonzero entry is a
    unit); over 0-flavors the diagonal entries are T^v up to units, and the
    positive v's are the torsion exponents of the cokernel.
    """
    work = matrix.copy()
    used_rows, used_cols = set(), set()
    divisors = []
    while True:
        best = None
        best_val = None
        for (r, c), v in sorted(work.data.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
            if r in used_rows or c in used_cols or v.is_zero():
                continue
            val = nov_valuation(v)
            if best_val is None or val < best_val:
                best, best_val = (r, c), val
        if best is None:
            break
        r0, c0 = best
        pivot = work.get(r0, c0)
        # pivot = T^v * u with u a valuation-0 unit: normalize the row by u^{-1}
        unit = NovikovElement.make(
            ((coeff, lam - best_val, mu) for coeff, lam, mu in pivot.terms),
            work.flavor, work.cutoff,
        )
        unit_inv = nov_invert(unit)
        for c in work.cols:
            if c == c0 or (r0, c) not in work.data:
                continue
            work.set(r0, c, nov_mul(work.get(r0, c), unit_inv))
        work.set(r0, c0, NovikovElement.monomial(1, best_val, 0, work.flavor, work.cutoff))
        tpow_neg = best_val
        for r in work.rows:
            if r == r0 or r in used_rows:
                continue
            a = work.get(r, c0)
            if a.is_zero():
                continue
            # factor = a / T^v, valuation >= 0 because the pivot was minimal
            factor = NovikovElement.make(
                ((coeff, lam - tpow_neg, mu) for coeff, lam, mu in a.terms),
                work.flavor, work.cutoff,
            )
            for c in work.cols:
                if c in used_cols:
                    continue
                val = nov_add(work.get(r, c), nov_mul(factor, work.get(r0, c)).scale(-1))
                work.set(r, c, val)
        # column elimination is implicit: remaining rows now have 0 in c0;
        # entries of the pivot ROW in other columns no longer meet live rows.
        used_rows.add(r0)
        used_cols.add(c0)
        divisors.append(best_val)
    return sorted(divisors)
