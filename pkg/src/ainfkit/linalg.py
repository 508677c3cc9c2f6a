"""Small exact linear algebra over Q with deterministic leftmost pivoting.

Matrices are lists of rows, rows are lists of Fractions.  Everything here is
row reduction; sizes stay small (graded pieces of finite bases), so no effort
is spent on asymptotics.
"""

from fractions import Fraction


def zeros(m, n):
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n):
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def mat_mul(a, b):
    if not a or not b:
        return []
    m, n, p = len(a), len(b), len(b[0])
    out = zeros(m, p)
    for i in range(m):
        for k in range(n):
            if a[i][k]:
                aik = a[i][k]
                for j in range(p):
                    if b[k][j]:
                        out[i][j] += aik * b[k][j]
    return out


def mat_vec(a, v):
    return [sum((row[j] * v[j] for j in range(len(v))), Fraction(0)) for row in a]


def row_reduce(mat):
    """Reduced row echelon form; returns (rref, pivot column list)."""
    a = [list(row) for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = Fraction(1, 1) / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(mat):
    if not mat or not mat[0]:
        return 0
    return len(row_reduce(mat)[1])


def kernel_basis(mat, n_cols):
    """Basis of the kernel of the linear map with matrix ``mat`` (rows = outputs).

    Columns index the domain.  Deterministic: free columns in increasing order.
    """
    if not mat:
        return identity(n_cols)
    rref, pivots = row_reduce(mat)
    pivot_set = set(pivots)
    free = [c for c in range(n_cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n_cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][fc]
        basis.append(v)
    return basis


def solve(mat, rhs):
    """One solution x of mat @ x = rhs, or None.  Deterministic (free vars 0)."""
    rows = len(mat)
    if rows == 0:
        return []
    cols = len(mat[0])
    aug = [list(mat[i]) + [rhs[i]] for i in range(rows)]
    rref, pivots = row_reduce(aug)
    for r in range(len(rref)):
        if all(rref[r][c] == 0 for c in range(cols)) and rref[r][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        if pc == cols:
            return None
        x[pc] = rref[r][cols]
    return x


def extend_to_complement(inside, ambient_dim, candidates=None):
    """Greedily extend the row space of ``inside`` by candidate vectors.

    Returns the list of candidate vectors (default: standard basis, leftmost
    first) that enlarge the span; their span is a complement of span(inside)
    inside span(inside + chosen candidates).
    """
    if candidates is None:
        candidates = [[Fraction(1) if j == i else Fraction(0) for j in range(ambient_dim)]
                      for i in range(ambient_dim)]
    rows = [list(v) for v in inside]
    chosen = []
    current = rank(rows) if rows else 0
    for cand in candidates:
        trial = rows + [list(cand)]
        r = rank(trial)
        if r > current:
            rows = trial
            current = r
            chosen.append(list(cand))
    return chosen


def invert(mat):
    n = len(mat)
    aug = [list(mat[i]) + identity(n)[i] for i in range(n)]
    rref, pivots = row_reduce(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in rref]
