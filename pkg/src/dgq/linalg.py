"""Exact linear algebra: prime fields and integer Smith normal form.

Matrices are lists of rows; rows are lists of ints.  Differentials of bar
complexes are very sparse, so the rank routine works on dict-backed rows;
everything that needs explicit bases (nullspaces, solving, subquotients) is
dense and only ever runs on small matrices.
"""

from __future__ import annotations

from .errors import StructureError


def rank_fp(rows, p: int) -> int:
    """Rank over F_p by elimination on sparse rows."""
    work = []
    for row in rows:
        if isinstance(row, dict):
            d = {c: v % p for c, v in row.items() if v % p}
        else:
            d = {c: v % p for c, v in enumerate(row) if v % p}
        if d:
            work.append(d)
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for row in work:
        while row:
            c = min(row)
            if c in pivots:
                piv = pivots[c]
                factor = (row[c] * pow(piv[c], p - 2, p)) % p
                for cc, vv in piv.items():
                    nv = (row.get(cc, 0) - factor * vv) % p
                    if nv:
                        row[cc] = nv
                    else:
                        row.pop(cc, None)
            else:
                pivots[c] = row
                rank += 1
                break
    return rank


def nullity_fp(rows, ncols: int, p: int) -> int:
    return ncols - rank_fp(rows, p)


def rref_fp(rows, ncols: int, p: int):
    """Dense reduced row echelon form; returns (matrix, pivot column list)."""
    m = [[v % p for v in row] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, len(m)):
            if m[i][c]:
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(v * inv) % p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def nullspace_fp(rows, ncols: int, p: int) -> list[list[int]]:
    """Basis of {x : A x = 0} over F_p, one vector per free column."""
    m, pivots = rref_fp(rows, ncols, p)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [0] * ncols
        vec[free] = 1
        for r, c in enumerate(pivots):
            vec[c] = (-m[r][free]) % p
        basis.append(vec)
    return basis


def solve_fp(rows, b, ncols: int, p: int):
    """One solution of A x = b over F_p, or None."""
    aug = [list(row) + [bv] for row, bv in zip(rows, b)]
    m, pivots = rref_fp(aug, ncols + 1, p)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for r, c in enumerate(pivots):
        x[c] = m[r][ncols]
    return x


def matmul(a, b):
    if a and b and len(a[0]) != len(b):
        raise StructureError("matmul shape mismatch")
    if not b:
        return [[] for _ in a]
    nb = len(b[0])
    out = []
    for row in a:
        acc = [0] * nb
        for k, v in enumerate(row):
            if v:
                brow = b[k]
                for j in range(nb):
                    if brow[j]:
                        acc[j] += v * brow[j]
        out.append(acc)
    return out


def is_zero_matrix(a) -> bool:
    return all(all(v == 0 for v in row) for row in a)


# -- integer Smith normal form ------------------------------------------


def _xgcd(a: int, b: int):
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def smith_with_transform(rows, ncols: int):
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns (diagonal entries, T) where T is the accumulated column transform,
    so that x = T y turns A x = 0 into D y = 0.  Divisibility of the diagonal
    is not enforced here; see :func:`elementary_divisors`.
    """
    d = [list(row) for row in rows]
    m, n = len(d), ncols
    for row in d:
        if len(row) != n:
            raise StructureError("ragged matrix")
    t = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i1, i2, j):
        # keep the pivot row fixed whenever plain elimination works, so the
        # pivot strictly improves and the sweep terminates
        a, b = d[i1][j], d[i2][j]
        if b == 0:
            return
        if a == 0:
            d[i1], d[i2] = d[i2], d[i1]
            return
        if b % a == 0:
            q = b // a
            r1, r2 = d[i1], d[i2]
            for jj in range(n):
                r2[jj] -= q * r1[jj]
            return
        x, y, g = _xgcd(a, b)
        ag, bg = a // g, b // g
        r1, r2 = d[i1], d[i2]
        for jj in range(n):
            u, v = r1[jj], r2[jj]
            r1[jj] = x * u + y * v
            r2[jj] = -bg * u + ag * v

    def col_op(j1, j2, i):
        a, b = d[i][j1], d[i][j2]
        if b == 0:
            return
        if a == 0:
            for r in d:
                r[j1], r[j2] = r[j2], r[j1]
            for r in t:
                r[j1], r[j2] = r[j2], r[j1]
            return
        if b % a == 0:
            q = b // a
            for r in d:
                r[j2] -= q * r[j1]
            for r in t:
                r[j2] -= q * r[j1]
            return
        x, y, g = _xgcd(a, b)
        ag, bg = a // g, b // g
        for r in d:
            u, v = r[j1], r[j2]
            r[j1] = x * u + y * v
            r[j2] = -bg * u + ag * v
        for r in t:
            u, v = r[j1], r[j2]
            r[j1] = x * u + y * v
            r[j2] = -bg * u + ag * v

    for k in range(min(m, n)):
        while True:
            for i in range(k + 1, m):
                row_op(k, i, k)
            if all(d[k][j] == 0 for j in range(k + 1, n)):
                break
            for j in range(k + 1, n):
                col_op(k, j, k)
            if all(d[i][k] == 0 for i in range(k + 1, m)):
                break
    diag = [abs(d[k][k]) for k in range(min(m, n))]
    return diag, t


def elementary_divisors(rows, ncols: int) -> list[int]:
    """Nonzero diagonal of the true Smith form, with d1 | d2 | ... enforced."""
    diag, _ = smith_with_transform(rows, ncols)
    ds = [abs(v) for v in diag if v != 0]
    # enforce divisibility by redistributing gcd/lcm pairwise
    changed = True
    while changed:
        changed = False
        for i in range(len(ds) - 1):
            a, b = ds[i], ds[i + 1]
            if b % a != 0:
                _, _, g = _xgcd(a, b)
                ds[i], ds[i + 1] = g, a * b // g
                changed = True
        ds.sort()
    return ds


def rank_z(rows, ncols: int) -> int:
    return len(elementary_divisors(rows, ncols))


def kernel_z(rows, ncols: int) -> list[list[int]]:
    """Basis of the integer kernel, from the tracked column transform."""
    diag, t = smith_with_transform(rows, ncols)
    basis = []
    for j in range(ncols):
        if j >= len(diag) or diag[j] == 0:
            basis.append([t[i][j] for i in range(ncols)])
    return basis


def solutions_mod_m(rows, ncols: int, m: int):
    """All solutions of A x = 0 over Z/m, as an iterator of tuples.

    Parametrized through the Smith column transform: with SAT = D the
    solutions are x = T y where each y_k runs over the multiples of
    m // gcd(d_k, m)."""
    diag, t = smith_with_transform(rows, ncols)

    def gcd(a, b):
        while b:
            a, b = b, a % b
        return a

    steps = []
    for k in range(ncols):
        dk = diag[k] if k < len(diag) else 0
        g = gcd(dk % m, m)        # gcd(0, m) = m: y_k free
        # y_k must satisfy d_k y_k = 0 mod m: g choices
        steps.append([(m // g) * i for i in range(g)] if m > 1 else [0])

    def rec(k, acc):
        if k == ncols:
            yield tuple(acc)
            return
        for val in steps[k]:
            acc.append(val)
            yield from rec(k + 1, acc)
            acc.pop()

    for y in rec(0, []):
        x = [0] * ncols
        for i in range(ncols):
            s = 0
            for k in range(ncols):
                if y[k]:
                    s += t[i][k] * y[k]
            x[i] = s % m
        yield tuple(x)


def count_solutions_mod_m(rows, ncols: int, m: int) -> int:
    diag, _ = smith_with_transform(rows, ncols)

    def gcd(a, b):
        while b:
            a, b = b, a % b
        return a

    total = 1
    for k in range(ncols):
        dk = diag[k] if k < len(diag) else 0
        total *= gcd(dk % m, m)
    return total


class SubquotientFp:
    """A subquotient H = span(Z) / span(B) of F_p^n with explicit
    representatives and class coordinates.

    ``coords(v)`` expresses the class of v in the chosen representative
    basis; v must lie in span(B) + span(reps)."""

    def __init__(self, ambient_dim: int, z_vectors, b_vectors, p: int):
        self.n = ambient_dim
        self.p = p
        self.b_basis = _independent_subset(b_vectors, ambient_dim, p)
        reps = []
        current = list(self.b_basis)
        for v in z_vectors:
            cand = _independent_subset(current + [v], ambient_dim, p)
            if len(cand) > len(current):
                reps.append([x % p for x in v])
                current.append([x % p for x in v])
        self.reps = reps

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, v) -> list[int]:
        cols = self.b_basis + self.reps
        if not cols:
            if any(x % self.p for x in v):
                raise StructureError("vector not in the trivial subquotient")
            return []
        a = [[col[i] for col in cols] for i in range(self.n)]
        sol = solve_fp(a, [x % self.p for x in v], len(cols), self.p)
        if sol is None:
            raise StructureError("vector does not lie in the subquotient span")
        return sol[len(self.b_basis):]


def _independent_subset(vectors, n: int, p: int):
    kept = []
    pivots: dict[int, list[int]] = {}
    for v in vectors:
        row = {c: x % p for c, x in enumerate(v) if x % p}
        while row:
            c = min(row)
            if c in pivots:
                piv = pivots[c]
                f = (row[c] * pow(piv[c], p - 2, p)) % p
                for cc, vv in piv.items():
                    nv = (row.get(cc, 0) - f * vv) % p
                    if nv:
                        row[cc] = nv
                    else:
                        row.pop(cc, None)
            else:
                pivots[c] = dict(row)
                kept.append([x % p for x in v])
                break
    return kept
