"""Smith normal form over the integers, with unimodular transforms.

Matrices are plain lists of lists of Python ints, so every entry is exact
regardless of size.  The convention throughout the package is column
vectors: a matrix ``M`` with ``rows x cols`` entries sends ``Z^cols`` to
``Z^rows``.
"""
from __future__ import annotations

from dataclasses import dataclass
from operator import mul

Matrix = list[list[int]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def shape(m: Matrix, cols: int | None = None) -> tuple[int, int]:
    if not m:
        return 0, (cols or 0)
    return len(m), len(m[0])


def matmul(a: Matrix, b: Matrix, inner: int | None = None, cols: int | None = None) -> Matrix:
    """Product ``a @ b``.  ``cols`` is needed when ``b`` has no rows."""
    rows = len(a)
    if not b:
        return zeros(rows, cols or 0)
    n = len(b[0])
    out = zeros(rows, n)
    for i, row in enumerate(a):
        acc = out[i]
        for k, aik in enumerate(row):
            if aik:
                bk = b[k]
                for j in range(n):
                    if bk[j]:
                        acc[j] += aik * bk[j]
    return out


def matvec(a: Matrix, v: list[int]) -> list[int]:
    return [sum(map(mul, row, v)) for row in a]


def transpose(m: Matrix, rows: int = 0) -> Matrix:
    if not m:
        return [[] for _ in range(rows)] if rows else []
    return [list(col) for col in zip(*m)]


def columns(m: Matrix) -> list[list[int]]:
    return transpose(m)


def from_columns(cols: list[list[int]], rows: int) -> Matrix:
    """Assemble a ``rows x len(cols)`` matrix from column vectors."""
    out = zeros(rows, len(cols))
    for j, c in enumerate(cols):
        for i in range(rows):
            out[i][j] = c[i]
    return out


def hstack(blocks: list[Matrix], rows: int) -> Matrix:
    out: Matrix = [[] for _ in range(rows)]
    for b in blocks:
        for i in range(rows):
            out[i].extend(b[i] if b else [])
    return out


@dataclass
class SmithForm:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular.

    ``diagonal`` lists the nonzero diagonal entries of ``D`` (positive, each
    dividing the next); ``rank`` is its length.  ``U_inv`` is kept because
    cokernel sections need it and integer inversion is otherwise awkward.
    """

    D: Matrix
    U: Matrix
    U_inv: Matrix
    V: Matrix
    rows: int
    cols: int

    @property
    def diagonal(self) -> list[int]:
        out = []
        for i in range(min(self.rows, self.cols)):
            if self.D[i][i] == 0:
                break
            out.append(self.D[i][i])
        return out

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def kernel_basis(self) -> list[list[int]]:
        """A Z-basis of ``{x : A x = 0}`` as column vectors."""
        r = self.rank
        return [[self.V[i][j] for i in range(self.cols)] for j in range(r, self.cols)]


def smith(a: Matrix, cols: int | None = None) -> SmithForm:
    """Compute the Smith normal form of ``a``.

    ``cols`` must be given when ``a`` has no rows.
    """
    m = len(a)
    n = len(a[0]) if m else (cols or 0)
    D = [list(r) for r in a]
    U = identity(m)
    Ui = identity(m)
    V = identity(n)

    def row_add(i: int, j: int, q: int) -> None:
        # row_i += q * row_j
        if q == 0:
            return
        Di, Dj = D[i], D[j]
        for c in range(n):
            if Dj[c]:
                Di[c] += q * Dj[c]
        Ui_, Uj = U[i], U[j]
        for c in range(m):
            if Uj[c]:
                Ui_[c] += q * Uj[c]
        for r in range(m):
            # inverse: col_j -= q * col_i
            if Ui[r][i]:
                Ui[r][j] -= q * Ui[r][i]

    def row_swap(i: int, j: int) -> None:
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for r in range(m):
            Ui[r][i], Ui[r][j] = Ui[r][j], Ui[r][i]

    def row_neg(i: int) -> None:
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]
        for r in range(m):
            Ui[r][i] = -Ui[r][i]

    def col_add(i: int, j: int, q: int) -> None:
        # col_i += q * col_j
        if q == 0:
            return
        for r in range(m):
            if D[r][j]:
                D[r][i] += q * D[r][j]
        for r in range(n):
            if V[r][j]:
                V[r][i] += q * V[r][j]

    def col_swap(i: int, j: int) -> None:
        for r in range(m):
            D[r][i], D[r][j] = D[r][j], D[r][i]
        for r in range(n):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            Di = D[i]
            for j in range(t, n):
                x = Di[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i0, j0 = best
        if i0 != t:
            row_swap(t, i0)
        if j0 != t:
            col_swap(t, j0)
        while True:
            dirty = False
            piv = D[t][t]
            for i in range(t + 1, m):
                x = D[i][t]
                if x:
                    row_add(i, t, -(x // piv))
                    if D[i][t]:
                        row_swap(t, i)
                        dirty = True
                        break
            if dirty:
                continue
            piv = D[t][t]
            for j in range(t + 1, n):
                x = D[t][j]
                if x:
                    col_add(j, t, -(x // piv))
                    if D[t][j]:
                        col_swap(t, j)
                        dirty = True
                        break
            if dirty:
                continue
            piv = D[t][t]
            bad = None
            for i in range(t + 1, m):
                Di = D[i]
                for j in range(t + 1, n):
                    if Di[j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        if D[t][t] < 0:
            row_neg(t)
        t += 1
    return SmithForm(D=D, U=U, U_inv=Ui, V=V, rows=m, cols=n)


def solve(a: Matrix, b: list[int], cols: int | None = None) -> list[int] | None:
    """One integer solution ``x`` of ``a @ x == b``, or ``None``.

    The solution is deterministic: free coordinates in the Smith basis are set
    to zero.
    """
    sf = smith(a, cols)
    return solve_with(sf, b)


def solve_with(sf: SmithForm, b: list[int]) -> list[int] | None:
    ub = matvec(sf.U, b) if sf.rows else []
    diag = sf.diagonal
    y = [0] * sf.cols
    for i, d in enumerate(diag):
        q, r = divmod(ub[i], d)
        if r:
            return None
        y[i] = q
    for i in range(len(diag), sf.rows):
        if ub[i]:
            return None
    return matvec(sf.V, y) if sf.cols else []
