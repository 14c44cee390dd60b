"""Exact rational linear algebra and univariate polynomials over Q.

Matrices come in two shapes: dense ``list[list[Fraction]]`` for small
square work (charpoly, Gram blocks) and :class:`Mat`, a row-sparse matrix
used for operators on tensor blocks. Polynomials are coefficient lists in
ascending degree.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction
Vec = dict  # sparse vector: index -> Fraction


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def fstr(x: Fraction) -> str:
    x = frac(x)
    return f"{x.numerator}/{x.denominator}"


class Mat:
    """Row-sparse exact matrix."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows: list[dict[int, Fraction]] = rows if rows is not None else [dict() for _ in range(nrows)]

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n, scale=1):
        s = frac(scale)
        if s == 0:
            return cls(n, n)
        return cls(n, n, [{i: s} for i in range(n)])

    @classmethod
    def from_dense(cls, dense, ncols=None):
        nr = len(dense)
        nc = ncols if ncols is not None else (len(dense[0]) if nr else 0)
        rows = [{j: frac(v) for j, v in enumerate(r) if v} for r in dense]
        return cls(nr, nc, rows)

    @classmethod
    def from_columns(cls, cols: Sequence[Vec], nrows: int):
        m = cls(nrows, len(cols))
        for j, c in enumerate(cols):
            for i, v in c.items():
                if v:
                    m.rows[i][j] = v
        return m

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def copy(self):
        return Mat(self.nrows, self.ncols, [dict(r) for r in self.rows])

    def add_entry(self, i, j, v):
        if not v:
            return
        r = self.rows[i]
        s = r.get(j, 0) + v
        if s:
            r[j] = s
        else:
            r.pop(j, None)

    def get(self, i, j):
        return self.rows[i].get(j, Fraction(0))

    def to_dense(self):
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out[i][j] = v
        return out

    def column(self, j) -> Vec:
        return {i: r[j] for i, r in enumerate(self.rows) if j in r}

    def columns(self) -> list[Vec]:
        cols: list[Vec] = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def transpose(self):
        t = Mat(self.ncols, self.nrows)
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                t.rows[j][i] = v
        return t

    def apply(self, v: Vec) -> Vec:
        out: Vec = {}
        for i, r in enumerate(self.rows):
            s = 0
            for j, a in r.items():
                b = v.get(j)
                if b:
                    s += a * b
            if s:
                out[i] = Fraction(s)
        return out

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = Mat(self.nrows, other.ncols)
        orows = other.rows
        for i, r in enumerate(self.rows):
            acc: dict[int, Fraction] = {}
            for k, a in r.items():
                for j, b in orows[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            out.rows[i] = {j: v for j, v in acc.items() if v}
        return out

    def _combine(self, other: "Mat", sign) -> "Mat":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = self.copy()
        for i, r in enumerate(other.rows):
            for j, v in r.items():
                out.add_entry(i, j, sign * v)
        return out

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> "Mat":
        c = frac(c)
        if c == 0:
            return Mat(self.nrows, self.ncols)
        return Mat(self.nrows, self.ncols, [{j: v * c for j, v in r.items()} for r in self.rows])

    def is_zero(self) -> bool:
        return all(not r for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def nnz(self):
        return sum(len(r) for r in self.rows)

    def __repr__(self):
        return f"Mat({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def dense_identity(n, scale=1):
    s = frac(scale)
    return [[s if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def dense_mul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


# -- elimination -------------------------------------------------------------

def rref_rows(rows: Iterable[Vec]) -> tuple[list[Vec], list[int]]:
    """Reduced row echelon form of sparse rows; returns (pivot rows, pivot cols)."""
    piv_rows: list[Vec] = []
    piv_cols: list[int] = []
    for row in rows:
        r = {j: frac(v) for j, v in row.items() if v}
        for pr, pc in zip(piv_rows, piv_cols):
            c = r.get(pc)
            if c:
                for j, v in pr.items():
                    s = r.get(j, 0) - c * v
                    if s:
                        r[j] = s
                    else:
                        r.pop(j, None)
        if not r:
            continue
        pc = min(r)
        inv = 1 / r[pc]
        r = {j: v * inv for j, v in r.items()}
        # back-substitute into earlier pivots
        for k, pr in enumerate(piv_rows):
            c = pr.get(pc)
            if c:
                for j, v in r.items():
                    s = pr.get(j, 0) - c * v
                    if s:
                        pr[j] = s
                    else:
                        pr.pop(j, None)
        piv_rows.append(r)
        piv_cols.append(pc)
    order = sorted(range(len(piv_cols)), key=lambda k: piv_cols[k])
    return [piv_rows[k] for k in order], [piv_cols[k] for k in order]


def rank(m: Mat | list) -> int:
    rows = m.rows if isinstance(m, Mat) else [{j: v for j, v in enumerate(r) if v} for r in m]
    return len(rref_rows(rows)[0])


def nullspace(rows: Sequence[Vec], ncols: int) -> list[Vec]:
    """Basis of {x : row . x = 0 for every row}, one vector per free column."""
    prows, pcols = rref_rows(rows)
    pset = set(pcols)
    basis = []
    for f in range(ncols):
        if f in pset:
            continue
        v = {f: Fraction(1)}
        for pr, pc in zip(prows, pcols):
            c = pr.get(f)
            if c:
                v[pc] = -c
        basis.append(v)
    return basis


def kernel(m: Mat) -> list[Vec]:
    return nullspace(m.rows, m.ncols)


def independent_subset(vecs: Sequence[Vec]) -> list[int]:
    """Indices of a maximal linearly independent subset, greedy in order."""
    chosen = []
    prows: list[Vec] = []
    pcols: list[int] = []
    for idx, v in enumerate(vecs):
        r = {j: frac(x) for j, x in v.items() if x}
        for pr, pc in zip(prows, pcols):
            c = r.get(pc)
            if c:
                for j, x in pr.items():
                    s = r.get(j, 0) - c * x
                    if s:
                        r[j] = s
                    else:
                        r.pop(j, None)
        if r:
            pc = min(r)
            inv = 1 / r[pc]
            prows.append({j: x * inv for j, x in r.items()})
            pcols.append(pc)
            chosen.append(idx)
    return chosen


def solve_dense(a, b):
    """Solve a x = b for square nonsingular dense a; b is a list (vector)."""
    n = len(a)
    m = [list(map(frac, a[i])) + [frac(b[i])] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular system")
        m[c], m[p] = m[p], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[i][n] for i in range(n)]


def inverse_dense(a):
    n = len(a)
    m = [list(map(frac, a[i])) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[p] = m[p], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def coords_in_span(basis: Sequence[Vec], v: Vec) -> list[Fraction] | None:
    """Coefficients c with sum c_k basis[k] = v, or None if v is outside the span.

    ``basis`` must be linearly independent.
    """
    k = len(basis)
    # augmented columns: solve via row reduction on the transposed system
    rows: dict[int, dict[int, Fraction]] = {}
    for j, b in enumerate(basis):
        for i, x in b.items():
            if x:
                rows.setdefault(i, {})[j] = frac(x)
    for i, x in v.items():
        if x:
            rows.setdefault(i, {})[k] = frac(x)
    prows, pcols = rref_rows(rows.values())
    if k in pcols:
        return None
    sol = [Fraction(0)] * k
    for pr, pc in zip(prows, pcols):
        sol[pc] = pr.get(k, Fraction(0))
    return sol


def ldl_pivots(a) -> list[Fraction] | None:
    """Pivots of an unpivoted LDL^T of a symmetric matrix; None if a zero pivot blocks it."""
    n = len(a)
    m = [list(map(frac, r)) for r in a]
    piv = []
    for c in range(n):
        p = m[c][c]
        if p == 0:
            return None
        piv.append(p)
        for r in range(c + 1, n):
            f = m[r][c] / p
            if f:
                for j in range(c, n):
                    m[r][j] -= f * m[c][j]
    return piv


def is_positive_definite(a) -> bool:
    piv = ldl_pivots(a)
    return piv is not None and all(p > 0 for p in piv)


def inertia(a) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts of a symmetric rational matrix.

    Uses Descartes' rule on the characteristic polynomial, exact because all
    roots of a real symmetric matrix are real.
    """
    p = charpoly(a)
    zero = 0
    while zero < len(p) and p[zero] == 0:
        zero += 1
    q = p[zero:]
    pos = _sign_changes(q)
    neg = _sign_changes([c if k % 2 == 0 else -c for k, c in enumerate(q)])
    return pos, neg, zero


def _sign_changes(coeffs):
    signs = [1 if c > 0 else -1 for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


# -- polynomials (ascending coefficient lists) --------------------------------

def ptrim(p):
    p = [frac(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def padd(p, q):
    n = max(len(p), len(q))
    return ptrim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def psub(p, q):
    return padd(p, [-c for c in q])


def pmul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return ptrim(out)


def pdivmod(p, q):
    p, q = ptrim(p), ptrim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quo = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    r = list(p)
    lead = q[-1]
    while len(r) >= len(q) and r:
        c = r[-1] / lead
        k = len(r) - len(q)
        quo[k] = c
        for i, b in enumerate(q):
            r[k + i] -= c * b
        r = ptrim(r)
    return ptrim(quo), r


def pmonic(p):
    p = ptrim(p)
    if not p:
        return p
    return [c / p[-1] for c in p]


def pgcd(p, q):
    p, q = ptrim(p), ptrim(q)
    while q:
        p, q = q, pdivmod(p, q)[1]
    return pmonic(p)


def pderiv(p):
    return ptrim([k * p[k] for k in range(1, len(p))])


def peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def pdegree(p):
    return len(ptrim(p)) - 1


def peval_matrix(p, a):
    """p(A) for dense square A, Horner's scheme."""
    n = len(a)
    acc = [[Fraction(0)] * n for _ in range(n)]
    for c in reversed(ptrim(p)):
        acc = dense_mul(acc, a)
        for i in range(n):
            acc[i][i] += c
    return acc


def peval_op(p, op: Mat, v: Vec) -> Vec:
    """p(op) v via Horner on vectors."""
    acc: Vec = {}
    for c in reversed(ptrim(p)):
        acc = op.apply(acc)
        if c:
            for i, x in v.items():
                s = acc.get(i, 0) + c * x
                if s:
                    acc[i] = s
                else:
                    acc.pop(i, None)
    return acc


def pstr(p, var="t") -> str:
    p = ptrim(p)
    if not p:
        return "0"
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        mon = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mon and c == 1:
            terms.append(f"+ {mon}")
        elif mon and c == -1:
            terms.append(f"- {mon}")
        else:
            sgn = "-" if c < 0 else "+"
            body = str(abs(c))
            terms.append(f"{sgn} {body}{'*' + mon if mon else ''}")
    s = " ".join(terms)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


# -- characteristic and minimal polynomials -----------------------------------

def charpoly(a) -> list[Fraction]:
    """Monic characteristic polynomial det(tI - A), ascending coefficients.

    Berkowitz's division-free algorithm: the coefficient vector is grown one
    leading principal submatrix at a time by multiplying with a Toeplitz
    matrix built from the bordering row and column.
    """
    if isinstance(a, Mat):
        a = a.to_dense()
    n = len(a)
    if n == 0:
        return [Fraction(1)]
    a = [list(map(frac, r)) for r in a]
    # descending coefficients of det(tI - A_r)
    c = [Fraction(1), -a[0][0]]
    for r in range(1, n):
        row = a[r][:r]
        col = [a[i][r] for i in range(r)]
        diag = a[r][r]
        # t_k = row * M^(k) * col for k = 0..r-1 with M the leading r x r block
        toe = [Fraction(1), -diag]
        w = col
        for _ in range(r):
            toe.append(-sum((x * y for x, y in zip(row, w)), Fraction(0)))
            w = [sum((a[i][j] * w[j] for j in range(r) if a[i][j]), Fraction(0)) for i in range(r)]
        # new coefficient vector = Toeplitz(toe) (r+2 x r+1) times c
        new = []
        for i in range(r + 2):
            s = Fraction(0)
            for j in range(min(i, r) + 1):
                t = toe[i - j] if i - j < len(toe) else 0
                if t and c[j]:
                    s += t * c[j]
            new.append(s)
        c = new
    return list(reversed(c))


def minimal_polynomial(a) -> list[Fraction]:
    """Monic minimal polynomial of a dense square matrix via Krylov iteration.

    Powers I, A, A^2, ... are flattened and reduced against the span of the
    earlier ones; the first dependency gives the minimal polynomial.
    """
    if isinstance(a, Mat):
        a = a.to_dense()
    n = len(a)
    if n == 0:
        return [Fraction(1)]
    # maintain echelon rows of flattened powers together with their expression
    # in terms of the power basis
    prows: list[tuple[Vec, list[Fraction]]] = []
    pcols: list[int] = []
    power = dense_identity(n)
    for k in range(n + 1):
        flat = {i * n + j: power[i][j] for i in range(n) for j in range(n) if power[i][j]}
        expr = [Fraction(0)] * (k + 1)
        expr[k] = Fraction(1)
        for (pr, pe), pc in zip(prows, pcols):
            c = flat.get(pc)
            if c:
                for j, v in pr.items():
                    s = flat.get(j, 0) - c * v
                    if s:
                        flat[j] = s
                    else:
                        flat.pop(j, None)
                for j, v in enumerate(pe):
                    expr[j] -= c * v
        if not flat:
            return pmonic(expr)
        pc = min(flat)
        inv = 1 / flat[pc]
        prows.append(({j: v * inv for j, v in flat.items()}, [v * inv for v in expr]))
        pcols.append(pc)
        power = dense_mul(power, a)
    raise AssertionError("minimal polynomial search exceeded degree bound")


def squarefree_certificate(p) -> tuple[bool, list[Fraction]]:
    """(True, p) if gcd(p, p') = 1, else (False, gcd)."""
    g = pgcd(p, pderiv(p))
    if len(g) <= 1:
        return True, pmonic(p)
    return False, g
