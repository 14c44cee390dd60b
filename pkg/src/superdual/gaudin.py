"""Gaudin Hamiltonians on weight blocks of tensor products.

Only the total-weight block that is asked for is ever enumerated. A basis
vector of a block is a tuple ``((w_1, b_1), ..., (w_l, b_l))`` naming basis
vector ``b_k`` of block ``w_k`` in factor ``k``.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .algebra import StructureTable
from .combinatorics import Weight, weight_to_json
from .exact import (Mat, charpoly as _charpoly, coords_in_span, fstr, kernel, minimal_polynomial,
                    squarefree_certificate)
from .repbuilder import MarginError, RepModule

__all__ = ["TensorSystem", "BlockOperator", "MarginError", "InvariantError", "default_points",
           "charpoly", "is_diagonalizable", "spectrum_numeric", "commutator", "restrict",
           "resample_points", "spectrum_report"]


class InvariantError(AssertionError):
    pass


def default_points(l: int) -> list[Fraction]:
    return [Fraction(2 ** k - 1) for k in range(l)]


def resample_points(l: int, seed: int, attempt: int) -> list[Fraction]:
    """Deterministic pseudo-random distinct rationals for retry ``attempt`` (>= 1)."""
    rng = random.Random(f"{seed}:{attempt}")
    pts: list[Fraction] = []
    while len(pts) < l:
        z = Fraction(rng.randint(-40, 40), rng.randint(1, 7))
        if z not in pts:
            pts.append(z)
    return pts


@dataclass
class BlockOperator:
    weight: Weight
    matrix: Mat
    target: Weight | None = None
    meta: dict = field(default_factory=dict)


@dataclass
class _Block:
    weight: Weight
    tuples: list
    index: dict
    prefix: list   # prefix[k][i] = parity sum of slots < i for tuple k


class TensorSystem:
    def __init__(self, factors: list[RepModule], points=None, variant: str = "ring"):
        if len(factors) < 2:
            raise ValueError("a tensor system needs at least two factors")
        t = factors[0].table
        if any(f.table is not t for f in factors):
            raise ValueError("all factors must share one structure table")
        pts = default_points(len(factors)) if points is None else [Fraction(z) for z in points]
        if len(pts) != len(factors):
            raise ValueError("need one point per factor")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be pairwise distinct")
        if variant not in ("ring", "central"):
            raise ValueError(f"unknown variant {variant!r}")
        self.table: StructureTable = t
        self.factors = list(factors)
        self.points = pts
        self.variant = variant
        self.top = Weight.zero()
        for f in factors:
            self.top = self.top + f.highest_weight
        self.max_root_height = max((r.height for r in t.positive_roots), default=0)
        self._blocks: dict = {}
        self._cols: dict = {}
        self._by_height = [self._group(f) for f in factors]

    @property
    def l(self) -> int:
        return len(self.factors)

    @property
    def levels(self) -> list[Fraction]:
        return [f.level for f in self.factors]

    def with_points(self, points) -> "TensorSystem":
        return TensorSystem(self.factors, points, self.variant)

    def with_variant(self, variant: str) -> "TensorSystem":
        return TensorSystem(self.factors, self.points, variant)

    @staticmethod
    def _group(f: RepModule) -> dict:
        g: dict = {}
        for w, h in f.heights.items():
            g.setdefault(h, []).append(w)
        for h in g:
            g[h].sort()
        return g

    def height(self, mu: Weight) -> Fraction:
        return self.table.height(self.top - mu)

    # -- margins --------------------------------------------------------------
    def check_margin(self, mu: Weight, extra: int = 0, what: str = "block"):
        H = self.height(mu)
        if H.denominator != 1 or H < 0:
            return
        for k, f in enumerate(self.factors):
            if not f.complete and H + extra > f.depth:
                raise MarginError(
                    f"{what} at {mu} needs factor {k + 1} up to height {H + extra}, "
                    f"but it is only built to depth {f.depth}")

    # -- basis ------------------------------------------------------------------
    def block(self, mu: Weight) -> _Block:
        if mu in self._blocks:
            return self._blocks[mu]
        self.check_margin(mu)
        H = self.height(mu)
        tuples: list = []
        if H.denominator == 1 and H >= 0 and mu.level == self.top.level:
            H = int(H)
            l = self.l
            # suffix reachability: weights reachable by factors k..l-1 with height <= H
            reach = [set() for _ in range(l + 1)]
            reach[l] = {Weight.zero()}
            for k in range(l - 1, -1, -1):
                f = self.factors[k]
                cur = set()
                for w in reach[k + 1]:
                    hw = self.table.height(self._suffix_top(k + 1) - w)
                    for h, ws in self._by_height[k].items():
                        if h + hw > H:
                            continue
                        for b in ws:
                            cur.add(b + w)
                reach[k] = cur
            if mu in reach[0]:
                self._enumerate(0, mu, [], tuples, reach, H)
        index = {tp: k for k, tp in enumerate(tuples)}
        prefix = []
        for tp in tuples:
            s, pre = 0, []
            for k, (w, _) in enumerate(tp):
                pre.append(s)
                s += self.factors[k].parities[w]
            prefix.append(pre)
        blk = _Block(mu, tuples, index, prefix)
        self._blocks[mu] = blk
        return blk

    def _suffix_top(self, k: int) -> Weight:
        w = Weight.zero()
        for f in self.factors[k:]:
            w = w + f.highest_weight
        return w

    def _enumerate(self, k, rest, acc, out, reach, H):
        f = self.factors[k]
        if k == self.l - 1:
            if rest in f.blocks:
                for b in range(f.blocks[rest]):
                    out.append(tuple(acc + [(rest, b)]))
            return
        for h in sorted(self._by_height[k]):
            if h > H:
                break
            for w in self._by_height[k][h]:
                r = rest - w
                if r in reach[k + 1]:
                    for b in range(f.blocks[w]):
                        self._enumerate(k + 1, r, acc + [(w, b)], out, reach, H)

    def block_basis(self, mu: Weight) -> list:
        return list(self.block(mu).tuples)

    def block_dim(self, mu: Weight) -> int:
        return len(self.block(mu).tuples)

    # -- slot operators -----------------------------------------------------------
    def _columns(self, k: int, x: int, w: Weight):
        key = (k, x, w)
        if key not in self._cols:
            m = self.factors[k].action(x, w)
            self._cols[key] = m.columns() if m is not None else None
        return self._cols[key]

    def apply_slot(self, x: int, slot: int, tp: tuple) -> list:
        """x acting in ``slot`` of the basis tuple tp, Koszul sign included."""
        t = self.table
        px = t.basis[x].parity
        w, b = tp[slot]
        cols = self._columns(slot, x, w)
        if cols is None:
            return []
        col = cols[b]
        if not col:
            return []
        sign = 1
        if px:
            s = sum(self.factors[k].parities[tp[k][0]] for k in range(slot))
            sign = -1 if s % 2 else 1
        nw = w + t.basis[x].weight if t.basis[x].kind not in ("cartan", "K") else w
        out = []
        for nb, c in col.items():
            ntp = tp[:slot] + ((nw, nb),) + tp[slot + 1:]
            out.append((ntp, sign * c))
        return out

    def diagonal_action(self, x: int, mu: Weight) -> BlockOperator:
        t = self.table
        b = t.basis[x]
        src = self.block(mu)
        if b.kind in ("cartan", "K"):
            val = mu.level if b.kind == "K" else mu[b.tag[0]]
            return BlockOperator(mu, Mat.identity(len(src.tuples), val), mu, {"op": "diag", "x": x})
        tgt_w = mu + b.weight
        tgt = self.block(tgt_w)
        cols = []
        for tp in src.tuples:
            col: dict = {}
            for slot in range(self.l):
                for ntp, c in self.apply_slot(x, slot, tp):
                    k = tgt.index.get(ntp)
                    if k is None:
                        raise InvariantError(f"image tuple missing from block {tgt_w}")
                    col[k] = col.get(k, 0) + c
            cols.append({k: v for k, v in col.items() if v})
        return BlockOperator(mu, Mat.from_columns(cols, len(tgt.tuples)), tgt_w, {"op": "diag", "x": x})

    def apply_diagonal(self, x: int, mu: Weight, vec: dict) -> tuple[Weight, dict]:
        op = self.diagonal_action(x, mu)
        return op.target, op.matrix.apply(vec)

    # -- Casimir --------------------------------------------------------------------
    def _casimir_terms(self, sub: StructureTable | None):
        """(x, y, coefficient) with x placed in slot i and y in slot j; parent indices."""
        t = self.table
        src = sub if sub is not None else t
        terms = []
        for r in src.positive_roots:
            e = t.index_of[src.basis[r.raising].tag]
            (f0, c), = r.dual_lowering.items()
            f = t.index_of[src.basis[f0].tag]
            terms.append((f, e, c))
            terms.append((e, f, c * (-1) ** r.parity))
        return terms, list(src.positive_indices)

    def _cartan_value(self, k: int, w: Weight, j2: int) -> Fraction:
        v = w[j2]
        if self.variant == "central":
            v += (-1 if j2 % 2 else 1) * self.factors[k].level
        return v

    def casimir_pair(self, i: int, j: int, mu: Weight, sub: StructureTable | None = None) -> BlockOperator:
        """Omega^{(ij)} on the mu-block (0-based slots)."""
        if i == j or not (0 <= i < self.l and 0 <= j < self.l):
            raise ValueError("need two distinct slots")
        self.check_margin(mu, self.max_root_height, "Casimir")
        blk = self.block(mu)
        terms, cart = self._casimir_terms(sub)
        central = self.variant == "central"
        di, dj = self.factors[i].level, self.factors[j].level
        cols = []
        for tp in blk.tuples:
            col: dict = {}
            wi, wj = tp[i][0], tp[j][0]
            diag = Fraction(0)
            for r2 in cart:
                a = self._cartan_value(i, wi, r2)
                b = self._cartan_value(j, wj, r2)
                diag += (-1 if r2 % 2 else 1) * a * b
                if central:
                    diag -= di * b + a * dj
            k0 = blk.index[tp]
            if diag:
                col[k0] = diag
            for x, y, c in terms:
                for t1, c1 in self.apply_slot(y, j, tp):
                    for t2, c2 in self.apply_slot(x, i, t1):
                        k = blk.index.get(t2)
                        if k is None:
                            raise InvariantError(f"Casimir image leaves block {mu}")
                        col[k] = col.get(k, 0) + c * c1 * c2
            cols.append({k: v for k, v in col.items() if v})
        return BlockOperator(mu, Mat.from_columns(cols, len(blk.tuples)), mu,
                             {"op": "casimir", "i": i, "j": j, "variant": self.variant})

    def hamiltonian(self, i: int, mu: Weight, sub: StructureTable | None = None) -> BlockOperator:
        n = self.block_dim(mu)
        acc = Mat.zeros(n, n)
        zi = self.points[i]
        for j in range(self.l):
            if j == i:
                continue
            acc = acc + self.casimir_pair(i, j, mu, sub).matrix.scale(1 / (zi - self.points[j]))
        return BlockOperator(mu, acc, mu, {"op": "H", "i": i, "variant": self.variant})

    # -- singular vectors --------------------------------------------------------------
    def singular_block(self, mu: Weight, raising: list[int] | None = None) -> list[dict]:
        """Common kernel of the given raising operators (default: simple roots)."""
        t = self.table
        rs = [r.raising for r in t.simple_roots] if raising is None else list(raising)
        n = self.block_dim(mu)
        rows: list = []
        for e in rs:
            m = self.diagonal_action(e, mu).matrix
            rows.extend(r for r in m.rows if r)
        return kernel(Mat(len(rows), n, rows))


def restrict(op, sub: list[dict]) -> list[list[Fraction]]:
    """Matrix of op on the span of ``sub`` (which must be op-invariant)."""
    m = op.matrix if isinstance(op, BlockOperator) else op
    k = len(sub)
    out = [[Fraction(0)] * k for _ in range(k)]
    for c, v in enumerate(sub):
        img = m.apply(v)
        co = coords_in_span(sub, img)
        if co is None:
            raise InvariantError("subspace is not invariant under the operator")
        for r in range(k):
            out[r][c] = co[r]
    return out


def charpoly(mat) -> list[Fraction]:
    if isinstance(mat, BlockOperator):
        mat = mat.matrix
    return _charpoly(mat)


def is_diagonalizable(mat) -> tuple[bool, list[Fraction]]:
    """(verdict, certificate): the squarefree minimal polynomial, or gcd(p, p')."""
    if isinstance(mat, BlockOperator):
        mat = mat.matrix
    return squarefree_certificate(minimal_polynomial(mat))


def spectrum_numeric(mat, precision: int = 50) -> list:
    """Approximate eigenvalues (mpmath numbers); presentation only."""
    p = charpoly(mat)
    if len(p) <= 1:
        return []
    with mpmath.workdps(precision):
        desc = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p)]
        try:
            roots = mpmath.polyroots(desc, maxsteps=400, extraprec=4 * precision)
        except mpmath.libmp.NoConvergence:
            dense = mat.to_dense() if isinstance(mat, Mat) else mat
            roots = list(mpmath.eig(mpmath.matrix([[mpmath.mpf(x.numerator) / x.denominator for x in r]
                                                   for r in dense]))[0])
        out = []
        tol = mpmath.mpf(10) ** (-(precision // 2))
        for r in roots:
            if isinstance(r, mpmath.mpc) and abs(r.imag) < tol:
                r = r.real
            out.append(r)
    out.sort(key=lambda r: (float(mpmath.re(r)), float(mpmath.im(r))))
    return out


def commutator(a, b) -> Mat:
    ma = a.matrix if isinstance(a, BlockOperator) else a
    mb = b.matrix if isinstance(b, BlockOperator) else b
    if isinstance(a, BlockOperator) and isinstance(b, BlockOperator) and a.weight != b.weight:
        raise ValueError("operators live on different blocks")
    return (ma @ mb) - (mb @ ma)


def spectrum_report(sys: TensorSystem, mu: Weight, i: int, precision: int = 50, sub=None) -> dict:
    sing = sys.singular_block(mu)
    h = sys.hamiltonian(i, mu, sub)
    r = restrict(h, sing)
    cp = charpoly(r)
    diag, _ = is_diagonalizable(r) if r else (True, [Fraction(1)])
    with mpmath.workdps(precision):
        approx = [mpmath.nstr(e, precision) for e in spectrum_numeric(r, precision)]
    return {"weight": weight_to_json(mu), "block_dim": sys.block_dim(mu), "sing_dim": len(sing),
            "hamiltonian": i + 1, "charpoly": [fstr(c) for c in cp], "diagonalizable": diag,
            "eigenvalues_approx": approx, "z": [fstr(z) for z in sys.points]}


def dumps_report(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1)
