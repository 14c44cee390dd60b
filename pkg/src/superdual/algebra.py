"""Structure tables of the finite-rank algebras of types a, c, d.

Every basis element is realized as a matrix over the ambient index set
(doubled half-integers, negatives included for types c and d); brackets and
the invariant form are read off from exact supermatrix products.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .combinatorics import Weight, half_str, index_set
from .exact import nullspace, rref_rows

LinComb = dict  # basis index -> Fraction
Matrix = dict   # (r2, s2) -> Fraction

MAX_M, MAX_N = 4, 6


class GuardError(ValueError):
    pass


class ForeignElementError(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraSpec:
    family: str          # "bar" | "unbar" | "tilde"
    xtype: str           # "a" | "c" | "d"
    m: int = 0
    n: int = 1
    extended: bool = False
    guard: bool = True

    def __post_init__(self):
        if self.family not in ("bar", "unbar", "tilde"):
            raise GuardError(f"unknown family {self.family!r}")
        if self.xtype not in ("a", "c", "d"):
            raise GuardError(f"unknown type {self.xtype!r}")
        if self.family == "tilde" and self.m != 0:
            raise GuardError("a tilde window has no m parameter")
        if self.m < 0 or self.n < 1:
            raise GuardError(f"need m >= 0 and n >= 1, got m={self.m}, n={self.n}")
        if self.guard and (self.m > MAX_M or self.n > MAX_N):
            raise GuardError(f"rank (m={self.m}, n={self.n}) exceeds the desk-scale guard")

    @property
    def name(self) -> str:
        bar = {"bar": "Gbar", "unbar": "G", "tilde": "Gtilde"}[self.family]
        rank = f"[{self.m}]_{self.n}" if self.family != "tilde" else f"_{self.n}"
        return f"{bar}^{self.xtype}{rank}" + ("+K" if self.extended else "")


# -- ambient supermatrix helpers ---------------------------------------------

def shipped_specs() -> list[AlgebraSpec]:
    """Tables exercised by the structure suite."""
    out = []
    for x in ("a", "c", "d"):
        for m, n in ((0, 1), (0, 2), (1, 1), (1, 2), (2, 1)):
            for fam in ("bar", "unbar"):
                out.append(AlgebraSpec(fam, x, m, n))
                if x != "a" and m + n == 2:
                    out.append(AlgebraSpec(fam, x, m, n, extended=True))
    out += [AlgebraSpec("tilde", "a", 0, n) for n in (1, 2, 4)]
    out.append(AlgebraSpec("tilde", "a", 0, 2, extended=True))
    return out


def parity(r2: int) -> int:
    return r2 & 1


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    by_row: dict[int, list] = {}
    for (r, s), v in b.items():
        by_row.setdefault(r, []).append((s, v))
    out: Matrix = {}
    for (r, s), v in a.items():
        for t, w in by_row.get(s, ()):
            k = (r, t)
            out[k] = out.get(k, 0) + v * w
    return {k: v for k, v in out.items() if v}


def mat_add(a: Matrix, b: Matrix, c=1) -> Matrix:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def mat_parity(a: Matrix) -> int:
    ps = {parity(r) ^ parity(s) for (r, s) in a}
    if len(ps) > 1:
        raise ValueError("inhomogeneous supermatrix")
    return ps.pop() if ps else 0


def supercommutator(a: Matrix, b: Matrix, pa: int, pb: int) -> Matrix:
    sign = -1 if pa & pb else 1
    return mat_add(mat_mul(a, b), mat_mul(b, a), -sign)


def supertrace(a: Matrix) -> Fraction:
    return sum(((-1) ** parity(r)) * v for (r, s), v in a.items() if r == s) or Fraction(0)


def unit(r2: int, s2: int, c=1) -> Matrix:
    return {(r2, s2): Fraction(c)}


def pair_sign(x: str, p: int, q: int) -> int:
    """sigma with E^x_{p,q} = E_{p,q} + sigma E_{-q,-p} (doubled indices)."""
    pi, qi = p % 2 == 0, q % 2 == 0
    if x == "c":
        if pi and qi:
            return -1 if p * q > 0 else 1
        if not pi and not qi:
            return -1
        if pi:  # integer, half-odd
            return 1 if p > 0 else -1
        return 1 if q < 0 else -1
    if x == "d":
        if pi and qi:
            return -1
        if not pi and not qi:
            return -1 if p * q > 0 else 1
        if pi:
            return 1 if q > 0 else -1
        return 1 if p < 0 else -1
    raise ValueError(x)


def element_matrix(x: str, p: int, q: int) -> Matrix:
    if x == "a":
        return unit(p, q)
    return mat_add(unit(p, q), unit(-q, -p), pair_sign(x, p, q))


# -- table --------------------------------------------------------------------

@dataclass
class BasisElement:
    tag: object              # (r2, s2) or "K"
    parity: int
    kind: str                # cartan | raising | lowering | K
    weight: Weight
    matrix: Matrix | None

    def label(self) -> str:
        if self.tag == "K":
            return "K"
        r, s = self.tag
        return f"E({half_str(r)},{half_str(s)})"


@dataclass
class Root:
    weight: Weight
    raising: int
    dual_lowering: LinComb
    parity: int
    height: int = 0


@dataclass
class StructureTable:
    spec: AlgebraSpec
    positive_indices: list[int]
    ambient: list[int]
    basis: list[BasisElement]
    brackets: dict[tuple[int, int], LinComb]
    form: dict[tuple[int, int], Fraction]
    positive_roots: list[Root] = field(default_factory=list)
    simple_roots: list[Root] = field(default_factory=list)
    height_functional: dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.index_of = {b.tag: i for i, b in enumerate(self.basis)}
        self._pivots = {}
        for i, b in enumerate(self.basis):
            if b.matrix is not None:
                self._pivots[i] = (b.tag, b.matrix[b.tag])

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def xtype(self) -> str:
        return self.spec.xtype

    @cached_property
    def cartan(self) -> list[int]:
        return [i for i, b in enumerate(self.basis) if b.kind == "cartan"]

    @cached_property
    def raising(self) -> list[int]:
        return [i for i, b in enumerate(self.basis) if b.kind == "raising"]

    @cached_property
    def lowering(self) -> list[int]:
        return [i for i, b in enumerate(self.basis) if b.kind == "lowering"]

    @property
    def K(self) -> int | None:
        return self.index_of.get("K")

    def cartan_index(self, j2: int) -> int:
        """Basis index of the Cartan element E_j (j > 0, doubled)."""
        return self.index_of[(j2, j2)]

    def order_key(self, r2: int) -> int:
        return order_key(self.spec, r2)

    def element(self, tag) -> int:
        if tag not in self.index_of:
            raise ForeignElementError(f"{tag} is not a basis element of {self.spec.name}")
        return self.index_of[tag]

    def expand(self, mat: Matrix) -> LinComb:
        """Coordinates of an ambient matrix in the (non-K) basis; exact or error."""
        out: LinComb = {}
        for i, (tag, c) in self._pivots.items():
            v = mat.get(tag)
            if v:
                out[i] = v / c
        rebuilt: Matrix = {}
        for i, c in out.items():
            rebuilt = mat_add(rebuilt, self.basis[i].matrix, c)
        if rebuilt != {k: v for k, v in mat.items() if v}:
            raise ForeignElementError(f"matrix is not in the span of {self.spec.name}")
        return out

    def to_matrix(self, x: LinComb) -> Matrix:
        out: Matrix = {}
        for i, c in x.items():
            m = self.basis[i].matrix
            if m is None:
                raise ValueError("K has no ambient matrix")
            out = mat_add(out, m, c)
        return out

    def lc_parity(self, x: LinComb) -> int:
        ps = {self.basis[i].parity for i, c in x.items() if c}
        if len(ps) > 1:
            raise ValueError("inhomogeneous element")
        return ps.pop() if ps else 0

    def lc_weight(self, x: LinComb) -> Weight:
        ws = {self.basis[i].weight for i, c in x.items() if c}
        if len(ws) != 1:
            raise ValueError("element is not a weight vector")
        return ws.pop()

    def height(self, w: Weight) -> Fraction:
        return sum((self.height_functional.get(k, 0) * v for k, v in w.items), Fraction(0))

    def dump(self) -> str:
        return table_dump(self)


def order_key(spec: AlgebraSpec, r2: int) -> int:
    if r2 < 0:
        return -order_key(spec, -r2)
    if spec.family == "bar":
        return r2 if r2 % 2 == 0 else 2 * spec.m + r2
    if spec.family == "unbar":
        return r2 if r2 % 2 == 1 else 2 * spec.m + r2
    return r2


def _eps_signed(r2: int) -> dict[int, int]:
    return {abs(r2): 1 if r2 > 0 else -1}


def _tag_weight(tag) -> Weight:
    r, s = tag
    c: dict[int, int] = {}
    for k, v in _eps_signed(r).items():
        c[k] = c.get(k, 0) + v
    for k, v in _eps_signed(s).items():
        c[k] = c.get(k, 0) - v
    return Weight.make(c)


def build_algebra(spec: AlgebraSpec) -> StructureTable:
    pos = index_set(spec.family, spec.m, spec.n)
    x = spec.xtype
    ambient = sorted(pos + ([-r for r in pos] if x != "a" else []), key=lambda r: order_key(spec, r))
    tags = []
    if x == "a":
        tags = [(r, s) for r in pos for s in pos]
    else:
        seen = set()
        for r in ambient:
            for s in ambient:
                can = max((r, s), (-s, -r))
                if can in seen:
                    continue
                seen.add(can)
                if element_matrix(x, *can):
                    tags.append(can)
    tags.sort(key=lambda t: (order_key(spec, t[0]), order_key(spec, t[1])))
    basis = []
    for t in tags:
        r, s = t
        if r == s:
            kind = "cartan"
        elif order_key(spec, r) < order_key(spec, s):
            kind = "raising"
        else:
            kind = "lowering"
        basis.append(BasisElement(t, parity(r) ^ parity(s), kind, _tag_weight(t), element_matrix(x, r, s)))
    if spec.extended:
        basis.append(BasisElement("K", 0, "K", Weight.zero(), None))
    table = StructureTable(spec, pos, ambient, basis, {}, {})
    _fill_brackets(table)
    _fill_roots(table)
    return table


def J_matrix(table: StructureTable) -> Matrix:
    return {(r, r): Fraction(-1) for r in table.ambient if r > 0}


def _fill_brackets(t: StructureTable):
    half = Fraction(1, 2) if t.xtype != "a" else Fraction(1)
    J = J_matrix(t)
    K = t.K
    for i, bi in enumerate(t.basis):
        for j, bj in enumerate(t.basis):
            if bi.matrix is None or bj.matrix is None:
                continue
            c = supercommutator(bi.matrix, bj.matrix, bi.parity, bj.parity)
            lc = t.expand(c) if c else {}
            if K is not None:
                tau = supertrace(mat_mul(supercommutator(J, bi.matrix, 0, bi.parity), bj.matrix))
                if tau:
                    lc[K] = tau
            if lc:
                t.brackets[(i, j)] = lc
            f = half * supertrace(mat_mul(bi.matrix, bj.matrix))
            if f:
                t.form[(i, j)] = f


def _solve_height(t: StructureTable, simple: list[Weight]) -> dict[int, Fraction]:
    idx = t.positive_indices
    col = {k: c for c, k in enumerate(idx)}
    n = len(idx)
    rows = []
    for w in simple:
        r = {col[k]: v for k, v in w.items}
        r[n] = Fraction(1)
        rows.append(r)
    prows, pcols = rref_rows(rows)
    if n in pcols:
        raise AssertionError("simple roots are linearly dependent")
    h = {}
    for pr, pc in zip(prows, pcols):
        h[idx[pc]] = pr.get(n, Fraction(0))
    return h


def _fill_roots(t: StructureTable):
    by_weight = {}
    for i in t.lowering:
        by_weight[t.basis[i].weight] = i
    roots = []
    for i in t.raising:
        b = t.basis[i]
        f = by_weight[-b.weight]
        val = t.form.get((i, f), Fraction(0))
        if not val:
            raise AssertionError(f"root vector {b.label()} pairs to zero with its opposite")
        roots.append(Root(b.weight, i, {f: 1 / val}, b.parity))
    weights = {r.weight for r in roots}
    simple = [r for r in roots
              if not any((r.weight - s.weight) in weights for s in roots if s is not r)]
    t.height_functional = _solve_height(t, [r.weight for r in simple]) if simple else {}
    for r in roots:
        h = t.height(r.weight)
        if h.denominator != 1 or h <= 0:
            raise AssertionError(f"root {r.weight} has height {h}")
        r.height = int(h)
    order = {b: k for k, b in enumerate(t.raising)}
    roots.sort(key=lambda r: (r.height, order[r.raising]))
    t.positive_roots = roots
    t.simple_roots = [r for r in roots if r.height == 1]


# -- operations on linear combinations ---------------------------------------

def _check(t: StructureTable, x: LinComb):
    for i in x:
        if not (0 <= i < t.dim):
            raise ForeignElementError(f"index {i} is not a basis element of {t.spec.name}")


def lc_add(a: LinComb, b: LinComb, c=1) -> LinComb:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def bracket(t: StructureTable, x: LinComb, y: LinComb) -> LinComb:
    _check(t, x)
    _check(t, y)
    out: LinComb = {}
    for i, a in x.items():
        for j, b in y.items():
            r = t.brackets.get((i, j))
            if r:
                for k, v in r.items():
                    out[k] = out.get(k, 0) + a * b * v
    return {k: v for k, v in out.items() if v}


def invariant_form(t: StructureTable, x: LinComb, y: LinComb) -> Fraction:
    _check(t, x)
    _check(t, y)
    s = Fraction(0)
    for i, a in x.items():
        for j, b in y.items():
            v = t.form.get((i, j))
            if v:
                s += a * b * v
    return s


def positive_roots(t: StructureTable) -> list[Root]:
    return t.positive_roots


def basis_lc(i: int) -> LinComb:
    return {i: Fraction(1)}


def _star(t: StructureTable, x: LinComb, bracket_sign) -> LinComb:
    _check(t, x)
    out: LinComb = {}
    for i, c in x.items():
        b = t.basis[i]
        if b.matrix is None:
            out = lc_add(out, {i: c})
            continue
        img: Matrix = {}
        for (r, s), v in b.matrix.items():
            img[(s, r)] = img.get((s, r), 0) + bracket_sign(r, s) * v
        out = lc_add(out, t.expand(img), c)
    return out


def star_omega(t: StructureTable, x: LinComb) -> LinComb:
    """omega(E_ij) = (-1)^([i]+[j]) E_ji with [i] = 1 iff i is a negative half-odd index."""
    def sg(r, s):
        k = (r < 0 and r % 2 == 1) + (s < 0 and s % 2 == 1)
        return -1 if k % 2 else 1
    return _star(t, x, sg)


def star_omega_prime(t: StructureTable, x: LinComb) -> LinComb:
    """omega'(E_rs) = (-1)^(tau_r+tau_s) E_sr with tau_r = 1 iff r is a negative integer."""
    def sg(r, s):
        k = (r < 0 and r % 2 == 0) + (s < 0 and s % 2 == 0)
        return -1 if k % 2 else 1
    return _star(t, x, sg)


def star(t: StructureTable, x: LinComb, which: str = "omega") -> LinComb:
    if which == "omega":
        return star_omega(t, x)
    if which == "omega_prime":
        return star_omega_prime(t, x)
    raise ValueError(which)


def iota(t: StructureTable, i: int) -> LinComb:
    """A + Str(J A) K for a basis element A of the non-extended algebra."""
    if t.K is None:
        raise ValueError("iota needs a centrally extended table")
    b = t.basis[i]
    if b.matrix is None:
        return basis_lc(i)
    s = supertrace(mat_mul(J_matrix(t), b.matrix))
    out = basis_lc(i)
    if s:
        out[t.K] = s
    return out


def cocycle_tau(t: StructureTable, a: LinComb, b: LinComb) -> Fraction:
    A, B = t.to_matrix(a), t.to_matrix(b)
    pa = t.lc_parity(a)
    return supertrace(mat_mul(supercommutator(J_matrix(t), A, 0, pa), B))


def shift_index(r2: int) -> int:
    """Index map of the parity-swapping isomorphism: positive integers and
    negative half-odds move down by 1/2, the rest move up by 1/2."""
    if (r2 > 0 and r2 % 2 == 0) or (r2 < 0 and r2 % 2 == 1):
        return r2 - 1
    return r2 + 1


def phi_hat_literal(src: StructureTable, dst: StructureTable, x: LinComb) -> LinComb:
    """Index shift applied to canonical c-side representatives:
    E^c_{r,s} -> E^d_{shift r, shift s}, K -> -K."""
    out: LinComb = {}
    for i, c in x.items():
        b = src.basis[i]
        if b.tag == "K":
            if dst.K is None:
                raise ForeignElementError("target table has no K")
            out = lc_add(out, {dst.K: -c})
            continue
        r, s = b.tag
        out = lc_add(out, dst.expand(element_matrix("d", shift_index(r), shift_index(s))), c)
    return out


def phi_target_spec(spec: AlgebraSpec) -> AlgebraSpec:
    if spec.xtype != "c" or spec.family == "tilde":
        raise ValueError("phi_hat maps a bar/unbar type-c table")
    fam = "unbar" if spec.family == "bar" else "bar"
    return AlgebraSpec(fam, "d", spec.m, spec.n, spec.extended, spec.guard)


def phi_conjugator(src: StructureTable, dst: StructureTable) -> dict[int, int]:
    """Signs e_r (r > 0 on the target side) such that conjugating the
    index-shifted ambient matrices by diag(1 on r > 0, e_r on -r) lands every
    type-c spanning element on a multiple of the matching type-d element."""
    cons: dict[int, list] = {}
    for p in src.ambient:
        for q in src.ambient:
            if not element_matrix("c", p, q) or (p, q) == (-q, -p):
                continue
            pp, qq = shift_index(p), shift_index(q)
            need = pair_sign("c", p, q) * pair_sign("d", pp, qq)
            a, b = abs(pp), abs(qq)
            cons.setdefault(a, []).append((b, need))
            cons.setdefault(b, []).append((a, need))
    e: dict[int, int] = {}
    for start in dst.positive_indices:
        if start in e:
            continue
        e[start] = 1
        stack = [start]
        while stack:
            a = stack.pop()
            for b, need in cons.get(a, ()):
                val = e[a] * need
                if b in e:
                    if e[b] != val:
                        raise AssertionError("no diagonal conjugator exists")
                else:
                    e[b] = val
                    stack.append(b)
    return e


_PHI_CACHE: dict = {}


def phi_hat(src: StructureTable, dst: StructureTable, x: LinComb, twisted: bool = True) -> LinComb:
    """The parity-swapping isomorphism from a type-c table to the matching type-d table.

    With ``twisted`` (default) the index-shifted ambient matrix is conjugated
    by a diagonal sign matrix; without it the shift is applied literally to
    canonical representatives, which is not a homomorphism on mixed pairs.
    """
    if not twisted:
        return phi_hat_literal(src, dst, x)
    key = (id(src), id(dst))
    if key not in _PHI_CACHE:
        _PHI_CACHE[key] = phi_conjugator(src, dst)
    e = _PHI_CACHE[key]

    def d(r2):
        return 1 if r2 > 0 else e[-r2]
    out: LinComb = {}
    for i, c in x.items():
        b = src.basis[i]
        if b.tag == "K":
            if dst.K is None:
                raise ForeignElementError("target table has no K")
            out = lc_add(out, {dst.K: -c})
            continue
        img: Matrix = {}
        for (r, s), v in b.matrix.items():
            r2, s2 = shift_index(r), shift_index(s)
            img[(r2, s2)] = img.get((r2, s2), 0) + v * d(r2) * d(s2)
        out = lc_add(out, dst.expand(img), c)
    return out


# -- self checks --------------------------------------------------------------

def check_table(t: StructureTable, jacobi: bool = True) -> dict[str, list[str]]:
    """Exhaustive structure checks; returns failures per check name."""
    fails: dict[str, list[str]] = {k: [] for k in (
        "antisymmetry", "jacobi", "form_even_supersymmetric", "form_invariance", "cartan_norm",
        "root_normalization", "root_weights", "omega", "omega_prime", "cocycle", "K_central")}
    B = t.basis
    n = t.dim
    lab = [b.label() for b in B]
    for i in range(n):
        for j in range(n):
            a = t.brackets.get((i, j), {})
            b = t.brackets.get((j, i), {})
            s = -1 if B[i].parity & B[j].parity else 1
            if lc_add(a, b, s):
                fails["antisymmetry"].append(f"[{lab[i]},{lab[j]}]")
            f = t.form.get((i, j), 0)
            if f and (B[i].parity != B[j].parity or f != s * t.form.get((j, i), 0)):
                fails["form_even_supersymmetric"].append(f"<{lab[i]},{lab[j]}>")
    if jacobi:
        for i in range(n):
            for j in range(n):
                bij = t.brackets.get((i, j))
                for k in range(n):
                    pi, pj, pk = B[i].parity, B[j].parity, B[k].parity
                    tot: LinComb = {}
                    jk = t.brackets.get((j, k))
                    if jk:
                        tot = lc_add(tot, bracket(t, {i: 1}, jk), (-1) ** (pi * pk))
                    ki = t.brackets.get((k, i))
                    if ki:
                        tot = lc_add(tot, bracket(t, {j: 1}, ki), (-1) ** (pj * pi))
                    if bij:
                        tot = lc_add(tot, bracket(t, {k: 1}, bij), (-1) ** (pk * pj))
                    if tot:
                        fails["jacobi"].append(f"({lab[i]},{lab[j]},{lab[k]})")
    # form invariance <[x,y],z> = <x,[y,z]>
    for i in range(n):
        for j in range(n):
            xy = t.brackets.get((i, j), {})
            for k in range(n):
                lhs = invariant_form(t, xy, {k: 1}) if xy else 0
                yz = t.brackets.get((j, k), {})
                rhs = invariant_form(t, {i: 1}, yz) if yz else 0
                if lhs != rhs:
                    fails["form_invariance"].append(f"({lab[i]},{lab[j]},{lab[k]})")
    for i in t.cartan:
        r2 = B[i].tag[0]
        if t.form.get((i, i)) != (-1) ** (r2 % 2):
            fails["cartan_norm"].append(lab[i])
    for r in t.positive_roots:
        e = {r.raising: 1}
        if invariant_form(t, e, r.dual_lowering) != 1:
            fails["root_normalization"].append(lab[r.raising])
        if invariant_form(t, r.dual_lowering, e) != (-1) ** r.parity:
            fails["root_normalization"].append(f"dual {lab[r.raising]}")
        for h in t.cartan:
            j2 = B[h].tag[0]
            if bracket(t, {h: 1}, e) != ({r.raising: r.weight[j2]} if r.weight[j2] else {}):
                fails["root_weights"].append(f"[{lab[h]},{lab[r.raising]}]")
    for name, fn in (("omega", star_omega), ("omega_prime", star_omega_prime)):
        for i in range(n):
            if fn(t, fn(t, {i: 1})) != {i: 1}:
                fails[name].append(f"{name}^2 on {lab[i]}")
            for j in range(n):
                lhs = fn(t, t.brackets.get((i, j), {}))
                rhs = bracket(t, fn(t, {j: 1}), fn(t, {i: 1}))
                if lhs != rhs:
                    fails[name].append(f"{name}([{lab[i]},{lab[j]}])")
    J = J_matrix(t)
    for i in range(n):
        if B[i].matrix is None:
            continue
        for j in range(n):
            if B[j].matrix is None:
                continue
            tau = cocycle_tau(t, {i: 1}, {j: 1})
            br = supercommutator(B[i].matrix, B[j].matrix, B[i].parity, B[j].parity)
            if tau != supertrace(mat_mul(J, br)):
                fails["cocycle"].append(f"tau({lab[i]},{lab[j]})")
    if t.K is not None:
        for i in range(n):
            if t.brackets.get((t.K, i)) or t.brackets.get((i, t.K)):
                fails["K_central"].append(lab[i])
    return fails


def check_phi(src: StructureTable, dst: StructureTable, twisted: bool = True) -> dict[str, list[str]]:
    fails = {"phi_bracket": [], "phi_bijective": [], "phi_star": []}
    n = src.dim
    images = [phi_hat(src, dst, {i: 1}, twisted) for i in range(n)]
    rows = [dict(im) for im in images]
    if len(rref_rows(rows)[0]) != dst.dim or n != dst.dim:
        fails["phi_bijective"].append(f"rank mismatch {n} -> {dst.dim}")
    for i in range(n):
        for j in range(n):
            lhs = phi_hat(src, dst, src.brackets.get((i, j), {}), twisted)
            rhs = bracket(dst, images[i], images[j])
            if lhs != rhs:
                fails["phi_bracket"].append(f"[{src.basis[i].label()},{src.basis[j].label()}]")
        lhs = phi_hat(src, dst, star_omega_prime(src, {i: 1}), twisted)
        rhs = star_omega(dst, images[i])
        if lhs != rhs:
            fails["phi_star"].append(src.basis[i].label())
    return fails


def table_dump(t: StructureTable) -> str:
    lines = [f"ALGEBRA {t.spec.name} DIM {t.dim}"]
    for i, b in enumerate(t.basis):
        lines.append(f"BASIS {i} {b.label()} {'odd' if b.parity else 'even'} {b.kind}")
    for (i, j) in sorted(t.brackets):
        lc = t.brackets[(i, j)]
        rhs = " + ".join(f"{lc[k]}*{k}" for k in sorted(lc))
        lines.append(f"BRK {i} {j} -> {rhs}")
    for (i, j) in sorted(t.form):
        lines.append(f"FORM {i} {j} -> {t.form[(i, j)]}")
    return "\n".join(lines) + "\n"
