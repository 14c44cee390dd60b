"""Partitions, weights and the weight maps between the three index families.

Half-integer indices are stored doubled: ``2r``. A weight is a finitely
supported map ``2r -> Fraction`` plus a level (the value on K).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

INF = math.inf


class HookError(ValueError):
    pass


class ReconstructionError(ValueError):
    pass


class ParityError(ValueError):
    pass


# -- partitions ---------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"not weakly decreasing: {parts}")
        if parts and parts[-1] < 0:
            raise ValueError(f"negative part in {parts}")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        """1-based access with zeros beyond the length."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    @property
    def size(self):
        return sum(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


def partition(p) -> Partition:
    if isinstance(p, Partition):
        return p
    return Partition(tuple(p))


def partitions_of(n: int, max_part: int | None = None) -> Iterable[Partition]:
    """All partitions of n in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield Partition(())
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            yield Partition((first,) + rest.parts)


def conjugate(p) -> Partition:
    p = partition(p)
    if not p.parts:
        return p
    return Partition(tuple(sum(1 for x in p.parts if x >= i) for i in range(1, p.parts[0] + 1)))


def is_hook(p, m: int, n) -> bool:
    p = partition(p)
    return p[m + 1] <= n


# -- weights ------------------------------------------------------------------

def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Weight:
    """Coefficients of eps_r keyed by 2r, plus the level d (value on K)."""

    items: tuple[tuple[int, Fraction], ...] = ()
    level: Fraction = Fraction(0)
    _hash: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "level", _q(self.level))
        object.__setattr__(self, "_hash", hash((self.items, self.level)))

    @classmethod
    def make(cls, coeffs: Mapping[int, object] | None = None, level=0) -> "Weight":
        coeffs = coeffs or {}
        items = tuple(sorted((int(k), _q(v)) for k, v in coeffs.items() if v))
        return cls(items, _q(level))

    @classmethod
    def zero(cls, level=0):
        return cls((), _q(level))

    def __hash__(self):
        return self._hash

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self.items)

    def __getitem__(self, r2: int) -> Fraction:
        for k, v in self.items:
            if k == r2:
                return v
        return Fraction(0)

    def support(self) -> list[int]:
        return [k for k, _ in self.items]

    def _combine(self, other: "Weight", s: int) -> "Weight":
        c = dict(self.items)
        for k, v in other.items:
            c[k] = c.get(k, 0) + s * v
        return Weight.make(c, self.level + s * other.level)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Weight.make({k: -v for k, v in self.items}, -self.level)

    def scaled(self, c) -> "Weight":
        c = _q(c)
        return Weight.make({k: c * v for k, v in self.items}, c * self.level)

    def with_level(self, d) -> "Weight":
        return Weight(self.items, _q(d))

    def is_zero(self):
        return not self.items and self.level == 0

    def __str__(self):
        return weight_to_text(self)

    def __repr__(self):
        return f"Weight({weight_to_text(self)})"

    def __lt__(self, other):
        return (self.items, self.level) < (other.items, other.level)


def eps(r, c=1) -> Weight:
    """c * eps_r with r a half-integer given as int, Fraction or string."""
    return Weight.make({int(2 * Fraction(r)): c})


def half_str(r2: int) -> str:
    return str(r2 // 2) if r2 % 2 == 0 else f"{r2}/2"


def weight_to_text(w: Weight) -> str:
    terms = [f"{v}*e({half_str(k)})" for k, v in w.items]
    terms.append(f"{w.level}*L0")
    return " + ".join(terms)


_TERM = re.compile(r"^\s*((?:[+-]\s*)*)([0-9/]*)\s*\*?\s*(e\(\s*(-?[0-9/]+)\s*\)|L0)\s*$")


def weight_from_text(s: str) -> Weight:
    s = s.strip()
    if not s or s == "0":
        return Weight.zero()
    # split on + and - at term boundaries
    pieces = re.split(r"(?<=[)0-9])\s*(?=[+-])", s)
    coeffs: dict[int, Fraction] = {}
    level = Fraction(0)
    for piece in pieces:
        m = _TERM.match(piece)
        if not m:
            raise ValueError(f"cannot parse weight term {piece!r}")
        sign = -1 if m.group(1).count("-") % 2 else 1
        coef = sign * (Fraction(m.group(2)) if m.group(2) else Fraction(1))
        if m.group(3) == "L0":
            level += coef
        else:
            r2 = int(2 * Fraction(m.group(4)))
            coeffs[r2] = coeffs.get(r2, 0) + coef
    return Weight.make(coeffs, level)


def weight_to_json(w: Weight) -> dict:
    return {"eps": [[k, f"{v.numerator}/{v.denominator}"] for k, v in w.items],
            "level": f"{w.level.numerator}/{w.level.denominator}"}


def weight_from_json(obj) -> Weight:
    return Weight.make({int(k): Fraction(v) for k, v in obj["eps"]}, Fraction(obj["level"]))


# -- index sets ---------------------------------------------------------------

def index_set(family: str, m: int, n) -> list[int]:
    """Positive index set (doubled) of a family, in the family's total order.

    bar:   1 < ... < m < 1/2 < 3/2 < ... < n-1/2
    unbar: 1/2 < ... < m-1/2 < 1 < ... < n
    tilde: 1/2 < 1 < 3/2 < ... < n   (m ignored)
    """
    if n == INF:
        raise ValueError("index sets are only materialized for finite n")
    if family == "bar":
        return [2 * i for i in range(1, m + 1)] + [2 * j - 1 for j in range(1, n + 1)]
    if family == "unbar":
        return [2 * i - 1 for i in range(1, m + 1)] + [2 * j for j in range(1, n + 1)]
    if family == "tilde":
        return list(range(1, 2 * n + 1))
    raise ValueError(f"unknown family {family!r}")


def in_index_set(r2: int, family: str, m: int, n) -> bool:
    if r2 <= 0:
        return False
    if family == "bar":
        return (r2 % 2 == 0 and r2 // 2 <= m) or (r2 % 2 == 1 and (r2 + 1) // 2 <= n)
    if family == "unbar":
        return (r2 % 2 == 1 and (r2 + 1) // 2 <= m) or (r2 % 2 == 0 and r2 // 2 <= n)
    if family == "tilde":
        return r2 <= 2 * n
    raise ValueError(f"unknown family {family!r}")


# -- weight maps --------------------------------------------------------------

def frobenius_theta(p) -> Weight:
    p = partition(p)
    pc = conjugate(p)
    c: dict[int, int] = {}
    for i in range(1, len(pc) + 1):
        v = pc[i] - i + 1
        if v > 0:
            c[2 * i - 1] = v
    for i in range(1, len(p) + 1):
        v = p[i] - i
        if v > 0:
            c[2 * i] = v
    return Weight.make(c)


def weight_tilde(p, d=0) -> Weight:
    return frobenius_theta(p).with_level(d)


def weight_m(p, d, m: int, n=INF) -> Weight:
    p = partition(p)
    pc = conjugate(p)
    if not is_hook(pc, m, n):
        raise HookError(f"conjugate part {m + 1} of {p} is {pc[m + 1]} > n = {n}")
    c: dict[int, int] = {}
    for i in range(1, m + 1):
        c[2 * i - 1] = pc[i]
    for j in range(1, len(p) + 1):
        v = p[j] - m
        if v > 0:
            c[2 * j] = v
    return Weight.make(c, d)


def weight_bar_m(p, d, m: int, n=INF) -> Weight:
    p = partition(p)
    if not is_hook(p, m, n):
        raise HookError(f"part {m + 1} of {p} is {p[m + 1]} > n = {n}")
    pc = conjugate(p)
    c: dict[int, int] = {}
    for i in range(1, m + 1):
        c[2 * i] = p[i]
    for j in range(1, len(pc) + 1):
        v = pc[j] - m
        if v > 0:
            c[2 * j - 1] = v
    return Weight.make(c, d)


def _int_coeff(w: Weight, r2: int) -> int:
    v = w[r2]
    if v.denominator != 1 or v < 0:
        raise ReconstructionError(f"coefficient of e({half_str(r2)}) is {v}, not a non-negative integer")
    return int(v)


def _check_roundtrip(w: Weight, p: Partition, rebuilt: Weight):
    if rebuilt.items != w.with_level(0).items:
        keys = sorted(set(rebuilt.coeffs) | set(w.coeffs))
        for k in keys:
            if rebuilt[k] != w[k]:
                raise ReconstructionError(
                    f"coefficient of e({half_str(k)}) is {w[k]}, but the reconstructed "
                    f"partition {p} gives {rebuilt[k]}")


def invert_weight_map(w: Weight, side: str, m: int = 0) -> tuple[Partition, Fraction]:
    """Inverse of weight_tilde / weight_m / weight_bar_m (side = tilde | m | bar)."""
    d = w.level
    if side == "tilde":
        r = 0
        while w[2 * (r + 1) - 1] > 0:
            r += 1
        alpha = [_int_coeff(w, 2 * i) for i in range(1, r + 1)]
        beta = [_int_coeff(w, 2 * i - 1) - 1 for i in range(1, r + 1)]
        parts = [alpha[i - 1] + i for i in range(1, r + 1)]
        i = r + 1
        while True:
            v = sum(1 for j in range(1, r + 1) if beta[j - 1] + j >= i)
            if v == 0:
                break
            parts.append(v)
            i += 1
        try:
            p = Partition(tuple(parts))
        except ValueError as e:
            raise ReconstructionError(f"coordinates do not describe a diagram: {e}") from None
        _check_roundtrip(w, p, frobenius_theta(p))
        return p, d
    if side in ("m", "unbar"):
        pc_head = [_int_coeff(w, 2 * i - 1) for i in range(1, m + 1)]
        for k in w.support():
            if k % 2 == 1 and (k + 1) // 2 > m:
                raise ReconstructionError(f"coefficient at e({half_str(k)}) lies outside the m-side index set")
        parts = []
        j = 1
        while True:
            c = _int_coeff(w, 2 * j)
            if c > 0:
                parts.append(c + m)
            else:
                v = sum(1 for x in pc_head if x >= j)
                if v == 0:
                    break
                parts.append(v)
            j += 1
        try:
            p = Partition(tuple(parts))
        except ValueError as e:
            raise ReconstructionError(f"coefficients do not describe a diagram: {e}") from None
        _check_roundtrip(w, p, weight_m(p, 0, m))
        return p, d
    if side == "bar":
        head = [_int_coeff(w, 2 * i) for i in range(1, m + 1)]
        for k in w.support():
            if k % 2 == 0 and k // 2 > m:
                raise ReconstructionError(f"coefficient at e({half_str(k)}) lies outside the bar-side index set")
        cparts = []
        j = 1
        while True:
            c = _int_coeff(w, 2 * j - 1)
            if c > 0:
                cparts.append(c + m)
            else:
                v = sum(1 for x in head if x >= j)
                if v == 0:
                    break
                cparts.append(v)
            j += 1
        try:
            p = conjugate(Partition(tuple(cparts)))
        except ValueError as e:
            raise ReconstructionError(f"coefficients do not describe a diagram: {e}") from None
        _check_roundtrip(w, p, weight_bar_m(p, 0, m))
        return p, d
    raise ValueError(f"unknown side {side!r}")


# -- lattices -----------------------------------------------------------------

@dataclass(frozen=True)
class LatticeId:
    kind: str  # "tilde" | "unbar" | "bar"
    m: int = 0
    n: float = INF

    def __post_init__(self):
        if self.kind not in ("tilde", "unbar", "bar"):
            raise ValueError(f"unknown lattice kind {self.kind!r}")
        if self.m < 0 or self.n < 1:
            raise ValueError("need m >= 0 and n >= 1")


def in_lattice(w: Weight, lat: LatticeId) -> bool:
    for k, v in w.items:
        if v.denominator != 1 or v < 0:
            return False
        if not in_index_set(k, lat.kind, lat.m, lat.n):
            return False
    return True


def weight_parity(w: Weight) -> int:
    s = Fraction(0)
    for k, v in w.items:
        if k % 2:
            if v.denominator != 1:
                raise ParityError(f"coefficient {v} at e({half_str(k)}) is not an integer")
            s += v
    return int(s) % 2


# -- unitary weight sets ------------------------------------------------------

def one_mn(m: int, n: int) -> Weight:
    """The weight sum_{i<=m} eps_i - sum_{j<=n} eps_{j-1/2}."""
    c = {2 * i: 1 for i in range(1, m + 1)}
    c.update({2 * j - 1: -1 for j in range(1, n + 1)})
    return Weight.make(c)


def _lam_bar(p: Partition, m: int, n) -> Weight:
    return weight_bar_m(p, 0, m, n)


def _constraint(x: str, kind: str, p: Partition, d: Fraction) -> bool:
    pc = conjugate(p)
    if x == "a":
        return d == 0
    if (x, kind) == ("c", "I"):
        return d.denominator == 1 and d >= 0 and p[1] <= d
    if (x, kind) == ("d", "I"):
        return (2 * d).denominator == 1 and d >= 0 and p[1] + p[2] <= 2 * d
    if (x, kind) == ("c", "II"):
        return (2 * d).denominator == 1 and d >= 0 and pc[1] + pc[2] <= 2 * d
    if (x, kind) == ("d", "II"):
        return d.denominator == 1 and d >= 0 and pc[1] <= d
    raise ValueError((x, kind))


def _search_shifted(w: Weight, x: str, kind: str, m: int, n: int):
    """Find (p, d) with w = bar(p) - d*1 (kind I) or bar(p) + d*1 (kind II)."""
    sgn = -1 if kind == "I" else 1
    one = one_mn(m, n)
    base = w.with_level(0)
    bound = 2 * (sum(abs(v) for _, v in base.items) + m + n + 2)
    steps = range(0, int(2 * bound) + 1)
    for s2 in steps:
        d = Fraction(s2, 2)
        cand = base - one.scaled(sgn * d)
        try:
            p, _ = invert_weight_map(cand, "bar", m)
        except ReconstructionError:
            continue
        if not is_hook(p, m, n):
            continue
        if _lam_bar(p, m, n) != cand:
            continue
        if _constraint(x, kind, p, d):
            return p, d
    return None


def classify_unitary_weight(w: Weight, x: str, m: int, n) -> dict[str, tuple[Partition, Fraction]]:
    """Memberships of w in the unitary weight sets for (x, m, n).

    Keys: ``Q`` (m-side weights with level), ``Qbar`` (bar-side weights with
    level), ``Qbar_I`` and ``Qbar_II`` (shifted finite-rank weights, level
    ignored; type a has only ``Qbar_I``, the polynomial weights). Values are
    the decompositions (partition, d).
    """
    out: dict[str, tuple[Partition, Fraction]] = {}
    d = w.level
    try:
        p, _ = invert_weight_map(w, "bar", m)
        if is_hook(p, m, n) and weight_bar_m(p, d, m, n) == w:
            if _constraint(x, "I", p, d):
                out["Qbar"] = (p, d)
    except (ReconstructionError, HookError):
        pass
    try:
        p, _ = invert_weight_map(w, "m", m)
        if is_hook(conjugate(p), m, n) and weight_m(p, d, m, n) == w:
            if _constraint(x, "I", p, d):
                out["Q"] = (p, d)
    except (ReconstructionError, HookError):
        pass
    if n != INF:
        if x == "a":
            try:
                p, _ = invert_weight_map(w.with_level(0), "bar", m)
                if is_hook(p, m, n) and weight_bar_m(p, 0, m, n) == w.with_level(0):
                    out["Qbar_I"] = (p, Fraction(0))
            except (ReconstructionError, HookError):
                pass
        else:
            for kind in ("I", "II"):
                hit = _search_shifted(w, x, kind, m, int(n))
                if hit is not None:
                    out[f"Qbar_{kind}"] = hit
    return out
