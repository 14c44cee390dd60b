"""Spectrum comparison between superalgebra and Lie algebra Gaudin systems."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources

import sympy

from .algebra import AlgebraSpec, StructureTable, build_algebra
from .combinatorics import (HookError, Partition, Weight, conjugate, is_hook, partition, weight_bar_m,
                            weight_m, weight_to_json)
from .exact import Mat, charpoly, fstr, kernel, minimal_polynomial, peval_op, pmonic, squarefree_certificate
from .gaudin import TensorSystem, default_points, is_diagonalizable, resample_points, restrict
from .repbuilder import RepModule, build_irreducible, natural_module, plain_weight

MAX_RESAMPLES = 5


class CaseSchemaError(ValueError):
    pass


# -- weights ------------------------------------------------------------------------

def correspond_weights(p, d, x: str, m: int, n: int, k: int) -> dict:
    """Weights attached to (p, d) on the super side (rank (m, n)) and the Lie side (rank k).

    ``super``/``lie`` are the level-d weights; ``super_plain``/``lie_plain``
    are the Cartan values on the non-extended algebras.
    """
    p = partition(p)
    d = Fraction(d)
    if not is_hook(p, m, n):
        raise HookError(f"{p.parts} is not an ({m}|{n})-hook partition")
    if len(p) > k:
        raise HookError(f"{p.parts} has more than {k} parts")
    sb = weight_bar_m(p, d, m, n)
    lw = weight_m(p, d, 0, k)
    ts = _table(AlgebraSpec("bar", x, m, n))
    tl = _table(AlgebraSpec("unbar", x, 0, k))
    return {"super": sb, "lie": lw, "super_plain": plain_weight(ts, sb), "lie_plain": plain_weight(tl, lw)}


_TABLES: dict = {}


def _table(spec: AlgebraSpec) -> StructureTable:
    if spec not in _TABLES:
        _TABLES[spec] = build_algebra(spec)
    return _TABLES[spec]


def _module(t: StructureTable, plain: Weight, depth: int, star_kind: str) -> RepModule:
    return build_irreducible(t, plain, depth, star_kind)


# -- cases ------------------------------------------------------------------------------

@dataclass
class CorrespondenceCase:
    xtype: str
    m: int
    n: int
    k: int
    partitions: list
    levels: list
    mu: list
    z: list | None = None
    depth: int = 8
    star: str = "omega"
    seed: int = 0

    def __post_init__(self):
        if self.xtype not in ("a", "c", "d"):
            raise CaseSchemaError(f"unknown type {self.xtype!r}")
        if self.m < 1:
            raise CaseSchemaError("the super side needs m >= 1")
        self.partitions = [partition(p) for p in self.partitions]
        self.levels = [Fraction(d) for d in self.levels]
        self.mu = partition(self.mu)
        if len(self.partitions) < 2 or len(self.levels) != len(self.partitions):
            raise CaseSchemaError("need at least two factors and one level per factor")
        if self.z is not None:
            self.z = [Fraction(v) for v in self.z]
            if len(self.z) != len(self.partitions) or len(set(self.z)) != len(self.z):
                raise CaseSchemaError("z must list pairwise distinct points, one per factor")
        if sum(self.mu.parts) != sum(sum(p.parts) for p in self.partitions):
            raise CaseSchemaError("target partition size must equal the total size of the factors")

    @property
    def points(self) -> list[Fraction]:
        return self.z if self.z is not None else default_points(len(self.partitions))


def case_from_json(obj: dict) -> CorrespondenceCase:
    required = {"type": str, "m": int, "n": int, "k": int, "partitions": list, "levels": list, "mu": list}
    if not isinstance(obj, dict):
        raise CaseSchemaError("case file must hold a JSON object")
    for key, typ in required.items():
        if key not in obj:
            raise CaseSchemaError(f"missing field {key!r}")
        if not isinstance(obj[key], typ) or (typ is int and isinstance(obj[key], bool)):
            raise CaseSchemaError(f"field {key!r} must be of type {typ.__name__}")
    try:
        return CorrespondenceCase(obj["type"], obj["m"], obj["n"], obj["k"], obj["partitions"],
                                  [Fraction(str(v)) for v in obj["levels"]], obj["mu"],
                                  [Fraction(str(v)) for v in obj["z"]] if obj.get("z") is not None else None,
                                  int(obj.get("depth", 8)), obj.get("star", "omega"), int(obj.get("seed", 0)))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, CaseSchemaError):
            raise
        raise CaseSchemaError(str(exc)) from exc


def case_to_json(case: CorrespondenceCase) -> dict:
    out = {"type": case.xtype, "m": case.m, "n": case.n, "k": case.k,
           "partitions": [list(p.parts) for p in case.partitions],
           "levels": [fstr(d) for d in case.levels], "mu": list(case.mu.parts), "depth": case.depth,
           "star": case.star, "seed": case.seed}
    if case.z is not None:
        out["z"] = [fstr(v) for v in case.z]
    return out


def load_case(path_or_name: str) -> CorrespondenceCase:
    """A case file path, or the name of a shipped case."""
    try:
        text = resources.files("superdual").joinpath("data", "cases", f"{path_or_name}.json").read_text()
    except (FileNotFoundError, OSError):
        with open(path_or_name) as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CaseSchemaError(f"not valid JSON: {exc}") from exc
    return case_from_json(obj)


def shipped_cases() -> list[str]:
    d = resources.files("superdual").joinpath("data", "cases")
    return sorted(p.name[:-5] for p in d.iterdir() if p.name.endswith(".json"))


# -- comparison -----------------------------------------------------------------------------

@dataclass
class HamiltonianComparison:
    index: int
    super_charpoly: list
    lie_charpoly: list
    equal: bool
    super_diagonalizable: bool
    lie_diagonalizable: bool


@dataclass
class ComparisonReport:
    case: dict
    super_weight: str
    lie_weight: str
    super_sing_dim: int
    lie_sing_dim: int
    z: list
    resamples: int
    per_hamiltonian: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def dims_equal(self) -> bool:
        return self.super_sing_dim == self.lie_sing_dim

    @property
    def passed(self) -> bool:
        return (self.dims_equal and not self.failures
                and all(h.equal and h.super_diagonalizable and h.lie_diagonalizable
                        for h in self.per_hamiltonian))

    def to_json(self) -> dict:
        d = asdict(self)
        for h in d["per_hamiltonian"]:
            h["super_charpoly"] = [fstr(c) for c in h["super_charpoly"]]
            h["lie_charpoly"] = [fstr(c) for c in h["lie_charpoly"]]
        d["z"] = [fstr(v) for v in self.z]
        d["dims_equal"] = self.dims_equal
        d["passed"] = self.passed
        return d


@dataclass
class _Side:
    system: TensorSystem
    target: Weight


def build_sides(case: CorrespondenceCase) -> tuple[_Side, _Side]:
    x, m, n, k = case.xtype, case.m, case.n, case.k
    ts = _table(AlgebraSpec("bar", x, m, n))
    tl = _table(AlgebraSpec("unbar", x, 0, k))
    sfac, lfac = [], []
    cache: dict = {}
    for p, d in zip(case.partitions, case.levels):
        key = (p, d)
        if key not in cache:
            w = correspond_weights(p, d, x, m, n, k)
            cache[key] = (_module(ts, w["super_plain"], case.depth, case.star),
                          _module(tl, w["lie_plain"], case.depth, case.star))
        sfac.append(cache[key][0])
        lfac.append(cache[key][1])
    D = sum(case.levels, Fraction(0))
    wt = correspond_weights(case.mu, D, x, m, n, k)
    pts = case.points
    return (_Side(TensorSystem(sfac, pts, "central"), wt["super_plain"]),
            _Side(TensorSystem(lfac, pts, "central"), wt["lie_plain"]))


def _side_polys(side: _Side, sing) -> list:
    out = []
    for i in range(side.system.l):
        r = restrict(side.system.hamiltonian(i, side.target), sing)
        cp = charpoly(r)
        diag = is_diagonalizable(r)[0] if r else True
        out.append((cp, diag))
    return out


def compare_spectra(case: CorrespondenceCase) -> ComparisonReport:
    sup, lie = build_sides(case)
    ssing = sup.system.singular_block(sup.target)
    lsing = lie.system.singular_block(lie.target)
    report = ComparisonReport(case_to_json(case), str(sup.target), str(lie.target), len(ssing), len(lsing),
                              list(case.points), 0)
    pts = list(case.points)
    for attempt in range(MAX_RESAMPLES + 1):
        if attempt:
            pts = resample_points(len(pts), case.seed, attempt)
            sup.system = sup.system.with_points(pts)
            lie.system = lie.system.with_points(pts)
        sp = _side_polys(sup, ssing)
        lp = _side_polys(lie, lsing)
        if all(a[1] and b[1] for a, b in zip(sp, lp)):
            break
        report.failures.append(f"not diagonalizable at z={[fstr(v) for v in pts]}")
    else:
        attempt = MAX_RESAMPLES
    if attempt and all(a[1] and b[1] for a, b in zip(sp, lp)):
        report.failures = []  # recovered by resampling; history kept in resamples
    report.resamples = attempt
    report.z = pts
    for i, ((a, da), (b, db)) in enumerate(zip(sp, lp)):
        report.per_hamiltonian.append(HamiltonianComparison(i + 1, a, b, a == b, da, db))
    return report


# -- truncation ---------------------------------------------------------------------------------

def _support_ok(w: Weight, t: StructureTable) -> bool:
    allowed = set(t.positive_indices)
    return all(k in allowed for k in w.support())


def truncation_restrict(rep: RepModule, k: int) -> RepModule:
    """Keep the blocks supported in the rank-k index set; the result lives over the rank-k table."""
    spec = rep.table.spec
    if not k < spec.n:
        raise ValueError("truncation needs k < n")
    tk = _table(AlgebraSpec(spec.family, spec.xtype, spec.m, k, spec.extended))
    out = RepModule(tk, rep.highest_weight, complete=rep.complete, depth=rep.depth, star=rep.star)
    keep = [w for w in rep.blocks if _support_ok(w, tk)]
    for w in keep:
        out.blocks[w] = rep.blocks[w]
        out.heights[w] = int(tk.height(rep.highest_weight - w)) if _support_ok(rep.highest_weight, tk) else 0
        out.parities[w] = rep.parities[w]
        if w in rep.gram:
            out.gram[w] = rep.gram[w]
    keep_set = set(keep)
    for (i, w), m in rep.actions.items():
        if w not in keep_set:
            continue
        tag = rep.table.basis[i].tag
        if tag not in tk.index_of:
            continue
        tgt = w + rep.table.basis[i].weight
        if tgt in keep_set:
            out.actions[(tk.index_of[tag], w)] = m
    if not keep:
        out.highest_weight = rep.highest_weight
    return out


def _word_map(src: RepModule, dst: RepModule) -> dict | None:
    """Images in dst of the basis words of src, v -> v on the top block."""
    images: dict = {}
    top = src.highest_weight
    if top not in dst.blocks:
        return None
    images[(top, 0)] = {0: Fraction(1)}
    for mu in src.weights_by_height():
        if mu == top:
            continue
        for b, (f, nu, u) in enumerate(src.origins[mu]):
            tag = src.table.basis[f].tag
            fi = dst.table.index_of[tag]
            _, v = dst.act(fi, nu, images[(nu, u)])
            images[(mu, b)] = v
    return images


def modules_isomorphic(a: RepModule, b: RepModule) -> bool:
    """Word transport from a into b is a bijection on every block and intertwines every generator."""
    if set(a.blocks) != set(b.blocks) or any(a.blocks[w] != b.blocks[w] for w in a.blocks):
        return False
    if not a.blocks:
        return True
    images = _word_map(a, b)
    if images is None:
        return False
    for mu in a.blocks:
        cols = [images[(mu, j)] for j in range(a.blocks[mu])]
        if len(kernel(Mat.from_columns(cols, b.blocks[mu]))) != 0:
            return False
    t = a.table
    for mu in a.blocks:
        for j in range(a.blocks[mu]):
            for i in range(t.dim):
                bi = b.table.index_of.get(t.basis[i].tag)
                if bi is None:
                    return False
                tgt, v = a.act(i, mu, {j: Fraction(1)})
                lhs: dict = {}
                for jj, c in v.items():
                    for kk, x in images[(tgt, jj)].items():
                        lhs[kk] = lhs.get(kk, 0) + c * x
                lhs = {kk: x for kk, x in lhs.items() if x}
                _, rhs = b.act(bi, mu, images[(mu, j)])
                if lhs != rhs:
                    return False
    return True


def truncation_check(p, n: int, k: int, side: str = "unbar", x: str = "a", m: int = 0, d=0,
                     depth: int = 12) -> dict:
    """Truncating L at rank n to rank k agrees with L built at rank k (or with 0)."""
    family = {"unbar": "unbar", "bar": "bar"}[side]
    p = partition(p)
    tn = _table(AlgebraSpec(family, x, m, n))
    tk = _table(AlgebraSpec(family, x, m, k))
    mapper = weight_m if family == "unbar" else weight_bar_m
    big = build_irreducible(tn, plain_weight(tn, mapper(p, d, m, n)), depth)
    tr = truncation_restrict(big, k)
    fits = (is_hook(conjugate(p), m, k) if family == "unbar" else is_hook(p, m, k))
    if not fits:
        return {"agree": tr.dim == 0, "zero": True, "dim": tr.dim}
    small = build_irreducible(tk, plain_weight(tk, mapper(p, d, m, k)), depth)
    return {"agree": modules_isomorphic(small, tr), "zero": False, "dim": small.dim}


# -- windows and words ------------------------------------------------------------------------

def sub_table(sys: TensorSystem, family: str, m: int) -> StructureTable:
    t = sys.table
    if t.spec.family != "tilde":
        raise ValueError("sub-sum Hamiltonians live in a tilde window")
    return _table(AlgebraSpec(family, t.xtype, m, t.spec.n))


def window_consistency(sys: TensorSystem, m: int, mu: Weight, family: str = "unbar") -> bool:
    sub = sub_table(sys, family, m)
    if not _support_ok(mu, sub):
        raise ValueError(f"{mu} is not supported in the {family} index set for m={m}")
    for i in range(sys.l):
        if not (sys.hamiltonian(i, mu).matrix == sys.hamiltonian(i, mu, sub).matrix):
            return False
    return True


def apply_word(sys: TensorSystem, word: list[int], mu: Weight, vec: dict) -> tuple[Weight, dict]:
    """Operator product of the letters (left to right) applied to vec; rightmost acts first."""
    w, v = mu, dict(vec)
    for x in reversed(word):
        w, v = sys.apply_diagonal(x, w, v)
    return w, v


def _tag(r, s) -> tuple[int, int]:
    return (int(2 * Fraction(r)), int(2 * Fraction(s)))


def _qpoly_factors(p: list[Fraction]) -> list[list[Fraction]]:
    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * t ** k for k, c in enumerate(p))
    _, facs = sympy.factor_list(expr, t)
    out = []
    for f, mult in facs:
        coeffs = sympy.Poly(f, t).all_coeffs()[::-1]
        out.append((pmonic([Fraction(int(c.p), int(c.q)) for c in coeffs]), mult))
    return out


def _kernel_of_poly(op: Mat, p: list[Fraction], sub: list[dict]) -> list[dict]:
    """Basis of {v in span(sub) : p(op) v = 0}."""
    imgs = [peval_op(p, op, v) for v in sub]
    rows: dict = {}
    for c, v in enumerate(imgs):
        for i, x in v.items():
            rows.setdefault(i, {})[c] = x
    null = kernel(Mat(len(rows), len(sub), list(rows.values())))
    out = []
    for nv in null:
        acc: dict = {}
        for c, a in nv.items():
            for i, x in sub[c].items():
                acc[i] = acc.get(i, 0) + a * x
        out.append({i: x for i, x in acc.items() if x})
    return out


def worked_example_s5(z=None, factors: int = 6, window: int = 4) -> dict:
    """Transport of singular eigenvectors by E_{1/2,2} E_{1/2,3} E_{1/2,4} in a gl(4|4)-type window."""
    t = _table(AlgebraSpec("tilde", "a", 0, window))
    nat = natural_module(t)
    pts = [Fraction(v) for v in z] if z is not None else default_points(factors)
    sys = TensorSystem([nat] * factors, pts, "ring")
    lie = _table(AlgebraSpec("unbar", "a", 0, window))
    bar = _table(AlgebraSpec("bar", "a", 1, window))
    mu0 = weight_m(partition((3, 1, 1, 1)), 0, 0, window)
    mubar = weight_bar_m(partition((3, 1, 1, 1)), 0, 1, window)
    word = [t.index_of[_tag("1/2", j)] for j in (2, 3, 4)]
    lie_raise = [t.index_of[lie.basis[r.raising].tag] for r in lie.simple_roots]
    bar_raise = [t.index_of[bar.basis[r.raising].tag] for r in bar.simple_roots]
    rep = {"z": [fstr(v) for v in pts], "mu0": str(mu0), "mubar": str(mubar), "steps": {}, "failures": []}
    fail = rep["failures"]

    lsing = sys.singular_block(mu0, lie_raise)
    bsing = sys.singular_block(mubar, bar_raise)
    rep["steps"]["lie_block_dim"] = sys.block_dim(mu0)
    rep["steps"]["lie_singular_dim"] = len(lsing)
    rep["steps"]["bar_block_dim"] = sys.block_dim(mubar)
    rep["steps"]["bar_singular_dim"] = len(bsing)

    images = []
    for v in lsing:
        w, img = apply_word(sys, word, mu0, v)
        if w != mubar:
            fail.append(f"word image has weight {w}")
        images.append(img)
    # images must be bar-singular, independent, and fill the bar singular space
    for img in images:
        for e in bar_raise:
            _, r = sys.apply_diagonal(e, mubar, img)
            if r:
                fail.append(f"image not killed by {t.basis[e].label()}")
                break
    rank = len(images) - len(kernel(Mat.from_columns(images, sys.block_dim(mubar))))
    rep["steps"]["image_rank"] = rank
    if rank != len(lsing):
        fail.append(f"word is not injective on the singular space (rank {rank} < {len(lsing)})")

    per_h = []
    for i in range(factors):
        Hl = sys.hamiltonian(i, mu0).matrix
        Hb = sys.hamiltonian(i, mubar).matrix
        ok_sub = (Hl == sys.hamiltonian(i, mu0, lie).matrix) and (Hb == sys.hamiltonian(i, mubar, bar).matrix)
        if not ok_sub:
            fail.append(f"H{i + 1}: window Hamiltonian differs from the sub-sum")
        rl = restrict(Hl, lsing)
        rb = restrict(Hb, bsing)
        mp = minimal_polynomial(rl)
        sq, _ = squarefree_certificate(mp)
        facs = _qpoly_factors(mp)
        entry = {"hamiltonian": i + 1, "minimal_polynomial": [fstr(c) for c in mp], "squarefree": sq,
                 "factors": [], "charpoly_lie": [fstr(c) for c in charpoly(rl)],
                 "charpoly_bar": [fstr(c) for c in charpoly(rb)]}
        for f, mult in facs:
            src = _kernel_of_poly(Hl, f, lsing)
            tgt = _kernel_of_poly(Hb, f, bsing)
            moved = 0
            for v in src:
                _, img = apply_word(sys, word, mu0, v)
                if peval_op(f, Hb, img):
                    fail.append(f"H{i + 1}: factor {f} does not annihilate a transported vector")
                else:
                    moved += 1
            entry["factors"].append({"factor": [fstr(c) for c in f], "multiplicity": mult,
                                     "lie_kernel_dim": len(src), "bar_kernel_dim": len(tgt),
                                     "transported": moved})
            if len(src) != len(tgt):
                fail.append(f"H{i + 1}: kernel dims differ for factor {f}")
        if entry["charpoly_lie"] != entry["charpoly_bar"]:
            fail.append(f"H{i + 1}: characteristic polynomials differ")
        per_h.append(entry)
    rep["hamiltonians"] = per_h
    rep["passed"] = not fail
    return rep
