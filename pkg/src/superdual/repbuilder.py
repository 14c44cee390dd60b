"""Irreducible highest-weight modules as weight-graded exact data.

A block is spanned by simple lowering operators applied to the previous
layer; the contravariant form ``<x u|w> = <u|star(x) w>`` is evaluated on
those candidates and its radical is discarded. Raising actions come from
commuting through already-built layers; lowering actions are recovered from
the form as adjoints of the raising ones.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import StructureTable, bracket, star
from .combinatorics import ParityError, Weight, weight_from_json, weight_parity, weight_to_json
from .exact import Mat, fstr, independent_subset, inertia, inverse_dense, is_positive_definite

FORMAT_VERSION = 1

# antidominant gl(2) weight: <F v|F v> = -1 under omega, so the module is not unitarizable
NON_UNITARY_EXAMPLE = {"family": "unbar", "type": "a", "m": 0, "n": 2, "weight": "-1*e(1)", "star": "omega"}


class MarginError(RuntimeError):
    """A computation needs a block outside a windowed module."""


class UnrecordedBlockError(KeyError):
    pass


@dataclass
class GramBlock:
    weight: Weight
    matrix: list
    radical_dim: int = 0


@dataclass
class RepModule:
    table: StructureTable
    highest_weight: Weight
    blocks: dict = field(default_factory=dict)       # Weight -> dim
    heights: dict = field(default_factory=dict)      # Weight -> int
    parities: dict = field(default_factory=dict)     # Weight -> 0/1
    actions: dict = field(default_factory=dict)      # (basis index, Weight) -> Mat
    gram: dict = field(default_factory=dict)         # Weight -> dense matrix
    radical_dims: dict = field(default_factory=dict)
    complete: bool = True
    depth: int | None = None
    star: str = "omega"
    labels: dict = field(default_factory=dict)       # Weight -> list of str
    origins: dict = field(default_factory=dict)      # Weight -> list of (F index, source weight, source basis index)

    @property
    def level(self) -> Fraction:
        return self.highest_weight.level

    @property
    def status(self) -> str:
        return "complete" if self.complete else f"window({self.depth})"

    @property
    def dim(self) -> int:
        return sum(self.blocks.values())

    def height_of(self, mu: Weight) -> Fraction:
        return self.table.height(self.highest_weight - mu)

    def in_window(self, mu: Weight) -> bool:
        """True when the block structure at mu is known (possibly zero)."""
        if self.complete:
            return True
        return self.height_of(mu) <= self.depth

    def has_block(self, mu: Weight) -> bool:
        return mu in self.blocks

    def block_dim(self, mu: Weight) -> int:
        if mu in self.blocks:
            return self.blocks[mu]
        if not self.in_window(mu):
            raise MarginError(f"weight {mu} lies outside the window of depth {self.depth}")
        return 0

    def max_height(self) -> int:
        return max(self.heights.values(), default=0)

    def action(self, i: int, mu: Weight) -> Mat | None:
        """Matrix of basis element i from block mu; None when the image is zero."""
        if mu not in self.blocks:
            if not self.in_window(mu):
                raise MarginError(f"source weight {mu} lies outside the window of depth {self.depth}")
            return None
        b = self.table.basis[i]
        n = self.blocks[mu]
        if b.kind == "K":
            return Mat.identity(n, self.level) if self.level else None
        if b.kind == "cartan":
            v = mu[b.tag[0]]
            return Mat.identity(n, v) if v else None
        tgt = mu + b.weight
        if tgt not in self.blocks:
            if not self.in_window(tgt):
                raise MarginError(f"{b.label()} maps block {mu} out of the window of depth {self.depth}")
            return None
        return self.actions.get((i, mu))

    def act(self, i: int, mu: Weight, vec: dict) -> tuple[Weight, dict]:
        m = self.action(i, mu)
        tgt = mu + self.table.basis[i].weight
        return tgt, (m.apply(vec) if m is not None else {})

    def act_lc(self, x: dict, mu: Weight, vec: dict) -> tuple[Weight | None, dict]:
        out: dict = {}
        tgt = None
        for i, c in x.items():
            t, v = self.act(i, mu, vec)
            tgt = t
            for k, a in v.items():
                out[k] = out.get(k, 0) + c * a
        return tgt, {k: v for k, v in out.items() if v}

    def weights_by_height(self) -> list[Weight]:
        return sorted(self.blocks, key=lambda w: (self.heights[w], w))


def gram_block(rep: RepModule, mu: Weight) -> GramBlock:
    if mu not in rep.blocks or mu not in rep.gram:
        raise UnrecordedBlockError(f"no Gram data for block {mu}")
    return GramBlock(mu, rep.gram[mu], rep.radical_dims.get(mu, 0))


def check_unitarizable(rep: RepModule) -> dict:
    """Per-block definiteness of the quotient Gram matrices."""
    per = {}
    ok = True
    for mu in rep.weights_by_height():
        g = rep.gram.get(mu)
        if g is None:
            per[mu] = "missing"
            ok = False
            continue
        if is_positive_definite(g):
            per[mu] = "positive definite"
        else:
            p, neg, z = inertia(g)
            per[mu] = "semidefinite with radical" if (neg == 0 and z) else "indefinite"
            ok = False
    return {"blocks": per, "positive_definite": ok}


def action_block(rep: RepModule, i: int, mu: Weight) -> Mat:
    m = rep.action(i, mu)
    if m is not None:
        return m
    b = rep.table.basis[i]
    tgt = mu if b.kind in ("cartan", "K") else mu + b.weight
    return Mat.zeros(rep.blocks.get(tgt, 0), rep.blocks.get(mu, 0))


# -- plain / level-shifted weights ---------------------------------------------

def extended_weight(t: StructureTable, plain: Weight) -> Weight:
    """Cartan values on the centrally extended algebra: plain + (-1)^{2j} d."""
    d = plain.level
    c = plain.coeffs
    for j in t.positive_indices:
        c[j] = c.get(j, 0) + (-1 if j % 2 else 1) * d
    return Weight.make(c, d)


def plain_weight(t: StructureTable, ext: Weight) -> Weight:
    d = ext.level
    c = ext.coeffs
    for j in t.positive_indices:
        c[j] = c.get(j, 0) - (-1 if j % 2 else 1) * d
    return Weight.make(c, d)


def _top_parity(t: StructureTable, xi: Weight) -> int:
    try:
        return weight_parity(extended_weight(t, xi))
    except ParityError:
        return 0


# -- natural module ---------------------------------------------------------------

def natural_module(t: StructureTable) -> RepModule:
    vecs = t.ambient if t.xtype != "a" else t.positive_indices
    wt = {r: Weight.make({abs(r): 1 if r > 0 else -1}) for r in vecs}
    top = min(vecs, key=t.order_key)
    rep = RepModule(t, wt[top])
    for r in vecs:
        w = wt[r]
        rep.blocks[w] = 1
        rep.heights[w] = int(t.height(wt[top] - w))
        rep.parities[w] = r & 1
        rep.labels[w] = [f"v({r}/2)"]
    for i, b in enumerate(t.basis):
        if b.matrix is None:
            continue
        by_src: dict = {}
        for (r, s), v in b.matrix.items():
            by_src.setdefault(s, []).append((r, v))
        for s, outs in by_src.items():
            if b.kind == "cartan":
                continue
            for r, v in outs:
                m = Mat(1, 1)
                m.add_entry(0, 0, v)
                rep.actions[(i, wt[s])] = m
    _gram_one_dimensional(rep)
    return rep


def _gram_one_dimensional(rep: RepModule):
    t = rep.table
    lowering_simple = [next(iter(r.dual_lowering)) for r in t.simple_roots]
    for mu in rep.weights_by_height():
        if rep.heights[mu] == 0:
            rep.gram[mu] = [[Fraction(1)]]
            continue
        for f in lowering_simple:
            src = mu - t.basis[f].weight
            m = rep.actions.get((f, src)) if src in rep.blocks else None
            if m is None or src not in rep.gram:
                continue
            c = m.get(0, 0)
            # <F u | w> = <u | star(F) w> with w = c * F u / c
            _, back = rep.act_lc(star(t, {f: 1}, rep.star), mu, {0: Fraction(1)})
            val = rep.gram[src][0][0] * back.get(0, 0) / c
            rep.gram[mu] = [[val]]
            break


# -- irreducible quotient construction ----------------------------------------------

def build_irreducible(t: StructureTable, xi: Weight, depth: int = 8, star_kind: str = "omega",
                      check: bool = True, top_parity: int | None = None) -> RepModule:
    """L(xi) up to simple-root height ``depth`` (complete if it closes earlier).

    ``xi`` carries the Cartan values on the non-extended algebra and the
    level d in ``xi.level``.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    rep = RepModule(t, xi, complete=False, depth=depth, star=star_kind)
    top_par = _top_parity(t, xi) if top_parity is None else top_parity
    rep.blocks[xi] = 1
    rep.heights[xi] = 0
    rep.parities[xi] = top_par
    rep.gram[xi] = [[Fraction(1)]]
    rep.labels[xi] = ["v"]
    simple_f = [next(iter(r.dual_lowering)) for r in t.simple_roots]
    omega_of = {i: star(t, {i: 1}, star_kind) for i in t.lowering}
    layer = [xi]
    h = 0
    while h < depth:
        h += 1
        new_layer = _build_layer(rep, layer, simple_f, omega_of, h, top_par, check)
        if not new_layer:
            rep.complete = True
            break
        layer = new_layer
    if not rep.complete:
        # a layer beyond the window that vanishes identically closes the module
        probe = RepModule(t, xi, dict(rep.blocks), dict(rep.heights), dict(rep.parities),
                          dict(rep.actions), dict(rep.gram), complete=False, depth=depth + 1,
                          star=star_kind)
        if not _build_layer(probe, layer, simple_f, omega_of, depth + 1, top_par, False):
            rep.complete = True
    return rep


def _raise_candidate(rep: RepModule, f: int, nu: Weight, u: int, e: int) -> dict:
    """Coordinates of E_e F_f u_nu in the block nu + wt(E) + wt(F)."""
    t = rep.table
    out: dict = {}
    vec = {u: Fraction(1)}
    for k, c in t.brackets.get((e, f), {}).items():
        _, v = rep.act(k, nu, vec)
        for a, x in v.items():
            out[a] = out.get(a, 0) + c * x
    s = -1 if (t.basis[e].parity & t.basis[f].parity) else 1
    mid, v = rep.act(e, nu, vec)
    if v:
        _, v2 = rep.act(f, mid, v)
        for a, x in v2.items():
            out[a] = out.get(a, 0) + s * x
    return {a: x for a, x in out.items() if x}


def _build_layer(rep, layer, simple_f, omega_of, h, top_par, check):
    t = rep.table
    cands: dict[Weight, list] = {}
    for nu in layer:
        for f in simple_f:
            mu = nu + t.basis[f].weight
            for u in range(rep.blocks[nu]):
                cands.setdefault(mu, []).append((f, nu, u))
    new = []
    raising = t.raising
    for mu in sorted(cands):
        cl = cands[mu]
        # R-vectors of every candidate
        R = []
        for (f, nu, u) in cl:
            rv = {}
            for e in raising:
                tgt = mu + t.basis[e].weight
                if tgt in rep.blocks:
                    v = _raise_candidate(rep, f, nu, u, e)
                    if v:
                        rv[e] = v
            R.append(rv)
        n = len(cl)
        G = [[Fraction(0)] * n for _ in range(n)]
        for a, (f, nu, u) in enumerate(cl):
            gnu = rep.gram[nu]
            for b in range(n):
                # <F u | c_b> = <u | star(F) c_b>
                acc: dict = {}
                for e, c in omega_of[f].items():
                    v = R[b].get(e)
                    if v:
                        for k, x in v.items():
                            acc[k] = acc.get(k, 0) + c * x
                G[a][b] = sum((gnu[u][k] * x for k, x in acc.items()), Fraction(0))
        for a in range(n):
            for b in range(a):
                if G[a][b] != G[b][a]:
                    raise AssertionError(f"contravariant form is not symmetric at {mu}")
        rows = [{j: v for j, v in enumerate(r) if v} for r in G]
        basis = independent_subset(rows)
        if not basis:
            continue
        gbb = [[G[a][b] for b in basis] for a in basis]
        ginv = inverse_dense(gbb)
        rep.blocks[mu] = len(basis)
        rep.heights[mu] = h
        rep.parities[mu] = (top_par + weight_parity(rep.highest_weight - mu)) % 2
        rep.gram[mu] = gbb
        rep.radical_dims[mu] = n - len(basis)
        rep.labels[mu] = [f"{t.basis[cl[a][0]].label()}*[{cl[a][1]}]{cl[a][2]}" for a in basis]
        rep.origins[mu] = [cl[a] for a in basis]
        new.append(mu)
        # raising actions out of mu
        for e in raising:
            tgt = mu + t.basis[e].weight
            if tgt not in rep.blocks:
                continue
            cols = [R[a].get(e, {}) for a in basis]
            if any(cols):
                rep.actions[(e, mu)] = Mat.from_columns(cols, rep.blocks[tgt])
        if check:
            for c in range(n):
                x = [sum((ginv[i][j] * G[basis[j]][c] for j in range(len(basis))), Fraction(0))
                     for i in range(len(basis))]
                for e in raising:
                    want = R[c].get(e, {})
                    got: dict = {}
                    for i, xi_ in enumerate(x):
                        if xi_:
                            for k, v in R[basis[i]].get(e, {}).items():
                                got[k] = got.get(k, 0) + xi_ * v
                    got = {k: v for k, v in got.items() if v}
                    if got != want:
                        raise AssertionError(f"raising action not well defined on the quotient at {mu}")
        # lowering actions into mu: [F] = G_mu^-1 [star F]^T G_nu
        for f in t.lowering:
            nu = mu - t.basis[f].weight
            if nu not in rep.blocks:
                continue
            dn = rep.blocks[nu]
            # [star F] : mu -> nu, as dense dn x len(basis)
            sf = [[Fraction(0)] * len(basis) for _ in range(dn)]
            for e, c in omega_of[f].items():
                m = rep.actions.get((e, mu))
                if m is None:
                    continue
                for i, row in enumerate(m.rows):
                    for j, v in row.items():
                        sf[i][j] += c * v
            gnu = rep.gram[nu]
            # tmp = sf^T G_nu : len(basis) x dn
            tmp = [[sum((sf[k][i] * gnu[k][j] for k in range(dn) if sf[k][i]), Fraction(0))
                    for j in range(dn)] for i in range(len(basis))]
            fm = [[sum((ginv[i][k] * tmp[k][j] for k in range(len(basis)) if ginv[i][k]), Fraction(0))
                   for j in range(dn)] for i in range(len(basis))]
            if any(any(r) for r in fm):
                rep.actions[(f, nu)] = Mat.from_dense(fm, dn)
    return new


# -- checks -----------------------------------------------------------------------

def check_bracket_compatibility(rep: RepModule, elements=None) -> list[str]:
    """[x][y] - (-1)^{|x||y|}[y][x] == [[x,y]] on every block where all maps are known."""
    t = rep.table
    els = list(range(t.dim)) if elements is None else list(elements)
    fails = []
    for mu in rep.weights_by_height():
        n = rep.blocks[mu]
        for x in els:
            for y in els:
                try:
                    lhs = {}
                    for j in range(n):
                        e = {j: Fraction(1)}
                        m1, v1 = rep.act(y, mu, e)
                        _, v1 = rep.act(x, m1, v1) if v1 else (None, {})
                        m2, v2 = rep.act(x, mu, e)
                        _, v2 = rep.act(y, m2, v2) if v2 else (None, {})
                        s = -1 if t.basis[x].parity & t.basis[y].parity else 1
                        lhs_j = dict(v1)
                        for k, v in v2.items():
                            lhs_j[k] = lhs_j.get(k, 0) - s * v
                        _, rhs_j = rep.act_lc(t.brackets.get((x, y), {}), mu, e)
                        lhs_j = {k: v for k, v in lhs_j.items() if v}
                        if lhs_j != rhs_j:
                            fails.append(f"[{t.basis[x].label()},{t.basis[y].label()}] on {mu}")
                            break
                except MarginError:
                    continue
    return fails


def check_highest_weight(rep: RepModule) -> bool:
    t = rep.table
    for r in t.positive_roots:
        _, v = rep.act(r.raising, rep.highest_weight, {0: Fraction(1)})
        if v:
            return False
    return True


# -- serialization ------------------------------------------------------------------

def module_to_json(rep: RepModule, include_gram: bool = True) -> dict:
    t = rep.table
    order = rep.weights_by_height()
    idx = {w: k for k, w in enumerate(order)}
    blocks = [{"weight": weight_to_json(w), "dim": rep.blocks[w], "height": rep.heights[w],
               "parity": rep.parities[w]} for w in order]
    acts = []
    for (i, mu), m in sorted(rep.actions.items(), key=lambda kv: (idx[kv[0][1]], kv[0][0])):
        trip = [[r, c, fstr(v)] for r, row in enumerate(m.rows) for c, v in sorted(row.items())]
        acts.append({"generator": t.basis[i].label(), "index": i, "block": idx[mu], "entries": trip})
    out = {"version": FORMAT_VERSION, "algebra": t.spec.name, "highest_weight": weight_to_json(rep.highest_weight),
           "status": rep.status, "star": rep.star, "blocks": blocks, "actions": acts}
    if include_gram:
        out["gram"] = [{"block": idx[w], "entries": [[a, b, fstr(v)] for a, row in enumerate(rep.gram[w])
                                                     for b, v in enumerate(row) if v]}
                       for w in order if w in rep.gram]
    return out


def module_from_json(t: StructureTable, obj: dict) -> RepModule:
    if obj.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported module format version {obj.get('version')}")
    status = obj["status"]
    rep = RepModule(t, weight_from_json(obj["highest_weight"]), star=obj.get("star", "omega"))
    if status != "complete":
        rep.complete = False
        rep.depth = int(status[len("window("):-1])
    order = []
    for b in obj["blocks"]:
        w = weight_from_json(b["weight"])
        order.append(w)
        rep.blocks[w] = b["dim"]
        rep.heights[w] = b["height"]
        rep.parities[w] = b["parity"]
    for a in obj["actions"]:
        mu = order[a["block"]]
        i = a["index"]
        b = t.basis[i]
        tgt = mu + b.weight
        m = Mat(rep.blocks[tgt], rep.blocks[mu])
        for r, c, v in a["entries"]:
            m.add_entry(r, c, Fraction(v))
        rep.actions[(i, mu)] = m
    for g in obj.get("gram", []):
        w = order[g["block"]]
        n = rep.blocks[w]
        mat = [[Fraction(0)] * n for _ in range(n)]
        for a, b, v in g["entries"]:
            mat[a][b] = Fraction(v)
        rep.gram[w] = mat
    return rep


def dumps_module(rep: RepModule) -> str:
    return json.dumps(module_to_json(rep), sort_keys=True, indent=1)
