import json
from fractions import Fraction

import pytest

from superdual.algebra import AlgebraSpec, build_algebra
from superdual.combinatorics import HookError, Weight, partition, weight_bar_m, weight_m
from superdual.duality import (CaseSchemaError, CorrespondenceCase, apply_word, case_from_json, case_to_json,
                               compare_spectra, correspond_weights, load_case, shipped_cases, sub_table,
                               truncation_check, window_consistency)
from superdual.exact import charpoly as cp
from superdual.gaudin import TensorSystem, restrict
from superdual.repbuilder import natural_module

H = Fraction(1, 2)


def tg(r, s):
    return (int(2 * Fraction(r)), int(2 * Fraction(s)))


def test_correspond_weights():
    w = correspond_weights((2, 1), 0, "a", 1, 2, 3)
    assert w["super"] == weight_bar_m((2, 1), 0, 1, 2)
    assert w["lie"] == weight_m((2, 1), 0, 0, 3)
    with pytest.raises(HookError):
        correspond_weights((1, 1, 1, 1), 0, "a", 1, 2, 3)


def test_case_schema():
    with pytest.raises(CaseSchemaError):
        case_from_json({"type": "a"})
    with pytest.raises(CaseSchemaError):
        case_from_json({"type": "q", "m": 1, "n": 1, "k": 1, "partitions": [[1], [1]],
                        "levels": ["0", "0"], "mu": [2]})
    with pytest.raises(CaseSchemaError):
        CorrespondenceCase("a", 1, 1, 2, [(1,), (1,)], [0, 0], (3,))
    with pytest.raises(CaseSchemaError):
        CorrespondenceCase("a", 1, 1, 2, [(1,), (1,)], [0, 0], (2,), z=[1, 1])


def test_case_json_roundtrip():
    c = load_case("a-naturals-l3")
    assert case_to_json(case_from_json(json.loads(json.dumps(case_to_json(c))))) == case_to_json(c)
    assert set(shipped_cases()) >= {"a-naturals-l3", "trivial", "c-minimal-2", "c-minimal-11"}


def test_trivial_case():
    rep = compare_spectra(load_case("trivial"))
    assert rep.passed and rep.super_sing_dim == rep.lie_sing_dim == 1
    assert all(h.super_charpoly == [0, 1] for h in rep.per_hamiltonian)


def test_two_naturals_value():
    # singular vectors of C^{1|1} (x) C^{1|1} and C^2 (x) C^2: H1 acts by -/+ 1/(z1 - z2)
    for mu, val in (((2,), Fraction(-1)), ((1, 1), Fraction(1))):
        r = compare_spectra(CorrespondenceCase("a", 1, 1, 2, [(1,), (1,)], [0, 0], mu, z=[0, 1]))
        assert r.passed
        h1 = r.per_hamiltonian[0]
        assert h1.super_charpoly == h1.lie_charpoly == [-val, 1]


def test_golden_l3_case(golden):
    rep = compare_spectra(load_case("a-naturals-l3"))
    assert rep.passed and rep.super_sing_dim == 2
    golden("duality_a_naturals_l3.json", json.dumps(rep.to_json(), sort_keys=True, indent=1) + "\n")


def test_truncation_examples():
    assert truncation_check((), 4, 2)["agree"]
    r = truncation_check((2, 1), 4, 2)
    assert r["agree"] and not r["zero"] and r["dim"] > 0
    r = truncation_check((1, 1, 1), 4, 2)
    assert r["agree"] and r["zero"]


def test_window_consistency():
    t = build_algebra(AlgebraSpec("tilde", "a", 0, 2))
    nat = natural_module(t)
    sys = TensorSystem([nat] * 3)
    ints = Weight.make({2: 2, 4: 1})
    assert window_consistency(sys, 0, ints, "unbar")
    assert window_consistency(sys, 0, Weight.make({2: 3}), "unbar")
    assert window_consistency(sys, 1, Weight.make({2: 1, 1: 2}), "bar")
    with pytest.raises(ValueError):
        window_consistency(sys, 0, Weight.make({1: 3}), "unbar")


def test_sub_sum_differs_off_support():
    # outside the sub-family support the full Hamiltonian is not the sub-sum
    t = build_algebra(AlgebraSpec("tilde", "a", 0, 2))
    sys = TensorSystem([natural_module(t)] * 2)
    mu = Weight.make({1: 1, 2: 1})
    sub = sub_table(sys, "unbar", 0)
    assert not (sys.hamiltonian(0, mu).matrix == sys.hamiltonian(0, mu, sub).matrix)


def test_apply_word_basics():
    t = build_algebra(AlgebraSpec("tilde", "a", 0, 2))
    sys = TensorSystem([natural_module(t)] * 2)
    mu = Weight.make({1: 1, 2: 1})
    v = {0: Fraction(1)}
    assert apply_word(sys, [], mu, v) == (mu, v)
    h = t.element(tg(1, 1))
    assert apply_word(sys, [h], mu, v) == (mu, {0: Fraction(1)})
    w, img = apply_word(sys, [t.element(tg(H, 1)), t.element(tg(1, 2))], Weight.make({4: 2}), {0: Fraction(1)})
    assert w == Weight.make({1: 1, 4: 1})


def test_s5_weight_bookkeeping():
    mu0 = weight_m(partition((3, 1, 1, 1)), 0, 0, 4)
    word = Weight.zero()
    for j in (2, 3, 4):
        word = word + Weight.make({1: 1, 2 * j: -1})
    assert mu0 + word == weight_bar_m(partition((3, 1, 1, 1)), 0, 1, 4)


def test_resampling_is_deterministic():
    c = load_case("a-naturals-l3")
    c.seed = 3
    a = compare_spectra(c).to_json()
    b = compare_spectra(c).to_json()
    assert a == b


def test_l3_lie_side_against_permutation_oracle():
    import itertools
    import sympy
    t = sympy.Symbol("t")
    z = [0, 1, 3]
    # weight space (2,1,0) of (C^3)^{(x)3}: words with two 1s and one 2
    words = sorted(set(itertools.permutations((1, 1, 2))))
    pos = {w: k for k, w in enumerate(words)}

    def swap(i, j):
        m = sympy.zeros(len(words))
        for w in words:
            u = list(w)
            u[i], u[j] = u[j], u[i]
            m[pos[tuple(u)], pos[w]] = 1
        return m
    H1 = swap(0, 1) / (z[0] - z[1]) + swap(0, 2) / (z[0] - z[2])
    full = H1.charpoly(t).as_expr()
    # the symmetric vector is the gl(3)-descendant of the (3) block; P acts by 1 there
    sing = sympy.cancel(full / (t - (sympy.Rational(-1) + sympy.Rational(-1, 3))))
    rep = compare_spectra(load_case("a-naturals-l3"))
    got = sum(sympy.Rational(c.numerator, c.denominator) * t ** k
              for k, c in enumerate(rep.per_hamiltonian[0].lie_charpoly))
    assert sympy.expand(sing - got) == 0


@pytest.mark.parametrize("l", [2, 3])
def test_window_consistency_every_block(l):
    from superdual.duality import _support_ok
    t = build_algebra(AlgebraSpec("tilde", "a", 0, 2))
    nat = natural_module(t)
    sys = TensorSystem([nat] * l)
    weights = {Weight.zero()}
    for f in sys.factors:
        weights = {a + b for a in weights for b in f.blocks}
    hits = 0
    for fam, m in (("unbar", 0), ("unbar", 1), ("bar", 1), ("bar", 0)):
        sub = sub_table(sys, fam, m)
        for mu in weights:
            if _support_ok(mu, sub):
                assert window_consistency(sys, m, mu, fam)
                hits += 1
    assert hits > l
