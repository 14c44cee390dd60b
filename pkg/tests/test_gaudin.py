from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superdual.algebra import AlgebraSpec, build_algebra
from superdual.combinatorics import Weight
from superdual.exact import Mat
from superdual.gaudin import (InvariantError, MarginError, TensorSystem, charpoly, commutator, default_points,
                              dumps_report, is_diagonalizable, resample_points, restrict, spectrum_numeric,
                              spectrum_report)
from superdual.repbuilder import build_irreducible, natural_module

from oracles import DenseRep, block_rows, dense_casimir, submatrix, swap_operator

H = Fraction(1, 2)


def T(fam, x, m, n):
    return build_algebra(AlgebraSpec(fam, x, m, n))


def all_weights(sys):
    out = {Weight.zero()}
    for f in sys.factors:
        out = {a + b for a in out for b in f.blocks}
    lvl = sum(sys.levels, Fraction(0))
    return sorted(w.with_level(lvl) for w in out)


def test_points():
    assert default_points(4) == [0, 1, 3, 7]
    a = resample_points(3, 5, 1)
    assert a == resample_points(3, 5, 1) and len(set(a)) == 3
    assert a != resample_points(3, 5, 2)


def test_system_validation():
    nat = natural_module(T("bar", "a", 1, 1))
    with pytest.raises(ValueError):
        TensorSystem([nat])
    with pytest.raises(ValueError):
        TensorSystem([nat, nat], [1, 1])
    with pytest.raises(ValueError):
        TensorSystem([nat, nat], variant="other")


def test_block_basis_counts():
    t = T("bar", "a", 1, 2)
    sys = TensorSystem([natural_module(t)] * 3)
    total = sum(sys.block_dim(w) for w in all_weights(sys))
    assert total == 27


def test_gl2_swap_oracle():
    t = T("unbar", "a", 0, 2)
    nat = natural_module(t)
    sys = TensorSystem([nat, nat], [0, 1])
    reps = [DenseRep(nat)] * 2
    P = swap_operator(2, [0, 0])
    for mu in all_weights(sys):
        rows = block_rows(reps, sys.block(mu).tuples)
        assert sys.casimir_pair(0, 1, mu).matrix.to_dense() == submatrix(P, rows, rows)
    sym, alt = Weight.make({2: 2}), Weight.make({2: 1, 4: 1})
    assert restrict(sys.hamiltonian(0, sym), sys.singular_block(sym)) == [[-1]]
    assert restrict(sys.hamiltonian(0, alt), sys.singular_block(alt)) == [[1]]


def test_gl11_casimir_is_super_swap():
    t = T("bar", "a", 1, 1)
    nat = natural_module(t)
    sys = TensorSystem([nat, nat], [0, 1])
    reps = [DenseRep(nat)] * 2
    P = swap_operator(2, [nat.parities[w] for w, _ in reps[0].index])
    for mu in all_weights(sys):
        rows = block_rows(reps, sys.block(mu).tuples)
        assert sys.casimir_pair(0, 1, mu).matrix.to_dense() == submatrix(P, rows, rows)


def test_trivial_factors():
    t = T("bar", "a", 1, 1)
    triv = build_irreducible(t, Weight.zero(), 2)
    sys = TensorSystem([triv, triv, triv])
    h = sys.hamiltonian(0, Weight.zero())
    assert h.matrix.is_zero()
    assert charpoly(restrict(h, sys.singular_block(Weight.zero()))) == [0, 1]


def test_restrict_rejects_non_invariant():
    m = Mat.from_dense([[0, 1], [0, 0]])
    with pytest.raises(InvariantError):
        restrict(m, [{0: Fraction(0), 1: Fraction(1)}])


def test_diagonalizable_certificate():
    ok, cert = is_diagonalizable(Mat.from_dense([[1, 1], [0, 1]]))
    assert not ok and cert == [-1, 1]
    assert is_diagonalizable(Mat.from_dense([[0, 1], [1, 0]]))[0]


def test_spectrum_numeric_real_roots():
    ev = spectrum_numeric([[Fraction(0), Fraction(1)], [Fraction(2), Fraction(0)]], 30)
    assert [float(e) for e in ev] == pytest.approx([-2 ** 0.5, 2 ** 0.5])


def test_margin_error_on_windowed_factor():
    t = T("bar", "c", 1, 1)
    w = build_irreducible(t, Weight.make({2: -1}, 0), 2)
    assert not w.complete
    nat = natural_module(t)
    sys = TensorSystem([w, nat])
    deep = w.highest_weight + nat.highest_weight + Weight.make({2: 6})
    with pytest.raises(MarginError):
        sys.casimir_pair(0, 1, deep)


def test_report_is_json_stable():
    t = T("bar", "a", 1, 1)
    nat = natural_module(t)
    sys = TensorSystem([nat, nat], [0, 1])
    a = dumps_report(spectrum_report(sys, Weight.make({2: 2}), 0, 20))
    b = dumps_report(spectrum_report(sys, Weight.make({2: 2}), 0, 20))
    assert a == b and '"charpoly": [\n  "1/1",\n  "1/1"\n ]' in a


# -- laws on a generic system ---------------------------------------------------------

pts = st.lists(st.fractions(-5, 5, max_denominator=3), min_size=3, max_size=3, unique=True)


@settings(max_examples=10, deadline=None)
@given(pts)
def test_laws_at_random_points(z):
    t = T("bar", "a", 1, 1)
    nat = natural_module(t)
    sys = TensorSystem([nat] * 3, z)
    for mu in all_weights(sys):
        hs = [sys.hamiltonian(i, mu).matrix for i in range(3)]
        assert (hs[0] + hs[1] + hs[2]).is_zero()
        assert commutator(hs[0], hs[1]).is_zero()


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2))
def test_central_minus_ring_scalar(a, b):
    t = T("bar", "a", 1, 2)
    nat = natural_module(t)
    f1 = build_irreducible(t, nat.highest_weight.with_level(a), 4)
    f2 = build_irreducible(t, nat.highest_weight.with_level(b), 4)
    ring = TensorSystem([f1, f2], [0, 1], "ring")
    cen = ring.with_variant("central")
    s = t.spec.m - t.spec.n
    for mu in all_weights(ring):
        diff = cen.hamiltonian(0, mu).matrix - ring.hamiltonian(0, mu).matrix
        assert diff == Mat.identity(ring.block_dim(mu), -s * a * b / (0 - 1))


def test_dense_oracle_three_factors():
    # one three-factor check on top of the two-factor acceptance sweep
    t = T("unbar", "d", 1, 1)
    nat = natural_module(t)
    sys = TensorSystem([nat] * 3, [0, 1, 3])
    reps = [DenseRep(nat)] * 3
    D = dense_casimir(reps, 0, 2)
    for mu in all_weights(sys)[:12]:
        rows = block_rows(reps, sys.block(mu).tuples)
        assert sys.casimir_pair(0, 2, mu).matrix.to_dense() == submatrix(D, rows, rows)
