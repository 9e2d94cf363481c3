import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lwquarter.core import Field2D
from lwquarter.stencils import StencilOp, apply, compose, op, square_sum_identity_1d, telescoping_ipp_1d

DIFFS = ["D1+", "D1-", "D2+", "D2-", "D1_0", "D2_0", "LAP1", "LAP2"]
ULP4 = 4 * np.finfo(float).eps

fields = arrays(np.float64, (9, 8), elements=st.floats(-10, 10, allow_nan=False))


def test_twelve_tags():
    assert len(StencilOp) == 12
    assert StencilOp("A2-") is StencilOp.A2M


@pytest.mark.parametrize("tag", DIFFS)
def test_constants_annihilated(tag):
    u = Field2D.from_interior(np.full((5, 5), 3.7))
    for j in range(5):
        for k in range(5):
            assert apply(tag, u, (j, k)) == 0.0


def test_lap_of_square():
    # raw storage holding j^2 on every stored index, ghosts included
    j = np.arange(-1.0, 7.0)[:, None] * np.ones((1, 6))
    u = Field2D(j**2)
    for jj in range(6):
        for kk in range(4):
            assert apply("LAP1", u, (jj, kk)) == 2.0
    # with extrapolated ghosts the value at j = 0 is zero instead
    filled = Field2D.from_interior(u.interior)
    assert apply("LAP1", filled, (0, 1)) == 0.0
    assert apply("LAP1", filled, (3, 1)) == 2.0


def test_definitions_pointwise(rng):
    u = Field2D.from_interior(rng.standard_normal((8, 8)))
    d = u.data
    assert apply("D1+", u, (2, 3)) == d[4, 4] - d[3, 4]
    assert apply("D2-", u, (2, 3)) == d[3, 4] - d[3, 3]
    assert apply("A1+", u, (2, 3)) == 0.5 * (d[3, 4] + d[4, 4])
    assert apply("A2-", u, (2, 3)) == 0.5 * (d[3, 3] + d[3, 4])
    for j in range(8):
        for k in range(8):
            lhs = apply("D1_0", u, (j, k))
            rhs = 0.5 * (apply("D1+", u, (j, k)) + apply("D1-", u, (j, k)))
            assert lhs == pytest.approx(rhs, abs=ULP4 * 8)


def test_boundary_central_equals_forward(rng):
    # at j = 0 the extrapolation makes D1_0 = D1+
    u = Field2D.from_interior(rng.standard_normal((6, 6)))
    for k in range(6):
        assert apply("D1_0", u, (0, k)) == pytest.approx(apply("D1+", u, (0, k)), abs=1e-14)


def test_apply_out_of_range():
    u = Field2D.zeros(4, 4)
    with pytest.raises(IndexError, match=r"\(-2, 0\)"):
        apply("D1+", u, (-2, 0))
    with pytest.raises(IndexError, match="D1-"):
        apply("D1-", u, (-1, 0))
    with pytest.raises(IndexError, match="LAP2"):
        apply("LAP2", u, (0, 4))


def test_no_zero_extension():
    d = op("D1+", np.ones((4, 4)))
    assert np.all(np.isnan(d[-1]))
    assert np.all(d[:-1] == 0.0)


@given(fields)
def test_commutation(data):
    for p, q in itertools.combinations(DIFFS + ["A1+", "A2-"], 2):
        pq, qp = compose((p, q), data), compose((q, p), data)
        ok = ~np.isnan(pq) & ~np.isnan(qp)
        scale = 16 * np.max(np.abs(data)) + 1e-300
        assert np.all(np.abs(pq[ok] - qp[ok]) <= 4 * ULP4 * scale)


@given(fields)
def test_factorizations(data):
    scale = 4 * np.max(np.abs(data)) + 1e-300
    for d0, dp, am in (("D2_0", "D2+", "A2-"), ("D1_0", "D1+", "A1-")):
        lhs, rhs = op(d0, data), compose((dp, am), data)
        ok = ~np.isnan(lhs) & ~np.isnan(rhs)
        assert np.all(np.abs(lhs[ok] - rhs[ok]) <= ULP4 * scale)
    lhs, rhs = op("LAP1", data), compose(("D1+", "D1-"), data)
    ok = ~np.isnan(lhs) & ~np.isnan(rhs)
    assert np.all(np.abs(lhs[ok] - rhs[ok]) <= ULP4 * scale)


def test_ipp_trivial():
    assert telescoping_ipp_1d(np.zeros(6), np.zeros(6)) == (0.0, 0.0)
    lhs, rhs = telescoping_ipp_1d(np.arange(6.0), np.ones(6))
    assert lhs == 0.0
    assert rhs == pytest.approx(0.0, abs=1e-14)


def _ipp_bruteforce(U, V):
    # whole-sequence sums with zero extension beyond the end
    U2, V2 = np.r_[U, 0, 0], np.r_[V, 0, 0]
    lhs = sum((U2[j + 1] - 2 * U2[j] + U2[j - 1]) * V2[j] for j in range(1, len(U) + 1))
    rhs = -sum((U2[j + 1] - U2[j]) * (V2[j + 1] - V2[j]) for j in range(1, len(U) + 1))
    return lhs, rhs - (U2[1] - U2[0]) * V2[1]


def test_ipp_compact_random(rng):
    for _ in range(20):
        U, V = np.zeros(16), np.zeros(16)
        U[:12], V[:12] = rng.standard_normal(12), rng.standard_normal(12)
        lhs, rhs = telescoping_ipp_1d(U, V)
        assert abs(lhs - rhs) <= 1e-13 * (1 + abs(lhs))
        blhs, brhs = _ipp_bruteforce(U, V)
        assert lhs == pytest.approx(blhs, rel=1e-13, abs=1e-13)
        assert rhs == pytest.approx(brhs, rel=1e-13, abs=1e-13)


@given(st.lists(st.floats(-100, 100), min_size=3, max_size=20), st.data())
def test_ipp_exact_with_far_end_term(U, data):
    V = data.draw(st.lists(st.floats(-100, 100), min_size=len(U), max_size=len(U)))
    lhs, rhs = telescoping_ipp_1d(U, V)
    scale = sum(abs(x) for x in U) * sum(abs(y) for y in V) * 4 + 1
    assert abs(lhs - rhs) <= 1e-13 * scale


def test_ipp_length_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        telescoping_ipp_1d(np.zeros(5), np.zeros(6))


def test_square_sum_identity(rng):
    for _ in range(20):
        U = np.zeros(16)
        U[:12] = rng.standard_normal(12)
        lhs, rhs = square_sum_identity_1d(U)
        assert abs(lhs - rhs) <= 1e-13 * (1 + abs(lhs))
        # brute force on the zero-extended sequence
        W = np.r_[U, 0.0, 0.0]
        b_lhs = sum((0.5 * (W[j + 1] - W[j - 1])) ** 2 + 0.25 * (W[j + 1] - 2 * W[j] + W[j - 1]) ** 2
                    for j in range(1, 17))
        b_rhs = sum((W[j + 1] - W[j]) ** 2 for j in range(1, 17)) + 0.5 * (W[1] - W[0]) ** 2
        assert lhs == pytest.approx(b_lhs, rel=1e-13)
        assert rhs == pytest.approx(b_rhs, rel=1e-13)
