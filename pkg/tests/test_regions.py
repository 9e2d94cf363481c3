import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lwquarter.core import CflPair, Field2D
from lwquarter.energy import corner_terms, corner_value_terms
from lwquarter.regions import (
    BAD,
    GOOD,
    OUTSIDE,
    HermSymbol2,
    QuadForm4,
    boundary_form_via_symbol,
    boundary_negdef_all_xi,
    boundary_symbol,
    corner_form,
    is_negative_definite_4,
    negative_definite_by_minors,
    reduced_corner_form,
    sweep,
    whole_line_boundary_form,
)

in_ball = st.tuples(st.floats(0.01, 0.7), st.floats(0.01, 0.7)).filter(
    lambda t: t[0] ** 2 + t[1] ** 2 <= 0.5).map(lambda t: CflPair(-t[0], -t[1]))


@pytest.fixture(scope="module")
def maps():
    return {w: sweep(256, w) for w in ("corner", "reduced", "boundary")}


def corner_field(vec):
    u00, p, q, r = vec
    vals = np.zeros((10, 10))
    vals[0, 0] = u00
    vals[1, 0] = u00 + p
    vals[0, 1] = u00 + q
    vals[1, 1] = r + vals[1, 0] + vals[0, 1] - u00
    return Field2D.from_interior(vals)


# {{{ corner forms


def test_quadform_symmetric_required():
    with pytest.raises(ValueError, match="symmetric"):
        QuadForm4(np.triu(np.ones((4, 4))))
    with pytest.raises(ValueError, match="4x4"):
        QuadForm4(np.eye(3))


def test_corner_u00_coefficient():
    a, b = 0.3, 0.2
    m = corner_form(CflPair(-a, -b)).m
    assert m[0, 0] == pytest.approx(a * b - (a + b) / 2)
    assert np.array_equal(m, m.T)


def test_zero_cfl_gives_zero():
    assert np.all(corner_form(CflPair(0.0, 0.0)).m == 0)
    assert np.all(reduced_corner_form(CflPair(0.0, 0.0)).m == 0)


def test_corner_matches_energy_module(rng):
    for _ in range(50):
        cfl = CflPair(-rng.uniform(0.01, 0.6), -rng.uniform(0.01, 0.6))
        vec = rng.standard_normal(4)
        u = corner_field(vec)
        direct = sum(corner_terms(u, cfl).values())
        assert corner_form(cfl)(vec) == pytest.approx(direct, rel=1e-12, abs=1e-14)


def test_reduced_matches_energy_module(rng):
    cfl = CflPair(-0.3, -0.2)
    vec = rng.standard_normal(4)
    assert reduced_corner_form(cfl)(vec) == pytest.approx(
        sum(corner_value_terms(vec, cfl, reduced=True).values()), rel=1e-13)


def test_reduced_difference_pattern():
    cfl = CflPair(-0.3, -0.2)
    diff = corner_form(cfl).m - reduced_corner_form(cfl).m
    nz = {tuple(ix) for ix in np.argwhere(diff != 0)}
    assert nz == {(1, 3), (3, 1), (2, 3), (3, 2)}
    assert reduced_corner_form(cfl).m[0, 3] != 0


def test_small_cfl_corner_not_definite():
    assert not is_negative_definite_4(corner_form(CflPair(-0.05, -0.05)))


def test_definiteness_examples():
    assert is_negative_definite_4(QuadForm4(-np.eye(4)))
    assert not is_negative_definite_4(QuadForm4(np.diag([-1.0, -1.0, -1.0, 0.0])))
    with pytest.raises(ValueError):
        is_negative_definite_4(QuadForm4(np.diag([-1.0, -1.0, -1.0, np.nan])))


@given(arrays(np.float64, (4, 4), elements=st.floats(-5, 5)), st.floats(0.0, 6.0))
def test_eigen_and_minor_tests_agree(a, shift):
    m = 0.5 * (a + a.T) - shift * np.eye(4)
    eig = np.linalg.eigvalsh(m)
    scale = np.max(np.abs(m))
    if scale == 0 or np.min(np.abs(eig)) < 1e-8 * scale:
        return  # too close to singular for either test to be decisive
    assert bool(negative_definite_by_minors(m)) == bool(np.all(eig < 0))
    assert is_negative_definite_4(QuadForm4(m)) == bool(np.all(eig < 0))

# }}}


# {{{ boundary symbol


def test_symbol_at_zero():
    a, b = 0.3, 0.2
    h = boundary_symbol(CflPair(-a, -b), 0.0, 0.0)
    assert h.off_im == 0.0
    assert h.h11 == pytest.approx(-b)
    assert h.off_re == pytest.approx(-b * b / 2)


def test_symbol_rejects_bad_x():
    with pytest.raises(ValueError):
        boundary_symbol(CflPair(-0.1, -0.1), 1.5, 0.0)


def test_symbol_hermitian():
    h = boundary_symbol(CflPair(-0.3, -0.2), 0.4, np.sqrt(4 * 0.4 * 0.6))
    assert isinstance(h, HermSymbol2)
    m = h.matrix()
    assert np.allclose(m, m.conj().T)
    assert np.prod(np.linalg.eigvalsh(m)) == pytest.approx(h.det)


@given(in_ball, st.floats(0.0, 1.0))
def test_trace_negative(cfl, x):
    assert boundary_symbol(cfl, x, np.sqrt(4 * x * (1 - x))).trace < 0


@given(in_ball, st.floats(0.0, 1.0))
def test_det_depends_only_on_x(cfl, x):
    s = np.sqrt(4 * x * (1 - x))
    assert boundary_symbol(cfl, x, s).det == boundary_symbol(cfl, x, -s).det


def test_boundary_negdef_examples():
    assert boundary_negdef_all_xi(CflPair(-0.3, -0.3))
    assert not boundary_negdef_all_xi(CflPair(-0.3, 0.0))
    with pytest.raises(ValueError):
        boundary_negdef_all_xi(CflPair(-0.3, -0.3), samples=32)


def test_boundary_refinement_stable():
    rng = np.random.default_rng(5)
    pairs = []
    while len(pairs) < 50:
        a, b = rng.uniform(0.0, 0.71, 2)
        if a * a + b * b <= 0.5:
            pairs.append(CflPair(-a, -b))
    for cfl in pairs:
        assert boundary_negdef_all_xi(cfl, 256) == boundary_negdef_all_xi(cfl, 512)


def test_symbol_matches_space_domain(rng):
    for _ in range(20):
        cfl = CflPair(-rng.uniform(0.01, 0.7), -rng.uniform(0.01, 0.7))
        n = int(rng.integers(5, 40))
        u, v = rng.standard_normal(n), rng.standard_normal(n)
        direct = whole_line_boundary_form(u, v, cfl)
        assert boundary_form_via_symbol(u, v, cfl) == pytest.approx(direct, rel=1e-10)


def test_symbol_sign_convention_matters(rng):
    # flipping the sign of the imaginary part breaks the match, so the oracle is sharp
    from lwquarter import regions

    cfl = CflPair(-0.4, -0.3)
    u, v = rng.standard_normal(12), rng.standard_normal(12)
    n = 16
    uh, vh = np.fft.fft(u, n), np.fft.fft(v, n)
    xi = 2 * np.pi * np.arange(n) / n
    h11, h22, re, im = regions._symbol_entries(0.4, 0.3, np.sin(xi / 2) ** 2, np.sin(xi))
    flipped = np.sum(h11 * abs(uh) ** 2 + h22 * abs(vh) ** 2 + 2 * np.real(np.conj(uh) * (re - 1j * im) * vh)) / n
    assert abs(flipped - whole_line_boundary_form(u, v, cfl)) > 1e-6

# }}}


# {{{ sweeps


def test_sweep_rejects_low_resolution():
    with pytest.raises(ValueError):
        sweep(8, "corner")
    with pytest.raises(ValueError):
        sweep(16, "edge")


def test_outside_ball_pixel(maps):
    for m in maps.values():
        assert m.at(0.9, 0.9) == OUTSIDE


def test_corner_small_values_bad(maps):
    assert maps["corner"].at(0.05, 0.05) == BAD


def test_reduced_larger_than_corner(maps):
    assert maps["reduced"].counts()[2] > maps["corner"].counts()[2]


@pytest.mark.parametrize("which", ["corner", "reduced"])
def test_exchange_symmetry(maps, which):
    c = maps[which].classes
    assert np.array_equal(c, c.T)


def test_pixel_classes_agree_with_pointwise(maps):
    m = maps["corner"]
    for i, j in [(10, 20), (60, 30), (100, 100), (5, 5)]:
        la, mb = m.centers[i], m.centers[j]
        cfl = CflPair(-la, -mb)
        if la * la + mb * mb > 0.5:
            expect = OUTSIDE
        else:
            expect = GOOD if is_negative_definite_4(corner_form(cfl)) else BAD
        assert m.classes[i, j] == expect


def test_boundary_map_mostly_good(maps):
    m = maps["boundary"]
    c = m.centers
    la, mb = np.meshgrid(c, c, indexing="ij")
    sel = (la**2 + mb**2 < 0.5) & (mb >= 0.02)
    assert np.mean(m.classes[sel] == GOOD) >= 0.99


def test_counts_sum(maps):
    assert sum(maps["boundary"].counts()) == 256 * 256

# }}}
