import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regsimplex import (
    AlignedRegularSimplex,
    DegenerateSimplexError,
    DimensionError,
    GeneralRegularSimplex,
    InfeasibleConstructionError,
    InputError,
    IntegerSimplex,
    Orientation,
    arm,
    arm_from_edge,
    basis_matrix,
    constants,
    edge_length,
    integer_simplex,
    schoenberg_case,
    schoenberg_feasible,
    validate_regular,
    vertex,
)
from regsimplex.simplex import is_sum_of_two_squares

MINUS, PLUS = Orientation.MINUS, Orientation.PLUS
BOTH = [MINUS, PLUS]


# -- constants -------------------------------------------------------------------


def test_constants_n2_minus():
    c = constants(2, MINUS)
    assert c.alpha == pytest.approx(1.2247448713915890, rel=1e-15)
    assert c.beta == pytest.approx(1 / 3, rel=1e-15)
    assert c.gamma == pytest.approx(0.21132486540518713, rel=1e-15)


def test_constants_n2_plus_matches_worked_example():
    # gamma = (1 + 1/sqrt(3)) / 2
    assert constants(2, PLUS).gamma == pytest.approx(0.7886751345948129, rel=1e-15)


def test_constants_n3_minus():
    assert constants(3, MINUS).gamma == pytest.approx(1 / 6, rel=1e-15)


def test_constants_rejects_zero_dimension():
    with pytest.raises(DimensionError):
        constants(0, MINUS)


@pytest.mark.parametrize("n", range(1, 65))
@pytest.mark.parametrize("orientation", BOTH)
def test_gamma_solves_quadratic(n, orientation):
    c = constants(n, orientation)
    residual = n * c.gamma**2 - 2 * c.gamma + c.beta
    assert abs(residual) <= 4 * np.spacing(2 * c.gamma)
    assert c.alpha**2 * c.beta * n == pytest.approx(1.0, rel=1e-15)


def test_orientation_parse():
    assert Orientation.parse("plus") is PLUS
    assert Orientation.parse(" Minus ") is MINUS
    with pytest.raises(InputError):
        Orientation.parse("sideways")


# -- arms and vertices ---------------------------------------------------------------


def test_arm_plus_first_column():
    np.testing.assert_allclose(arm(2, PLUS, 1), [0.25881904510252096, -0.96592582628906831], rtol=0, atol=1e-15)


def test_arm_plus_last_column():
    np.testing.assert_allclose(arm(2, PLUS, 3), [math.sqrt(0.5)] * 2, rtol=0, atol=1e-15)


def test_arm_minus_last_column_n4():
    np.testing.assert_array_equal(arm(4, MINUS, 5), [-0.5] * 4)


@pytest.mark.parametrize("j", [0, 4, -1])
def test_arm_index_out_of_range(j):
    with pytest.raises(IndexError):
        arm(2, PLUS, j)


@pytest.mark.parametrize("n", [1, 2, 5, 17])
@pytest.mark.parametrize("orientation", BOTH)
def test_arms_unit_with_uniform_angles(n, orientation):
    arms = [arm(n, orientation, j) for j in range(1, n + 2)]
    for v in arms:
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-14)
    for a, b in itertools.combinations(arms, 2):
        assert a @ b == pytest.approx(-1 / n, abs=1e-12)


def test_vertex_worked_example_h1e3():
    s = AlignedRegularSimplex([1.1, 1.1**2 + 1e-5], 1e-3, PLUS)
    np.testing.assert_array_equal(np.round(s.vertex(1), 4), [1.1003, 1.2090])
    table = np.round(s.matrix(), 4)
    np.testing.assert_array_equal(table, [[1.1003, 1.0990, 1.1007], [1.2090, 1.2103, 1.2107]])


def test_vertex_worked_example_h1e6():
    s = AlignedRegularSimplex([0.9, 0.81], 1e-6, PLUS)
    np.testing.assert_array_equal(np.round(s.vertex(2), 8), [0.89999903, 0.81000026])
    table = np.round(s.matrix(), 8)
    np.testing.assert_array_equal(table, [[0.90000026, 0.89999903, 0.90000071], [0.80999903, 0.81000026, 0.81000071]])


def test_vertex_rotated_worked_example():
    # h2 = -h1/2 flips the simplex through its centroid
    s = AlignedRegularSimplex([0.9, 0.81], -5e-7, PLUS)
    table = np.round(s.matrix(), 8)
    np.testing.assert_array_equal(table, [[0.89999987, 0.90000048, 0.89999965], [0.81000048, 0.80999987, 0.80999965]])


@pytest.mark.parametrize("orientation", BOTH)
def test_last_vertex_at_origin_centroid(orientation):
    n = 6
    s = AlignedRegularSimplex(np.zeros(n), 1.0, orientation)
    np.testing.assert_allclose(vertex(s, n + 1), orientation.sign / math.sqrt(n) * np.ones(n), atol=1e-15)


def test_vertices_generator_matches_vertex():
    s = AlignedRegularSimplex(np.linspace(-1, 1, 7), 0.3, PLUS)
    for j, x in enumerate(s.vertices(), start=1):
        np.testing.assert_array_equal(x, s.vertex(j))


def test_vertex_index_errors():
    s = AlignedRegularSimplex([0.0, 0.0], 1.0)
    with pytest.raises(IndexError):
        s.vertex(4)
    with pytest.raises(IndexError):
        s.vertex(0)


def test_zero_radius_is_degenerate():
    with pytest.raises(DegenerateSimplexError):
        AlignedRegularSimplex([1.0, 2.0], 0.0)


def test_aligned_simplex_is_immutable():
    s = AlignedRegularSimplex([1.0, 2.0], 1.0)
    with pytest.raises(ValueError):
        s.x0[0] = 3.0


@given(
    x0=st.lists(st.floats(-10, 10), min_size=1, max_size=12),
    h=st.floats(1e-6, 10) | st.floats(-10, -1e-6),
    plus=st.booleans(),
)
@settings(max_examples=150, deadline=None)
def test_vertex_agrees_with_arm(x0, h, plus):
    orientation = PLUS if plus else MINUS
    s = AlignedRegularSimplex(x0, h, orientation)
    x0 = np.asarray(x0)
    ulp = np.spacing(np.maximum(np.abs(x0), abs(h)) + 1e-300)
    for j in range(1, s.n + 2):
        direct = x0 + h * s.arm(j)
        assert np.all(np.abs(s.vertex(j) - direct) <= 2 * ulp)
        assert np.linalg.norm(s.vertex(j) - x0) == pytest.approx(abs(h), rel=1e-12, abs=4 * ulp.max())


# -- basis matrix ----------------------------------------------------------------------


def test_basis_matrix_plus_n2_at_printed_precision():
    np.testing.assert_array_equal(
        np.round(basis_matrix(2, PLUS), 4), [[0.2588, -0.9659, 0.7071], [-0.9659, 0.2588, 0.7071]]
    )


def test_basis_matrix_n1():
    np.testing.assert_allclose(basis_matrix(1, MINUS), [[1.0, -1.0]], atol=1e-15)


def test_gram_n5():
    vp = basis_matrix(5, MINUS)
    gram = vp.T @ vp
    np.testing.assert_allclose(np.diag(gram), 1.0, atol=1e-14)
    np.testing.assert_allclose(gram[~np.eye(6, dtype=bool)], -0.2, atol=1e-14)


@pytest.mark.parametrize("n", range(1, 65))
@pytest.mark.parametrize("orientation", BOTH)
def test_basis_identities(n, orientation):
    vp = basis_matrix(n, orientation)
    alpha = constants(n, orientation).alpha
    assert np.abs(vp @ vp.T - alpha**2 * np.eye(n)).max() <= 1e-13
    gram = vp.T @ vp
    assert np.abs(np.diag(gram) - 1).max() <= 1e-13
    assert np.abs(gram[~np.eye(n + 1, dtype=bool)] + 1 / n).max() <= 1e-13
    assert np.abs(vp.sum(axis=1)).max() <= 1e-13
    # V e = e/sqrt(n) for MINUS, -e/sqrt(n) for PLUS
    ve = vp[:, :n] @ np.ones(n)
    assert np.abs(ve + orientation.sign / math.sqrt(n)).max() <= 1e-13


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("orientation", BOTH)
def test_eigenstructure(n, orientation):
    c = constants(n, orientation)
    v = basis_matrix(n, orientation)[:, :n]
    e = np.ones(n)
    np.testing.assert_allclose(v @ e, -orientation.sign / math.sqrt(n) * e, atol=1e-14)
    # vectors orthogonal to e are scaled by alpha
    rng = np.random.default_rng(n)
    for _ in range(3):
        w = rng.standard_normal(n)
        w -= w.mean()
        np.testing.assert_allclose(v @ w, c.alpha * w, atol=1e-13)
    eig = np.sort(np.linalg.eigvalsh(v))
    expected = np.sort(np.r_[np.full(n - 1, c.alpha), -orientation.sign / math.sqrt(n)])
    np.testing.assert_allclose(eig, expected, atol=1e-13)


# -- regularity validation --------------------------------------------------------------


@pytest.mark.parametrize("orientation", BOTH)
@pytest.mark.parametrize("h", [1e-6, 1e-3, 2.5, -0.7])
def test_validate_aligned(orientation, h):
    x0 = np.array([1.0, -2.0, 0.5, 3.0])
    report = validate_regular(AlignedRegularSimplex(x0, h, orientation).matrix(), rel_tol=1e-10 if abs(h) > 1e-5 else 1e-8)
    assert report.is_regular
    np.testing.assert_allclose(report.centroid, x0, atol=1e-14)
    assert report.h == pytest.approx(abs(h), rel=1e-9)


def test_validate_integer_simplex():
    z = np.array([[5, -1, -1, -3], [-1, 5, -1, -3], [-1, -1, 5, -3]])
    report = validate_regular(z)
    assert report.is_regular
    np.testing.assert_array_equal(report.centroid, [0, 0, 0])


def test_validate_detects_perturbation():
    rel_tol = 1e-8
    h = 0.5
    z = AlignedRegularSimplex([0.3, 0.1, -0.2], h).matrix()
    z[1, 2] += 10 * rel_tol * h
    report = validate_regular(z, rel_tol)
    assert not report.is_regular
    assert report.max_distance_spread > rel_tol


def test_validate_rejects_bad_shape():
    with pytest.raises(DimensionError):
        validate_regular(np.zeros((3, 3)))


def test_validate_coincident_points():
    assert not validate_regular(np.zeros((2, 3))).is_regular


def test_general_simplex_centroid_check():
    z = AlignedRegularSimplex([1.0, 2.0], 0.1).matrix()
    GeneralRegularSimplex(z, centroid=[1.0, 2.0], h=0.1)
    with pytest.raises(InputError):
        GeneralRegularSimplex(z, centroid=[1.0, 2.1])
    with pytest.raises(DimensionError):
        GeneralRegularSimplex(z, centroid=[1.0, 2.0, 3.0])
    with pytest.raises(DegenerateSimplexError):
        GeneralRegularSimplex(z, h=-1.0)


# -- edge length -------------------------------------------------------------------------


def test_edge_length_values():
    assert edge_length(1, 1) == pytest.approx(2.0, rel=1e-15)
    assert edge_length(1, 3) == pytest.approx(1.6329931618554521, rel=1e-15)
    assert arm_from_edge(edge_length(0.37, 9), 9) == pytest.approx(0.37, rel=1e-15)


@pytest.mark.parametrize("n", [1, 2, 7])
def test_edge_length_matches_geometry(n):
    z = AlignedRegularSimplex(np.zeros(n), 0.8).matrix()
    assert np.linalg.norm(z[:, 0] - z[:, 1]) == pytest.approx(edge_length(0.8, n), rel=1e-14)


def test_edge_length_rejects_nonpositive():
    with pytest.raises(InputError):
        edge_length(0.0, 2)
    with pytest.raises(InputError):
        arm_from_edge(-1.0, 2)


# -- integer simplexes ---------------------------------------------------------------------


def _brute_two_squares(m):
    r = math.isqrt(m)
    return any(math.isqrt(m - a * a) ** 2 == m - a * a for a in range(r + 1))


def _brute_feasible(n):
    if n % 2 == 0:
        return math.isqrt(n + 1) ** 2 == n + 1
    if n % 4 == 3:
        return True
    return _brute_two_squares(n + 1)


def test_schoenberg_lists():
    assert all(schoenberg_feasible(n) for n in [1, 3, 7, 8, 9, 11, 15, 17, 19])
    assert not any(schoenberg_feasible(n) for n in [2, 4, 5, 6, 10, 12, 13, 14, 16, 18, 20])


def test_schoenberg_n24():
    assert _brute_feasible(24)
    assert schoenberg_feasible(24)
    assert schoenberg_case(24) == "i"


@pytest.mark.parametrize("m", range(0, 2000))
def test_sum_of_two_squares_against_brute_force(m):
    assert is_sum_of_two_squares(m) == _brute_two_squares(m)


def test_schoenberg_against_brute_force():
    for n in range(1, 500):
        assert schoenberg_feasible(n) == _brute_feasible(n), n


def test_integer_simplex_n3():
    np.testing.assert_array_equal(
        integer_simplex(3, MINUS).vertices, [[5, -1, -1, -3], [-1, 5, -1, -3], [-1, -1, 5, -3]]
    )
    np.testing.assert_array_equal(integer_simplex(3, PLUS).vertices, [[1, -1, -1, 1], [-1, 1, -1, 1], [-1, -1, 1, 1]])


def test_integer_simplex_n8():
    xs = integer_simplex(8, MINUS)
    z = xs.vertices
    expected = np.full((8, 9), -1)
    np.fill_diagonal(expected, 11)
    expected[:, 8] = -4
    np.testing.assert_array_equal(z, expected)
    zl = z.astype(object)
    assert all(s == 0 for s in zl.sum(axis=1))
    norms = {int((zl[:, j] ** 2).sum()) for j in range(9)}
    dists = {int(((zl[:, i] - zl[:, j]) ** 2).sum()) for i, j in itertools.combinations(range(9), 2)}
    assert len(norms) == 1 and len(dists) == 1


@pytest.mark.parametrize("n", [3, 8, 15, 24, 35, 48, 63, 80, 99])
@pytest.mark.parametrize("orientation", BOTH)
def test_integer_simplex_proportional_to_basis(n, orientation):
    xs = integer_simplex(n, orientation)
    assert xs.is_exactly_regular()
    alpha = constants(n, orientation).alpha
    np.testing.assert_allclose(xs.vertices, xs.scale / alpha * basis_matrix(n, orientation), rtol=0, atol=1e-9 * xs.scale)
    assert math.gcd(*map(int, np.unique(np.abs(xs.vertices)))) == 1


@pytest.mark.parametrize("n", [2, 4, 5, 6, 7, 9, 10])
def test_integer_simplex_needs_square(n):
    with pytest.raises(InfeasibleConstructionError, match="perfect square"):
        integer_simplex(n)


def test_integer_simplex_rejects_irregular():
    with pytest.raises(InputError):
        IntegerSimplex(np.array([[1, 0, -1], [0, 1, -1]]), 1)
