import pytest

from mc_moduli.dgla import DimensionVector, LSpace
from mc_moduli.galgebra import free_algebra, polynomial_algebra
from mc_moduli.scan import ScanError, scan_mc

from conftest import F2, F3, Q


def test_k_x_chain():
    # MC points are (u, v, w) with w = v u: 4 of the 8 points, and |G| = 1
    rep = scan_mc(polynomial_algebra(1, degree_bound=2, field=F2), DimensionVector(0, (1, 1, 1)), orbits=True)
    assert (rep.points, rep.mc_points, rep.mc_points_by_ideal) == (8, 4, 4)
    assert (rep.orbits, rep.group_order) == (4, 1)


@pytest.mark.parametrize("field", [F2, F3])
def test_window_length_one_is_flat(field):
    A = polynomial_algebra(2, degree_bound=1, field=field)
    alpha = DimensionVector(0, (1, 2))
    rep = scan_mc(A, alpha)
    assert rep.mc_points == rep.points == field.p ** LSpace(A, alpha, 1).dim


def test_pairs_of_vectors_orbits():
    # (mu(x), mu(y)) in F_3^2 up to GL_1 x GL_2: zero, four lines, and the rank-2 orbit
    rep = scan_mc(polynomial_algebra(2, degree_bound=1, field=F3), DimensionVector(0, (1, 2)), orbits=True)
    assert rep.orbits == 6
    assert rep.group_order == 2 * 48


@pytest.mark.parametrize("A,dims", [
    (polynomial_algebra(2, degree_bound=2, field=F2), (1, 1, 1)),
    (free_algebra(2, 2, F2), (1, 1, 1)),
    (polynomial_algebra(1, degree_bound=3, field=F3), (1, 1, 1, 1)),
])
def test_two_paths_agree(A, dims):
    rep = scan_mc(A, DimensionVector(0, dims))
    assert rep.mc_points == rep.mc_points_by_ideal
    assert rep.to_dict()["agree"]


def test_commuting_square_count():
    # F_2[x,y] on (1,1,1): mu(x), mu(y) = a, b on V_0 and c, d on V_1; the degree-two
    # part is forced (mu(x^2) = ca, mu(y^2) = db) and mu(xy) = cb = da must agree
    rep = scan_mc(polynomial_algebra(2, degree_bound=2, field=F2), DimensionVector(0, (1, 1, 1)))
    brute = sum(1 for a in range(2) for b in range(2) for c in range(2) for d in range(2) if c * b == d * a)
    assert rep.mc_points == brute


def test_errors():
    with pytest.raises(ScanError):
        scan_mc(polynomial_algebra(1, degree_bound=2, field=Q), DimensionVector(0, (1, 1, 1)))
    with pytest.raises(ScanError, match="budget"):
        scan_mc(polynomial_algebra(2, degree_bound=2, field=F3), DimensionVector(0, (2, 2, 2)), budget=1000)
