import pytest

from apolarkit import catalog
from apolarkit.errors import PreconditionError
from apolarkit.fields import GF, QQ, projective_points
from apolarkit.forms import HomogeneousForm, parse_form
from apolarkit.rankloci import (
    RankProfile,
    classify_singularity,
    drop_degree_on_line,
    drop_report,
    interpolate_drop_curve,
    plane_drop_points,
    rank_profile,
    singular_points_plane_curve,
)
from apolarkit.resolutions import LinearFormMatrix, m2_matrix, restrict_linear_matrix


def lf(vec, field):
    return HomogeneousForm.linear(vec, field, "z")


def diag_matrix(field, repeat=False):
    z0 = lf([1, 0, 0], field)
    z1 = z0 if repeat else lf([0, 1, 0], field)
    zero = lf([0, 0, 0], field)
    return LinearFormMatrix([[z0, zero], [zero, z1]])


def test_rank_profile_bookkeeping():
    prof = RankProfile(2, 2, 1, QQ)
    prof.record((1, 1, 1), 2)
    prof.record((0, 1, 1), 1)
    prof.record((0, 0, 1), 0)
    assert prof.drop_count() == 2
    assert prof.dropped() == [(0, 1, 1), (0, 0, 1)]
    with pytest.raises(PreconditionError):
        prof.record((1, 0, 0), 3)
    data = prof.to_json()
    assert data["threshold"] == 1 and len(data["samples"]) == 3


def test_rank_profile_of_diagonal_matrix():
    M = diag_matrix(QQ)
    pts = [(1, 1, 1), (0, 1, 1), (1, 0, 1), (0, 0, 1)]
    prof = rank_profile(M, pts, 1)
    ranks = dict(prof.samples)
    assert ranks == {(1, 1, 1): 2, (0, 1, 1): 1, (1, 0, 1): 1, (0, 0, 1): 0}
    assert prof.drop_count() == 3


def test_drop_degree_guards():
    with pytest.raises(PreconditionError):
        drop_degree_on_line(diag_matrix(QQ), ((1, 0, 0), (0, 1, 0)), 1)
    with pytest.raises(PreconditionError):
        drop_degree_on_line(diag_matrix(GF(5)), ((1, 0, 0), (0, 1, 0)), 1)
    M = diag_matrix(GF(101))
    with pytest.raises(PreconditionError):
        drop_degree_on_line(M, ((1, 0, 0), (2, 0, 0)), 1)
    with pytest.raises(PreconditionError):
        drop_degree_on_line(M, ((0, 0, 0), (0, 1, 0)), 1)
    with pytest.raises(PreconditionError):
        drop_degree_on_line(M, ((1, 0, 0), (0, 1, 0)), 2)
    # both entries vanish on the z0 = 0 line, so the rank never clears t
    with pytest.raises(PreconditionError):
        drop_degree_on_line(diag_matrix(GF(101), repeat=True),
                            ((0, 1, 0), (0, 0, 1)), 1)


def test_drop_degree_on_synthetic_diagonals():
    M = diag_matrix(GF(101))
    assert drop_degree_on_line(M, ((1, 0, 0), (0, 1, 1)), 1) == 2
    assert drop_degree_on_line(M, ((1, 2, 3), (4, 5, 6)), 1) == 2
    # the doubled entry gives determinant z0^2; the divisor is squarefree
    Mrep = diag_matrix(GF(101), repeat=True)
    assert drop_degree_on_line(Mrep, ((1, 2, 3), (4, 5, 6)), 1) == 1
    single = LinearFormMatrix([[lf([1, 0, 0], GF(101))]])
    assert drop_degree_on_line(single, ((1, 2, 3), (4, 5, 6)), 0) == 1
    # at threshold 0 the two diagonal entries have no common zero on a
    # generic line, so the divisor is empty
    assert drop_degree_on_line(M, ((1, 2, 3), (4, 5, 6)), 0) == 0


def test_plane_drop_points_of_diagonal_matrix():
    M = diag_matrix(GF(5))
    base = plane_drop_points(M, 1)
    # two lines with 6 points each, sharing one point
    assert len(base) == 11
    assert all(q[0] == 0 or q[1] == 0 for q in base)
    ext = plane_drop_points(M, 1, extension_degree=2)
    assert len(ext) == 2 * 26 - 1
    with pytest.raises(PreconditionError):
        plane_drop_points(M, 1, extension_degree=3)
    with pytest.raises(PreconditionError):
        plane_drop_points(diag_matrix(QQ), 1)


def test_interpolate_drop_curve_synthetic_cases():
    M = diag_matrix(GF(5))
    conic = interpolate_drop_curve(M, 1, target_degree=2)
    assert conic == parse_form("z0*z1", field=GF(5))
    # doubled entry drops along a single line; interpolation sees it reduced
    line = interpolate_drop_curve(diag_matrix(GF(5), repeat=True), 1,
                                  target_degree=1)
    assert line == parse_form("z0", field=GF(5))
    with pytest.raises(PreconditionError):
        interpolate_drop_curve(M, 1, target_degree=1)
    with pytest.raises(PreconditionError):
        interpolate_drop_curve(M, 1, target_degree=0)
    with pytest.raises(PreconditionError):
        interpolate_drop_curve(diag_matrix(QQ), 1)


def test_interpolate_recovers_full_diagonal_product():
    F = GF(5)
    zero = lf([0, 0, 0], F)
    rows = [[zero] * 3 for _ in range(3)]
    for i in range(3):
        vec = [0, 0, 0]
        vec[i] = 1
        rows[i][i] = lf(vec, F)
    M = LinearFormMatrix(rows)
    cubic = interpolate_drop_curve(M, 2, target_degree=3)
    assert cubic == parse_form("z0*z1*z2", field=F)


def test_singular_point_scan_and_classification():
    F7 = GF(7)
    nodal = parse_form("z1^2*z2-z0^3-z0^2*z2", field=F7)
    sing = singular_points_plane_curve(nodal)
    assert sing == [(0, 0, 1)]
    assert classify_singularity(nodal, (0, 0, 1)) == "node"
    cusp = parse_form("z1^2*z2-z0^3", field=F7)
    assert singular_points_plane_curve(cusp) == [(0, 0, 1)]
    assert classify_singularity(cusp, (0, 0, 1)) == "worse"
    assert classify_singularity(nodal, (1, 0, 6)) == "smooth"
    with pytest.raises(PreconditionError):
        classify_singularity(nodal, (1, 1, 1))  # not on the curve
    with pytest.raises(PreconditionError):
        singular_points_plane_curve(nodal.lift_to(GF(7, 2)), search_extension=2)
    smooth_conic = parse_form("z0^2+z1^2+z2^2", field=GF(7))
    assert singular_points_plane_curve(smooth_conic, search_extension=2) == []
    triangle = parse_form("z0*z1*z2", field=F7)
    assert singular_points_plane_curve(triangle) == [
        (1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_restricted_family_matrix_has_degree_nine_plane_divisor():
    # the full-space line measurement and the plane interpolation both see
    # degree 9; here the line lives inside the distinguished plane
    m2 = m2_matrix(catalog.cubic_family(1, -1, 1, -1, 1, field=GF(101)))
    R = restrict_linear_matrix(m2, catalog.plane_substitution(GF(101)))
    assert (R.nrows, R.ncols, R.nvars) == (35, 21, 3)
    assert drop_degree_on_line(R, ((1, 2, 3), (4, 5, 6)), 20) == 9
    assert drop_degree_on_line(R, ((1, 0, 0), (0, 1, 1)), 20, seed=3) == 9


def test_drop_report_structure():
    curve = parse_form("z0*z1", field=GF(5))
    pts = plane_drop_points(diag_matrix(GF(5)), 1)[:2]
    report = drop_report("diag", 1, [2, 2], curve, pts, "node")
    assert report["curve"] == "z0*z1"
    assert report["line_degrees"] == [2, 2]
    assert len(report["singular_points"]) == 2
    ext_pt = [(GF(5, 2).one, GF(5, 2).zero, GF(5, 2).zero)]
    report2 = drop_report("diag", 1, [], curve.lift_to(GF(5, 2)), ext_pt,
                          "node", point_field=GF(5, 2))
    assert report2["singular_points"][0][0] == GF(5, 2).format_scalar(GF(5, 2).one)
    report3 = drop_report("diag", 1, [9], None, [], None)
    assert report3["curve"] is None
