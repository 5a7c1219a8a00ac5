import random
from fractions import Fraction

import pytest

from apolarkit import catalog
from apolarkit.apolarity import (
    ApolarityContext,
    PointSet,
    apolar_action,
    apolar_ideal_component,
    apolar_pairing,
    catalecticant,
    cube_span_contains,
    evaluation_matrix,
    exists_cubic_singular_along,
    graded_pieces_from_generators,
    ideal_of_points_component,
    imposes_independent_conditions,
    is_apolar_pointset,
    min_partial_rank_scan,
    partial_space,
    q_f,
    quadric_symmetric_matrix,
    subspace_forms,
)
from apolarkit.cli import random_rational_points
from apolarkit.errors import PreconditionError
from apolarkit.fields import GF, QQ
from apolarkit.forms import HomogeneousForm, parse_form
from apolarkit.linalg import ExactMatrix


def _random_linear(rng, spread=5):
    while True:
        coeffs = [Fraction(rng.randint(-spread, spread)) for _ in range(6)]
        if any(coeffs):
            return HomogeneousForm.linear(coeffs, QQ, "x")


def test_action_on_cube_of_linear_form():
    # q acting on l^3 equals 6 * q(l) * l, for any dual quadric q
    rng = random.Random(1)
    for _ in range(10):
        l = _random_linear(rng)
        q = HomogeneousForm(6, 2,
                            [Fraction(rng.randint(-4, 4)) for _ in range(21)],
                            QQ, "y")
        got = apolar_action(q, l.power(3))
        want = l.scale(6 * q.evaluate(list(l.coeffs)))
        assert got == want


def test_action_degree_and_alphabet_bookkeeping():
    f = parse_form("x0^2*x1")
    d = parse_form("y0", alphabet="y")
    g = apolar_action(d, f)
    assert g.degree == 2
    assert g.alphabet == "x"
    assert g == parse_form("2*x0*x1")
    # the action flips alphabets, so primal operators give dual output
    assert apolar_action(parse_form("x0"), f).alphabet == "y"
    with pytest.raises(PreconditionError):
        apolar_action(parse_form("y0^2*y1", alphabet="y"), parse_form("x0*x1"))


def test_pairing_diagonalizes_monomials():
    f = parse_form("x0^3")
    assert apolar_pairing(parse_form("y0^3", alphabet="y"), f) == 6
    assert apolar_pairing(parse_form("y0^2*y1", alphabet="y"), f) == 0


def test_fermat_catalecticant_profile():
    f = catalog.fermat_cubic()
    ranks = [catalecticant(f, k).rank() for k in range(4)]
    assert ranks == [1, 6, 6, 1]
    assert apolar_ideal_component(f, 2).dim == 15
    assert q_f(f).dim == 15
    assert partial_space(f).dim == 6


def test_apolar_ideal_annihilates():
    f = catalog.cubic_family(1, -1, 1, -1, 1)
    for k in (1, 2, 3):
        for g in subspace_forms(apolar_ideal_component(f, k)):
            assert apolar_action(g, f).is_zero()


def test_quadric_symmetric_matrix_represents_the_form():
    rng = random.Random(4)
    q = HomogeneousForm(6, 2,
                        [Fraction(rng.randint(-5, 5)) for _ in range(21)],
                        QQ, "x")
    A = quadric_symmetric_matrix(q)
    # A is the matrix of second partials, so v^T A v doubles the form
    for _ in range(5):
        v = [Fraction(rng.randint(-3, 3)) for _ in range(6)]
        quad = sum(A.entry(i, j) * v[i] * v[j]
                   for i in range(6) for j in range(6))
        assert quad == 2 * q.evaluate(v)


def test_pointset_rejects_projective_duplicates():
    with pytest.raises(PreconditionError):
        PointSet([(1, 0, 0, 0, 0, 0), (2, 0, 0, 0, 0, 0)], QQ)
    Z = PointSet([(1, 0, 0, 0, 0, 0), (2, 0, 0, 0, 0, 0)], QQ,
                 allow_duplicates=True)
    assert len(Z) == 2


def test_pointset_json_round_trip():
    pts = random_rational_points(5, seed=3)
    Z = PointSet(pts, QQ)
    back = PointSet.from_json(Z.to_json(), QQ)
    assert list(back) == list(Z)


def test_points_ideal_dimensions():
    Z = PointSet(random_rational_points(9, seed=0), QQ)
    # 9 generic points impose independent conditions on quadrics and cubics
    assert evaluation_matrix(Z, 2).rank() == 9
    assert ideal_of_points_component(Z, 2).dim == 21 - 9
    assert ideal_of_points_component(Z, 3).dim == 56 - 9
    assert imposes_independent_conditions(Z, 2)
    assert imposes_independent_conditions(Z, 3)


def test_dual_route_apolarity_positive_and_negative():
    for seed in range(5):
        forms, lams, f = catalog.random_power_sum(8, QQ, seed=seed)
        Z = PointSet([g.coeffs for g in forms], QQ)
        assert is_apolar_pointset(Z, f)
        assert cube_span_contains(Z, f)
        rng = random.Random(1000 + seed)
        g = f + _random_linear(rng).power(3)
        assert is_apolar_pointset(Z, g) == cube_span_contains(Z, g)
        assert not cube_span_contains(Z, g)


def test_graded_pieces_match_veronese_resolution():
    # the Veronese ideal has 6 quadric generators and 8 linear syzygies,
    # so its cubic piece has dimension 6*6 - 8 = 28
    quadrics = catalog.veronese_ideal_quadrics()
    pieces = graded_pieces_from_generators(quadrics, 3)

    def span_dim(forms):
        rows = [list(f.coeffs) for f in forms]
        return ExactMatrix(rows, QQ).rank()

    assert span_dim(pieces[2]) == 6
    assert span_dim(pieces[3]) == 28


def test_min_partial_rank_scan_oracles():
    assert min_partial_rank_scan(catalog.fermat_cubic(GF(5))) == 1
    with pytest.raises(PreconditionError):
        min_partial_rank_scan(catalog.fermat_cubic())
    with pytest.raises(PreconditionError):
        min_partial_rank_scan(catalog.fermat_cubic(GF(13)))


def test_exists_cubic_singular_along_dimension_count():
    nine = PointSet(random_rational_points(9, seed=1), QQ)
    ten = PointSet(random_rational_points(10, seed=1), QQ)
    assert exists_cubic_singular_along(nine)
    assert not exists_cubic_singular_along(ten)
    three = PointSet([(1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0),
                      (0, 0, 1, 0, 0, 0)], QQ)
    assert exists_cubic_singular_along(three)


def test_ten_veronese_points_still_admit_a_singular_cubic():
    # the determinant of the net of quadrics is singular along the whole
    # image surface, so the generic dimension count does not apply here
    rng = random.Random(3)
    points, seen = [], set()
    while len(points) < 10:
        a = [Fraction(rng.randint(-5, 5)) for _ in range(3)]
        if not any(a):
            continue
        p = catalog.veronese_point(a)
        lead = next(c for c in p if c)
        key = tuple(c / lead for c in p)
        if key in seen:
            continue
        seen.add(key)
        points.append(p)
    assert exists_cubic_singular_along(PointSet(points, QQ))


def test_context_checks_membership():
    ctx = ApolarityContext(6)
    f = parse_form("x0^3")
    ctx.check(f)
    assert ctx.dual_alphabet_of(f) == "y"
    with pytest.raises(PreconditionError):
        ApolarityContext(3).check(f)
