from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symplab import floerdata as fd

nonzero = st.complex_numbers(min_magnitude=0.2, max_magnitude=5, allow_nan=False, allow_infinity=False)
signs = st.tuples(*[st.sampled_from((-1, 1))] * 5).map(fd.SignVector)


def test_cp3_enumeration_frozen():
    got = [c.label() for c in fd.enumerate_maslov2_positive("CP3_L11")]
    assert got == ["D", "B-C1-C2-D", "B-C1-D", "B-C2-D", "B-D"]


def test_enumeration_matches_brute_force():
    assert fd.enumerate_maslov2_positive("CP3_L11") == fd.enumerate_maslov2_positive("CP3_L11", box=4)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_projective_enumeration(m):
    got = [c.label() for c in fd.enumerate_maslov2_positive(f"CP{m + 1}_L0{m}")]
    # for m = 1 the line class minus twice the fibre also pairs nonnegatively
    assert got == (["D", "ell-2D"] if m == 1 else ["D"])


def test_intersection_table_frozen():
    rows = fd.table_rows(fd.cp3_lattice())
    assert rows["B"] == (1, 1, 0, 1, 0)
    assert rows["ell"] == (2, 1, 1, 1, 1)
    ell = fd.RelClass.of(fd.cp3_lattice(), ell=1)
    assert ell == fd.RelClass.of(fd.cp3_lattice(), B=2, C1=-1, C2=-1)


def test_maslov_and_area_homomorphisms():
    lat = fd.cp3_lattice()
    lam = Fraction(1, 4)
    for c in fd.enumerate_maslov2_positive("CP3_L11"):
        assert fd.maslov_of_class(c) == 2 and fd.area_of_class(c, lam) == lam
    b, d = fd.RelClass.of(lat, B=1), fd.RelClass.of(lat, D=1)
    assert fd.maslov_of_class(b + d) == fd.maslov_of_class(b) + fd.maslov_of_class(d) == 6
    assert fd.maslov_of_class(fd.RelClass.of(lat, ell=1)) == 8


def test_lattice_lookup_errors():
    with pytest.raises(KeyError):
        fd.lattice_for("CP9_X")
    with pytest.raises(KeyError):
        fd.RelClass.of(fd.cp3_lattice(), Z=1)
    with pytest.raises(ValueError):
        fd.projective_lattice(0)


def test_parity():
    assert fd.n_parity_check() == 1
    assert fd.n_parity_check(c1_h0=0) == 0
    assert fd.table_consistent(fd.cp3_lattice(), 1)
    assert not fd.table_consistent(fd.cp3_lattice(), 0)


def test_all_plus_example():
    assert fd.superpotential_eval(fd.ALL_PLUS, (1, 1, 2)) == 4
    assert np.linalg.norm(fd.superpotential_grad(fd.ALL_PLUS, (1, 1, 2))) < 1e-15


@pytest.mark.parametrize("s", fd.all_sign_vectors(), ids=str)
def test_closed_form_critical_points(s):
    pts = fd.critical_points(s)
    assert len(pts) == fd.expected_count(s) == fd.grid_critical_count(s)
    for p in pts:
        assert np.linalg.norm(fd.superpotential_grad(s, p)) <= 1e-12


def test_monomials_have_no_critical_points():
    assert not fd.monomial_has_critical_points((0, 0, 1))
    assert not fd.monomial_has_critical_points((0, 0, -1))
    assert fd.monomial_has_critical_points((0, 0, 0))


@settings(max_examples=80, deadline=None)
@given(signs, nonzero, nonzero, nonzero)
def test_flip_identities(s, x, y, z):
    res = fd.flip_identities(s, (x, y, z))
    assert all(v <= 1e-9 * (1 + abs(fd.superpotential_eval(s, (x, y, z)))) for v in res.values())


def test_sign_vector_parsing():
    s = fd.SignVector.parse("+,-,+,+,-")
    assert s.eps == (1, -1, 1, 1, -1) and str(s) == "+,-,+,+,-"
    with pytest.raises(ValueError):
        fd.SignVector((1, 1, 1))
    assert len(fd.all_sign_vectors()) == 32


def test_zero_coordinate_rejected():
    with pytest.raises(ValueError):
        fd.superpotential_eval(fd.ALL_PLUS, (0, 1, 1))
