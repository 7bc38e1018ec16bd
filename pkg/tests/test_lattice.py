import math

import pytest

from tsl.lattice import (
    INFINITE,
    AbelianGroup,
    IntMatrix,
    abelian_from_matrix,
    cokernel,
    direct_sum,
    gamma_whitehead,
    has_two_torsion,
    hirsch,
    p_part,
    smith_normal_form,
    subgroup_of_cokernel,
    tensor_ab,
)

A = AbelianGroup.parse


def test_snf_small():
    m = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    u, s, v = smith_normal_form(m)
    assert u @ m @ v == s
    assert s.diagonal() == [2, 6, 12]


def test_snf_zero_and_empty():
    u, s, v = smith_normal_form(IntMatrix.zeros(2, 3))
    assert s.diagonal() == [0, 0]
    assert abelian_from_matrix(IntMatrix.zeros(0, 2)) == A("Z^2")


def test_abelian_group_text():
    assert str(A("C2 x C4 x Z^3")) == "C2 x C4 x Z^3"
    assert str(AbelianGroup()) == "1"
    assert A("C6 x C4") == A("C2 x C12")
    assert A("Z").order == INFINITE
    assert A("C2 x C3").order == 6
    with pytest.raises(ValueError):
        AbelianGroup((4, 2))


def test_json_roundtrip():
    g = A("C2 x C4 x Z")
    assert AbelianGroup.from_json(g.to_json()) == g


def test_tensor_gcd_rule():
    assert tensor_ab(A("C4"), A("C6")) == A("C2")
    assert tensor_ab(A("Z"), A("C5")) == A("C5")
    assert tensor_ab(A("Z^2"), A("Z")) == A("Z^2")
    assert tensor_ab(A("C3 x C3"), A("C3 x C3")) == A("C3^4")


def test_gamma_rules():
    assert gamma_whitehead(A("C3")) == A("C3")
    assert gamma_whitehead(A("C2")) == A("C4")
    assert gamma_whitehead(A("Z")) == A("Z")
    # Gamma(C_p x C_p) = C_p^2 x (C_p (x) C_p) = C_p^3
    assert gamma_whitehead(A("C3 x C3")) == A("C3^3")
    assert gamma_whitehead(A("C2 x C4 x Z")) == A("C2^2 x C4^2 x C8 x Z")


def test_helpers():
    assert hirsch(A("C2 x Z^3")) == 3
    assert has_two_torsion(A("C6")) and not has_two_torsion(A("C9 x Z"))
    assert p_part(72, 2) == 3 and p_part(72, 5) == 0
    assert direct_sum(A("C2"), A("C3")) == A("C6")


def test_cokernel_and_subgroup():
    # Z^2 / <(2,0),(0,4)> and its subgroup generated by (1,1)
    rel = [[2, 0], [0, 4]]
    assert cokernel(rel, 2) == A("C2 x C4")
    assert subgroup_of_cokernel(rel, [[1, 1]], 2) == A("C4")
    assert subgroup_of_cokernel(rel, [[0, 2]], 2) == A("C2")


def test_det():
    assert IntMatrix.from_rows([[1, 2], [3, 4]]).det() == -2
    assert IntMatrix.identity(4).det() == 1
    assert math.isinf(INFINITE)
