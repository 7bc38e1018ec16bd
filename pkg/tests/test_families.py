import pytest

from tsl.cosets import group_order, todd_coxeter
from tsl.families import (
    BadParams,
    BadPrime,
    DimensionMismatch,
    ExtensionData,
    Family,
    UnsupportedFamily,
    b1_quotient,
    b1_quotient_order,
    bieberbach_b1,
    coclass_ks,
    companion_action,
    crystallographic_gn,
    e_vector,
    extension_presentation,
    gn_derived_description,
    gn_derived_words,
    gn_quotient,
    gn_quotient_order,
    ks_quotient,
    ks_quotient_order,
    predict,
    semidirect_action_words,
)
from tsl.lattice import AbelianGroup, IntMatrix, abelian_from_matrix
from tsl.presentations import (
    Presentation,
    Word,
    abelianized_relation_matrix,
    cyclic,
    parse_presentation,
    same_up_to_renaming,
)

A = AbelianGroup.parse


def ab(p):
    return abelian_from_matrix(abelianized_relation_matrix(p))


def test_gn_presentation_text():
    p = crystallographic_gn(3).presentation
    assert p.gens == ("a1", "a2", "t")
    assert str(p) == ("group G3 { gens: a1, a2, t; rels: t^3, t^-1*a1*t*a2^-1, "
                      "t^-1*a2*t*a2*a1, a2*a1*a2^-1*a1^-1; }")


@pytest.mark.parametrize("n", range(2, 13))
def test_gn_abelianization(n):
    assert ab(crystallographic_gn(n).presentation) == A(f"C{n} x C{n}")


@pytest.mark.parametrize("n, m", [(2, 3), (3, 2), (3, 5), (4, 3), (5, 2)])
def test_gn_quotient_order(n, m):
    assert group_order(gn_quotient(n, m)) == gn_quotient_order(n, m)


def test_gn_derived_words_generate_derived_subgroup():
    for n, m in [(3, 5), (4, 3), (3, 7)]:
        q = gn_quotient(n, m)
        index = todd_coxeter(q, gn_derived_words(n)).n
        assert index == ab(q).order
    assert gn_derived_description(4).ngens == 3


def test_e_vector_and_ks():
    assert e_vector(3, 2) == [1, 0, 0, 1, 0, 0]
    assert e_vector(5, 1) == [1, 1, 1, 1]
    spec = coclass_ks(3, 2)
    assert spec.presentation.ngens == 7 and spec.h_claimed == 6
    assert spec.extra["zp_generators"] == ["a1", "a2", "a3", "a4", "a5", "a6"]
    assert coclass_ks(2, 1).extra["schur_rank_claimed"] == 0


@pytest.mark.parametrize("p, s", [(4, 1), (1, 1), (2, 2)])
def test_bad_prime(p, s):
    with pytest.raises(BadPrime):
        coclass_ks(p, s)


@pytest.mark.parametrize("p, s, k", [(3, 1, 1), (3, 1, 2), (2, 1, 2), (5, 1, 1)])
def test_ks_quotient_order(p, s, k):
    assert group_order(ks_quotient(p, s, k)) == ks_quotient_order(p, s, k)


def test_ks_abelianization():
    assert ab(coclass_ks(3, 1).presentation) == A("C3 x C3")
    # the stated value is C9 x C9, the presentation gives C3 x C9 (claim C20)
    assert ab(coclass_ks(3, 2).presentation) == A("C3 x C9")
    assert coclass_ks(3, 2).abelianization_claimed == A("C9 x C9")


def test_b1():
    p = bieberbach_b1(2).presentation
    assert len(p.relators) == 4
    assert ab(p) == A("C2 x Z")
    p3 = bieberbach_b1(3).presentation
    assert p3.ngens == 4 and len(p3.relators) == 4 + 3
    assert ab(p3) == A("C2 x Z^2")
    for n, m in [(2, 3), (3, 3), (2, 5)]:
        assert group_order(b1_quotient(n, m)) == b1_quotient_order(n, m)
    with pytest.raises(BadParams):
        bieberbach_b1(1)


def test_predict():
    k3 = predict("KP", {"p": 3})
    assert str(k3) == "C3 x C3 x C9 x Z_3^3" and k3.hirsch == 3
    k32 = predict(Family.KS, {"p": 3, "s": 2})
    assert k32.torsion == A("C9 x C9 x C81") and k32.padic_rank == 9
    assert str(predict("B1", {"n": 2})) == "C2 x C4 x Z^2"
    assert predict("B1", {"n": 4}).free_rank == 10
    assert predict("GN", {"n": 5}).free_rank == 6
    with pytest.raises(UnsupportedFamily):
        predict("GN", {"n": 4})
    with pytest.raises(UnsupportedFamily):
        predict("NOPE", {})
    fn = predict("FREE_NILPOTENT", {"r": 3})
    assert (fn.free_rank, fn.f_bound, fn.f_equality_stated) == (6, 3, 6)


def test_semidirect_action_words_dimension():
    with pytest.raises(DimensionMismatch):
        semidirect_action_words([IntMatrix.identity(2)], rank=3)
    (row,) = semidirect_action_words([companion_action(3)], rank=2)
    assert row == (Word.gen(1), Word([(0, -1), (1, -1)]))


def _extension_from_matrix(q, m, rank, torsion=(), lifts=None):
    action = semidirect_action_words([m], rank, torsion)
    lifts = lifts or tuple(Word() for _ in q.relators)
    return ExtensionData(q, rank, tuple(torsion), action, lifts)


def test_extension_g3_matches_family():
    e = _extension_from_matrix(Presentation(("g",), (Word.gen(0, 3),)), companion_action(3), 2)
    assert same_up_to_renaming(extension_presentation(e), crystallographic_gn(3).presentation)


def test_extension_d_infinity():
    e = _extension_from_matrix(cyclic(2), IntMatrix.from_rows([[-1]]), 1)
    d_inf = parse_presentation("group Dinf { gens: a, x; rels: x*a*x^-1*a, x^2; }")
    assert same_up_to_renaming(extension_presentation(e), d_inf)


def test_extension_b1():
    e = _extension_from_matrix(cyclic(2), IntMatrix.from_rows([[-1, 0], [0, 1]]), 2,
                               lifts=(Word.gen(1),))
    assert same_up_to_renaming(extension_presentation(e), bieberbach_b1(2).presentation)


def test_extension_validation():
    e = ExtensionData(cyclic(2), 1, (), ((Word.gen(3),),), (Word(),))
    with pytest.raises(IndexError):
        extension_presentation(e)
