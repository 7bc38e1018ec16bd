import pytest

from tsl.cosets import todd_coxeter
from tsl.families import gn_quotient
from tsl.lattice import AbelianGroup, tensor_ab
from tsl.presentations import Presentation, cyclic, parse_presentation
from tsl.tensor import (
    Method,
    MulTable,
    NotFinite,
    abelian_tensor_shortcut,
    definitional_presentation,
    diagram_report,
    nu_presentation,
    tensor_order_nu,
    tensor_square_definitional,
    tensor_square_nu,
)
from tsl.cosets import EnumerationBudget
from tsl.perms import GroupHom, regular_group

A = AbelianGroup.parse

# literature values of |G (x) G|, M(G)
KNOWN = {
    "C2": (2, "1"), "C3": (3, "1"), "C4": (4, "1"), "C2xC2": (16, "C2"), "C6": (6, "1"),
    "S3": (6, "1"), "D8": (32, "C2"), "Q8": (64, "1"), "C3xC3": (81, "C3"), "A4": (24, "C2"),
}


def test_nu_presentation_shape():
    nu = nu_presentation(cyclic(2))
    assert nu.ngens == 2 and len(nu.relators) == 2 + 2
    assert todd_coxeter(nu).n == 8
    s3 = parse_presentation("group S3 { gens: a, b; rels: a^2, b^3, (a*b)^2; }")
    assert nu_presentation(s3).ngens == 4
    assert len(nu_presentation(s3).relators) == 6 + 2 * 8


def test_nu_s3_order():
    s3 = parse_presentation("group S3 { gens: a, b; rels: a^2, b^3, (a*b)^2; }")
    assert todd_coxeter(nu_presentation(s3)).n == 36 * 6


def test_trivial_group():
    d = tensor_square_nu(Presentation((), (), "T"))
    assert d.tensor_order == 1 and d.schur == AbelianGroup()
    assert tensor_order_nu(Presentation(())) == 1


@pytest.mark.parametrize("name", sorted(KNOWN))
def test_known_values_nu(corpus, name):
    d = tensor_square_nu(corpus[name])
    order, schur = KNOWN[name]
    assert d.tensor_order == order
    assert d.schur == A(schur)
    assert diagram_report(d).ok


def test_c2_details():
    d = tensor_square_nu(cyclic(2))
    assert d.nabla == A("C2") and d.exterior_order == 1 and d.schur == A("1")


def test_c3xc3():
    d = tensor_square_nu(parse_presentation("group G { gens: a, b; rels: a^3, b^3, [a,b]; }"))
    assert d.tensor_order == 81 and d.tensor == A("C3^4") and d.schur == A("C3")


def test_heisenberg_27():
    h = parse_presentation("group H { gens: x, y, z; rels: x^3, y^3, z^3, [x,y]*z^-1, [x,z], [y,z]; }")
    d = tensor_square_nu(h)
    assert d.tensor_order == 729 and d.schur == A("C3 x C3") and d.derived_order == 3


def test_definitional_small():
    assert tensor_square_definitional(cyclic(2)).tensor_order == 2
    v4 = parse_presentation("group V { gens: a, b; rels: a^2, b^2, [a,b]; }")
    d = tensor_square_definitional(v4)
    assert d.tensor_order == 16 and d.exterior_order == 2
    assert d.method is Method.DEFINITIONAL


def test_definitional_cap():
    with pytest.raises(ValueError):
        tensor_square_definitional(cyclic(17))


def test_definitional_presentation_symbols():
    t = MulTable.from_presentation(cyclic(3))
    t.check()
    p = definitional_presentation(t)
    assert p.ngens == 9
    assert p == definitional_presentation(t)


def test_g3_mod2_dual_method():
    q = gn_quotient(3, 2)
    a, b = tensor_square_nu(q), tensor_square_definitional(q)
    assert (a.tensor_order, a.nabla, a.schur, a.j2) == (b.tensor_order, b.nabla, b.schur, b.j2)
    rep = diagram_report(a)
    checks = {n: s for n, s, _ in rep.checks}
    assert checks["j2_central"] == "PASS"
    assert checks["tensor_eq_nabla_times_exterior"] == "PASS"


@pytest.mark.parametrize("text, expected", [
    ("Z", "Z"), ("C4", "C4"), ("C2 x C2", "C2^4"), ("C2 x C4 x Z", None), ("1", "1"),
])
def test_abelian_shortcut(text, expected):
    a = A(text)
    d = abelian_tensor_shortcut(a)
    assert d.tensor == tensor_ab(a, a)
    if expected:
        assert d.tensor == A(expected)
    assert diagram_report(d).ok


def test_abelian_shortcut_exterior():
    d = abelian_tensor_shortcut(A("C2 x C2"))
    assert d.tensor_order == 16 and d.exterior_order == 2
    z2 = abelian_tensor_shortcut(A("Z^2"))
    assert z2.schur == A("Z") and z2.nabla == A("Z^3")


def test_infinite_group_raises_not_finite():
    with pytest.raises(NotFinite):
        tensor_square_nu(parse_presentation("group Z { gens: a; rels: ; }"),
                         EnumerationBudget(max_cosets=1000, max_time=10))


def test_json_shape():
    js = diagram_report(tensor_square_nu(cyclic(2))).to_json()
    for key in ("group", "method", "tensor_order", "nabla", "exterior_order", "schur", "j2", "checks"):
        assert key in js
    assert all(c["status"] in ("PASS", "FAIL") for c in js["checks"])


def test_functoriality_quotient_divides(corpus):
    # explicit surjections G -> Q (images as words in Q), then |Q (x) Q| divides |G (x) G|
    pairs = [("Q8", "C2xC2", ["a", "b"]), ("S3", "C2", ["a", "1"]),
             ("A4", "C3", ["1", "a"]), ("D8", "C2xC2", ["a", "b"])]
    for g, q, images in pairs:
        qt = todd_coxeter(corpus[q])
        target = regular_group(qt)
        perms = [qt.word_perm(corpus[q].word(w)) for w in images]
        hom = GroupHom(corpus[g], target, perms)
        assert hom.image().order() == target.order()
        assert tensor_square_nu(corpus[g]).tensor_order % tensor_square_nu(corpus[q]).tensor_order == 0
