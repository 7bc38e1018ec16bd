import pytest

from tsl.presentations import (
    Presentation,
    PresentationError,
    PresentationSyntaxError,
    Word,
    abelianized_relation_matrix,
    comm,
    conj,
    cyclic,
    cyclic_reduce,
    direct_product,
    free_abelian,
    parse_presentation,
    print_presentation,
    print_word,
    same_up_to_renaming,
)

a, b = Word.gen(0), Word.gen(1)


def test_word_reduction():
    assert Word([(0, 2), (0, -2)]) == Word()
    assert Word([(0, 1), (1, 1), (1, -1), (0, 1)]) == Word([(0, 2)])
    assert (a * b).inverse() == Word([(1, -1), (0, -1)])
    assert (a ** 3).length() == 3


def test_commutator_and_conjugation_conventions():
    assert comm(a, b) == Word([(0, 1), (1, 1), (0, -1), (1, -1)])
    assert conj(a, b) == Word([(0, 1), (1, 1), (0, -1)])
    assert comm(a, a) == Word()


def test_flat_columns():
    assert Word([(1, 2), (0, -1)]).flat() == [2, 2, 1]


def test_cyclic_reduce():
    assert cyclic_reduce(a * b * a.inverse()) == b
    assert cyclic_reduce(a * b * a) == Word([(0, 2), (1, 1)])


def test_parse_s3():
    p = parse_presentation("group S3 { gens: a, b; rels: a^2, b^3, (a*b)^2; }")
    assert p.name == "S3" and p.gens == ("a", "b")
    assert p.relators == (a ** 2, b ** 3, (a * b) ** 2)


def test_parse_commutator_and_comments():
    text = """# a comment
    group H { gens: x, y; rels: [x, y]^2, x^-3, 1; }"""
    p = parse_presentation(text)
    assert p.relators == (comm(a, b) ** 2, a ** -3)


def test_parse_empty_lists():
    p = parse_presentation("group T { gens: ; rels: ; }")
    assert p.ngens == 0 and p.relators == ()


@pytest.mark.parametrize("text, line, col", [
    ("group G { gens: a; rels: b; }", 1, 26),
    ("group G { gens: a, a; rels: a; }", 1, 20),
    ("group G { gens: a; rels: a^; }", 1, 28),
    ("group G {\n gens: a;\n rels: a $ a; }", 3, 10),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(PresentationSyntaxError) as e:
        parse_presentation(text)
    assert (e.value.line, e.value.col) == (line, col)


def test_print_roundtrip():
    p = parse_presentation("group Q8 { gens: a, b; rels: a^4, a^2*b^-2, b*a*b^-1*a; }")
    assert parse_presentation(print_presentation(p)) == p
    assert print_word(Word(), p.gens) == "1"
    assert print_word(a * b ** -1, p.gens) == "a*b^-1"


def test_presentation_validation():
    with pytest.raises(PresentationError):
        Presentation(("a", "a"))
    with pytest.raises(PresentationError):
        Presentation(("a",), (Word.gen(1),))
    with pytest.raises(PresentationError):
        Presentation(("1a",))


def test_direct_product_renames_and_commutes():
    p = direct_product(cyclic(2), cyclic(3))
    assert p.gens == ("a", "a_1")
    assert comm(a, b) in p.relators
    assert len(p.relators) == 3


def test_free_abelian():
    p = free_abelian(3)
    assert p.ngens == 3 and len(p.relators) == 3


def test_abelianized_matrix():
    p = parse_presentation("group S3 { gens: a, b; rels: a^2, b^3, (a*b)^2; }")
    assert abelianized_relation_matrix(p).to_rows() == [[2, 0], [0, 3], [2, 2]]


def test_same_up_to_renaming():
    p = parse_presentation("group P { gens: x, t; rels: t^2, t*x*t^-1*x; }")
    q = parse_presentation("group Q { gens: a, s; rels: s^-1*a*s*a, s^2; }")
    assert same_up_to_renaming(p, q) is not None
    r = parse_presentation("group R { gens: a, s; rels: s^3, s*a*s^-1*a; }")
    assert same_up_to_renaming(p, r) is None
