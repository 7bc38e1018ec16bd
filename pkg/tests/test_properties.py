"""Property-based tests (hypothesis)."""

import math

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from tsl.claims import f_of
from tsl.cosets import group_order
from tsl.lattice import (
    AbelianGroup,
    IntMatrix,
    abelian_from_matrix,
    direct_sum,
    gamma_whitehead,
    smith_normal_form,
    tensor_ab,
)
from tsl.perms import PermGroup, mul
from tsl.presentations import (
    Presentation,
    Word,
    cyclic,
    direct_product,
    parse_presentation,
    print_presentation,
    print_word,
)
from tsl.tensor import abelian_tensor_shortcut, tensor_square_nu

words = st.lists(
    st.tuples(st.integers(0, 2), st.integers(-3, 3)), max_size=8
).map(Word)

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-20, 20), min_size=c, max_size=c), min_size=r, max_size=r
        ).map(lambda rows: IntMatrix.from_rows(rows, c))
    )
)

abelian = st.lists(st.sampled_from([0, 2, 3, 4, 5, 6, 8, 9]), max_size=3).map(
    AbelianGroup.from_cyclic
)
finite_abelian = st.lists(st.sampled_from([2, 3, 4, 6, 9]), max_size=3).map(
    AbelianGroup.from_cyclic
)


@given(words)
def test_word_inverse_involution(w):
    assert w.inverse().inverse() == w
    assert w * w.inverse() == Word()
    assert Word(w) == w


@given(words, words, words)
def test_word_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(words)
def test_print_parse_word_roundtrip(w):
    p = Presentation(("a", "b", "c"))
    assert p.word(print_word(w, p.gens)) == w


@given(st.lists(words.filter(bool), max_size=4))
def test_print_parse_presentation_roundtrip(rels):
    p = Presentation(("a", "b", "c"), tuple(rels), "P")
    assert parse_presentation(print_presentation(p)) == p


@given(matrices)
@settings(max_examples=200)
def test_snf_certificate(m):
    u, s, v = smith_normal_form(m)
    assert u @ m @ v == s
    assert s.is_diagonal()
    assert abs(u.det()) == 1 and abs(v.det()) == 1
    d = s.diagonal()
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert b == 0 or (a != 0 and b % a == 0)


@given(matrices.filter(lambda m: m.rows == m.cols))
def test_cokernel_order_is_abs_det(m):
    g = abelian_from_matrix(m)
    det = m.det()
    assert g.order == (abs(det) if det else math.inf)


@given(abelian)
def test_abelian_text_roundtrip(a):
    assert AbelianGroup.parse(str(a)) == a
    assert AbelianGroup.from_json(a.to_json()) == a


@given(abelian, abelian)
def test_tensor_ab_symmetric_and_gamma_additive(a, b):
    assert tensor_ab(a, b) == tensor_ab(b, a)
    assert gamma_whitehead(direct_sum(a, b)) == direct_sum(
        gamma_whitehead(a), gamma_whitehead(b), tensor_ab(a, b)
    )


@given(abelian)
@settings(max_examples=40)
def test_shortcut_identities(a):
    d = abelian_tensor_shortcut(a)
    assert d.tensor == tensor_ab(a, a)
    if d.tensor_order != math.inf:
        assert d.tensor_order == d.nabla.order * d.exterior_order
        assert d.exterior_order == d.schur.order


@given(st.integers(0, 1000), st.integers(0, 1000))
def test_f_of_translation(h, k):
    assert f_of(h, h) == 0
    assert f_of(h, h + k) == k


@given(st.integers(1, 12), st.integers(1, 12))
@settings(max_examples=30, deadline=None)
def test_cyclic_products_enumerate(a, b):
    assert group_order(direct_product(cyclic(a), cyclic(b, "b"))) == a * b


@given(st.lists(st.permutations(list(range(6))), min_size=1, max_size=3))
@settings(max_examples=40, deadline=None)
def test_permgroup_closure(gens):
    g = PermGroup([np.array(x) for x in gens], 6)
    n = g.order()
    assert 720 % n == 0
    for x in g.generators:
        for y in g.generators:
            assert mul(x, y) in g


@given(finite_abelian)
@settings(max_examples=8, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_nu_agrees_with_shortcut_on_abelian(a):
    if a.order > 27:
        return
    gens = tuple(f"g{i}" for i in range(len(a.invariants)))
    rels = [Word.gen(i, n) for i, n in enumerate(a.invariants)]
    rels += [Word([(i, 1), (j, 1), (i, -1), (j, -1)])
             for i in range(len(gens)) for j in range(i + 1, len(gens))]
    d = tensor_square_nu(Presentation(gens, tuple(rels), "A"))
    s = abelian_tensor_shortcut(a)
    assert (d.tensor, d.nabla, d.schur, d.j2) == (s.tensor, s.nabla, s.schur, s.j2)
