import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from boolinv import config
from boolinv.errors import PreconditionError, ResourceLimitError, TableFormatError, ValidationError
from boolinv.finmon import (
    FinBIM,
    Morphism,
    boolean_subalgebra_generated,
    direct_product,
    format_bim,
    ge_submonoid,
    invariant_closure,
    is_subalgebra,
    join_closure,
    parse_bim,
    relations,
    submonoid,
    validate_bim,
)
from boolinv.rook import RookMatrix

import oracles
from oracles import I, SMALL, corpus

names = st.sampled_from(SMALL)


def _chain3():
    # 0 < e < 1 under min: inverse, but E is not Boolean
    mult = [[min(a, b) for b in range(3)] for a in range(3)]
    return mult, [0, 1, 2], 0, 2


def _table(S):
    return S.mult.tolist(), S.inv.tolist(), S.zero, S.one


def _brute_inverse_monoid(mult, inv, one):
    n = len(mult)
    for a, b, c in itertools.product(range(n), repeat=3):
        if mult[mult[a][b]][c] != mult[a][mult[b][c]]:
            return False
    for a in range(n):
        if mult[one][a] != a or mult[a][one] != a:
            return False
        if mult[mult[a][inv[a]]][a] != a or mult[mult[inv[a]][a]][inv[a]] != inv[a]:
            return False
    return True


# -- validation ---------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(SMALL))
def test_corpus_members_validate(name):
    assert validate_bim(*_table(corpus()[name]))


def test_three_chain_is_not_boolean():
    report = validate_bim(*_chain3())
    assert not report
    assert report.axiom == "boolean idempotents"
    assert report.detail == "idempotent has no complement"
    with pytest.raises(ValidationError):
        FinBIM(*_chain3())


def test_two_element_boolean_algebra_validates():
    S = FinBIM([[0, 0], [0, 1]], [0, 1], 0, 1)
    assert S.idempotents == (0, 1) or list(S.idempotents) == [0, 1]


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
def test_perturbed_tables_are_rejected_when_axioms_break(a, b, v):
    mult, inv, zero, one = _table(I(2))
    if mult[a][b] == v:
        return
    mult[a][b] = v
    if not _brute_inverse_monoid(mult, inv, one):
        assert not validate_bim(mult, inv, zero, one)


def test_validation_report_names_identity_failure():
    mult, inv, zero, one = _table(I(2))
    mult[one][3] = 4 if mult[one][3] != 4 else 5
    report = validate_bim(mult, inv, zero, one)
    assert report.axiom == "identity"
    assert "identity" in str(report)


def test_resource_limit():
    with config.override(max_elements=5):
        with pytest.raises(ResourceLimitError):
            FinBIM(*_table(I(2)))


# -- order structure against brute force -------------------------------------


@pytest.mark.parametrize("name", ["I2", "I3", "R2Z2", "I2xI1", "B4"])
def test_leq_and_compatibility_match_brute_force(name):
    S = corpus()[name]
    for a in range(S.n):
        for b in range(S.n):
            assert S.leq(a, b) == oracles.leq(S, a, b)
            assert S.compatible(a, b) == oracles.compatible(S, a, b)


@pytest.mark.parametrize("name", ["I2", "I3", "R2Z2", "I2xI1", "B4", "G0"])
def test_join_meet_phi_match_brute_force(name):
    S = corpus()[name]
    for a in range(S.n):
        assert S.fixed_point(a) == oracles.phi(S, a)
        for b in range(S.n):
            assert S.meet(a, b) == oracles.glb(S, a, b)
            if S.compatible(a, b):
                assert S.join(a, b) == oracles.lub(S, a, b)
            else:
                with pytest.raises(PreconditionError):
                    S.join(a, b)


@given(names, st.data())
def test_fixed_point_is_largest_idempotent_below(name, data):
    S = corpus()[name]
    a = data.draw(st.integers(0, S.n - 1))
    e = S.fixed_point(a)
    assert S.is_idempotent(e) and S.leq(e, a)
    assert S.mul(a, e) == e
    for f in S.idempotents:
        if S.leq(f, a):
            assert S.leq(f, e)


@given(names, st.data())
def test_meet_identities(name, data):
    S = corpus()[name]
    a, b, c = (data.draw(st.integers(0, S.n - 1)) for _ in range(3))
    m = S.meet(a, b)
    assert m == S.meet(b, a)
    assert m == S.mul(S.fixed_point(S.mul(a, S.inverse(b))), b)
    assert S.meet(a, a) == a
    assert S.meet(S.meet(a, b), c) == S.meet(a, S.meet(b, c))
    # idempotents distribute over meets
    if S.is_idempotent(c):
        assert S.mul(c, m) == S.meet(S.mul(c, a), S.mul(c, b))


@given(names, st.data())
def test_join_distributes_and_is_idempotent_on_compatibles(name, data):
    S = corpus()[name]
    a, b, c = (data.draw(st.integers(0, S.n - 1)) for _ in range(3))
    if not S.compatible(a, b):
        return
    j = S.join(a, b)
    assert S.leq(a, j) and S.leq(b, j)
    assert S.mul(c, j) == S.join(S.mul(c, a), S.mul(c, b))
    assert S.mul(j, c) == S.join(S.mul(a, c), S.mul(b, c))
    assert S.dom(j) == S.idempotent_join(S.dom(a), S.dom(b))


@given(names, st.data())
def test_complement_is_boolean(name, data):
    S = corpus()[name]
    e = data.draw(st.sampled_from(list(S.idempotents)))
    c = S.complement(e)
    assert S.mul(e, c) == S.zero
    assert S.idempotent_join(e, c) == S.one
    assert S.complement(c) == e


@given(names, st.data())
def test_relations_record(name, data):
    S = corpus()[name]
    a, b = (data.draw(st.integers(0, S.n - 1)) for _ in range(2))
    rel = relations(S, a, b)
    assert rel.leq == oracles.leq(S, a, b)
    assert rel.compatible == oracles.compatible(S, a, b)


@pytest.mark.parametrize("name", ["I2", "I3", "R2Z2", "I2xI1"])
def test_d_relation_matches_witness_search(name):
    S = corpus()[name]
    E = list(S.idempotents)
    for e in E:
        for f in E:
            assert S.d_related(e, f) == oracles.d_related(S, e, f)


@pytest.mark.parametrize("name", ["I2", "I3", "I2xI1", "B4"])
def test_j_order_matches_principal_ideal_inclusion(name):
    S = corpus()[name]
    for a in range(S.n):
        for b in range(S.n):
            assert S.j_leq(a, b) == (oracles.two_sided_ideal(S, a) <= oracles.two_sided_ideal(S, b))


def test_atom_counts():
    for n in range(1, 5):
        assert len(I(n).atomic_idempotents()) == n
    assert len(corpus()["I2xI2"].atomic_idempotents()) == 4


# -- sub-structures -----------------------------------------------------------


def test_boolean_subalgebra_generated_by_one_atom():
    S = I(3)
    e1 = S.index_of(RookMatrix.E(3, 1))
    B = boolean_subalgebra_generated(S, [e1])
    assert B == {S.zero, S.one, e1, S.complement(e1)}


def test_ge_submonoid_of_units_and_all_idempotents_is_everything():
    # finite BIMs are factorizable
    S = I(3)
    assert ge_submonoid(S, S.units, S.idempotents) == frozenset(S.elements())


def test_ge_submonoid_rejects_non_invariant_idempotents():
    S = I(2)
    e1 = S.index_of(RookMatrix.E(2, 1))
    with pytest.raises(PreconditionError):
        ge_submonoid(S, S.units, [S.zero, e1, S.one])


def test_invariant_closure_of_an_atom_is_all_idempotents():
    S = I(3)
    e1 = S.index_of(RookMatrix.E(3, 1))
    assert invariant_closure(S, [e1], S.units) == frozenset(S.idempotents)
    assert invariant_closure(S, [e1], [S.one]) == boolean_subalgebra_generated(S, [e1])


def test_join_closure_of_diagonal_image():
    # products of units and idempotents already exhaust a finite BIM
    S = I(2)
    T = ge_submonoid(S, S.units, S.idempotents)
    assert join_closure(S, T) == frozenset(S.elements())
    D = ge_submonoid(S, [S.one], S.idempotents)
    assert join_closure(S, D) == D
    assert is_subalgebra(S, join_closure(S, T))


def test_is_subalgebra_brute():
    S = I(2)
    assert is_subalgebra(S, S.elements())
    assert is_subalgebra(S, S.idempotents)
    assert is_subalgebra(S, [S.zero, S.one])
    assert not is_subalgebra(S, [S.one] + list(S.units))
    e1 = S.index_of(RookMatrix.E(2, 1))
    assert not is_subalgebra(S, [S.zero, S.one, e1])


def test_submonoid_materializes_idempotents():
    S = I(3)
    E, idx = submonoid(S, S.idempotents)
    assert E.n == 8 and all(E.is_idempotent(a) for a in E.elements())
    assert tuple(idx) == tuple(sorted(S.idempotents))


def test_direct_product_counts_and_componentwise_mult():
    S, T = I(2), I(1)
    P = direct_product(S, T)
    assert P.n == 14
    for a, b in itertools.product(range(P.n), repeat=2):
        (a1, a2), (b1, b2) = divmod(a, T.n), divmod(b, T.n)
        assert P.mul(a, b) == S.mul(a1, b1) * T.n + T.mul(a2, b2)
    assert validate_bim(*_table(P))


# -- morphisms ----------------------------------------------------------------


def test_identity_and_diagonal_morphisms():
    S = I(2)
    assert Morphism.identity(S).is_morphism()
    P = direct_product(S, S)
    diag = Morphism(S, P, lambda a: a * S.n + a)
    assert diag.is_morphism() and diag.is_injective()
    proj = Morphism(P, S, lambda p: p // S.n)
    assert proj.compose(diag).agrees_with(Morphism.identity(S))


def test_constant_map_is_not_a_morphism():
    S = I(2)
    assert not Morphism(S, S, lambda a: S.zero).is_morphism()


# -- text format --------------------------------------------------------------


@pytest.mark.parametrize("name", ["I1", "I2", "R2Z2", "B4"])
def test_text_round_trip(name):
    S = corpus()[name]
    T = parse_bim(format_bim(S))
    assert np.array_equal(T.mult, S.mult) and np.array_equal(T.inv, S.inv)
    assert (T.zero, T.one) == (S.zero, S.one)


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("", 1, 1),
        ("bam 2 zero=0 one=1\n0 0\n0 1\n0 1\n", 1, 1),
        ("bim 2 zero=0 one=1\n0 0\n0 x\n0 1\n", 3, 3),
        ("bim 2 zero=0 one=1\n0 0\n0 1 1\n0 1\n", 3, 5),
        ("bim 2 zero=0 one=1\n0 0\n0 7\n0 1\n", 3, 3),
        ("bim 2 zero=0 one=1\n0 0\n0 1\n", 4, 1),
    ],
)
def test_parse_errors_carry_positions(text, line, column):
    with pytest.raises(TableFormatError) as info:
        parse_bim(text)
    assert (info.value.line, info.value.column) == (line, column)
