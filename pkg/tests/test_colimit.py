import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from boolinv import config
from boolinv.colimit import (
    UHFSpec,
    diagonal_idempotent,
    element,
    embed,
    eq,
    finite_type_certificate,
    inverse,
    join,
    lift,
    meet,
    multiply,
    parse_spec,
    random_element,
    stage,
    uhf_isomorphic,
    uhf_mean,
    uhf_mv_probe,
)
from boolinv.errors import DomainError, ParseError, ResourceLimitError
from boolinv.rook import RookAlgebra, RookMatrix, StandardMorphism, standard_map
from boolinv.supernat import from_generator, l_contains, parse_supernatural

TWO = parse_spec("2^inf")
SIX = parse_spec("2^inf * 3^inf")


def test_stage_sizes_and_levels():
    assert [TWO.size(k) for k in (1, 2, 3)] == [2, 4, 8]
    assert stage(TWO, 2) == RookAlgebra(4)
    assert TWO.max_level() == 12
    with config.override(horizon=64):
        assert TWO.max_level() == 6
        with pytest.raises(ResourceLimitError):
            TWO.check_level(7)
    with pytest.raises(DomainError):
        TWO.check_level(0)


def test_spec_parsing():
    assert str(TWO) == "2^inf"
    s = parse_spec("seq: 2,4,8")
    assert s.sequence.prefix(3) == (2, 4, 8)
    with pytest.raises(DomainError):
        s.check_level(4)
    for bad in ("12", "seq: 2,x", "seq: 2,3", "2^inf * y"):
        with pytest.raises(ParseError):
            parse_spec(bad)


def test_embeddings():
    A = RookMatrix.unit(2, 1, 2)
    assert embed(TWO, 1, 2)(A) == standard_map(StandardMorphism(2, 2))(A)
    assert embed(TWO, 1, 3)(A) == standard_map(StandardMorphism(2, 4))(A)
    assert embed(TWO, 2, 2)(A.block_sum(2)) == A.block_sum(2)
    with pytest.raises(DomainError):
        embed(TWO, 2, 1)


@pytest.mark.parametrize("spec", [TWO, parse_spec("3^inf"), SIX])
def test_functoriality(spec):
    rng = random.Random(3)
    top = spec.max_level()
    for k, l, m in itertools.combinations_with_replacement(range(1, top + 1), 3):
        outer, inner, whole = embed(spec, l, m), embed(spec, k, l), embed(spec, k, m)
        Rk = stage(spec, k)
        for A in [Rk.zero, Rk.one] + [random_element(Rk, rng) for _ in range(3)]:
            assert outer(inner(A)) == whole(A)


# -- elements -----------------------------------------------------------------


def test_normalization():
    E1 = RookMatrix.E(2, 1)
    a = element(TWO, 1, E1)
    b = element(TWO, 2, E1.block_sum(2))
    assert b.level == 1 and b.value == E1
    assert eq(a, b) and a == b and hash(a) == hash(b)
    c = element(TWO, 2, RookMatrix.E(4, 1))
    assert c.level == 2 and not eq(a, c)
    with pytest.raises(DomainError):
        element(TWO, 1, RookMatrix.E(3, 1))


def test_mixed_specs_are_rejected():
    a = element(TWO, 1, RookMatrix.E(2, 1))
    b = element(parse_spec("2^inf"), 1, RookMatrix.E(2, 1))
    with pytest.raises(DomainError):
        lift(a, b)


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32))
def test_operations_commute_with_embedding(k, l, seed):
    rng = random.Random(seed)
    Rk, Rl = RookAlgebra(TWO.size(k)), RookAlgebra(TWO.size(l))
    a = element(TWO, k, random_element(Rk, rng))
    b = element(TWO, l, random_element(Rl, rng))
    x, y = lift(a, b)
    R = RookAlgebra(x.value.n)
    assert eq(multiply(a, b), element(TWO, x.level, R.mul(x.value, y.value)))
    assert eq(meet(a, b), element(TWO, x.level, R.meet(x.value, y.value)))
    assert eq(multiply(a, multiply(inverse(a), a)), a)
    if R.compatible(x.value, y.value):
        assert eq(join(a, b), element(TWO, x.level, R.join(x.value, y.value)))


@pytest.mark.parametrize("spec", [TWO, parse_spec("3^inf")])
def test_meet_stability(spec):
    rng = random.Random(5)
    for k in (1, 2):
        Rk = stage(spec, k)
        for _ in range(30):
            A, B = random_element(Rk, rng), random_element(Rk, rng)
            for l in range(k, 4):
                if spec.size(l) > 100:
                    break
                up = embed(spec, k, l)
                assert up(Rk.meet(A, B)) == stage(spec, l).meet(up(A), up(B))


# -- means and probes ---------------------------------------------------------


def test_means():
    e = element(TWO, 1, RookMatrix.E(2, 1))
    assert uhf_mean(e) == Fraction(1, 2)
    assert uhf_mean(element(TWO, 3, RookMatrix.E(2, 1).block_sum(4))) == Fraction(1, 2)
    assert uhf_mean(element(TWO, 2, RookMatrix.identity(4))) == 1
    assert uhf_mean(element(TWO, 2, RookMatrix.zero(4))) == 0
    with pytest.raises(DomainError):
        uhf_mean(element(TWO, 1, RookMatrix.unit(2, 1, 2)))


@pytest.mark.parametrize("k", [1, 2])
def test_attained_means_at_a_stage(k):
    n = TWO.size(k)
    R = stage(TWO, k)
    means = {uhf_mean(element(TWO, k, A)) for A in R.elements() if R.is_idempotent(A)}
    assert means == {Fraction(j, n) for j in range(n + 1)}
    assert uhf_mean(element(TWO, k, diagonal_idempotent(n, 1))) == Fraction(1, n)


def test_probe_examples():
    assert uhf_mv_probe(TWO, 3, 8) is True
    assert uhf_mv_probe(TWO, 1, 3) is False
    assert uhf_mv_probe(TWO, 0, 1) is True and uhf_mv_probe(TWO, 1, 1) is True
    with pytest.raises(DomainError):
        uhf_mv_probe(TWO, 2, 4)


def test_probe_is_unknown_without_exact_supernatural():
    seq = parse_spec("seq: 2,4,8")
    assert uhf_mv_probe(seq, 1, 4) is True
    assert uhf_mv_probe(seq, 1, 3) is None
    gen = UHFSpec.from_sequence(from_generator(lambda k: 2**k))
    assert uhf_mv_probe(gen, 1, 3) is None


@given(st.sampled_from(["2^inf", "3^inf", "2^inf * 3^inf", "2^inf * 5^2", "2 * 3^inf"]), st.fractions(0, 1, max_denominator=200))
def test_probe_agrees_with_chain_membership(text, x):
    spec = parse_spec(text)
    with config.override(horizon=10**9):
        v = uhf_mv_probe(spec, x.numerator, x.denominator)
    assert v == l_contains(spec.supernatural.value, x.numerator, x.denominator)


def test_isomorphism_decisions():
    assert uhf_isomorphic(TWO, parse_spec("2^inf")) is True
    assert uhf_isomorphic(TWO, SIX) is False
    p4 = UHFSpec.from_sequence(from_generator(lambda k: 4**k, parse_supernatural("2^inf")))
    assert uhf_isomorphic(TWO, p4) is True
    assert uhf_isomorphic(parse_spec("seq: 2,4,8"), TWO) is None


# -- certificates -------------------------------------------------------------


def test_certificate_for_two_power():
    cert = finite_type_certificate(TWO, 2)
    assert cert.ok
    assert [m.elements for m in cert.members] == [7, 209]
    assert "ok=true" in cert.summary()
    single = finite_type_certificate(TWO, 1)
    assert single.ok and len(single.members) == 1


def test_certificate_respects_size_bound():
    with pytest.raises(ResourceLimitError):
        finite_type_certificate(TWO, 3)
