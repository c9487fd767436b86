from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from boolinv.errors import DomainError, ParseError
from boolinv.supernat import (
    INF,
    Supernatural,
    from_generator,
    from_prefix,
    from_supernatural,
    interleaved,
    l_contains,
    l_contains_fraction,
    parse_supernatural,
    power,
    sn_divides,
    sn_equals,
    sn_gcd,
    sn_lcm,
    supernatural_of,
)

import oracles

PRIMES = (2, 3, 5, 7)

supernaturals = st.dictionaries(st.sampled_from(PRIMES), st.sampled_from([1, 2, 3, INF]), max_size=4).map(Supernatural.of)
nonempty = supernaturals.filter(lambda n: bool(n.exps))


def window(seq, k=8):
    return seq.prefix(k if seq.length is None else seq.length)


# -- literals -----------------------------------------------------------------


def test_parse_examples():
    assert parse_supernatural("2^inf * 3^2 * 7") == Supernatural(((2, INF), (3, 2), (7, 1)))
    assert parse_supernatural("  2^inf*3^inf ") == Supernatural(((2, INF), (3, INF)))
    assert parse_supernatural("1") == Supernatural()
    assert str(Supernatural()) == "1"


@given(supernaturals)
def test_text_round_trip(n):
    assert parse_supernatural(str(n)) == n


@pytest.mark.parametrize(
    "text, column",
    [
        ("", 1),
        ("2^inf * 4", 9),
        ("3 * 2", 5),
        ("2^0", 3),
        ("2^", 3),
        ("2 3", 3),
        ("2^inf*x", 7),
        ("* 2", 1),
    ],
)
def test_parse_errors_report_columns(text, column):
    with pytest.raises(ParseError) as info:
        parse_supernatural(text)
    assert info.value.column == column


def test_constructor_validation():
    with pytest.raises(DomainError):
        Supernatural(((4, 1),))
    with pytest.raises(DomainError):
        Supernatural(((3, 1), (2, 1)))
    with pytest.raises(DomainError):
        Supernatural.from_int(0)
    assert Supernatural.from_int(12) == Supernatural(((2, 2), (3, 1)))
    assert Supernatural.from_int(12).value() == 12


# -- arithmetic ---------------------------------------------------------------


def test_division_examples():
    assert sn_divides(parse_supernatural("2^inf"), parse_supernatural("2^inf * 3"))
    assert sn_equals(parse_supernatural("2^inf * 3^2"), parse_supernatural("2^inf*3^2"))
    assert not sn_equals(parse_supernatural("2^inf * 3^2"), parse_supernatural("2^inf * 3^inf"))


@given(supernaturals, supernaturals)
def test_lcm_and_gcd_bound(a, b):
    g, l = sn_gcd(a, b), sn_lcm(a, b)
    assert sn_divides(g, a) and sn_divides(g, b)
    assert sn_divides(a, l) and sn_divides(b, l)
    assert sn_equals(sn_gcd(a, b), sn_gcd(b, a))
    assert sn_divides(a, b) == sn_equals(sn_lcm(a, b), b)


@given(supernaturals, st.integers(1, 2000))
def test_contains_matches_valuations(n, k):
    expected = all(oracles.valuation(k, p) <= n.exponent(p) for p in range(2, k + 1) if k % p == 0 and all(p % r for r in range(2, p)))
    assert n.contains(k) == expected


# -- division sequences -------------------------------------------------------


def test_canonical_sequences():
    assert from_supernatural(parse_supernatural("2^inf")).prefix(4) == (2, 4, 8, 16)
    assert from_supernatural(parse_supernatural("2^inf * 3^inf")).prefix(3) == (2, 36, 216)
    twelve = from_supernatural(Supernatural.from_int(12))
    assert twelve.length == 2 and twelve.prefix(2) == (2, 12)
    with pytest.raises(DomainError):
        twelve.term(3)
    with pytest.raises(DomainError):
        from_supernatural(Supernatural())


@given(nonempty)
def test_canonical_sequence_is_a_proper_division_chain(n):
    terms = window(from_supernatural(n))
    for a, b in zip(terms, terms[1:]):
        assert b % a == 0 and b > a
    if n.is_finite():
        assert terms[-1] == n.value()


@given(nonempty)
def test_canonical_sequence_recovers_supernatural(n):
    sigma = from_supernatural(n)
    bound = supernatural_of(sigma)
    assert bound.exact and bound.value == n
    # valuations of late terms agree with the finite exponents
    last = window(sigma, 6)[-1]
    for p in n.primes:
        e = n.exponent(p)
        if e != INF:
            assert oracles.valuation(last, p) == e


def test_supernatural_of_sequences():
    assert supernatural_of(power(2)).value == parse_supernatural("2^inf")
    assert supernatural_of(power(4)).value == parse_supernatural("2^inf")
    b = supernatural_of(from_prefix([2, 6, 30, 210]))
    assert not b.exact and b.value == parse_supernatural("2*3*5*7")
    g = supernatural_of(from_generator(lambda k: 2**k), horizon=1000)
    assert not g.exact and g.value == parse_supernatural("2^9")


def test_prefix_validation():
    with pytest.raises(DomainError):
        from_prefix([2, 3])
    with pytest.raises(DomainError):
        from_prefix([2, 2])
    with pytest.raises(DomainError):
        from_prefix([])


def test_interleaved_examples():
    assert interleaved(power(2), power(4)) is True
    assert interleaved(power(2), from_prefix([2, 6, 12])) is False
    s = power(3)
    assert interleaved(s, s) is True
    assert interleaved(from_prefix([2, 4, 8]), power(2)) is None
    assert interleaved(from_prefix([2, 4]), from_prefix([2, 4])) is None


@given(nonempty, nonempty)
def test_interleaving_agrees_with_equality_and_direct_oracle(a, b):
    sa, sb = from_supernatural(a), from_supernatural(b)
    verdict = interleaved(sa, sb)
    assert verdict == sn_equals(a, b)
    assert verdict == oracles.directly_interleaved(window(sa), window(sb))


# -- rational MV-chains -------------------------------------------------------


def test_l_contains_examples():
    two = parse_supernatural("2^inf")
    assert l_contains(two, 3, 8) and not l_contains(two, 1, 3)
    assert l_contains(two, 0, 1) and l_contains(two, 1, 1)
    twelve = Supernatural.from_int(12)
    assert l_contains(twelve, 5, 12) and not l_contains(twelve, 1, 8)
    with pytest.raises(DomainError):
        l_contains(two, 2, 4)
    with pytest.raises(DomainError):
        l_contains(two, 5, 4)


@given(supernaturals, st.fractions(min_value=0, max_value=1, max_denominator=500))
def test_l_contains_matches_prime_scan(n, x):
    assert l_contains_fraction(n, x) == oracles.fraction_in_chain(n.as_dict(), x)


@given(nonempty.filter(lambda n: n.is_finite()), st.data())
def test_finite_chain_is_multiples_of_reciprocal(n, data):
    v = n.value()
    x = Fraction(data.draw(st.integers(0, 60)), data.draw(st.integers(1, 60)))
    if x > 1:
        return
    # for finite n the chain is {j/n}
    assert l_contains_fraction(n, x) == ((x * v).denominator == 1)
