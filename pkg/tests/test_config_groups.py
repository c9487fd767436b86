import itertools
import threading

import pytest
from hypothesis import given, strategies as st

from boolinv import config
from boolinv.errors import DomainError, TableFormatError
from boolinv.groups import GroupTable, format_group, parse_group


def test_defaults_and_env():
    assert config.Config() == config.Config(max_elements=5000, horizon=4096)
    env = {"BOOLINV_MAX_ELEMENTS": "12", "BOOLINV_HORIZON": "64"}
    assert config.Config.from_env(env) == config.Config(12, 64)
    assert config.Config.from_env({}) == config.Config()


def test_override_is_scoped():
    before = config.current()
    with config.override(horizon=8):
        assert config.current().horizon == 8
        assert config.current().max_elements == before.max_elements
    assert config.current() == before


def test_override_is_thread_local():
    seen = []
    with config.override(horizon=8):
        t = threading.Thread(target=lambda: seen.append(config.current().horizon))
        t.start()
        t.join()
    assert seen == [config.Config.from_env().horizon]


@given(st.integers(1, 7))
def test_cyclic_groups(k):
    G = GroupTable.cyclic(k)
    assert G.order == k and G.violation() is None
    for a, b in itertools.product(G.elements(), repeat=2):
        assert G.mul(a, b) == (a + b) % k
    assert parse_group(format_group(G)) == G


def test_klein_group_is_not_cyclic():
    mult = tuple(tuple(a ^ b for b in range(4)) for a in range(4))
    V = GroupTable(mult, (0, 1, 2, 3), 0)
    assert not V.is_isomorphic(GroupTable.cyclic(4))
    assert V.is_isomorphic(V)


def test_non_groups_rejected():
    with pytest.raises(DomainError):
        GroupTable(((0, 0), (0, 1)), (0, 1), 1)
    with pytest.raises(DomainError):
        GroupTable.cyclic(0)


@pytest.mark.parametrize(
    "text, line",
    [("", 1), ("grp 2 id=0\n0 1\n1 0\n0 1\n", 1), ("group 2 id=0\n0 1\n1 0\n", 4), ("group 2 id=0\n0 1\n1 5\n0 1\n", 3)],
)
def test_group_parse_errors(text, line):
    with pytest.raises(TableFormatError) as info:
        parse_group(text)
    assert info.value.line == line
