import pytest

from ariel_rwd.ariel.definitions import parse_definitions
from ariel_rwd.ariel.errors import DefinitionsError


def test_parse_with_comments_and_blank_lines():
    table = parse_definitions("# header\nN1=1\n\n  W1 = 21  # first watchdog\n")
    assert table == {"N1": 1, "W1": 21}


def test_sample_definitions(defs):
    assert defs["BEATCOUNT"] == 500
    assert (defs["W1"], defs["W2"], defs["W3"]) == (21, 22, 23)


def test_malformed_line():
    with pytest.raises(DefinitionsError) as info:
        parse_definitions("N1=1\nN2 two\n")
    assert info.value.line == 2


def test_negative_value():
    with pytest.raises(DefinitionsError, match="non-negative"):
        parse_definitions("N1=-1")


def test_conflicting_redefinition():
    with pytest.raises(DefinitionsError, match="redefined"):
        parse_definitions("N1=1\nN1=2")
    assert parse_definitions("N1=1\nN1=1") == {"N1": 1}
