import pytest

from ariel_rwd.gspn.errors import NetError
from ariel_rwd.gspn.net import ArcKind, Immediate, NetBuilder, Server, Timed
from ariel_rwd.gspn.netfile import dumps_net, load_net, loads_net, save_net

from conftest import NETS


def test_sample_net():
    net = load_net(NETS / "two_state.toml")
    assert [p.name for p in net.places] == ["Up", "Down"]
    assert net.initial_marking == (1, 0)
    assert net.transition("fail").kind == Timed(2.0, Server.INFINITE)
    assert len(net.arcs) == 4


def test_dump_is_byte_stable(tmp_path):
    net = (
        NetBuilder()
        .place("A", 2).place("B")
        .timed("t", 0.5, Server.SINGLE).input("A", "t", 2).output("t", "B")
        .immediate("i", weight=3.0, priority=2).input("B", "i").inhibitor("A", "i").output("i", "A", 2)
        .build()
    )
    text = dumps_net(net)
    again = loads_net(text)
    assert dumps_net(again) == text

    path = save_net(again, tmp_path / "nets" / "n.toml")
    assert path.read_text(encoding="utf-8") == text
    assert again.transition("i").kind == Immediate(3.0, 2)
    assert [a.kind for a in again.arcs].count(ArcKind.INHIBITOR) == 1


def test_defaults_and_comments():
    net = loads_net(
        """
        # minimal
        [places]
        P = 1
        [transitions.go]
        rate = 1.0
        [transitions.now]
        kind = "immediate"
        [[arcs]]
        from = "P"
        to = "go"
        """
    )
    assert net.transition("go").kind == Timed(1.0, Server.INFINITE)
    assert net.transition("now").kind == Immediate(1.0, 1)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("[places]\nP = 1\n[transitions.t]\nkind = \"stochastic\"\n", "unknown kind"),
        ("[places]\nP = 1\n[transitions.t]\nkind = \"timed\"\n", "malformed"),
        ("[places]\nP = 1\n[transitions.t]\nrate = 1.0\n[[arcs]]\nfrom = \"t\"\nto = \"P\"\nkind = \"inhibitor\"\n",
         "must start at a place"),
        ("[places]\nP = 1\n[transitions.t]\nrate = 1.0\n[[arcs]]\nfrom = \"P\"\nto = \"t\"\nkind = \"reset\"\n",
         "unknown kind"),
        ("[places\n", "not valid TOML"),
        ("[places]\nP = 1\n[transitions.t]\nrate = -1.0\n", "positive rate"),
    ],
)
def test_malformed_net_files(text, fragment):
    with pytest.raises(NetError, match=fragment):
        loads_net(text)
