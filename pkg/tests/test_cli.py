import pytest

from ariel_rwd.cli import parse_args
from ariel_rwd.gspn.netfile import load_net
from ariel_rwd.main import main
from ariel_rwd.runtime.metrics import METRICS_HEADER
from ariel_rwd.rwd.sweep import SWEEP_HEADER
from conftest import ARIEL, NETS, SCENARIOS


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_parse_args():
    args = parse_args(["--log-level", "DEBUG", "rwd-sweep", "--policies", "AND, OR", "--rates", "0.5,1"])
    assert args.command == "rwd-sweep"
    assert args.log_level == "DEBUG"
    assert args.options["policies"] == ["AND", "OR"]
    assert args.options["rates"] == [0.5, 1.0]


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["rwd-sweep", "--rates", "fast"], ["gspn-query", "--rwd", "OR"]])
def test_usage_errors(argv):
    assert main(argv) == 1


def test_version(capsys):
    assert main(["--version"]) == 0
    assert "ariel-rwd" in capsys.readouterr().out


def test_net_source_is_required(capsys):
    assert main(["gspn-solve"]) == 1
    assert "--rwd" in capsys.readouterr().err


def test_compile(workdir):
    sources = [str(ARIEL / n) for n in ("config.ariel", "alarm.ariel", "logical.ariel", "and_strategy.ariel")]
    argv = ["compile", *sources, "--defs", str(ARIEL / "watchdogs.defs"), "--out-dir", "out", "--name", "rwd_and"]
    assert main(argv) == 0
    assert (workdir / "out" / "rwd_and.rcode").read_text(encoding="utf-8")
    assert "[tasks" in (workdir / "out" / "rwd_and.deployment.toml").read_text(encoding="utf-8")
    assert any((workdir / "log").iterdir())


def test_compile_without_definitions(capsys):
    assert main(["compile", str(ARIEL / "logical.ariel"), "--out-dir", "out"]) == 2
    assert "unresolved macro" in capsys.readouterr().err


def test_missing_input(capsys):
    assert main(["gspn-solve", "missing.toml"]) == 2
    assert "not found" in capsys.readouterr().err


def test_missing_config_file():
    assert main(["--config-file", "nope.toml", "gspn-solve", "--rwd", "OR"]) == 2


def test_gspn_solve(capsys, workdir):
    assert main(["gspn-solve", str(NETS / "two_state.toml"), "--states", "states.csv"]) == 0
    assert capsys.readouterr().out == "transition,throughput\nfail,0.666666666667\nrepair,0.666666666667\n"
    lines = (workdir / "states.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "state,marking,probability"
    assert len(lines) == 3


def test_state_cap_is_an_analysis_failure(capsys):
    assert main(["gspn-solve", "--rwd", "OR", "--state-cap", "5"]) == 3
    assert "StateSpaceExceeded" in capsys.readouterr().err


def test_gspn_invariants(capsys):
    assert main(["gspn-invariants", "--rwd", "AND"]) == 0
    captured = capsys.readouterr()
    assert sorted(captured.out.splitlines()) == ["1*Ap1 + 1*ApK + 1*Ap2 + 1*Rst = 1", "1*Wd1 + 1*Wd2 + 1*Wd3 = 3"]
    assert "not covered" not in captured.err


def test_gspn_invariants_reports_uncovered_places(capsys, workdir):
    net = workdir / "source.toml"
    net.write_text(
        "[places]\nP = 0\nQ = 1\n\n[transitions.gen]\nkind = \"timed\"\nrate = 1.0\n\n[[arcs]]\nfrom = \"gen\"\nto = \"P\"\n",
        encoding="utf-8",
    )
    assert main(["gspn-invariants", str(net)]) == 0
    captured = capsys.readouterr()
    assert captured.out == "1*Q = 1\n"
    assert "not covered by any invariant: P" in captured.err


def test_gspn_query(capsys):
    assert main(["gspn-query", "--rwd", "OR", "--always-zero", "Wd2"]) == 0
    assert capsys.readouterr().out == "always Wd2 = 0 over tangible states: true\n"

    assert main(["gspn-query", "--rwd", "OR", "--exists-enabled", "delayed,faulty", "--place", "Wd3", "--at-least", "2"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "exists delayed or faulty enabled with Wd3 >= 2: true"
    assert out[1].startswith("state ")


def test_gspn_query_unknown_place():
    assert main(["gspn-query", "--rwd", "OR", "--always-zero", "Wd9"]) == 2


def test_simulate(capsys, workdir):
    assert main(["simulate", str(SCENARIOS / "no_fault.toml"), "--trace", "trace.txt"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(METRICS_HEADER)
    assert len(lines) == 2
    assert (workdir / "trace.txt").read_text(encoding="utf-8")


def test_simulate_replications(capsys):
    assert main(["simulate", str(SCENARIOS / "client_crash_or.toml"), "--replications", "3", "--seed", "5"]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert [row.split(",")[1] for row in rows] == ["5", "6", "7"]


@pytest.mark.parametrize(
    "argv, files",
    [
        (["simulate", str(SCENARIOS / "heartbeat_delay.toml"), "--policy", "OR", "--replications", "3", "--trace", "run.trace"], ["run.trace"]),
        (["rwd-sweep", "--policies", "AND,2oo3", "--rates", "0.5,2", "--gnuplot", "run.dat"], ["run.dat"]),
    ],
)
def test_repeated_invocations_are_byte_identical(capsys, workdir, argv, files):
    outputs = []
    for _ in range(2):
        assert main(argv) == 0
        written = [(workdir / name).read_bytes() for name in files]
        outputs.append((capsys.readouterr().out.encode("utf-8"), written))
    assert outputs[0] == outputs[1]
    assert outputs[0][0]


def test_rwd_sweep(capsys, workdir):
    argv = ["rwd-sweep", "--policies", "AND,OR", "--rates", "1", "--gnuplot", "sweep.dat", "--render-dir", "md"]
    assert main(argv) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(SWEEP_HEADER)
    assert [line.split(",")[0] for line in lines[1:]] == ["AND", "OR"]
    assert (workdir / "sweep.dat").read_text(encoding="utf-8").startswith("# policy AND")
    assert sorted(p.name for p in (workdir / "md").iterdir()) == ["rwd_AND.md", "rwd_OR.md"]


def test_rwd_sweep_writes_nets(workdir):
    assert main(["rwd-sweep", "--policies", "2oo3", "--rates", "0.5", "--nets-dir", "nets", "--out", "s.csv"]) == 0
    net = load_net(workdir / "nets" / "rwd_2oo3_0.5.toml")
    assert net.transition("timeout").kind.rate == 0.5
    assert (workdir / "s.csv").exists()


def test_rwd_sweep_failed_rows(capsys, workdir):
    (workdir / "small.toml").write_text("[gspn]\nstate_cap = 5\n", encoding="utf-8")
    assert main(["--config-file", "small.toml", "rwd-sweep", "--policies", "OR", "--rates", "1,2"]) == 3
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3
    assert all(line.endswith(",failed") for line in lines[1:])


def test_rwd_sweep_bad_policy():
    assert main(["rwd-sweep", "--policies", "MAJORITY", "--rates", "1"]) == 2


def test_rwd_validate(capsys, workdir):
    argv = ["rwd-validate", "--policies", "AND", "--horizon", "50", "--warmup", "5", "--replications", "3", "--out", "v.csv"]
    assert main(argv) == 0
    lines = (workdir / "v.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "policy,transition,analytic,mc_mean,mc_se,z,agrees"
    assert len(lines) == 11


def test_rwd_validate_warmup_beyond_horizon():
    # the configured warm-up of 100 leaves nothing of a 50-unit horizon
    assert main(["rwd-validate", "--policies", "AND", "--horizon", "50", "--replications", "3"]) == 1
