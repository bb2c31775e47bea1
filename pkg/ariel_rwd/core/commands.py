"""
Command handlers for ariel-rwd.

Each handler takes the parsed options and the configuration, writes its
results and returns True on success. Exceptions are mapped to exit codes by
`handle_command`.
"""

import logging
from collections.abc import Callable
from dataclasses import replace
from pathlib import Path
from typing import Any

from ariel_rwd.ariel.ast import ArielProgram
from ariel_rwd.ariel.compiler import compile_recovery
from ariel_rwd.ariel.definitions import load_definitions
from ariel_rwd.ariel.deployment import emit_config
from ariel_rwd.ariel.errors import ArielError
from ariel_rwd.ariel.parser import parse_source
from ariel_rwd.ariel.semantics import check_references
from ariel_rwd.cli import UsageError
from ariel_rwd.config import Config
from ariel_rwd.gspn.analysis import SolverSettings, solve
from ariel_rwd.gspn.errors import AnalysisError
from ariel_rwd.gspn.invariants import covered_places, p_invariants
from ariel_rwd.gspn.net import PetriNet
from ariel_rwd.gspn.netfile import load_net
from ariel_rwd.gspn.query import always_zero, exists_enabled
from ariel_rwd.gspn.reachability import reachability
from ariel_rwd.runtime.measure import measure_policy
from ariel_rwd.runtime.metrics import metrics_csv
from ariel_rwd.runtime.scenario import load_scenario
from ariel_rwd.runtime.simulator import run
from ariel_rwd.rwd.builder import build
from ariel_rwd.rwd.params import RwdParams
from ariel_rwd.rwd.render import render_model
from ariel_rwd.rwd.sweep import SWEEP_HEADER, gnuplot_data, sweep, sweep_csv
from ariel_rwd.rwd.validate import VALIDATION_HEADER, validate_model, validation_csv
from ariel_rwd.ui.console import print_error, print_info, print_table, write_data
from ariel_rwd.utils.file_utils import csv_text, format_number, read_text, write_text

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_ANALYSIS = 3


# Command handler type
CommandHandler = Callable[[dict[str, Any], Config], bool]


# Command registry
COMMANDS: dict[str, CommandHandler] = {}


def register_command(name: str) -> Callable[[CommandHandler], CommandHandler]:
    """
    Decorator to register a command handler.

    Args:
        name: Name of the command

    Returns:
        Decorator function
    """
    def decorator(func: CommandHandler) -> CommandHandler:
        COMMANDS[name] = func
        return func
    return decorator


def handle_command(command: str, args: dict[str, Any], config: Config) -> int:
    """
    Run a command and translate its outcome into an exit code.

    Args:
        command: Name of the command
        args: Command options
        config: Application configuration

    Returns:
        0 on success, 1 on usage errors, 2 on invalid input, 3 on analysis failures
    """
    if command not in COMMANDS:
        logging.error(f"Unknown command: {command}")
        print_error(f"unknown command '{command}'")
        return EXIT_USAGE

    try:
        ok = COMMANDS[command](args, config)
    except UsageError as e:
        logging.error(f"Usage error in {command}: {e}")
        print_error(str(e))
        return EXIT_USAGE
    except AnalysisError as e:
        logging.error(f"Analysis failed in {command}: {e}", exc_info=True)
        print_error(f"{type(e).__name__}: {e}")
        return EXIT_ANALYSIS
    except ArielError as e:
        logging.error(f"Ariel error in {command}: {e.format()}")
        print_error(e.format())
        return EXIT_INPUT
    except (ValueError, OSError) as e:
        # pydantic.ValidationError, TOML decode errors and the package's input errors are ValueErrors
        logging.error(f"Invalid input to {command}: {e}", exc_info=True)
        print_error(str(e))
        return EXIT_INPUT

    if ok:
        logging.info(f"Command {command} executed successfully")
        return EXIT_OK
    logging.error(f"Command {command} failed")
    return EXIT_ANALYSIS


def _emit(text: str, path: str | None) -> None:
    """Write result text to `path`, or to standard output when no path is given."""
    if path:
        write_text(path, text)
    else:
        write_data(text)


def _setting(args: dict[str, Any], name: str, config: Config, key: str) -> Any:
    value = args.get(name)
    return config.get(key) if value is None else value


def _solver_settings(args: dict[str, Any], config: Config) -> SolverSettings:
    overrides: dict[str, Any] = {}
    if args.get("tolerance") is not None:
        overrides["tolerance"] = float(args["tolerance"])
    if args.get("state_cap") is not None:
        overrides["state_cap"] = int(args["state_cap"])
    return replace(SolverSettings.from_config(config), **overrides)


def _load_net_source(args: dict[str, Any], config: Config) -> PetriNet:
    """The net named on the command line, or the built-in RWD model for --rwd."""
    path, policy = args.get("net"), args.get("rwd")
    if bool(path) == bool(policy):
        raise UsageError("give either a net file or --rwd POLICY")
    if path:
        return load_net(path)
    params = RwdParams.from_config(
        config,
        policy=policy,
        rate_timeout=args.get("timeout_rate"),
        n_replicas=args.get("n_replicas"),
    )
    return build(params).net


# ---------------------------------------------------------------- ariel


@register_command("compile")
def handle_compile(args: dict[str, Any], config: Config) -> bool:
    """
    Parse and merge Ariel sources, check references, write r-code and deployment.

    Outputs are `<name>.rcode` and `<name>.deployment.toml` in the output folder.
    """
    sources = [Path(s) for s in args["sources"]]
    definitions = load_definitions(args["defs"]) if args.get("defs") else {}

    units = [parse_source(read_text(path), definitions, source_name=str(path)) for path in sources]
    program = ArielProgram.merge(*units)
    check_references(program)

    rcode = compile_recovery(program)
    deployment = emit_config(program)

    name = args.get("name") or sources[0].stem
    out_dir = Path(args["out_dir"])
    write_text(out_dir / f"{name}.rcode", rcode.dumps())
    write_text(out_dir / f"{name}.deployment.toml", deployment.to_toml())

    print_info(
        f"Compiled {len(sources)} source(s): {len(program.tasks)} tasks, {len(program.watchdogs)} watchdogs, "
        f"{len(program.logicals)} logicals, {rcode.clause_count} clauses -> {out_dir}"
    )
    return True


# ---------------------------------------------------------------- runtime


@register_command("simulate")
def handle_simulate(args: dict[str, Any], config: Config) -> bool:
    scenario = load_scenario(args["scenario"], config)
    seed = scenario.rng_seed if args.get("seed") is None else int(args["seed"])
    replications = int(args.get("replications", 1))
    workers = int(_setting(args, "workers", config, "simulation.workers") or 1)
    if replications < 1:
        raise UsageError("--replications must be at least 1")

    policy = args.get("policy")
    if policy:
        scenario = scenario.with_policy(policy)
    label = scenario.policy or "custom"

    if replications == 1:
        result = run(scenario.with_seed(seed))
        rows = [(label, seed, result.metrics)]
        trace_result = result
    else:
        measurement = measure_policy(scenario, None, replications, seed, workers)
        rows = [(label, s, m) for _, s, m in measurement.rows()]
        trace_result = run(scenario.with_seed(seed)) if args.get("trace") else None

    _emit(metrics_csv(rows), args.get("out"))
    if args.get("trace") and trace_result is not None:
        write_text(args["trace"], trace_result.trace_text())

    total_alarms = sum(m.alarm_count for _, _, m in rows)
    total_false = sum(m.false_alarms for _, _, m in rows)
    print_info(f"Scenario {scenario.name}: {len(rows)} run(s), {total_alarms} alarms, {total_false} false")
    return True


# ---------------------------------------------------------------- gspn


@register_command("gspn-solve")
def handle_gspn_solve(args: dict[str, Any], config: Config) -> bool:
    net = _load_net_source(args, config)
    solution = solve(net, _solver_settings(args, config))

    rows = [[name, value] for name, value in solution.throughputs.items()]
    _emit(csv_text(("transition", "throughput"), rows), args.get("out"))

    if args.get("states"):
        graph = solution.graph
        state_rows = [
            [state, net.format_marking(graph.markings[state]), p] for state, p in solution.state_probabilities()
        ]
        write_text(args["states"], csv_text(("state", "marking", "probability"), state_rows))

    print_table(
        f"Throughputs ({len(solution.graph)} states, {len(solution.chain)} tangible)",
        ("transition", "throughput"),
        rows,
    )
    return True


@register_command("gspn-invariants")
def handle_gspn_invariants(args: dict[str, Any], config: Config) -> bool:
    net = _load_net_source(args, config)
    invariants = p_invariants(net)
    text = "".join(f"{inv.format(net)}\n" for inv in invariants)
    _emit(text, args.get("out"))
    print_info(f"{len(invariants)} minimal P-invariant(s)")
    covered = covered_places(net, invariants)
    uncovered = [p.name for p in net.places if p.name not in covered]
    if uncovered:
        print_info(f"not covered by any invariant: {', '.join(uncovered)}")
    return True


@register_command("gspn-query")
def handle_gspn_query(args: dict[str, Any], config: Config) -> bool:
    net = _load_net_source(args, config)
    cap = _solver_settings(args, config).state_cap
    graph = reachability(net, cap)

    if args.get("always_zero"):
        place = args["always_zero"]
        result = always_zero(graph, place, args.get("state_class") or "tangible")
        question = f"always {place} = 0 over {args.get('state_class') or 'tangible'} states"
    else:
        if not args.get("place"):
            raise UsageError("--exists-enabled needs --place")
        transitions = args["exists_enabled"]
        at_least = int(args.get("at_least") or 1)
        result = exists_enabled(graph, transitions, args["place"], at_least)
        question = f"exists {' or '.join(transitions)} enabled with {args['place']} >= {at_least}"

    lines = [f"{question}: {format_number(result.holds)}"]
    if result.state is not None:
        lines.append(f"state {result.state}: {net.format_marking(graph.markings[result.state])}")
    _emit("\n".join(lines) + "\n", None)
    return True


# ---------------------------------------------------------------- rwd


def _rwd_template(args: dict[str, Any], config: Config) -> RwdParams:
    return RwdParams.from_config(config, n_replicas=args.get("n_replicas"))


@register_command("rwd-sweep")
def handle_rwd_sweep(args: dict[str, Any], config: Config) -> bool:
    """Analytic sweep; returns False (exit 3) when any row failed, after writing all outputs."""
    template = _rwd_template(args, config)
    policies = args.get("policies") or list(config.get("rwd.policies", ["AND", "OR"]))
    rates = args.get("rates")
    if rates is None:
        rates = [float(r) for r in config.get("rwd.timeout_rates", [0.5, 1.0, 2.0])]
    workers = int(_setting(args, "workers", config, "rwd.workers") or 1)

    rows = sweep(
        template,
        rates,
        policies,
        settings=_solver_settings(args, config),
        workers=workers,
        nets_dir=args.get("nets_dir"),
    )
    _emit(sweep_csv(rows), args.get("out"))
    if args.get("gnuplot"):
        write_text(args["gnuplot"], gnuplot_data(rows))
    if args.get("render_dir"):
        for policy in policies:
            model = build(template.with_policy(policy))
            write_text(Path(args["render_dir"]) / f"rwd_{model.params.policy}.md", render_model(model))

    print_table("Throughput sweep", SWEEP_HEADER, [row.cells() for row in rows])
    return not any(row.failed for row in rows)


@register_command("rwd-validate")
def handle_rwd_validate(args: dict[str, Any], config: Config) -> bool:
    template = _rwd_template(args, config).with_timeout(float(args.get("rate") or 1.0))
    policies = args.get("policies") or list(config.get("rwd.policies", ["AND", "OR"]))
    horizon = float(_setting(args, "horizon", config, "rwd.mc_horizon"))
    replications = int(_setting(args, "replications", config, "rwd.mc_replications"))
    warmup = float(_setting(args, "warmup", config, "rwd.mc_warmup") or 0.0)
    workers = int(_setting(args, "workers", config, "rwd.workers") or 1)
    settings = _solver_settings(args, config)
    if not 0 <= warmup < horizon:
        raise UsageError(f"--warmup {format_number(warmup)} must lie in [0, horizon {format_number(horizon)})")

    rows = []
    for policy in policies:
        rows.extend(
            validate_model(
                template.with_policy(policy), horizon, replications, int(args.get("seed") or 0), settings, workers, warmup=warmup
            )
        )

    _emit(validation_csv(rows), args.get("out"))
    print_table(
        f"Analytic vs Monte Carlo (rate {format_number(template.rate_timeout)}, {replications} x {format_number(horizon)})",
        VALIDATION_HEADER,
        [row.cells() for row in rows],
    )
    disagreeing = [f"{r.policy}:{r.transition}" for r in rows if not r.agrees]
    if disagreeing:
        print_error(f"outside 3 standard errors: {', '.join(disagreeing)}")
    else:
        print_info("all throughputs agree within 3 standard errors")
    return True
