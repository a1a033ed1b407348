"""Command line interface: ``survivor <subcommand> ...``.

Exit codes: 0 success, 2 input error, 3 resource guard tripped, 4 the
request is infeasible.  Results are printed (or written) as stable JSON.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from pathlib import Path

from .errors import DomainError, GenerationError, InputError, ResourceGuardError
from .failure import (case_of, closed_form_c2, preemption_oracle,
                      single_connection_failure)
from .formats import (dumps, format_network, parse_network_labeled, read_partition,
                      read_requests, read_scenario, write_network)
from .netgen import GenConfig, generate
from .online import LinkPartition, admit, brute_2cesb, brute_okcp, solve_2cesb, solve_okcp
from .paths import disjoint_pair, path_weight, shortest_path, tunable_pair
from .sim import (DEFAULT_BETA, ExperimentSpec, default_trials,
                  emit_plot, histogram, run_experiment, trials_csv)
from .twocp import (DEFAULT_CUT_LEVEL, TwoCPInstance, brute_2cp1, brute_2cp2, brute_2cp3,
                    solve_2cp1_sca, solve_2cp2a, solve_2cp2n, solve_2cp3a, solve_2cp3b,
                    solve_2cp3n)

EXIT_OK, EXIT_INPUT, EXIT_GUARD, EXIT_INFEASIBLE = 0, 2, 3, 4


def _links(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise InputError(f"bad link list {text!r}") from None


def _load(args):
    net, labels = parse_network_labeled(Path(args.graph).read_text())
    return net, labels


def _node(labels, value: str) -> int:
    if labels is None:
        try:
            return int(value)
        except ValueError:
            raise InputError(f"bad node {value!r}") from None
    if value not in labels:
        raise InputError(f"unknown node label {value!r}")
    return labels[value]


def _emit(args, obj) -> None:
    text = dumps(obj)
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _two_requests(args, labels):
    reqs = read_requests(args.requests, labels)
    if len(reqs) != 2:
        raise InputError(f"expected two requests, found {len(reqs)}")
    if reqs[0].mcfp != 0.0:
        raise InputError("the first connection must be fully reliable (mcfp 0)")
    return reqs


# --------------------------------------------------------------------------

def cmd_gen(args) -> int:
    cfg = GenConfig(args.n, args.alpha, args.beta, args.lam, args.p_nocap, args.seed)
    net = generate(cfg)
    if args.out:
        write_network(net, args.out)
    else:
        sys.stdout.write(format_network(net))
    return EXIT_OK


def cmd_pair(args) -> int:
    net, labels = _load(args)
    s, t = _node(labels, args.source), _node(labels, args.dest)
    weights = None if args.weights == "unit" else net.pf
    found = disjoint_pair(net, weights, s, t)
    if found is None:
        _emit(args, {"feasible": False})
        return EXIT_INFEASIBLE
    w = net.pf if weights is not None else [1.0] * net.m
    _emit(args, {"feasible": True, "paths": [list(p) for p in found],
                 "weight": path_weight(w, found[0]) + path_weight(w, found[1])})
    return EXIT_OK


def cmd_tunable(args) -> int:
    net, labels = _load(args)
    s, t = _node(labels, args.source), _node(labels, args.dest)
    found = tunable_pair(net, s, t)
    if found is None:
        _emit(args, {"feasible": False})
        return EXIT_INFEASIBLE
    pair, pf = found
    _emit(args, {"feasible": True, "connection": pair.to_json(), "failure_probability": pf})
    return EXIT_OK


def _solution_exit(args, sol) -> int:
    _emit(args, sol.to_json())
    return EXIT_OK if sol.feasible else EXIT_INFEASIBLE


def _instance(args, need_p1: bool, need_b1: bool):
    net, labels = _load(args)
    r1, r2 = _two_requests(args, labels)
    p1 = _links(getattr(args, "p1", None))
    b1 = _links(getattr(args, "b1", None))
    if need_p1 and p1 is None:
        p1 = shortest_path(net, net.pf, r1.source, r1.destination)
        if p1 is None:
            return None, TwoCPInstance(net, r1.source, r1.destination, r2.source, r2.destination)
    if need_b1 and b1 is None:
        raise InputError("--b1 is required")
    return net, TwoCPInstance(net, r1.source, r1.destination, r2.source, r2.destination,
                              p1 if need_p1 else None, b1 if need_b1 else None)


def cmd_solve_2cp1(args) -> int:
    _, inst = _instance(args, True, True)
    solver = {"sca": solve_2cp1_sca, "bf": brute_2cp1}[args.algo]
    return _solution_exit(args, solver(inst))


def cmd_solve_2cp2(args) -> int:
    net, inst = _instance(args, True, False)
    if net is None:
        _emit(args, {"case": "infeasible", "feasible": False, "objective": None,
                     "connections": []})
        return EXIT_INFEASIBLE
    solver = {"2a": solve_2cp2a, "2n": solve_2cp2n, "bf": brute_2cp2}[args.algo]
    return _solution_exit(args, solver(inst))


def cmd_solve_2cp3(args) -> int:
    _, inst = _instance(args, False, False)
    level = args.cut_level
    solvers = {
        "3a": lambda i: solve_2cp3a(i, level),
        "3b": lambda i: solve_2cp3b(i, level),
        "3n": solve_2cp3n,
        "3n2": lambda i: solve_2cp3b(i, level, use_pf=True),
        "bf": brute_2cp3,
    }
    return _solution_exit(args, solvers[args.algo](inst))


def cmd_solve_okcp(args) -> int:
    net, labels = _load(args)
    reqs = read_requests(args.requests, labels)
    part = read_partition(args.partition, net) if args.partition else LinkPartition.all_free(net)
    out = []
    rejected = False
    for req in reqs:
        if args.brute:
            res = brute_okcp(net, part, req.source, req.destination)
        else:
            res = solve_okcp(net, part, req.source, req.destination, args.K)
        out.append(res.to_json())
        if res.feasible:
            part = admit(part, res.pair)
        else:
            rejected = True
    _emit(args, {"results": out, "partition": {"free": sorted(part.free),
                                               "backup": sorted(part.backup),
                                               "primary": sorted(part.primary)}})
    return EXIT_INFEASIBLE if rejected else EXIT_OK


def cmd_solve_2cesb(args) -> int:
    net, labels = _load(args)
    reqs = read_requests(args.requests, labels)
    if len(reqs) != 2:
        raise InputError(f"expected two requests, found {len(reqs)}")
    (r1, r2) = reqs
    solver = brute_2cesb if args.brute else solve_2cesb
    found = solver(net, r1.source, r1.destination, r2.source, r2.destination)
    if found is None:
        _emit(args, {"feasible": False})
        return EXIT_INFEASIBLE
    _emit(args, {"feasible": True, "connections": [c.to_json() for c in found]})
    return EXIT_OK


def cmd_evaluate(args) -> int:
    net, _ = _load(args)
    scen = read_scenario(args.scenario)
    if not scen:
        raise InputError("scenario has no connections")
    for pair in scen:
        if not pair.primary:
            raise InputError("empty primary path")
    out = {}
    if len(scen) == 1:
        out["failure"] = [single_connection_failure(net, scen[0])]
    else:
        out["failure"] = list(preemption_oracle(net, scen))
    if len(scen) == 2:
        c1, c2 = scen
        out["case"] = case_of(c1.primary, c1.backup, c2.primary, c2.backup)
        try:
            out["closed_form"] = closed_form_c2(net, scen)
        except DomainError:
            out["closed_form"] = None
    _emit(args, out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.problem == "2cp1":
        return cmd_solve_2cp1(argparse.Namespace(**{**vars(args), "algo": "bf"}))
    if args.problem == "2cp2":
        return cmd_solve_2cp2(argparse.Namespace(**{**vars(args), "algo": "bf"}))
    if args.problem == "2cp3":
        return cmd_solve_2cp3(argparse.Namespace(**{**vars(args), "algo": "bf"}))
    if args.problem == "okcp":
        return cmd_solve_okcp(argparse.Namespace(**{**vars(args), "brute": True}))
    return cmd_solve_2cesb(argparse.Namespace(**{**vars(args), "brute": True}))


def experiment_spec(args) -> ExperimentSpec:
    base = {}
    if args.spec:
        try:
            base = json.loads(Path(args.spec).read_text())
        except ValueError as exc:
            raise InputError(f"bad spec file: {exc}") from None
        if not isinstance(base, dict):
            raise InputError("spec file must hold a JSON object")
        known = {f.name for f in fields(ExperimentSpec)}
        unknown = set(base) - known
        if unknown:
            raise InputError(f"unknown spec fields: {sorted(unknown)}")
    for key in ("problem", "n", "trials", "seed", "roster", "alpha", "beta", "lam",
                "p_nocap", "cut_level"):
        value = getattr(args, key)
        if value is not None:
            base[key] = value
    if args.timing:
        base["timing"] = True
    problem = base.setdefault("problem", "2cp2")
    n = base.setdefault("n", 12)
    base.setdefault("beta", DEFAULT_BETA.get(n, 100.0))
    if "trials" not in base and problem in ("2cp2", "2cp3"):
        base["trials"] = default_trials(n, problem, args.full)
    return ExperimentSpec(**base)


def cmd_simulate(args) -> int:
    spec = experiment_spec(args)
    summary = run_experiment(spec, jobs=args.jobs)
    if args.out_csv:
        Path(args.out_csv).write_text(trials_csv(summary))
    hist = histogram(summary)
    if args.out_svg:
        emit_plot(hist, args.out_svg)
    report = summary.to_json()
    report["histogram"] = hist
    _emit(args, report)
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="survivor",
                                 description="Survivable routing with shared backup paths.")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_out(p):
        p.add_argument("--out", help="write JSON here instead of stdout")
        return p

    p = sub.add_parser("gen", help="generate a random power-law network")
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--alpha", type=float, default=2.1)
    p.add_argument("--beta", type=float, default=100.0)
    p.add_argument("--lambda", dest="lam", type=float, default=5.0)
    p.add_argument("--p-nocap", type=float, default=0.15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="graph file to write (stdout if omitted)")
    p.set_defaults(func=cmd_gen)

    for name, func, text in (("pair", cmd_pair, "minimum-weight pair of link-disjoint paths"),
                             ("tunable", cmd_tunable, "minimum-failure primary/backup pair")):
        p = with_out(sub.add_parser(name, help=text))
        p.add_argument("graph")
        p.add_argument("--source", required=True)
        p.add_argument("--dest", required=True)
        if name == "pair":
            p.add_argument("--weights", choices=("pf", "unit"), default="pf")
        p.set_defaults(func=func)

    p = with_out(sub.add_parser("solve-2cp1", help="second connection, first fixed"))
    p.add_argument("graph")
    p.add_argument("requests")
    p.add_argument("--p1", required=True, help="link indices, comma separated")
    p.add_argument("--b1", required=True, help="link indices, comma separated")
    p.add_argument("--algo", choices=("sca", "bf"), default="sca")
    p.set_defaults(func=cmd_solve_2cp1)

    p = with_out(sub.add_parser("solve-2cp2", help="first primary fixed"))
    p.add_argument("graph")
    p.add_argument("requests")
    p.add_argument("--p1", help="link indices (default: shortest path by failure probability)")
    p.add_argument("--algo", choices=("2a", "2n", "bf"), default="2a")
    p.set_defaults(func=cmd_solve_2cp2)

    p = with_out(sub.add_parser("solve-2cp3", help="both connections free"))
    p.add_argument("graph")
    p.add_argument("requests")
    p.add_argument("--algo", choices=("3a", "3b", "3n", "3n2", "bf"), default="3a")
    p.add_argument("--cut-level", type=int, default=DEFAULT_CUT_LEVEL)
    p.set_defaults(func=cmd_solve_2cp3)

    p = with_out(sub.add_parser("solve-okcp", help="admit fully reliable requests online"))
    p.add_argument("graph")
    p.add_argument("requests")
    p.add_argument("--partition", help="free/backup/primary link file (default: all free)")
    p.add_argument("--K", type=int, help="bound on backup-set visits")
    p.add_argument("--brute", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_solve_okcp)

    p = with_out(sub.add_parser("solve-2cesb", help="two fully reliable connections, shared backups"))
    p.add_argument("graph")
    p.add_argument("requests")
    p.add_argument("--brute", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_solve_2cesb)

    p = with_out(sub.add_parser("evaluate", help="failure probabilities of a scenario"))
    p.add_argument("graph")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_evaluate)

    p = with_out(sub.add_parser("oracle", help="exhaustive reference solvers"))
    p.add_argument("problem", choices=("2cp1", "2cp2", "2cp3", "okcp", "2cesb"))
    p.add_argument("graph")
    p.add_argument("requests")
    p.add_argument("--p1")
    p.add_argument("--b1")
    p.add_argument("--partition")
    p.add_argument("--K", type=int)
    p.add_argument("--cut-level", type=int, default=DEFAULT_CUT_LEVEL)
    p.set_defaults(func=cmd_oracle)

    p = with_out(sub.add_parser("simulate", help="compare algorithms on random networks"))
    p.add_argument("--spec", help="JSON file with experiment fields")
    p.add_argument("--problem", choices=("2cp2", "2cp3"))
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--roster", type=lambda s: tuple(x for x in s.split(",") if x))
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--p-nocap", type=float)
    p.add_argument("--cut-level", type=int)
    p.add_argument("--full", action="store_true", help="full-scale trial counts")
    p.add_argument("--timing", action="store_true", help="record wall-clock runtimes")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-csv")
    p.add_argument("--out-svg")
    p.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ResourceGuardError, GenerationError) as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
