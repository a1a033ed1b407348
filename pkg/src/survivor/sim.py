"""Monte Carlo comparison of the two-connection algorithms on random networks.

Each trial draws a power-law network, drops the links without capacity, picks
four distinct terminals, runs every algorithm of the roster and marks as
optimal those whose second-connection failure equals the best in the roster
(an infeasible result counts as ``SENTINEL``).  Trials are seeded from the
master seed and the trial index only, so runs are reproducible and may be
spread over processes.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import GenerationError, InputError, ResourceGuardError
from .graph import Network
from .netgen import GenConfig, generate
from .paths import disjoint_pair, shortest_path
from .twocp import BRUTE_NODE_GUARD, SOLVERS_2CP2, SOLVERS_2CP3, TwoCPInstance

SENTINEL = 1.2
OPT_TOL = 1e-9
CSV_COLUMNS = ["trial", "seed", "algo", "objective", "feasible", "optimal", "runtime_us"]
DESK_TRIALS = {(12, "2cp2"): 5000, (100, "2cp2"): 500, (12, "2cp3"): 2000}
FULL_TRIALS = {(12, "2cp2"): 500_000, (100, "2cp2"): 50_000, (12, "2cp3"): 10_000}
DEFAULT_ROSTER = {"2cp2": ("bf", "2a", "2n"), "2cp3": ("bf", "3a", "3n")}
DEFAULT_BETA = {12: 100.0, 100: 500.0}
TERMINAL_REDRAWS = 50
NETWORK_REDRAWS = 100


@dataclass(frozen=True)
class ExperimentSpec:
    problem: str = "2cp2"
    n: int = 12
    trials: int = 5000
    seed: int = 1
    roster: tuple[str, ...] | None = None  # None: the problem's default roster
    alpha: float = 2.1
    beta: float = 100.0
    lam: float = 5.0
    p_nocap: float = 0.15
    cut_level: int = 4
    timing: bool = False

    def __post_init__(self):
        if self.problem not in ("2cp2", "2cp3"):
            raise InputError(f"unknown problem {self.problem!r}")
        roster = self.roster
        if roster is None:
            roster = DEFAULT_ROSTER[self.problem]
            if self.n > BRUTE_NODE_GUARD:  # brute force is out of reach
                roster = tuple(a for a in roster if a != "bf")
        object.__setattr__(self, "roster", tuple(roster))
        if self.trials < 1:
            raise InputError("need at least one trial")
        if not self.roster:
            raise InputError("empty roster")
        table = SOLVERS_2CP2 if self.problem == "2cp2" else SOLVERS_2CP3
        for algo in self.roster:
            if algo not in table:
                raise InputError(f"algorithm {algo!r} does not apply to {self.problem}")
        if len(set(self.roster)) != len(self.roster):
            raise InputError("roster lists an algorithm twice")


@dataclass
class TrialRecord:
    trial: int
    seed: int
    objectives: dict[str, float | None]
    optimal: dict[str, bool]
    runtime_us: dict[str, int]
    skipped: bool = False
    redraws: int = 0


@dataclass
class Summary:
    spec: ExperimentSpec
    rates: dict[str, float]
    trials: int
    skipped: int
    redraws: int
    records: list[TrialRecord] = field(repr=False, default_factory=list)

    def to_json(self) -> dict:
        return {
            "spec": asdict(self.spec),
            "rates_percent": self.rates,
            "trials": self.trials,
            "skipped": self.skipped,
            "terminal_or_network_redraws": self.redraws,
            "conventions": {
                "no_capacity_links": "removed before routing",
                "terminal_sampling": "4 distinct uniform nodes; redrawn while the first "
                                     "connection cannot be made fully reliable",
                "first_primary_2cp2": "shortest s1-t1 path by failure probability",
                "infeasible_objective": SENTINEL,
                "optimal_tolerance": OPT_TOL,
            },
        }


def default_trials(n: int, problem: str, full: bool = False) -> int:
    """Trial count for a network size; sizes without an entry use the n=12 count."""
    table = FULL_TRIALS if full else DESK_TRIALS
    return table.get((n, problem), table[(12, problem)])


def trial_seed(master: int, trial: int) -> int:
    return int(np.random.SeedSequence([master, trial]).generate_state(1, np.uint64)[0])


def usable_subnetwork(net: Network) -> Network:
    """The network restricted to links that have capacity (indices renumbered)."""
    sub, _ = net.restricted(e for e, ln in enumerate(net.links) if ln.capacity)
    return sub


def draw_instance(spec: ExperimentSpec, seed: int):
    """Network and terminals for one trial; the first connection is always routable."""
    rng = np.random.default_rng([seed, 1])
    redraws = 0
    for attempt in range(NETWORK_REDRAWS):
        cfg = GenConfig(spec.n, spec.alpha, spec.beta, spec.lam, spec.p_nocap,
                        seed=trial_seed(seed, attempt))
        try:
            net = usable_subnetwork(generate(cfg))
        except GenerationError:
            continue
        for _ in range(TERMINAL_REDRAWS):
            s1, t1, s2, t2 = (int(v) for v in rng.choice(spec.n, size=4, replace=False))
            if spec.problem == "2cp2":
                p1 = shortest_path(net, net.pf, s1, t1)
                if p1 is not None and shortest_path(
                        net, net.pf, s1, t1, frozenset(range(net.m)) - set(p1)) is not None:
                    return TwoCPInstance(net, s1, t1, s2, t2, p1), redraws
            elif disjoint_pair(net, None, s1, t1) is not None:
                return TwoCPInstance(net, s1, t1, s2, t2), redraws
            redraws += 1
    raise ResourceGuardError("could not draw a routable first connection")


def run_trial(spec: ExperimentSpec, trial: int) -> TrialRecord:
    seed = trial_seed(spec.seed, trial)
    inst, redraws = draw_instance(spec, seed)
    table = SOLVERS_2CP2 if spec.problem == "2cp2" else SOLVERS_2CP3
    objectives = {}
    runtime = {}
    skipped = False
    for algo in spec.roster:
        solver = table[algo]
        start = time.perf_counter()
        try:
            if algo in ("3a", "3b"):
                sol = solver(inst, spec.cut_level)
            else:
                sol = solver(inst)
        except ResourceGuardError:
            skipped = True
            objectives[algo] = None
            runtime[algo] = 0
            continue
        elapsed = time.perf_counter() - start
        objectives[algo] = sol.objective if sol.feasible else None
        runtime[algo] = int(elapsed * 1e6) if spec.timing else 0
    scores = {a: (SENTINEL if v is None else v) for a, v in objectives.items()}
    best = min(scores.values())
    optimal = {a: (not skipped) and scores[a] <= best + OPT_TOL for a in spec.roster}
    return TrialRecord(trial, seed, objectives, optimal, runtime, skipped, redraws)


def _run_chunk(args):
    spec, trials = args
    return [run_trial(spec, t) for t in trials]


def run_experiment(spec: ExperimentSpec, jobs: int = 1, progress=None) -> Summary:
    if jobs > 1:
        chunks = [(spec, list(range(i, spec.trials, jobs))) for i in range(jobs)]
        with ProcessPoolExecutor(jobs) as pool:
            records = [r for chunk in pool.map(_run_chunk, chunks) for r in chunk]
    else:
        records = []
        for t in range(spec.trials):
            records.append(run_trial(spec, t))
            if progress is not None:
                progress(t + 1, spec.trials)
    records.sort(key=lambda r: r.trial)
    return summarize(spec, records)


def summarize(spec: ExperimentSpec, records: list[TrialRecord]) -> Summary:
    kept = [r for r in records if not r.skipped]
    rates = {}
    for algo in spec.roster:
        hits = sum(1 for r in kept if r.optimal[algo])
        rates[algo] = round(100.0 * hits / len(kept), 6) if kept else 0.0
    return Summary(spec, rates, len(records), len(records) - len(kept),
                   sum(r.redraws for r in records), records)


def format_objective(value: float | None) -> str:
    return repr(SENTINEL if value is None else float(value))


def trials_csv(summary: Summary) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in summary.records:
        for algo in summary.spec.roster:
            value = r.objectives[algo]
            writer.writerow([r.trial, r.seed, algo, format_objective(value),
                             int(value is not None), int(r.optimal[algo]), r.runtime_us[algo]])
    return buf.getvalue()


def rates_from_csv(text: str) -> dict[str, float]:
    """Optimality rates recomputed from a trial CSV (skipped trials excluded)."""
    rows = list(csv.DictReader(io.StringIO(text)))
    by_trial = {}
    for row in rows:
        by_trial.setdefault(row["trial"], []).append(row)
    algos = []
    for row in rows:
        if row["algo"] not in algos:
            algos.append(row["algo"])
    kept = [group for group in by_trial.values()
            if any(int(row["optimal"]) for row in group)]
    out = {}
    for algo in algos:
        hits = sum(1 for g in kept for row in g if row["algo"] == algo and int(row["optimal"]))
        out[algo] = round(100.0 * hits / len(kept), 6) if kept else 0.0
    return out


def histogram(summary: Summary, width: float = 0.05) -> dict:
    """Per-algorithm counts over [0, 1] bins plus the infeasibility bin at ``SENTINEL``."""
    edges = list(np.round(np.arange(0.0, 1.0 + width / 2, width), 10))
    data = {}
    for algo in summary.spec.roster:
        values = [r.objectives[algo] for r in summary.records if not r.skipped]
        feasible = np.array([v for v in values if v is not None], dtype=float)
        counts, _ = np.histogram(np.clip(feasible, 0.0, 1.0), bins=edges)
        data[algo] = {"counts": [int(c) for c in counts],
                      "infeasible": sum(1 for v in values if v is None)}
    return {"edges": [float(e) for e in edges], "sentinel": SENTINEL, "series": data}


def emit_plot(hist: dict, path) -> None:
    """Write a grouped bar chart of the histogram as a self-contained SVG."""
    series = hist.get("series") or {}
    if not series or not any(sum(s["counts"]) + s["infeasible"] for s in series.values()):
        raise InputError("empty histogram dataset")
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    edges = np.array(hist["edges"])
    width = edges[1] - edges[0]
    algos = list(series)
    bar = width / (len(algos) + 1)
    with matplotlib.rc_context({"svg.hashsalt": "survivor", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(8, 4))
        for k, algo in enumerate(algos):
            s = series[algo]
            xs = list(edges[:-1] + k * bar) + [hist["sentinel"] - width / 2 + k * bar]
            ys = list(s["counts"]) + [s["infeasible"]]
            ax.bar(xs, ys, width=bar, align="edge", label=algo)
        ax.set_xlabel("failure probability of the second connection (infeasible at %.1f)"
                      % hist["sentinel"])
        ax.set_ylabel("trials")
        ax.set_xlim(-width / 2, hist["sentinel"] + width)
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
