"""Markov-chain MTTDL for 3-replication, RS(10,4), and the (10,6,5) layered
code.

The chain tracks lost blocks per stripe: state j fails forward at (n-j)*lambda
and repairs backward at gamma divided by the bytes a single repair downloads
in that state. For the layered code the per-state download expectation is not
a constant, so it is computed by running every erasure pattern of that size
through the actual repair planner; the resulting assumptions are part of the
report, since reliability numbers are only as honest as the repair model
behind them.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .lrc import build_lrc, plan_repair

SECONDS_PER_DAY = 86400.0
SECONDS_PER_YEAR = 365.25 * SECONDS_PER_DAY

SCHEMES = ("rep3", "rs_10_4", "lrc_10_6_5")


@dataclass(frozen=True)
class ClusterParams:
    nodes: int = 3000
    total_bytes: float = 30e15
    block_bytes: float = 256e6
    failure_rate: float = 1.0 / (4 * SECONDS_PER_YEAR)   # per node, per second
    gamma_bps: float = 1e9

    def __post_init__(self):
        for name in ("nodes", "total_bytes", "block_bytes",
                     "failure_rate", "gamma_bps"):
            if getattr(self, name) <= 0:
                raise ValueError("%s must be positive" % name)

    @property
    def gamma_bytes(self):
        return self.gamma_bps / 8.0


@dataclass(frozen=True)
class MarkovModel:
    scheme: str
    n: int                  # blocks per stripe
    absorbing: int          # state index meaning data loss
    forward: tuple          # lambda_j, j = 0..absorbing-1
    backward: tuple         # rho_j, j = 0..absorbing-1 (rho_0 = 0, unused)
    expected_reads: tuple   # blocks downloaded per repair, states 1..absorbing-1


@lru_cache(maxsize=1)
def _canonical_lrc():
    return build_lrc(10, 4, 5)


@lru_cache(maxsize=1)
def lrc_expected_reads(max_losses=4):
    """Expected blocks downloaded to repair one block in state j, averaged
    over every j-subset of lost positions and every target inside it, with
    the light/heavy choice made by the planner. Also returns the light-repair
    probability per state."""
    code = _canonical_lrc()
    width = code.n_total
    out = []
    for j in range(1, max_losses + 1):
        reads = targets = light = 0
        for lost in combinations(range(width), j):
            plan = plan_repair(code, lost)
            for step in plan.steps:
                reads += len(step.sources)
                targets += 1
                light += step.kind == "light"
        out.append((reads / targets, light / targets))
    return tuple(out)


def build_chain(scheme, params):
    if scheme == "rep3":
        n, f = 3, 3
        reads = (1.0, 1.0)
    elif scheme == "rs_10_4":
        n, f = 14, 5
        reads = (10.0, 10.0, 10.0, 10.0)
    elif scheme == "lrc_10_6_5":
        n, f = 16, 5
        reads = tuple(e for e, _ in lrc_expected_reads())
    else:
        raise ValueError("unknown scheme %r" % (scheme,))
    lam = params.failure_rate
    forward = tuple((n - j) * lam for j in range(f))
    backward = (0.0,) + tuple(
        params.gamma_bytes / (reads[j - 1] * params.block_bytes)
        for j in range(1, f))
    return MarkovModel(scheme=scheme, n=n, absorbing=f, forward=forward,
                       backward=backward, expected_reads=reads)


def mttdl_stripe(model):
    """Expected time from the intact state to absorption, in seconds.

    For a birth-death chain with absorption at f, the first-passage times
    satisfy w_0 = 1/lambda_0, w_j = (1 + rho_j w_{j-1})/lambda_j, and the
    answer is the sum of the w_j. Values beyond 1e300 report as infinity.
    """
    if any(l <= 0 for l in model.forward):
        raise ValueError("all forward rates must be positive")
    if any(r < 0 for r in model.backward):
        raise ValueError("backward rates must be nonnegative")
    total = 0.0
    w = None
    for j in range(model.absorbing):
        if j == 0:
            w = 1.0 / model.forward[0]
        else:
            w = (1.0 + model.backward[j] * w) / model.forward[j]
        total += w
    if math.isnan(total) or total > 1e300:
        return math.inf
    return total


def mttdl_system(scheme, params):
    """Stripe MTTDL divided by the stripe count, in days."""
    model = build_chain(scheme, params)
    stripes = params.total_bytes / (model.n * params.block_bytes)
    return mttdl_stripe(model) / stripes / SECONDS_PER_DAY


STORAGE_OVERHEAD = {"rep3": 2.0, "rs_10_4": 0.4, "lrc_10_6_5": 0.6}
REPAIR_TRAFFIC = {"rep3": 1.0, "rs_10_4": 10.0, "lrc_10_6_5": 5.0}


def summary_table(params):
    return [{"scheme": s,
             "overhead": STORAGE_OVERHEAD[s],
             "traffic": REPAIR_TRAFFIC[s],
             "mttdl_days": mttdl_system(s, params)}
            for s in SCHEMES]


def download_assumptions():
    """Per-scheme, per-state expected downloads behind the repair rates."""
    rows = []
    for j in (1, 2):
        rows.append({"scheme": "rep3", "state": j,
                     "expected_blocks": 1.0, "light_fraction": 1.0})
    for j in range(1, 5):
        rows.append({"scheme": "rs_10_4", "state": j,
                     "expected_blocks": 10.0, "light_fraction": 0.0})
    for j, (e, frac) in enumerate(lrc_expected_reads(), start=1):
        rows.append({"scheme": "lrc_10_6_5", "state": j,
                     "expected_blocks": e, "light_fraction": frac})
    return rows


def format_summary(rows):
    lines = ["%-12s %10s %9s %16s" % ("scheme", "overhead", "traffic",
                                      "mttdl_days")]
    for row in rows:
        lines.append("%-12s %9.1fx %8.0fx %16.4e"
                     % (row["scheme"], row["overhead"], row["traffic"],
                        row["mttdl_days"]))
    return "\n".join(lines)


def format_assumptions(rows):
    lines = ["%-12s %6s %16s %15s" % ("scheme", "state", "expected_blocks",
                                      "light_fraction")]
    for row in rows:
        lines.append("%-12s %6d %16.4f %15.4f"
                     % (row["scheme"], row["state"], row["expected_blocks"],
                        row["light_fraction"]))
    return "\n".join(lines)


def monte_carlo_stripe(model, trials=10 ** 6, seed=0):
    """Mean absorption time by direct simulation of the chain."""
    import numpy as np

    rng = np.random.default_rng(seed)
    forward = np.array(model.forward + (0.0,))
    backward = np.array(model.backward + (0.0,))
    states = np.zeros(trials, dtype=np.int64)
    times = np.zeros(trials)
    active = np.arange(trials)
    while active.size:
        s = states[active]
        lam = forward[s]
        rho = backward[s]
        rate = lam + rho
        times[active] += rng.exponential(1.0 / rate)
        fwd = rng.random(active.size) * rate < lam
        states[active] = s + np.where(fwd, 1, -1)
        active = active[states[active] < model.absorbing]
    return float(times.mean())
