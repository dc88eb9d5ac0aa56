"""Deterministic cluster-repair simulator.

Desk-scale analog of the datanode-kill experiment: place stripes across
nodes, kill scheduled node sets, route every loss through the real repair
planner, and tally blocks read, bytes shipped, and bandwidth-bound repair
time. All randomness comes from named substreams of one seed, so a trace is
bit-reproducible and an rs run pairs with an lrc run on identical placements
(both sample 16 nodes per stripe; rs uses the first 14).
"""

import csv
import random
from dataclasses import dataclass, field as dc_field
from math import ceil

from .gf import GF
from .lrc import Stripe, build_lrc, encode_stripe, execute_repair, plan_repair
from .rs import CodeSpec, UnrecoverableError, build_rs

SCHEME_WIDTH = {"rep3": 3, "rs": 14, "lrc": 16}
PAIRED_SAMPLE = 16      # rs and lrc draw the same 16-node sample per stripe
DATA_BLOCKS = 10        # stripe data width for the coded schemes

TRACE_COLUMNS = ("event_id", "nodes_killed", "blocks_lost", "blocks_read",
                 "bytes_read", "network_bytes", "repair_duration_s",
                 "data_loss_stripes")


@dataclass(frozen=True)
class SimConfig:
    nodes: int = 50
    files: int = 200
    blocks_per_file: int = 10
    scheme: str = "lrc"
    block_size_bytes: int = 64 * 1024 * 1024
    gamma_bps: float = 1e9
    seed: int = 1337
    schedule: tuple = (1, 1, 1, 1, 3, 3, 2, 2)
    rs_read_mode: str = "deployed"
    verify: bool = False


_INT_KEYS = {"nodes", "files", "blocks_per_file", "block_size_bytes", "seed"}


def parse_config(text):
    values = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError("expected key=value, got %r" % raw)
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key in _INT_KEYS:
            values[key] = int(val)
        elif key == "gamma_bps":
            values[key] = float(val)
        elif key == "schedule":
            values[key] = tuple(int(x) for x in val.split(",") if x.strip())
        elif key == "scheme":
            if val not in SCHEME_WIDTH:
                raise ValueError("unknown scheme %r" % val)
            values[key] = val
        elif key == "rs_read_mode":
            if val not in ("deployed", "efficient"):
                raise ValueError("rs_read_mode must be deployed or efficient")
            values[key] = val
        elif key == "verify":
            values[key] = val.lower() in ("1", "true", "yes")
        else:
            raise ValueError("unknown config key %r" % key)
    return SimConfig(**values)


def load_config(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


@dataclass
class PlacedStripe:
    stripe_id: int
    file_id: int
    width: int
    nodes: list                  # node id hosting each block position
    lost: set = dc_field(default_factory=set)
    dead: bool = False
    payload: Stripe = None       # only in verify mode
    pristine: tuple = None


@dataclass
class ClusterState:
    num_nodes: int
    scheme: str
    block_size: int
    seed: int
    alive: list
    stripes: list
    code: object                 # LrcCode, RsCode, or None for rep3
    verify: bool = False


@dataclass(frozen=True)
class EventMetrics:
    event_id: int
    nodes_killed: int
    blocks_lost: int
    blocks_read: int
    bytes_read: int
    network_bytes: int
    repair_duration_s: float
    data_loss_stripes: int


def _scheme_code(scheme):
    if scheme == "lrc":
        return build_lrc(10, 4, 5)
    if scheme == "rs":
        return build_rs(CodeSpec(k=10, n=14, field=GF()))
    return None


def build_cluster(num_nodes, num_files, blocks_per_file, scheme, block_size,
                  seed, verify=False):
    width = SCHEME_WIDTH.get(scheme)
    if width is None:
        raise ValueError("unknown scheme %r" % scheme)
    if num_nodes < width:
        raise ValueError("need at least %d nodes for %s stripes"
                         % (width, scheme))
    code = _scheme_code(scheme)
    stripes = []
    per_file = (blocks_per_file if scheme == "rep3"
                else ceil(blocks_per_file / DATA_BLOCKS))
    sid = 0
    for fid in range(num_files):
        for _ in range(per_file):
            rng = random.Random("%s:stripe:%d" % (seed, sid))
            sample = rng.sample(range(num_nodes),
                                3 if scheme == "rep3" else PAIRED_SAMPLE)
            stripe = PlacedStripe(stripe_id=sid, file_id=fid, width=width,
                                  nodes=sample[:width])
            if verify:
                prng = random.Random("%s:payload:%d" % (seed, sid))
                if scheme == "rep3":
                    block = prng.randbytes(block_size)
                    stripe.payload = Stripe(blocks=[block] * 3,
                                            block_size=block_size)
                else:
                    data = prng.randbytes(DATA_BLOCKS * block_size)
                    stripe.payload = encode_stripe(code, data, block_size)
                stripe.pristine = tuple(stripe.payload.blocks)
            stripes.append(stripe)
            sid += 1
    return ClusterState(num_nodes=num_nodes, scheme=scheme,
                        block_size=block_size, seed=seed,
                        alive=[True] * num_nodes, stripes=stripes,
                        code=code, verify=verify)


def schedule_events(num_nodes, kill_counts, seed):
    """Turn per-event kill counts into concrete node sets (one substream per
    event, sampled from the nodes still alive at that point)."""
    alive = set(range(num_nodes))
    events = []
    for e, count in enumerate(kill_counts):
        if count > len(alive):
            raise ValueError("event %d kills %d nodes but only %d remain"
                             % (e, count, len(alive)))
        rng = random.Random("%s:event:%d" % (seed, e))
        victims = rng.sample(sorted(alive), count)
        alive.difference_update(victims)
        events.append(tuple(sorted(victims)))
    return events


def run_schedule(cluster, events, gamma_bps=1e9, rs_read_mode="deployed"):
    """Process node-kill events in order; returns one EventMetrics per event.

    Unrecoverable stripes are recorded and abandoned (their surviving blocks
    stay where they are, but no further repair work is attempted for them).
    """
    if rs_read_mode not in ("deployed", "efficient"):
        raise ValueError("rs_read_mode must be deployed or efficient")
    metrics = []
    for event_id, victims in enumerate(events):
        victims = set(victims)
        for node in victims:
            if not cluster.alive[node]:
                raise ValueError("event %d kills node %d twice"
                                 % (event_id, node))
            cluster.alive[node] = False
        alive_ids = [n for n in range(cluster.num_nodes) if cluster.alive[n]]

        blocks_lost = blocks_read = loss_stripes = 0
        for stripe in cluster.stripes:
            if stripe.dead:
                continue
            hit = [pos for pos, node in enumerate(stripe.nodes)
                   if node in victims]
            if not hit:
                continue
            blocks_lost += len(hit)
            stripe.lost.update(hit)
            reads = _repair_stripe(cluster, stripe, event_id, alive_ids,
                                   rs_read_mode)
            if reads is None:
                stripe.dead = True
                loss_stripes += 1
            else:
                blocks_read += reads

        bytes_read = blocks_read * cluster.block_size
        network = 2 * bytes_read
        metrics.append(EventMetrics(
            event_id=event_id, nodes_killed=len(victims),
            blocks_lost=blocks_lost, blocks_read=blocks_read,
            bytes_read=bytes_read, network_bytes=network,
            repair_duration_s=network * 8.0 / gamma_bps,
            data_loss_stripes=loss_stripes))
    return metrics


def _repair_stripe(cluster, stripe, event_id, alive_ids, rs_read_mode):
    """Repair all lost blocks of one stripe; returns blocks read, or None if
    the stripe is unrecoverable.

    Lost blocks are fixed one job at a time, the way block fixers drain their
    queue in deployed clusters, and each job runs against the stripe state it
    finds: a light job reads the 5 group mates, a heavy job reads a full
    decoding set, and deployed-mode RS reads every block still standing.
    Rebuilding one block can turn the next repair light again, so job order
    prefers light targets."""
    scheme = cluster.scheme
    if scheme == "rep3":
        if len(stripe.lost) == stripe.width:
            return None
        reads = len(stripe.lost)
        plan = None
    else:
        try:
            plan = plan_repair(cluster.code, stripe.lost)
        except UnrecoverableError:
            return None
        reads = 0
        remaining = set(stripe.lost)
        while remaining:
            if scheme == "rs":
                per_job = (stripe.width - len(remaining)
                           if rs_read_mode == "deployed" else DATA_BLOCKS)
                remaining.pop()
                reads += per_job
                continue
            step_plan = plan_repair(cluster.code, remaining)
            step = min(step_plan.steps,
                       key=lambda s: (s.kind != "light", s.target))
            remaining.discard(step.target)
            reads += len(step.sources)

    if cluster.verify:
        _verify_repair(cluster, stripe, plan)

    rng = random.Random("%s:repair:%d:%d"
                        % (cluster.seed, event_id, stripe.stripe_id))
    used = {stripe.nodes[pos] for pos in range(stripe.width)
            if pos not in stripe.lost}
    for pos in sorted(stripe.lost):
        candidates = [n for n in alive_ids if n not in used]
        if not candidates:
            raise RuntimeError("no conflict-free live node for stripe %d"
                               % stripe.stripe_id)
        node = rng.choice(candidates)
        stripe.nodes[pos] = node
        used.add(node)
    stripe.lost.clear()
    return reads


def _verify_repair(cluster, stripe, plan):
    broken = Stripe(blocks=[None if pos in stripe.lost else b
                            for pos, b in enumerate(stripe.payload.blocks)],
                    block_size=stripe.payload.block_size)
    if cluster.scheme == "rep3":
        source = next(b for b in broken.blocks if b is not None)
        repaired = Stripe(blocks=[b if b is not None else source
                                  for b in broken.blocks],
                          block_size=broken.block_size)
    else:
        repaired = execute_repair(cluster.code, broken, plan)
    if tuple(repaired.blocks) != stripe.pristine:
        raise RuntimeError("verify mode: repaired stripe %d differs from "
                           "the original" % stripe.stripe_id)
    stripe.payload = repaired


def run_simulation(config):
    cluster = build_cluster(config.nodes, config.files, config.blocks_per_file,
                            config.scheme, config.block_size_bytes,
                            config.seed, verify=config.verify)
    events = schedule_events(config.nodes, config.schedule, config.seed)
    metrics = run_schedule(cluster, events, gamma_bps=config.gamma_bps,
                           rs_read_mode=config.rs_read_mode)
    return cluster, metrics


def fit_slopes(metrics):
    """Least-squares blocks_read-per-blocks_lost slope across events."""
    import numpy as np

    if len(metrics) < 2:
        raise ValueError("need at least two events to fit a slope")
    x = np.array([m.blocks_lost for m in metrics], dtype=float)
    y = np.array([m.blocks_read for m in metrics], dtype=float)
    if np.all(x == x[0]):
        raise ValueError("all events lost the same block count; slope "
                         "undefined")
    return float(np.polyfit(x, y, 1)[0])


def export_trace(metrics, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_COLUMNS)
        for m in metrics:
            writer.writerow([m.event_id, m.nodes_killed, m.blocks_lost,
                             m.blocks_read, m.bytes_read, m.network_bytes,
                             repr(m.repair_duration_s), m.data_loss_stripes])


def load_trace(path):
    out = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != TRACE_COLUMNS:
            raise ValueError("unexpected trace header %r" % (header,))
        for row in reader:
            out.append(EventMetrics(
                event_id=int(row[0]), nodes_killed=int(row[1]),
                blocks_lost=int(row[2]), blocks_read=int(row[3]),
                bytes_read=int(row[4]), network_bytes=int(row[5]),
                repair_duration_s=float(row[6]),
                data_loss_stripes=int(row[7])))
    return out
