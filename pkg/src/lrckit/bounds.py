"""Locality-distance bound, the greedy nondecoding-set builder that certifies
it on concrete generators, and the information-flow-graph min-cut verifier.

The flow network for parameters (k, n, r, d): k source vertices feed every
group gadget; each of the n/(r+1) group gadgets passes at most r units; each
of the n storage vertices passes at most 1 unit; a data collector taps any
n-d+1 storage vertices. Capacities are scaled by k so everything is integral
(file size M -> k, block M/k -> 1, group r*M/k -> r). Decoding is possible
exactly when every collector draws k units of flow.
"""

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb

from .gf import PivotBasis


def distance_bound(n, k, r):
    """d <= n - ceil(k/r) - k + 2 for any code with block locality r."""
    if not (1 <= r <= k < n):
        raise ValueError("need 1 <= r <= k < n")
    return n - (-(-k // r)) - k + 2


def build_nondecoding_set(G, groups):
    """Grow a column set S with rank(S) < k, greedily by repair groups.

    Whole groups are added while the rank stays below k, biggest first
    (each fully-added group donates its internal dependency); once no whole
    group fits, single leftover columns are taken while they keep the rank
    at k-1 or less. Returns the sorted position tuple.
    """
    k = G.rows
    cols = [tuple(c) for c in G.columns()]
    for grp in groups:
        if any(not 0 <= p < G.cols for p in grp):
            raise ValueError("group position out of range")

    chosen = set()
    basis = PivotBasis(G.field, k)
    while True:
        best = None
        for grp in groups:
            new = [p for p in grp if p not in chosen]
            if not new:
                continue
            trial = basis.clone()
            for p in new:
                trial.add(cols[p])
            if trial.rank < k and (best is None or len(new) > len(best[0])):
                best = (new, trial)
        if best is None:
            break
        chosen.update(best[0])
        basis = best[1]

    # partial-group step: single columns, in position order
    for pos in range(G.cols):
        if pos in chosen:
            continue
        trial = basis.clone()
        trial.add(cols[pos])
        if trial.rank < k:
            chosen.add(pos)
            basis = trial
    return tuple(sorted(chosen))


@dataclass
class FlowGraph:
    n: int
    k: int
    r: int
    d: int
    num_groups: int
    num_nodes: int
    x_nodes: tuple
    group_in: tuple
    group_out: tuple
    y_in: tuple
    y_out: tuple
    dc_nodes: tuple
    dc_members: tuple               # per DC, the n-d+1 block indices it taps
    base_edges: list = dc_field(repr=False, default=None)  # (u, v, cap)
    dc_edges: list = dc_field(repr=False, default=None)    # per DC list

    @property
    def inf(self):
        return self.n * self.k + 1

    def edge_count(self):
        return len(self.base_edges) + sum(len(e) for e in self.dc_edges)

    def edges(self):
        out = list(self.base_edges)
        for group in self.dc_edges:
            out.extend(group)
        return out


def flow_edge_count(n, k, r, d):
    """Closed-form edge total (collector feeds included, super-source not)."""
    b = n - d + 1
    return n * (k + 2 * r + 3) // (r + 1) + b * comb(n, b)


def build_flow_graph(k, n, r, d):
    """Construct the full network including every data collector."""
    if (n % (r + 1)) != 0:
        raise ValueError("(r+1) must divide n")
    if not (1 <= r <= k < n):
        raise ValueError("need 1 <= r <= k < n")
    b = n - d + 1
    if not (0 <= b <= n):
        raise ValueError("n-d+1 out of range")
    g = n // (r + 1)
    inf = n * k + 1

    ids = iter(range(10 ** 9))
    x = tuple(next(ids) for _ in range(k))
    gin = tuple(next(ids) for _ in range(g))
    gout = tuple(next(ids) for _ in range(g))
    yin = tuple(next(ids) for _ in range(n))
    yout = tuple(next(ids) for _ in range(n))
    members = tuple(combinations(range(n), b))
    dcs = tuple(next(ids) for _ in range(len(members)))
    total = k + 2 * g + 2 * n + len(members)

    edges = []
    for xi in x:
        for gj in gin:
            edges.append((xi, gj, inf))
    for j in range(g):
        edges.append((gin[j], gout[j], r))
    for i in range(n):
        edges.append((gout[i // (r + 1)], yin[i], inf))
        edges.append((yin[i], yout[i], 1))
    dc_edges = [[(yout[i], dcs[l], inf) for i in mem]
                for l, mem in enumerate(members)]

    return FlowGraph(n=n, k=k, r=r, d=d, num_groups=g, num_nodes=total,
                     x_nodes=x, group_in=gin, group_out=gout,
                     y_in=yin, y_out=yout, dc_nodes=dcs, dc_members=members,
                     base_edges=edges, dc_edges=dc_edges)


class _Residual:
    """Adjacency-array residual network with BFS augmenting paths."""

    def __init__(self, num_nodes):
        self.adj = [[] for _ in range(num_nodes)]
        self.to = []
        self.cap = []

    def add(self, u, v, cap):
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s, t):
        total = 0
        adj, to, cap = self.adj, self.to, self.cap
        while True:
            prev = [-1] * len(adj)
            prev[s] = -2
            queue = [s]
            while queue and prev[t] == -1:
                nxt = []
                for u in queue:
                    for eid in adj[u]:
                        v = to[eid]
                        if prev[v] == -1 and cap[eid] > 0:
                            prev[v] = eid
                            nxt.append(v)
                queue = nxt
            if prev[t] == -1:
                return total
            push = None
            v = t
            while v != s:
                eid = prev[v]
                push = cap[eid] if push is None else min(push, cap[eid])
                v = to[eid ^ 1]
            v = t
            while v != s:
                eid = prev[v]
                cap[eid] -= push
                cap[eid ^ 1] += push
                v = to[eid ^ 1]
            total += push


@dataclass(frozen=True)
class CutReport:
    min_flow: int
    passed: bool
    required: int
    per_dc: tuple
    dc_count: int
    worst_dc: tuple   # member set of the weakest collector


def min_cut_check(fg, M=None, sample=None, rng=None):
    """Max-flow from a super-source into each collector; pass iff all >= M.

    M defaults to k (the scaled file size). Each collector is evaluated on
    its own small residual network; other collectors are dead weight for the
    flow, so they are left out. sample limits the check to that many randomly
    chosen collectors (acceptance-grade runs keep the exhaustive default).
    """
    if M is None:
        M = fg.k

    # compact id space: 0 = super-source, then the shared skeleton, then 1 DC
    remap = {}
    for node in (fg.x_nodes + fg.group_in + fg.group_out + fg.y_in + fg.y_out):
        remap[node] = len(remap) + 1
    dc_slot = len(remap) + 1
    skeleton = [(remap[u], remap[v], c) for u, v, c in fg.base_edges]
    for xi in fg.x_nodes:
        skeleton.append((0, remap[xi], fg.inf))

    indices = range(len(fg.dc_members))
    if sample is not None and sample < len(fg.dc_members):
        import random
        indices = (rng or random.Random(0)).sample(indices, sample)

    flows = []
    for l in indices:
        net = _Residual(dc_slot + 1)
        for u, v, c in skeleton:
            net.add(u, v, c)
        for i in fg.dc_members[l]:
            net.add(remap[fg.y_out[i]], dc_slot, fg.inf)
        flows.append(net.max_flow(0, dc_slot))

    worst = min(range(len(flows)), key=lambda i: flows[i]) if flows else 0
    min_flow = flows[worst] if flows else 0
    return CutReport(min_flow=min_flow, passed=all(f >= M for f in flows),
                     required=M, per_dc=tuple(flows),
                     dc_count=len(fg.dc_members),
                     worst_dc=fg.dc_members[list(indices)[worst]] if flows else ())
