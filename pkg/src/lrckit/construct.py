"""Randomized construction of locally repairable generators.

Partition n columns into n/(r+1) groups. In each group, r columns get
independent uniform nonzero coefficients over the k sources and the last
column is a nonzero-weighted sum of its group-mates, giving the local
dependency by construction. Over a large enough field a draw hits the
distance ceiling with probability at least (1 - T/q)^eta, so a handful of
retries suffices; every attempt is distance-verified, never trusted.
"""

import random
from dataclasses import dataclass
from math import comb

from .bounds import distance_bound
from .gf import Matrix, SingularMatrixError
from .lrc import brute_distance


@dataclass(frozen=True)
class ConstructionAttempt:
    k: int
    n: int
    r: int
    q: int
    seed: object
    trials: int
    success: bool
    achieved_d: int
    G: Matrix | None


def construction_groups(n, r):
    """Group layout of the random construction: group j owns the random
    columns j*r..j*r+r-1 plus its local column at position n*r/(r+1) + j.
    Locals sit at the end so the leading k columns stay dependency-free and
    post-hoc systematization has a chance."""
    g = n // (r + 1)
    eta = g * r
    return tuple(tuple(range(j * r, (j + 1) * r)) + (eta + j,)
                 for j in range(g))


def random_lrc(k, n, r, field, rng):
    """One random draw: a k x n generator with per-group local dependencies."""
    if n % (r + 1) != 0:
        raise ValueError("(r+1) must divide n")
    if field.q < n:
        raise ValueError("field too small: need q >= n")
    if not 1 <= r <= k:
        raise ValueError("need 1 <= r <= k")
    randoms = []
    locals_ = []
    for _ in range(n // (r + 1)):
        group = [[field.rand_nonzero(rng) for _ in range(k)] for _ in range(r)]
        local = [0] * k
        for col in group:
            w = field.rand_nonzero(rng)
            local = [x ^ field.mul(w, y) for x, y in zip(local, col)]
        randoms.extend(group)
        locals_.append(local)
    cols = randoms + locals_
    return Matrix(field, [[col[i] for col in cols] for i in range(k)])


def systematize(G):
    """Row-reduce so the first k columns become the identity; None when the
    leading k x k block is singular."""
    lead = G.submatrix_cols(range(G.rows))
    try:
        inv = lead.inverse()
    except SingularMatrixError:
        return None
    return inv.mul(G)


def _trial(k, n, r, field, rng, target):
    G = random_lrc(k, n, r, field, rng)
    Gs = systematize(G)
    if Gs is None:
        return None, -1
    d = brute_distance(Gs, k)
    if d > target:
        raise RuntimeError(
            "achieved distance %d exceeds the locality bound %d" % (d, target))
    return Gs, d


def construct_with_retry(k, n, r, field, max_trials=500, seed=0):
    """Redraw until the verified distance meets the bound with equality."""
    target = distance_bound(n, k, r)
    best_d, best_G = -1, None
    for t in range(max_trials):
        rng = random.Random("%s:trial:%d" % (seed, t))
        G, d = _trial(k, n, r, field, rng, target)
        if d > best_d:
            best_d, best_G = d, G
        if d == target:
            return ConstructionAttempt(k=k, n=n, r=r, q=field.q, seed=seed,
                                       trials=t + 1, success=True,
                                       achieved_d=d, G=G)
    return ConstructionAttempt(k=k, n=n, r=r, q=field.q, seed=seed,
                               trials=max_trials, success=False,
                               achieved_d=best_d, G=best_G)


def trial_success_rate(k, n, r, field, trials, seed=0):
    """Fraction of independent draws that hit the bound (failed
    systematization counts as a miss)."""
    target = distance_bound(n, k, r)
    hits = 0
    for t in range(trials):
        rng = random.Random("%s:trial:%d" % (seed, t))
        _, d = _trial(k, n, r, field, rng, target)
        hits += d == target
    return hits / trials


def rlnc_success_lower_bound(q, n, k, r):
    """Reference curve (1 - T/q)^eta: T decoding submatrices that must stay
    invertible, eta randomly-coefficiented columns."""
    d = distance_bound(n, k, r)
    T = comb(n, n - d + 1)
    eta = n * r // (r + 1)
    if T >= q:
        return 0.0
    return (1.0 - T / q) ** eta
