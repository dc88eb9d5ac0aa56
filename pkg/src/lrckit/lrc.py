"""Locally repairable layer on top of the systematic RS code.

For (k, p, r) with r | k the stored stripe is:

    positions 0..k-1        data blocks
    positions k..k+p-1      RS parity blocks
    positions k+p..         one local parity per data group of r blocks

Each local parity is the coefficient-weighted sum of its group's generator
columns. Because the RS generator columns sum to zero, the local parities and
the RS parities satisfy one more alignment identity, which makes the parity
group's own parity implied rather than stored: summing all local parities
yields the sum of the RS parity columns for free. Single losses then repair by
reading r blocks instead of k.
"""

from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .gf import GF, Matrix, PivotBasis
from .rs import CodeSpec, RsCode, UnrecoverableError, build_rs


class PlanStaleError(Exception):
    """A repair plan referenced source blocks that are no longer present."""


@dataclass(frozen=True)
class RepairStep:
    target: int
    kind: str                  # "light" or "heavy"
    sources: tuple
    via_implied: bool = False  # light repair of an RS parity routes through
                               # the reconstructed implied parity


@dataclass(frozen=True)
class RepairPlan:
    lost: tuple
    steps: tuple
    blocks_read: int           # size of the union of all step sources


@dataclass
class LrcCode:
    base: RsCode
    r: int
    G: Matrix                   # k x n_total, base generator plus local columns
    data_groups: tuple          # tuple of tuples of data positions
    local_coeffs: tuple         # per data position, coefficient inside its local sum
    light_sets: dict            # position -> tuple of source positions
    implied_coeffs: tuple = ()  # weight per RS parity inside the implied parity
    implied_group: tuple = ()   # RS parity positions whose weighted sum is implied
    implied_parity_stored: bool = False
    _columns: list = dc_field(default=None, repr=False)

    @property
    def k(self):
        return self.base.k

    @property
    def p(self):
        return self.base.n - self.base.k

    @property
    def n_total(self):
        return self.G.cols

    @property
    def field(self):
        return self.base.field

    @property
    def data_positions(self):
        return tuple(range(self.k))

    @property
    def parity_positions(self):
        return tuple(range(self.k, self.k + self.p))

    @property
    def local_positions(self):
        return tuple(range(self.k + self.p, self.n_total))

    def group_of(self, pos):
        """The repair group owning pos: data group for data/local positions,
        the parity family for RS parities."""
        if pos < self.k:
            return self.data_groups[pos // self.r]
        idx = pos - self.k - self.p
        if 0 <= idx < len(self.data_groups):
            return self.data_groups[idx]
        return self.parity_positions

    def columns(self):
        if self._columns is None:
            self._columns = self.G.columns()
        return self._columns


def column_sum(G):
    """Sum (XOR, columnwise) of all columns of G."""
    out = [0] * G.rows
    for row_idx, row in enumerate(G.data):
        acc = 0
        for v in row:
            acc ^= v
        out[row_idx] = acc
    return out


def verify_alignment(code):
    """True iff the base generator's columns sum to the zero vector."""
    G = code.base.G if isinstance(code, LrcCode) else code.G
    return not any(column_sum(G))


def build_lrc(k=10, p=4, r=5, field=None, local_coeffs=None):
    """Build the stored-stripe code: k data, p RS parities, k/r local parities.

    local_coeffs: optional per-data-position nonzero weights for the local
    sums; defaults to all ones, which the base RS alignment supports.
    """
    if field is None:
        field = GF()
    if r < 1 or k % r != 0:
        raise ValueError("r must divide k")
    if p < 1:
        raise ValueError("need at least one RS parity")
    spec = CodeSpec(k=k, n=k + p, field=field, r=r)
    base = build_rs(spec)
    groups = tuple(tuple(range(j * r, (j + 1) * r)) for j in range(k // r))
    if local_coeffs is None:
        local_coeffs = tuple(1 for _ in range(k))
    else:
        local_coeffs = tuple(local_coeffs)
        if len(local_coeffs) != k or any(c == 0 for c in local_coeffs):
            raise ValueError("need k nonzero local coefficients")

    base_cols = base.G.columns()
    local_cols = []
    for grp in groups:
        col = [0] * k
        for pos in grp:
            c = local_coeffs[pos]
            col = [x ^ field.mul(c, y) for x, y in zip(col, base_cols[pos])]
        local_cols.append(col)

    # Alignment: sum of all base columns zero means the parity family's own
    # parity equals the sum of the stored local parities, so it stays implied.
    implied_ok = verify_alignment(base) and all(c == 1 for c in local_coeffs)
    extra = list(local_cols)
    if not implied_ok:
        # graceful fallback: store the parity-group parity explicitly
        col = [0] * k
        for j in range(k, k + p):
            col = [x ^ y for x, y in zip(col, base_cols[j])]
        extra.append(col)

    G = base.G.hstack(Matrix(field, [[col[i] for col in extra] for i in range(k)]))
    n_total = G.cols
    g = len(groups)
    local_start = k + p

    light = {}
    for j, grp in enumerate(groups):
        local_pos = local_start + j
        for pos in grp:
            light[pos] = tuple(q for q in grp if q != pos) + (local_pos,)
        light[local_pos] = grp
    parity_positions = tuple(range(k, k + p))
    if implied_ok:
        implied_sources = tuple(range(local_start, local_start + g))
    else:
        implied_sources = (n_total - 1,)
    for pos in parity_positions:
        others = tuple(q for q in parity_positions if q != pos)
        light[pos] = others + implied_sources
    if not implied_ok:
        light[n_total - 1] = parity_positions

    return LrcCode(base=base, r=r, G=G, data_groups=groups,
                   local_coeffs=local_coeffs, light_sets=light,
                   implied_coeffs=tuple(1 for _ in range(p)),
                   implied_group=parity_positions,
                   implied_parity_stored=not implied_ok)


def lrc_encode(code, data):
    """Map k data symbols to the n_total stored symbols."""
    if len(data) != code.k:
        raise ValueError("expected %d data symbols" % code.k)
    f = code.field
    mul = f.mul
    out = list(data)
    for j in range(code.k, code.n_total):
        acc = 0
        for i in range(code.k):
            g = code.G.data[i][j]
            if g and data[i]:
                acc ^= mul(g, data[i])
        out.append(acc)
    return out


def plan_repair(code, erased):
    """Decide, per lost block, between the light group repair and the full
    RS decode. Light repair applies whenever the block's own light set is
    intact, even if other groups also lost blocks. Heavy targets share one
    read set of k independent survivors, so blocks_read counts the union.
    Plain RS codes have no light sets; every loss goes heavy.
    """
    erased = frozenset(erased)
    width = code.G.cols
    if not erased:
        raise ValueError("nothing to repair")
    if not all(0 <= pos < width for pos in erased):
        raise ValueError("erased position out of range")
    alive = [pos for pos in range(width) if pos not in erased]
    light_sets = code.light_sets if isinstance(code, LrcCode) else {}

    steps = []
    heavy_targets = []
    for target in sorted(erased):
        sources = light_sets.get(target)
        if sources and all(src not in erased for src in sources):
            steps.append(RepairStep(
                target=target, kind="light", sources=sources,
                via_implied=target in code.parity_positions
                and not code.implied_parity_stored))
        else:
            heavy_targets.append(target)

    if heavy_targets:
        heavy_sources = _heavy_sources(code, alive, erased)
        for target in heavy_targets:
            steps.append(RepairStep(target=target, kind="heavy",
                                    sources=heavy_sources))
        steps.sort(key=lambda s: s.target)

    union = set()
    for step in steps:
        union.update(step.sources)
    return RepairPlan(lost=tuple(sorted(erased)), steps=tuple(steps),
                      blocks_read=len(union))


def _heavy_sources(code, alive, erased):
    """k independent surviving positions. Any k surviving base-RS positions
    work outright (MDS); otherwise fall back to a rank search over all
    surviving columns of the stored generator."""
    k = code.k
    rs_span = code.base.n if isinstance(code, LrcCode) else code.G.cols
    rs_alive = [pos for pos in alive if pos < rs_span]
    if len(rs_alive) >= k:
        return tuple(rs_alive[:k])
    cols = code.columns()
    basis = PivotBasis(code.field, k)
    chosen = []
    for pos in alive:
        if basis.add(cols[pos]):
            chosen.append(pos)
            if len(chosen) == k:
                return tuple(chosen)
    raise UnrecoverableError(
        "surviving blocks span rank %d < %d" % (len(chosen), k), erased)


def _combine_payloads(field, parts):
    """XOR byte payloads: (coeff, payload) pairs, coefficients applied first."""
    import numpy as np

    table = field.byte_mul_table()
    acc = None
    for coeff, payload in parts:
        arr = np.frombuffer(payload, dtype=np.uint8)
        if coeff != 1:
            arr = table[coeff][arr]
        acc = arr.copy() if acc is None else acc ^ arr
    return acc.tobytes()


@dataclass
class Stripe:
    """Stored blocks of one stripe; None marks an erased block."""
    blocks: list
    block_size: int

    def present(self):
        return [i for i, b in enumerate(self.blocks) if b is not None]

    def erased(self):
        return frozenset(i for i, b in enumerate(self.blocks) if b is None)


def encode_stripe(code, payload, block_size):
    """Split payload into k data blocks (zero-padded) and add every parity."""
    if code.field.m != 8:
        raise ValueError("payload codec works on the byte field GF(2^8)")
    import numpy as np

    k = code.k
    padded = payload.ljust(k * block_size, b"\0")
    if len(padded) != k * block_size:
        raise ValueError("payload longer than one stripe")
    data = np.frombuffer(padded, dtype=np.uint8).reshape(k, block_size)
    table = code.field.byte_mul_table()
    blocks = [data[i].tobytes() for i in range(k)]
    for j in range(k, code.G.cols):
        acc = np.zeros(block_size, dtype=np.uint8)
        for i in range(k):
            g = code.G.data[i][j]
            if g == 1:
                acc ^= data[i]
            elif g:
                acc ^= table[g][data[i]]
        blocks.append(acc.tobytes())
    return Stripe(blocks=blocks, block_size=block_size)


def _decode_data_blocks(code, stripe):
    """Recover all k data payloads from whatever blocks are present."""
    import numpy as np

    k = code.k
    if all(stripe.blocks[i] is not None for i in range(k)):
        return [stripe.blocks[i] for i in range(k)]
    alive = stripe.present()
    sources = _heavy_sources(code, alive, stripe.erased())
    sub = code.G.submatrix_cols(sources)         # k x k, invertible
    inv = sub.inverse()
    # data_i = sum_j inv[j][i] * y_j  (x = y * C^-1 for row-vector data)
    table = code.field.byte_mul_table()
    arrays = [np.frombuffer(stripe.blocks[pos], dtype=np.uint8) for pos in sources]
    out = []
    for i in range(k):
        acc = np.zeros(stripe.block_size, dtype=np.uint8)
        for j in range(k):
            c = inv.data[j][i]
            if c == 1:
                acc ^= arrays[j]
            elif c:
                acc ^= table[c][arrays[j]]
        out.append(acc.tobytes())
    return out


def decode_stripe(code, stripe, length=None):
    """Concatenated data payload, trimmed to length when given."""
    data = _decode_data_blocks(code, stripe)
    payload = b"".join(data)
    return payload if length is None else payload[:length]


def execute_repair(code, stripe, plan):
    """Rebuild every planned target; returns a new Stripe."""
    blocks = list(stripe.blocks)
    for step in plan.steps:
        for src in step.sources:
            if blocks[src] is None:
                raise PlanStaleError("source block %d missing" % src)

    heavy_data = None
    for step in plan.steps:
        if step.kind == "light":
            blocks[step.target] = _light_rebuild(code, blocks, step)
        else:
            if heavy_data is None:
                heavy_data = _heavy_decode(code, blocks, step.sources, stripe.block_size)
            blocks[step.target] = _column_payload(code, heavy_data, step.target)
    return Stripe(blocks=blocks, block_size=stripe.block_size)


def _light_rebuild(code, blocks, step):
    f = code.field
    target = step.target
    parts = []
    if target < code.k:
        # X_t = c_t^-1 (S_group - sum of c_i X_i over the other members)
        scale = f.inv(code.local_coeffs[target])
        for src in step.sources:
            coeff = code.local_coeffs[src] if src < code.k else 1
            parts.append((f.mul(scale, coeff), blocks[src]))
    elif target in code.local_positions:
        for src in step.sources:
            coeff = code.local_coeffs[src] if src < code.k else 1
            parts.append((coeff, blocks[src]))
    else:
        # RS parity: implied parity is the XOR of the stored local parities,
        # then the other RS parities cancel out of it.
        for src in step.sources:
            parts.append((1, blocks[src]))
    return _combine_payloads(f, parts)


def _heavy_decode(code, blocks, sources, block_size):
    probe = Stripe(blocks=[blocks[i] if i in set(sources) else None
                           for i in range(code.G.cols)],
                   block_size=block_size)
    return _decode_data_blocks(code, probe)


def _column_payload(code, data_blocks, target):
    """Re-encode one stored column from the decoded data payloads."""
    parts = [(code.G.data[i][target], data_blocks[i])
             for i in range(code.k) if code.G.data[i][target]]
    if not parts:
        return b"\0" * len(data_blocks[0])
    return _combine_payloads(code.field, parts)


def repair_groups(code):
    """Declared repair groups as stored-column index sets.

    Layered code: each data group with its local parity, plus the parity
    family (the RS parities together with the columns their implied parity
    is rebuilt from). Plain MDS code: sliding windows of k+1 columns, the
    smallest dependent sets it has.
    """
    if isinstance(code, LrcCode):
        groups = []
        for j, grp in enumerate(code.data_groups):
            groups.append(grp + (code.k + code.p + j,))
        if code.implied_parity_stored:
            family = code.parity_positions + (code.n_total - 1,)
        else:
            family = code.parity_positions + code.local_positions
        groups.append(family)
        return tuple(groups)
    k, n = code.k, code.n
    return tuple(tuple(range(i, i + k + 1)) for i in range(n - k))


def verify_locality(code, sample_trials=200, rng=None):
    """Largest read set any single stored block needs for repair.

    For the layered code this checks every light set actually spans its
    target column. For plain RS it confirms no set smaller than k works:
    exhaustively for n <= 6, by sampling for larger n (backed by the MDS
    independence of any k generator columns).
    """
    if isinstance(code, LrcCode):
        cols = code.columns()
        worst = 0
        for pos in range(code.n_total):
            sources = code.light_sets[pos]
            basis = PivotBasis(code.field, code.k)
            for src in sources:
                basis.add(cols[src])
            if not basis.contains(cols[pos]):
                raise RuntimeError("light set of position %d does not span it" % pos)
            worst = max(worst, len(sources))
        return worst
    return _mds_locality(code, sample_trials, rng)


def _mds_locality(code, sample_trials, rng):
    import random

    cols = code.G.columns()
    k, n = code.k, code.n
    if n <= 6:
        worst = 0
        for j in range(n):
            others = [q for q in range(n) if q != j]
            found = None
            for size in range(1, k + 1):
                for subset in combinations(others, size):
                    basis = PivotBasis(code.field, k)
                    for s in subset:
                        basis.add(cols[s])
                    if basis.contains(cols[j]):
                        found = size
                        break
                if found:
                    break
            worst = max(worst, found if found else k)
        return worst
    rng = rng or random.Random(0)
    for _ in range(sample_trials):
        j = rng.randrange(n)
        others = [q for q in range(n) if q != j]
        subset = rng.sample(others, k - 1)
        basis = PivotBasis(code.field, k)
        for s in subset:
            basis.add(cols[s])
        if basis.contains(cols[j]):
            raise RuntimeError("column %d lay in a span of %d others" % (j, k - 1))
    return k


def brute_distance(G, k):
    """Exhaustive erasure distance: n minus the largest column subset whose
    span has rank below k. Scans subset sizes downward and stops at the first
    size admitting a deficient subset."""
    if G.rows != k:
        raise ValueError("k must equal the generator's row count")
    n = G.cols
    if n > 20:
        raise ValueError("exhaustive scan capped at 20 columns")
    cols = [tuple(col) for col in G.columns()]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            basis = PivotBasis(G.field, k)
            deficient = True
            for idx in subset:
                basis.add(cols[idx])
                if basis.rank >= k:
                    deficient = False
                    break
            if deficient:
                return n - size
    return n   # unreachable: the empty subset always has rank 0 < k
