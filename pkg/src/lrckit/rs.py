"""Systematic Reed-Solomon codes from a Vandermonde parity-check matrix.

H[i][j] = alpha^(i*j) (0-based), n-k rows by n columns. Row 0 is all ones, so
the sum of every generator column is zero; the locality layer builds on that.
"""

from dataclasses import dataclass, field as dc_field

from .gf import GF, Matrix


class UnrecoverableError(Exception):
    """Too few independent symbols survive to recover the data."""

    def __init__(self, message, erased=None):
        super().__init__(message)
        self.erased = frozenset(erased) if erased is not None else frozenset()


@dataclass(frozen=True)
class CodeSpec:
    k: int
    n: int
    field: GF
    r: int | None = None   # locality, None for plain RS

    def __post_init__(self):
        if not 1 <= self.k < self.n:
            raise ValueError("need 1 <= k < n")
        if self.r is not None and not 1 <= self.r <= self.k:
            raise ValueError("need 1 <= r <= k")


@dataclass
class RsCode:
    spec: CodeSpec
    G: Matrix                  # k x n, systematic [I | Q]
    H: Matrix                  # (n-k) x n Vandermonde
    _columns: list = dc_field(default=None, repr=False)

    @property
    def k(self):
        return self.spec.k

    @property
    def n(self):
        return self.spec.n

    @property
    def field(self):
        return self.spec.field

    def columns(self):
        if self._columns is None:
            self._columns = self.G.columns()
        return self._columns


def vandermonde_check_matrix(field, k, n):
    alpha = field.generator
    rows = []
    for i in range(n - k):
        rows.append([field.pow(alpha, i * j) for j in range(n)])
    return Matrix(field, rows)


def build_rs(spec):
    """Construct the systematic generator for the code that H annihilates.

    Splitting H = [H1 | H2] with square H2, a word (x, p) is a codeword iff
    H1 x^T + H2 p^T = 0, so G = [I | (H2^-1 H1)^T].
    """
    k, n, f = spec.k, spec.n, spec.field
    if n > f.q - 1:
        raise ValueError("n must be <= q-1 so the alpha powers stay distinct")
    H = vandermonde_check_matrix(f, k, n)
    H1 = H.submatrix_cols(range(k))
    H2 = H.submatrix_cols(range(k, n))
    Q = H2.inverse().mul(H1).transpose()        # k x (n-k)
    G = Matrix.identity(f, k).hstack(Q)
    product = G.mul(H.transpose())
    if not (product.rows == k and product.cols == n - k and product.is_zero()):
        raise RuntimeError("generator/parity-check mismatch")
    return RsCode(spec=spec, G=G, H=H)


def rs_encode(code, data):
    """Map k data symbols to the full n-symbol codeword."""
    if len(data) != code.k:
        raise ValueError("expected %d data symbols" % code.k)
    f = code.field
    for v in data:
        f.validate(v)
    out = list(data)
    mul = f.mul
    for j in range(code.k, code.n):
        acc = 0
        for i in range(code.k):
            g = code.G.data[i][j]
            if g and data[i]:
                acc ^= mul(g, data[i])
        out.append(acc)
    return out


def rs_decode(code, available, erased=None):
    """Recover the k data symbols from >= k surviving (position, symbol) pairs.

    Any k distinct columns of an MDS generator are independent, so the first k
    surviving positions always carry enough information. erased, when given,
    must be consistent with the surviving positions.
    """
    sym = dict(available)
    for pos in sym:
        if not 0 <= pos < code.n:
            raise ValueError("position %r out of range" % (pos,))
    if erased is not None and set(erased) & set(sym):
        raise ValueError("a position cannot be both erased and available")
    if len(sym) < code.k:
        missing = set(erased) if erased is not None else set(range(code.n)) - set(sym)
        raise UnrecoverableError(
            "only %d of %d required symbols survive" % (len(sym), code.k), missing)
    fast = all(i in sym for i in range(code.k))
    if fast:
        return [sym[i] for i in range(code.k)]
    positions = sorted(sym)[:code.k]
    sub = code.G.submatrix_cols(positions)       # k x k
    y = [sym[p] for p in positions]
    try:
        return sub.transpose().solve(y)
    except Exception as exc:  # pragma: no cover - MDS makes this unreachable
        raise RuntimeError("k surviving RS columns were singular; "
                           "MDS invariant violated") from exc
