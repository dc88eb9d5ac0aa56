"""On-disk stripe container.

One record per stripe, concatenated: a little-endian header (magic "LRCX",
version, field degree m, k, stored width n, locality r with 0 meaning plain
RS, block size, original payload length), a presence bitmap of ceil(n/8)
bytes, then the present blocks in index order. Files shorter than a stripe
are zero-padded; original_length trims the padding back off on decode.
"""

import struct
from dataclasses import dataclass
from functools import lru_cache

from .gf import GF
from .lrc import (Stripe, build_lrc, decode_stripe, encode_stripe,
                  execute_repair, plan_repair)
from .rs import CodeSpec, UnrecoverableError, build_rs

MAGIC = b"LRCX"
VERSION = 1
_HEADER = struct.Struct("<4sBBHHHIQ")


class ArchiveError(Exception):
    """Malformed archive."""


class BadMagicError(ArchiveError):
    pass


class TruncatedError(ArchiveError):
    pass


@dataclass
class StripeRecord:
    m: int
    k: int
    n: int                # stored blocks per stripe
    r: int                # 0 for plain RS
    block_size: int
    original_length: int
    blocks: list          # length n; None where absent

    def present_positions(self):
        return [i for i, b in enumerate(self.blocks) if b is not None]


@lru_cache(maxsize=8)
def code_for(m, k, n, r):
    """The codec a record's header describes."""
    field = GF(m)
    if r == 0:
        return build_rs(CodeSpec(k=k, n=n, field=field))
    p = n - k - k // r
    if p < 1:
        raise ArchiveError("header implies %d RS parities" % p)
    code = build_lrc(k, p, r, field=field)
    if code.n_total != n:
        raise ArchiveError("header width %d does not match the (%d,%d,%d) "
                           "layout" % (n, k, p, r))
    return code


def _bitmap(flags):
    out = bytearray((len(flags) + 7) // 8)
    for i, present in enumerate(flags):
        if present:
            out[i // 8] |= 1 << (i % 8)
    return bytes(out)


def write_archive(path, records):
    with open(path, "wb") as fh:
        for rec in records:
            fh.write(_HEADER.pack(MAGIC, VERSION, rec.m, rec.k, rec.n, rec.r,
                                  rec.block_size, rec.original_length))
            fh.write(_bitmap([b is not None for b in rec.blocks]))
            for block in rec.blocks:
                if block is not None:
                    if len(block) != rec.block_size:
                        raise ArchiveError("block size mismatch on write")
                    fh.write(block)


def read_archive(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    records = []
    off = 0
    while off < len(raw):
        if len(raw) - off < _HEADER.size:
            raise TruncatedError("header cut short at byte %d" % off)
        magic, version, m, k, n, r, block_size, length = _HEADER.unpack_from(raw, off)
        if magic != MAGIC:
            raise BadMagicError("bad magic %r at byte %d" % (magic, off))
        if version != VERSION:
            raise ArchiveError("unsupported version %d" % version)
        off += _HEADER.size
        bm_len = (n + 7) // 8
        if len(raw) - off < bm_len:
            raise TruncatedError("bitmap cut short at byte %d" % off)
        bitmap = raw[off:off + bm_len]
        off += bm_len
        blocks = []
        for i in range(n):
            if bitmap[i // 8] >> (i % 8) & 1:
                if len(raw) - off < block_size:
                    raise TruncatedError("block %d cut short at byte %d"
                                         % (i, off))
                blocks.append(raw[off:off + block_size])
                off += block_size
            else:
                blocks.append(None)
        records.append(StripeRecord(m=m, k=k, n=n, r=r, block_size=block_size,
                                    original_length=length, blocks=blocks))
    return records


def encode_file(input_path, archive_path, scheme="lrc", k=10, p=4, r=5,
                block_size=1 << 20):
    """Stripe, encode and write a file; returns the record count."""
    if scheme not in ("rs", "lrc"):
        raise ValueError("scheme must be rs or lrc")
    if scheme == "lrc":
        code = build_lrc(k, p, r, field=GF())
        n, rr = code.n_total, r
    else:
        code = build_rs(CodeSpec(k=k, n=k + p, field=GF()))
        n, rr = k + p, 0
    stripe_bytes = k * block_size
    records = []
    with open(input_path, "rb") as fh:
        data = fh.read()
    chunks = [data[i:i + stripe_bytes]
              for i in range(0, len(data), stripe_bytes)] or [b""]
    for chunk in chunks:
        stripe = encode_stripe(code, chunk, block_size)
        records.append(StripeRecord(m=8, k=k, n=n, r=rr,
                                    block_size=block_size,
                                    original_length=len(chunk),
                                    blocks=list(stripe.blocks)))
    write_archive(archive_path, records)
    return len(records)


def decode_file(archive_path, output_path):
    """Reassemble the original file; returns bytes written.

    Decodes everything before the output is created, so a missing archive or
    an unrecoverable stripe never leaves a truncated file behind."""
    payloads = []
    for rec in read_archive(archive_path):
        code = code_for(rec.m, rec.k, rec.n, rec.r)
        stripe = Stripe(blocks=rec.blocks, block_size=rec.block_size)
        payloads.append(decode_stripe(code, stripe,
                                      length=rec.original_length))
    with open(output_path, "wb") as fh:
        for payload in payloads:
            fh.write(payload)
    return sum(len(p) for p in payloads)


def corrupt_archive(path, positions, stripe_index=0):
    """Drop the named blocks from one stripe (bitmap bit cleared, payload
    removed)."""
    records = read_archive(path)
    if not 0 <= stripe_index < len(records):
        raise ValueError("archive has %d stripes" % len(records))
    rec = records[stripe_index]
    for pos in positions:
        if not 0 <= pos < rec.n:
            raise ValueError("block %d out of range" % pos)
        rec.blocks[pos] = None
    write_archive(path, records)


@dataclass
class RepairReport:
    stripe_index: int
    lost: tuple
    description: str
    blocks_read: int
    recovered: bool


def _describe(plan):
    parts = []
    for step in plan.steps:
        if step.kind == "light":
            parts.append("light via implied parity" if step.via_implied
                         else "light")
        else:
            parts.append("heavy")
    return ", ".join(parts)


def repair_archive(path):
    """Rebuild every missing block; returns per-stripe reports. Stripes whose
    erasure pattern is unrecoverable are reported and left untouched."""
    records = read_archive(path)
    reports = []
    changed = False
    for idx, rec in enumerate(records):
        lost = tuple(i for i, b in enumerate(rec.blocks) if b is None)
        if not lost:
            continue
        code = code_for(rec.m, rec.k, rec.n, rec.r)
        try:
            plan = plan_repair(code, lost)
        except UnrecoverableError:
            reports.append(RepairReport(stripe_index=idx, lost=lost,
                                        description="unrecoverable",
                                        blocks_read=0, recovered=False))
            continue
        stripe = Stripe(blocks=rec.blocks, block_size=rec.block_size)
        repaired = execute_repair(code, stripe, plan)
        rec.blocks = repaired.blocks
        changed = True
        reports.append(RepairReport(stripe_index=idx, lost=lost,
                                    description=_describe(plan),
                                    blocks_read=plan.blocks_read,
                                    recovered=True))
    if changed:
        write_archive(path, records)
    return reports


@dataclass
class VerifyReport:
    stripe_index: int
    status: str          # ok | degraded | mismatch | unrecoverable
    missing: tuple


def verify_archive(path):
    """Re-derive every parity from the (possibly reconstructed) data and
    compare against the stored blocks."""
    reports = []
    for idx, rec in enumerate(read_archive(path)):
        code = code_for(rec.m, rec.k, rec.n, rec.r)
        missing = tuple(i for i, b in enumerate(rec.blocks) if b is None)
        stripe = Stripe(blocks=rec.blocks, block_size=rec.block_size)
        try:
            payload = decode_stripe(code, stripe)
        except UnrecoverableError:
            reports.append(VerifyReport(stripe_index=idx,
                                        status="unrecoverable",
                                        missing=missing))
            continue
        reference = encode_stripe(code, payload, rec.block_size)
        same = all(rec.blocks[i] is None or rec.blocks[i] == reference.blocks[i]
                   for i in range(rec.n))
        status = "mismatch" if not same else ("degraded" if missing else "ok")
        reports.append(VerifyReport(stripe_index=idx, status=status,
                                    missing=missing))
    return reports
