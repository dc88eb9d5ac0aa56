"""Command-line front end.

Exit codes: 0 success, 1 a requested check failed (verify mismatch, cut or
bound violation), 2 unrecoverable data, 3 invalid input, 4 I/O error.
"""

import argparse
import csv
import os
import sys

from . import container, report, sim
from .bounds import build_flow_graph, distance_bound, min_cut_check
from .construct import construct_with_retry
from .gf import GF
from .lrc import brute_distance
from .reliability import (ClusterParams, SECONDS_PER_YEAR,
                          download_assumptions, format_assumptions,
                          format_summary, summary_table)
from .rs import UnrecoverableError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_UNRECOVERABLE = 2
EXIT_INVALID = 3
EXIT_IO = 4


def _positions(text):
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise ValueError("expected comma-separated block indices, got %r"
                         % text)


def cmd_encode(args):
    count = container.encode_file(args.input, args.archive,
                                  scheme=args.scheme, k=args.k, p=args.p,
                                  r=args.r, block_size=args.block_size)
    print("wrote %d stripe(s) to %s" % (count, args.archive))
    return EXIT_OK


def cmd_decode(args):
    written = container.decode_file(args.archive, args.output)
    print("wrote %d bytes to %s" % (written, args.output))
    return EXIT_OK


def cmd_corrupt(args):
    positions = _positions(args.blocks)
    if not positions:
        raise ValueError("no block indices given")
    container.corrupt_archive(args.archive, positions,
                              stripe_index=args.stripe)
    print("dropped block(s) %s from stripe %d"
          % (",".join(str(p) for p in positions), args.stripe))
    return EXIT_OK


def cmd_repair(args):
    reports = container.repair_archive(args.archive)
    if not reports:
        print("all stripes intact")
        return EXIT_OK
    failed = False
    for rep in reports:
        if rep.recovered:
            print("stripe %d: %s, %d blocks read"
                  % (rep.stripe_index, rep.description, rep.blocks_read))
        else:
            failed = True
            print("stripe %d: unrecoverable, erased=%s"
                  % (rep.stripe_index, list(rep.lost)))
    return EXIT_UNRECOVERABLE if failed else EXIT_OK


def cmd_verify(args):
    reports = container.verify_archive(args.archive)
    worst = EXIT_OK
    for rep in reports:
        line = "stripe %d: %s" % (rep.stripe_index, rep.status)
        if rep.missing:
            line += " (missing %s)" % (list(rep.missing),)
        print(line)
        if rep.status == "unrecoverable":
            worst = EXIT_UNRECOVERABLE
        elif rep.status == "mismatch" and worst == EXIT_OK:
            worst = EXIT_CHECK_FAILED
    return worst


def cmd_bound(args):
    print(distance_bound(args.n, args.k, args.r))
    return EXIT_OK


def cmd_distance(args):
    if (args.archive is None) == (args.random_spec is None):
        raise ValueError("give either an archive or --random-spec k,n,r")
    if args.archive is not None:
        records = container.read_archive(args.archive)
        if not records:
            raise ValueError("empty archive")
        rec = records[0]
        code = container.code_for(rec.m, rec.k, rec.n, rec.r)
        print(brute_distance(code.G, rec.k))
        return EXIT_OK
    k, n, r = _positions(args.random_spec)
    attempt = construct_with_retry(k, n, r, GF(args.m),
                                   max_trials=args.max_trials, seed=args.seed)
    print("achieved d=%d (bound %d) after %d trial(s)"
          % (attempt.achieved_d, distance_bound(n, k, r), attempt.trials))
    return EXIT_OK if attempt.success else EXIT_CHECK_FAILED


def cmd_flowcheck(args):
    d = args.d if args.d is not None else distance_bound(args.n, args.k, args.r)
    fg = build_flow_graph(args.k, args.n, args.r, d)
    result = min_cut_check(fg)
    print("d=%d collectors=%d min_flow=%d required=%d edges=%d"
          % (d, result.dc_count, result.min_flow, result.required,
             fg.edge_count()))
    if not result.passed:
        print("weakest collector: %s" % (list(result.worst_dc),))
        print("FAIL")
        return EXIT_CHECK_FAILED
    print("PASS")
    return EXIT_OK


def cmd_mttdl(args):
    params = ClusterParams(
        nodes=args.nodes, total_bytes=args.total_bytes,
        block_bytes=args.block_bytes,
        failure_rate=1.0 / (args.mttf_years * SECONDS_PER_YEAR),
        gamma_bps=args.gamma_bps)
    rows = summary_table(params)
    print(format_summary(rows))
    print()
    print("expected blocks downloaded per repair:")
    print(format_assumptions(download_assumptions()))
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        csv_path = os.path.join(args.out_dir, "mttdl.csv")
        fig_path = os.path.join(args.out_dir, "mttdl.png")
        report.write_reliability_csv(rows, csv_path)
        report.render_reliability_figure(rows, fig_path)
        print()
        print("wrote %s and %s" % (csv_path, fig_path))
    return EXIT_OK


def cmd_simulate(args):
    config = sim.load_config(args.config)
    _, metrics = sim.run_simulation(config)
    writer = csv.writer(sys.stdout)
    writer.writerow(sim.TRACE_COLUMNS)
    for m in metrics:
        writer.writerow([m.event_id, m.nodes_killed, m.blocks_lost,
                         m.blocks_read, m.bytes_read, m.network_bytes,
                         repr(m.repair_duration_s), m.data_loss_stripes])
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        trace_path = os.path.join(args.out_dir, "trace.csv")
        fig_path = os.path.join(args.out_dir, "trace.png")
        sim.export_trace(metrics, trace_path)
        report.render_trace_figure({config.scheme: metrics}, fig_path)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lrckit",
        description="Locally repairable erasure coding toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="stripe and encode a file")
    p.add_argument("input")
    p.add_argument("archive")
    p.add_argument("--scheme", choices=("rs", "lrc"), default="lrc")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--p", type=int, default=4)
    p.add_argument("--r", type=int, default=5)
    p.add_argument("--block-size", type=int, default=1 << 20)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="reassemble the original file")
    p.add_argument("archive")
    p.add_argument("output")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("corrupt", help="drop blocks from a stripe")
    p.add_argument("archive")
    p.add_argument("--blocks", required=True,
                   help="comma-separated block indices")
    p.add_argument("--stripe", type=int, default=0)
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("repair", help="rebuild missing blocks in place")
    p.add_argument("archive")
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("verify", help="re-derive parities and compare")
    p.add_argument("archive")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bound", help="locality-distance ceiling")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("distance", help="brute-force distance of a code")
    p.add_argument("archive", nargs="?")
    p.add_argument("--random-spec", help="k,n,r for a randomized construction")
    p.add_argument("--m", type=int, default=16, help="field degree for "
                   "--random-spec")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-trials", type=int, default=500)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("flowcheck", help="information-flow min-cut check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, default=None,
                   help="defaults to the bound")
    p.set_defaults(func=cmd_flowcheck)

    p = sub.add_parser("mttdl", help="Markov-chain reliability summary")
    p.add_argument("--nodes", type=int, default=3000)
    p.add_argument("--total-bytes", type=float, default=30e15)
    p.add_argument("--block-bytes", type=float, default=256e6)
    p.add_argument("--mttf-years", type=float, default=4.0)
    p.add_argument("--gamma-bps", type=float, default=1e9)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_mttdl)

    p = sub.add_parser("simulate", help="run the cluster-repair simulator")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    try:
        return args.func(args)
    except UnrecoverableError as exc:
        print("unrecoverable: %s" % exc, file=sys.stderr)
        return EXIT_UNRECOVERABLE
    except (ValueError, container.ArchiveError) as exc:
        print("invalid input: %s" % exc, file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print("i/o error: %s" % exc, file=sys.stderr)
        return EXIT_IO


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
