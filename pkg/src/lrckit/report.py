"""Delimited reports and the figures rendered next to them."""

import csv


def _plt():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


RELIABILITY_COLUMNS = ("scheme", "overhead", "traffic", "mttdl_days")


def write_reliability_csv(rows, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RELIABILITY_COLUMNS)
        for row in rows:
            writer.writerow([row["scheme"], row["overhead"], row["traffic"],
                             repr(row["mttdl_days"])])


def render_reliability_figure(rows, path):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6, 4))
    names = [r["scheme"] for r in rows]
    values = [r["mttdl_days"] for r in rows]
    ax.bar(names, values, color=["#888888", "#4477aa", "#cc6677"])
    ax.set_yscale("log")
    ax.set_ylabel("MTTDL (days, log scale)")
    ax.set_title("Mean time to data loss by scheme")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_trace_figure(traces, path):
    """traces: {label: list of EventMetrics}; scatter of blocks read against
    blocks lost per event, one series per label."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6, 4))
    markers = ["o", "s", "^", "d"]
    for i, (label, metrics) in enumerate(sorted(traces.items())):
        x = [m.blocks_lost for m in metrics]
        y = [m.blocks_read for m in metrics]
        ax.scatter(x, y, label=label, marker=markers[i % len(markers)])
    ax.set_xlabel("blocks lost per event")
    ax.set_ylabel("blocks read per event")
    ax.set_title("Repair reads against losses")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
