from pathlib import Path

import pytest

from lrckit.sim import (TRACE_COLUMNS, SimConfig, build_cluster, fit_slopes,
                        export_trace, load_config, load_trace, parse_config,
                        run_schedule, run_simulation, schedule_events)


def ec2_cfg(scheme, seed=1337, **kw):
    base = dict(nodes=50, files=200, blocks_per_file=10, scheme=scheme,
                block_size_bytes=64 * 1024 * 1024, gamma_bps=1e9, seed=seed,
                schedule=(1, 1, 1, 1, 3, 3, 2, 2))
    base.update(kw)
    return SimConfig(**base)


def test_placement_never_collocates_stripe_blocks():
    cluster = build_cluster(50, 20, 10, "lrc", 4096, seed=5)
    assert len(cluster.stripes) == 20
    for stripe in cluster.stripes:
        assert len(stripe.nodes) == 16
        assert len(set(stripe.nodes)) == 16
        assert all(0 <= n < 50 for n in stripe.nodes)


def test_rep3_files_split_into_per_block_stripes():
    cluster = build_cluster(10, 3, 7, "rep3", 4096, seed=5)
    assert len(cluster.stripes) == 21
    assert all(len(s.nodes) == 3 for s in cluster.stripes)


def test_cluster_narrower_than_stripe_rejected():
    with pytest.raises(ValueError):
        build_cluster(15, 1, 10, "lrc", 4096, seed=0)


def test_schedule_is_deterministic_and_kills_live_nodes():
    a = schedule_events(50, (1, 1, 3), seed=4)
    b = schedule_events(50, (1, 1, 3), seed=4)
    assert a == b
    assert [len(e) for e in a] == [1, 1, 3]
    seen = set()
    for event in a:
        assert not (set(event) & seen)
        seen |= set(event)


def test_single_node_events_read_five_per_block():
    cfg = ec2_cfg("lrc", schedule=(1, 1))
    _, metrics = run_simulation(cfg)
    for m in metrics:
        assert m.blocks_read == 5 * m.blocks_lost
        assert m.bytes_read == m.blocks_read * cfg.block_size_bytes
        assert m.network_bytes == 2 * m.bytes_read
        assert m.repair_duration_s == pytest.approx(
            m.network_bytes * 8 / cfg.gamma_bps)
    assert fit_slopes(metrics) == pytest.approx(5.0, rel=1e-12)


def test_deployed_rs_reads_all_survivors_per_block():
    _, metrics = run_simulation(ec2_cfg("rs", schedule=(1, 1)))
    for m in metrics:
        assert m.blocks_read == 13 * m.blocks_lost


def test_efficient_rs_reads_ten_per_block():
    _, metrics = run_simulation(ec2_cfg("rs", schedule=(1, 1),
                                        rs_read_mode="efficient"))
    for m in metrics:
        assert m.blocks_read == 10 * m.blocks_lost


def test_rep3_reads_one_per_block():
    _, metrics = run_simulation(ec2_cfg("rep3", schedule=(1, 3)))
    for m in metrics:
        assert m.blocks_read == m.blocks_lost


def test_paired_seed_comparison_frozen_values():
    """The EC2-like schedule at seed 1337, pinned end to end."""
    _, lrc = run_simulation(ec2_cfg("lrc"))
    _, rs = run_simulation(ec2_cfg("rs"))
    assert [(m.blocks_lost, m.blocks_read) for m in lrc] == [
        (53, 265), (63, 315), (61, 305), (54, 270),
        (226, 1270), (231, 1275), (169, 900), (157, 820)]
    assert [(m.blocks_lost, m.blocks_read) for m in rs] == [
        (44, 572), (56, 728), (52, 676), (46, 598),
        (201, 2543), (201, 2550), (150, 1918), (142, 1828)]
    ratio = sum(m.bytes_read for m in lrc) / sum(m.bytes_read for m in rs)
    assert ratio == pytest.approx(0.47489704722684656, rel=1e-12)
    assert fit_slopes(lrc) == pytest.approx(5.700264472524246, rel=1e-9)
    assert fit_slopes(rs) == pytest.approx(12.596327433628318, rel=1e-9)
    assert all(a.blocks_read <= b.blocks_read for a, b in zip(lrc, rs))
    assert all(m.data_loss_stripes == 0 for m in lrc + rs)


def test_repairs_restore_full_placement():
    cfg = ec2_cfg("lrc", schedule=(3, 3))
    cluster, _ = run_simulation(cfg)
    dead = {n for n in range(cfg.nodes) if not cluster.alive[n]}
    assert len(dead) == 6
    for stripe in cluster.stripes:
        assert not stripe.lost
        assert len(set(stripe.nodes)) == 16
        assert not (set(stripe.nodes) & dead)


def test_verify_mode_replays_real_payloads():
    for scheme, bpf in (("lrc", 10), ("rs", 10), ("rep3", 30)):
        cfg = SimConfig(nodes=30, files=6, blocks_per_file=bpf, scheme=scheme,
                        block_size_bytes=4096, gamma_bps=1e9, seed=9,
                        schedule=(1, 3, 2), verify=True)
        _, metrics = run_simulation(cfg)
        assert sum(m.blocks_read for m in metrics) > 0


def test_lost_stripe_is_recorded_and_skipped():
    cluster = build_cluster(16, 1, 10, "lrc", 4096, seed=2)
    stripe = cluster.stripes[0]
    # kill exactly the holders of blocks 5..9: a non-decodable pattern
    fatal = {stripe.nodes[pos] for pos in range(5, 10)}
    survivor = next(n for n in range(16) if n not in fatal)
    metrics = run_schedule(cluster, [fatal, {survivor}])
    assert metrics[0].data_loss_stripes == 1
    assert metrics[0].blocks_read == 0
    assert stripe.dead
    # the follow-up event ignores the dead stripe entirely
    assert metrics[1].blocks_lost == 0 and metrics[1].data_loss_stripes == 0


def test_event_on_dead_node_rejected():
    cluster = build_cluster(30, 2, 10, "lrc", 4096, seed=3)
    with pytest.raises(ValueError):
        run_schedule(cluster, [{4}, {4}])


def test_repair_without_spare_nodes_fails_loudly():
    cluster = build_cluster(16, 1, 10, "lrc", 4096, seed=2)
    with pytest.raises(RuntimeError):
        run_schedule(cluster, [{cluster.stripes[0].nodes[0]}])


def test_empty_schedule_yields_no_metrics():
    _, metrics = run_simulation(ec2_cfg("lrc", schedule=()))
    assert metrics == []
    with pytest.raises(ValueError):
        fit_slopes(metrics)


def test_fit_slopes_rejects_degenerate_x():
    _, metrics = run_simulation(ec2_cfg("lrc", schedule=(1,)))
    with pytest.raises(ValueError):
        fit_slopes([metrics[0], metrics[0]])


def test_trace_round_trip(tmp_path):
    _, metrics = run_simulation(ec2_cfg("lrc"))
    path = tmp_path / "trace.csv"
    export_trace(metrics, path)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(TRACE_COLUMNS)
    assert len(lines) == 9
    assert load_trace(path) == list(metrics)


def test_trace_rejects_foreign_header(tmp_path):
    path = tmp_path / "bogus.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        load_trace(path)


def test_simulation_is_bit_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    export_trace(run_simulation(ec2_cfg("lrc"))[1], a)
    export_trace(run_simulation(ec2_cfg("lrc"))[1], b)
    assert a.read_bytes() == b.read_bytes()


def test_config_parsing(tmp_path):
    text = """
    # comment line
    nodes = 40
    files = 10
    scheme = rs
    schedule = 1,2,3
    gamma_bps = 2e9
    """
    cfg = parse_config(text)
    assert cfg.nodes == 40 and cfg.files == 10
    assert cfg.scheme == "rs"
    assert cfg.schedule == (1, 2, 3)
    assert cfg.gamma_bps == pytest.approx(2e9)

    with pytest.raises(ValueError):
        parse_config("turbo = yes")
    with pytest.raises(ValueError):
        parse_config("scheme = raid6")

    path = tmp_path / "c.cfg"
    path.write_text("nodes = 20\nfiles = 1\nscheme = rep3\nschedule = 1\n")
    assert load_config(path).nodes == 20


def test_shipped_configs_are_paired():
    configs = Path(__file__).resolve().parent.parent / "configs"
    lrc = load_config(configs / "ec2_like_lrc.cfg")
    rs = load_config(configs / "ec2_like_rs.cfg")
    assert lrc.seed == rs.seed == 1337
    assert lrc.schedule == rs.schedule == (1, 1, 1, 1, 3, 3, 2, 2)
    assert (lrc.scheme, rs.scheme) == ("lrc", "rs")
    assert lrc.nodes == rs.nodes == 50
