"""Acceptance gate: every release criterion checked at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per criterion.
The Monte Carlo criteria use fixed seeds, so outcomes are reproducible.
"""

import math
import time
from dataclasses import replace

import numpy as np

from crn_multicast.assignment import Scheme
from crn_multicast.channel import ChannelModel, ChannelParams, make_channels, sample_event_state, sample_gain
from crn_multicast.example_case import builtin_fixture, run_fixture
from crn_multicast.experiment import ScenarioParams, SweepSpec, aggregate_to_csv, run_sweep, run_trial, trials_to_csv
from crn_multicast.phy import PhyParams, data_rate, pos, received_power
from crn_multicast.session import TreeKind
from crn_multicast.topology import build_mst, build_spt

from test_assignment import metrics_from_pos
from test_topology import floyd_warshall, min_spanning_weight_bruteforce, random_connected_topology

ALL_SCHEMES = (Scheme.POS, Scheme.MASA, Scheme.MDR, Scheme.RS)
DEFAULTS = ScenarioParams()  # N=40, Nr=16, M=20, BW 1 MHz, D 4 KB, Pt 0.1 W, mu 2..70 ms


def report(num: int, ok: bool, detail: str) -> None:
    print(f"\n[acceptance] criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num}: {detail}"


def mean_results(params, schemes, trees, trials, base_seed=10_000):
    tput = {(t, s): 0.0 for t in trees for s in schemes}
    pdr = {(t, s): 0.0 for t in trees for s in schemes}
    for i in range(trials):
        out = run_trial(params, schemes, trees, seed=base_seed + i)
        for key, oc in out.items():
            tput[key] += oc.avg_throughput_bps / trials
            pdr[key] += oc.pdr / trials
    return tput, pdr


def test_criterion_1_worked_example_oracle():
    start = time.perf_counter()
    result = run_fixture(builtin_fixture())
    elapsed = time.perf_counter() - start
    selections = [h.chosen_channel + 1 for h in result.hops]
    checks = [
        selections == [5, 6, 4],
        math.isclose(result.throughput[6], 5.5539e6, rel_tol=0.005),
        math.isclose(result.throughput[9], 6.4251e6, rel_tol=0.005),
        math.isclose(result.throughput[10], 2.8e6, rel_tol=0.005),
        result.throughput[7] == 0.0,
        result.throughput[8] == 0.0,
        math.isclose(result.total_throughput, 14.779e6, rel_tol=0.01),
        result.pdr == 0.6,
        elapsed < 1.0,
    ]
    report(
        1,
        all(checks),
        f"selections CH{selections[0]}/CH{selections[1]}/CH{selections[2]}, "
        f"total {result.total_throughput / 1e6:.3f} Mbps, pdr {result.pdr}, {elapsed * 1e3:.0f} ms",
    )


def test_criterion_2_equation_unit_oracles():
    phy = PhyParams(pt=0.1, path_loss_exp=4.0, wavelength=0.5, noise_psd=1e-18, bandwidth=1e6, packet_bits=32768)
    checks = [
        pos(0.0, 0.033) == 1.0,
        abs(pos(0.05, 0.05) - math.exp(-1.0)) <= 1e-12,
        data_rate(phy, 3.0 * 1e6 * 1e-18) == 2_000_000.0,
        math.isclose(received_power(phy, 10.0, 1.0), 1.58314e-8, rel_tol=1e-4),
    ]
    report(2, all(checks), "pos boundaries, exact 2 Mbps rate, received-power hand check")


def test_criterion_3_tree_oracles():
    start = time.perf_counter()
    ok = True
    for seed in range(200):
        rng = np.random.default_rng(seed)
        topo = random_connected_topology(rng, n_max=12)
        spt = build_spt(topo, 0)
        mst = build_mst(topo, 0)
        ok &= spt.n_edges == topo.n - 1 and mst.n_edges == topo.n - 1
        dist = floyd_warshall(topo.n, topo.edges)
        for v in range(topo.n):
            ok &= abs(spt.path_distance(v) - dist[0][v]) <= 1e-9
            ok &= spt.path_distance(v) <= mst.path_distance(v) + 1e-9
    for seed in range(12):
        rng = np.random.default_rng(5000 + seed)
        topo = random_connected_topology(rng, n_max=7, n_min=4)
        best = min_spanning_weight_bruteforce(topo.n, topo.edges)
        ok &= abs(sum(build_mst(topo, 0).edge_dist.values()) - best) <= 1e-9
    elapsed = time.perf_counter() - start
    ok &= elapsed < 30.0
    report(3, ok, f"200 SPT/Floyd-Warshall + 12 MST/brute-force instances in {elapsed:.1f} s")


def test_criterion_4_scheme_ordering_low_load():
    start = time.perf_counter()
    tput, pdr = mean_results(DEFAULTS, ALL_SCHEMES, (TreeKind.SPT,), trials=1000)
    elapsed = time.perf_counter() - start
    t = [tput[(TreeKind.SPT, s)] for s in ALL_SCHEMES]
    p = [pdr[(TreeKind.SPT, s)] for s in ALL_SCHEMES]
    gain = (t[0] - t[-1]) / t[-1]
    ok = (
        t[0] >= t[1] >= t[2] >= t[3]
        and p[0] >= p[1] >= p[2] >= p[3]
        and gain >= 0.25
        and elapsed < 120.0
    )
    report(
        4,
        ok,
        "throughput Mbps " + "/".join(f"{x / 1e6:.3f}" for x in t)
        + ", pdr " + "/".join(f"{x:.3f}" for x in p)
        + f", pos-over-rs {gain * 100:.0f}%, {elapsed:.1f} s",
    )


def test_criterion_5_high_load_convergence():
    params = replace(DEFAULTS, p_idle=0.1)
    tput, _ = mean_results(params, ALL_SCHEMES, (TreeKind.SPT,), trials=1000)
    t = {s: tput[(TreeKind.SPT, s)] for s in ALL_SCHEMES}
    rel = abs(t[Scheme.POS] - t[Scheme.MASA]) / t[Scheme.MASA]
    ok = (
        rel <= 0.10
        and t[Scheme.POS] > t[Scheme.MDR] and t[Scheme.POS] > t[Scheme.RS]
        and t[Scheme.MASA] > t[Scheme.MDR] and t[Scheme.MASA] > t[Scheme.RS]
    )
    report(5, ok, f"pos/masa gap {rel * 100:.1f}%, both above mdr and rs")


def test_criterion_6_spt_beats_mst():
    gaps = {}
    for p_idle in (0.1, 0.5, 0.9):
        params = replace(DEFAULTS, p_idle=p_idle)
        tput, _ = mean_results(params, (Scheme.POS,), (TreeKind.SPT, TreeKind.MST), trials=1000)
        spt = tput[(TreeKind.SPT, Scheme.POS)]
        mst = tput[(TreeKind.MST, Scheme.POS)]
        gaps[p_idle] = (spt - mst) / mst
    ok = all(g >= 0.0 for g in gaps.values()) and gaps[0.1] == max(gaps.values())
    report(6, ok, "relative gaps " + ", ".join(f"P_I={p}: {g * 100:.0f}%" for p, g in gaps.items()))


def monotone_within_ci(points, increasing=True):
    for (m0, c0), (m1, c1) in zip(points, points[1:]):
        if increasing and not (m1 >= m0 or m0 - c0 <= m1 + c1):
            return False
        if not increasing and not (m1 <= m0 or m1 - c1 <= m0 + c0):
            return False
    return True


def test_criterion_7_monotone_trends():
    start = time.perf_counter()
    axes = [
        ("bw", (0.5e6, 1e6, 2e6, 3e6), True),
        ("M", (5, 10, 20, 30), True),
        ("pt", (0.05, 0.1, 0.5), True),
        ("p_idle", (0.1, 0.5, 0.9), True),
        ("packet_bits", (2 * 8192, 4 * 8192, 8 * 8192, 16 * 8192), False),
    ]
    verdicts = {}
    for variable, values, increasing in axes:
        spec = SweepSpec(
            base=DEFAULTS, variable=variable, values=values, trials=1000, seed=20_000,
            schemes=(Scheme.POS,), trees=(TreeKind.SPT,),
        )
        _, agg = run_sweep(spec)
        points = [(r.mean_throughput_bps, r.ci95_throughput) for r in agg]
        verdicts[variable] = monotone_within_ci(points, increasing=increasing)
    elapsed = time.perf_counter() - start
    report(
        7,
        all(verdicts.values()),
        ", ".join(f"{v}: {'ok' if ok else 'violated'}" for v, ok in verdicts.items()) + f", {elapsed:.0f} s",
    )


def test_criterion_8_statistical_sanity():
    model = make_channels(4, 0.01, 0.07, 0.5)
    rng = np.random.default_rng(81)
    n = 100_000
    idle_hits = np.zeros(4)
    for _ in range(n):
        idle_hits += sample_event_state(model, rng).idle
    idle_ok = np.all(np.abs(idle_hits / n - 0.5) < 0.01)

    gains = sample_gain(np.random.default_rng(82), size=n)
    gain_ok = abs(gains.mean() - 1.0) < 0.02

    avail_model = ChannelModel((ChannelParams(0.05, 0.999),))
    rng = np.random.default_rng(83)
    avail = np.array([sample_event_state(avail_model, rng).available_time[0] for _ in range(n)])
    avail = avail[~np.isnan(avail)]
    avail_ok = abs(avail.mean() - 0.05) / 0.05 < 0.02

    from crn_multicast.assignment import select_channel

    metrics = metrics_from_pos(
        [[0.5, 0.0, 0.6, 0.7, 0.0, 0.8]], busy=(2, 5),
        mu=np.linspace(0.01, 0.06, 6),
    )
    rng = np.random.default_rng(84)
    counts = np.zeros(6)
    for _ in range(n):
        counts[select_channel(Scheme.RS, metrics, rng).channel] += 1
    rs_ok = np.all(np.abs(counts[[0, 2, 3, 5]] / n - 0.25) < 0.01) and counts[[1, 4]].sum() == 0

    report(
        8,
        bool(idle_ok and gain_ok and avail_ok and rs_ok),
        f"idle freq, gain mean {gains.mean():.4f}, availability mean {avail.mean() * 1e3:.2f} ms, rs uniformity",
    )


def test_criterion_9_sweep_determinism():
    spec = SweepSpec(
        base=DEFAULTS, variable="p_idle", values=(0.5, 0.9), trials=10, seed=31_000,
        schemes=ALL_SCHEMES, trees=(TreeKind.SPT, TreeKind.MST),
    )
    rows_a, agg_a = run_sweep(spec)
    rows_b, agg_b = run_sweep(spec)
    ok = trials_to_csv(rows_a) == trials_to_csv(rows_b) and aggregate_to_csv(agg_a) == aggregate_to_csv(agg_b)
    report(9, ok, "two identical sweep runs produced byte-identical trial and aggregate CSVs")
