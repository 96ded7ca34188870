"""Acceptance checks. Each test records one PASS/FAIL line, repeated in the terminal summary."""

import random
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from conftest import record
from octothorpe.canonical import (SYMMETRIES, CanonicalSystem, apply_symmetry, map_differential,
                                  map_point, normalize_to_family)
from octothorpe.classifier import (DISK_CLASSES, ROWS, SQUARE_CLASSES, TABLES, classify, classify_case,
                                   construct_row, disk_closure, square_closure)
from octothorpe.cli import corruption_report
from octothorpe.genericity import (cherkas_quantity, limit_cycle_exists, necessary_condition,
                                   polycycle_report, trace_at_origin)
from octothorpe.portrait import ReturnMap, center_like, detect_limit_cycle
from octothorpe.replicator import CorruptionPayoffs, RawSystem
from orbit_tools import chart_gap


def test_criterion_01_genericity_gate():
    rng = random.Random(1)
    start = time.perf_counter()
    wrong = 0
    for k in range(10_000):
        a00, a10, a01, b00, b10, b01 = (rng.uniform(-3, 3) for _ in range(6))
        forced = ("a10", "b01", "detA")[k % 3]
        if forced == "a10":
            a10 = 0.0
        elif forced == "b01":
            b01 = 0.0
        else:
            b10 = a10 * b01 / a01
        check = necessary_condition(RawSystem(a00, a10, a01, b00, b10, b01))
        wrong += check.passed or forced not in check.witnesses
    elapsed = time.perf_counter() - start
    ok = wrong == 0 and elapsed < 5.0
    assert record(1, ok, f"{10_000 - wrong}/10000 rejected with the right witness in {elapsed:.2f}s")


def test_criterion_02_table_fidelity():
    start = time.perf_counter()
    misses = [label for label in ROWS if classify_case(construct_row(label)).case != label]
    elapsed = time.perf_counter() - start
    sizes = [len(TABLES[f]) for f in (1, 2, 3, 4)]
    ok = not misses and sizes == [18, 45, 15, 47] and elapsed < 120
    assert record(2, ok, f"rows {sizes}, misclassified {misses or 'none'}, {elapsed:.1f}s")


def test_criterion_03_class_counts():
    per_family = [len(disk_closure((f,), cross=False).classes()) for f in (1, 2, 3, 4)]
    disk = len(disk_closure().classes())
    square = len(square_closure().classes())
    ok = per_family == [8, 4, 6, 14] and disk == 25 == len(DISK_CLASSES) and square == 20 == len(SQUARE_CLASSES)
    assert record(3, ok, f"families {per_family}, disk {disk}, square {square}")


def _cycle_cell(args):
    a01, r = args
    c = CanonicalSystem(0.5, 0.5, 1.0, a01, r / 2, -0.5)     # r = -b10/b01
    tk = trace_at_origin(c) * cherkas_quantity(c)
    family = normalize_to_family(c).family
    return family, tk, limit_cycle_exists(c), detect_limit_cycle(c) is not None


def test_criterion_04_cycle_criterion_vs_return_map():
    cells = [(a, r) for a in np.linspace(1.5, 6, 10) for r in np.linspace(-6, -1.5, 10)]
    with ProcessPoolExecutor() as pool:
        results = list(pool.map(_cycle_cell, cells))
    assert all(fam == 4 for fam, *_ in results)
    kept = [(v, d) for _, tk, v, d in results if abs(tk) >= 1e-4]
    agree = sum(v == d for v, d in kept)
    ok = agree == len(kept)
    assert record(4, ok, f"{agree}/{len(kept)} cells agree, {100 - len(kept)} inside the |T*K| guard")


def test_criterion_05_realizability_sweep():
    small = classify(CanonicalSystem(0.5, 0.5, 0.05, 5, 1, -0.5)).label.name
    large = classify(CanonicalSystem(0.5, 0.5, 4.95, 5, 1, -0.5)).label.name
    nearer = classify(CanonicalSystem(0.5, 0.5, 4.995, 5, 1, -0.5)).label.name
    beta = 0.55
    mixed = classify(CanonicalSystem(0.5, beta, 0.999 * 10 * (1 - beta), 5, 1, -0.5)).label.name
    ok = small == "2.1a1" and large == "2.1a4" and mixed == "2.1a3"
    print(f"info: lambda=4.995 gives {nearer}")
    assert record(5, ok, f"lambda=0.05 -> {small}, lambda=4.95 -> {large} (want 2.1a4), "
                         f"two-parameter point -> {mixed}")


def test_criterion_06_corruption_example():
    p = CorruptionPayoffs(W=1, M=2, Mc=1, Mg=1, Mg_prime=0.5, e=3, V_gc=1, V_gnc=2, KP=0.5)
    rep = corruption_report(p, grid=20)
    corners = sum(rep["omega_limits"].get(k, 0) for k in ("[0, 0]", "[1, 1]"))
    ok = (rep["sign_conditions"] and rep["attractors"] == ["[0, 0]", "[1, 1]"]
          and rep["interior_type"] == "saddle" and corners == 400)
    assert record(6, ok, f"{corners}/400 starts reach (0,0) or (1,1); split {rep['omega_limits']}; "
                         f"interior {rep['interior_type']}")


def test_criterion_07_cherkas_sign_identity():
    rng = np.random.default_rng(7)
    checked = mismatches = 0
    while checked < 500:
        raw = CanonicalSystem(rng.uniform(0.02, 0.98), rng.uniform(0.02, 0.98), *rng.uniform(-5, 5, 4))
        if raw.det == 0:
            continue
        # K is even under time reversal while r(Gamma) inverts, so the identity
        # lives on the normal form, whose time direction is fixed by a10 = 1
        c = normalize_to_family(raw).system
        if not polycycle_report(c).exists:
            continue
        K = cherkas_quantity(c)
        if abs(K) < 1e-10:
            continue
        checked += 1
        mismatches += (polycycle_report(c).r_gamma > 1) != (K > 0)
    assert record(7, mismatches == 0, f"{mismatches} mismatches over {checked} polycycles")


def test_criterion_08_symmetry_pushforward():
    rng = np.random.default_rng(8)
    evaluations = failures = 0
    for _ in range(1000):
        c = CanonicalSystem(*rng.uniform(-2, 2, 6))
        for m in SYMMETRIES:
            image = apply_symmetry(c, m)
            D = np.array(map_differential(m), dtype=float)
            for z in rng.uniform(-3, 3, (20, 2)):
                lhs = D @ np.array(c.field(*map_point(m, *z)))
                rhs = np.array(image.field(*z))
                evaluations += 1
                failures += not np.all(np.abs(lhs - rhs) <= 1e-12 * (1 + np.abs(rhs)))
    ok = failures == 0 and evaluations == 100_000
    assert record(8, ok, f"{failures} failures in {evaluations} evaluations")


def test_criterion_09_chart_consistency():
    rng = np.random.default_rng(9)
    worst, runs = 0.0, 0
    while runs < 50:
        c = CanonicalSystem(rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95), *rng.uniform(-2, 2, 4))
        far, side = rng.uniform(1.5, 3.0), rng.uniform(-0.5, 0.5)
        chart = ("U1", "U2")[runs % 2]
        start = (far, side * far) if chart == "U1" else (side * far, far)
        speed = np.hypot(*c.field(*start))
        if speed < 1e-3:
            continue
        worst = max(worst, chart_gap(c, start, chart, min(0.3 / speed, 1.0)))
        runs += 1
    assert record(9, worst < 1e-6, f"50 trajectories, worst Hausdorff distance {worst:.2e}")


def test_criterion_10_focal_value_branch():
    centres, foci = [], []
    for a01 in (1.5, 2.0, 3.0):
        centres.append(CanonicalSystem(0.5, 0.5, 1.0, a01, -a01, -1.0))
    al, be = 0.4, 0.6
    centres.append(CanonicalSystem(al, be, 1.0, 2.5, -2.5, -al * (al - 1) / (be * (be - 1))))
    for a01, b10 in ((3.0, -2.0), (2.5, -1.5), (4.0, -3.0)):
        c = CanonicalSystem(0.5, 0.5, 1.0, a01, b10, -1.0)
        assert trace_at_origin(c) == 0 and c.b10 * c.b01 * (c.a01 + c.b10) > 0
        foci.append(c)
    centre_ok = all(center_like(c) and detect_limit_cycle(c) is None for c in centres)
    outward = []
    for c in foci:
        rm = ReturnMap(c, 1.0)
        outward.append(all(rm.displacement(s) > 0 for s in (0.03, 0.06, 0.1)))
    ok = centre_ok and all(outward)
    assert record(10, ok, f"centres without isolated cycle: {centre_ok}; weak foci moving outward: {outward}")
