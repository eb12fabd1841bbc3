"""Exit criteria for the simulator, one test per criterion.

Each test prints a PASS/FAIL line (collected into the pytest terminal
summary) and then asserts.  Ensembles use 100 trajectories, seed 0.
"""

import math
from functools import lru_cache

import numpy as np
import pytest

from qwratchet import (
    ExperimentConfig,
    InitialSpec,
    apply_step,
    entanglement_entropy,
    new_state,
    preset,
    run_experiment,
)
from qwratchet.engine import (
    Disordered,
    Fixed,
    PawlConfig,
    PawlDisordered,
    PawlFixed,
    RngStream,
    Schedule,
    Term,
    resolve_coin_field,
    run_schedule,
)
from qwratchet.spectral import (
    averaged_group_velocity,
    dispersion,
    eigenphases,
    group_velocity,
    max_spread,
    momentum_step_matrix,
)
from oracles import dense_step_matrix, site_angles

ENSEMBLE = 100
RESULTS: list[str] = []


def report(criterion, checks):
    """Record ``checks`` (name, ok, detail) for ``criterion`` and assert them."""
    ok = all(c[1] for c in checks)
    detail = "; ".join(f"{name}={detail}{'' if good else ' (FAIL)'}" for name, good, detail in checks)
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


@lru_cache(maxsize=None)
def ensemble(text, n=ENSEMBLE, dumps=()):
    return run_experiment(ExperimentConfig(text, ensemble=n, dump_distribution_at=dumps))


def test_c01_symmetric_spread():
    s = ensemble("F(pi/4)^200", 1)
    d = s.final_distribution
    p = dict(zip(d.x.tolist(), d.p.tolist()))
    defect = max(abs(p[x] - p.get(-x, 0.0)) for x in p)
    left = d.x[d.x < 0][np.argmax(d.p[d.x < 0])]
    right = d.x[d.x > 0][np.argmax(d.p[d.x > 0])]
    front = max_spread(math.pi / 4, 200)
    report("1 symmetric spread", [
        ("symmetry_defect", defect < 1e-12, f"{defect:.2e}"),
        ("|<x>|", abs(s.mean_x[-1]) < 1e-9, f"{abs(s.mean_x[-1]):.2e}"),
        ("left peak", abs(left + front) <= 5, f"{left} vs {-front:.1f}"),
        ("right peak", abs(right - front) <= 5, f"{right} vs {front:.1f}"),
    ])


def test_c02_dynamic_localization():
    dis = ensemble("D^200")
    std = ensemble("F(pi/4)^200", 1)
    worst = float(np.max(np.abs(dis.per_trajectory["mean_x"])))
    ratio = dis.sd_x[-1] / std.sd_x[-1]
    peak = dis.final_distribution.argmax()
    report("2 dynamic localization", [
        ("max per-realization |<x>|", worst < 1e-9, f"{worst:.2e}"),
        ("sd(D)/sd(F)", ratio < 0.35, f"{ratio:.3f}"),
        ("argmax P", -2 <= peak <= 2,
         f"{peak} (P({peak})={dis.final_distribution[peak]:.4f}, P(0)={dis.final_distribution[0]:.4f})"),
    ])


def test_c03_pawl_directedness():
    s = ensemble("PF(pi/30)^100", 1)
    d = s.final_distribution
    left = float(d.p[d.x < -2].sum())
    report("3 pawl directedness", [
        ("<x>(100)", s.mean_x[-1] >= 80, f"{s.mean_x[-1]:.3f}"),
        ("P(x<-2)", left < 0.02, f"{left:.2e}"),
    ])


def test_c04_disordered_ratchet_drift():
    pd = ensemble("PD^200")
    dis = ensemble("D^200")
    means = [pd.mean_x[t] for t in (50, 100, 150, 200)]
    report("4 disordered ratchet drift", [
        ("<x>(200)", 5 <= means[-1] <= 15, f"{means[-1]:.3f}"),
        ("increasing on 50..200", all(a < b for a, b in zip(means, means[1:])), ",".join(f"{m:.2f}" for m in means)),
        ("sd(PD) < sd(D)", pd.sd_x[-1] < dis.sd_x[-1], f"{pd.sd_x[-1]:.3f} < {dis.sd_x[-1]:.3f}"),
    ])


def test_c05_mixed_schedule_transport():
    ordered = ensemble(preset("fig5c").schedule_text)
    mixed = ensemble(preset("fig5a").schedule_text)
    report("5 mixed-schedule transport", [
        ("<x> fig5c > fig5a", ordered.mean_x[-1] > mixed.mean_x[-1], f"{ordered.mean_x[-1]:.3f} > {mixed.mean_x[-1]:.3f}"),
        ("<x> fig5a in [6,14]", 6 <= mixed.mean_x[-1] <= 14, f"{mixed.mean_x[-1]:.3f}"),
    ])


def _pd_phase_change(summary, t_switch):
    at_switch = summary.mean_x[t_switch]
    change = np.max(np.abs(summary.mean_x[t_switch:] - at_switch))
    return change / at_switch


def test_c06_optimized_transport():
    a = ensemble(preset("fig6a").schedule_text)
    b = ensemble(preset("fig6b").schedule_text)
    ra, rb = _pd_phase_change(a, 50), _pd_phase_change(b, 100)
    report("6 optimized transport", [
        ("fig6a <x>(100) in [45,52]", 45 <= a.mean_x[-1] <= 52, f"{a.mean_x[-1]:.3f} (cos(pi/30)*50={math.cos(math.pi/30)*50:.2f})"),
        ("fig6b <x>(200) in [90,104]", 90 <= b.mean_x[-1] <= 104, f"{b.mean_x[-1]:.3f}"),
        ("fig6a PD-phase drift < 10%", ra < 0.10, f"{ra:.4f}"),
        ("fig6b PD-phase drift < 10%", rb < 0.10, f"{rb:.4f}"),
    ])


def test_c07_transport_scales_with_cos_theta_t1():
    theta = math.pi / 30
    t1s = np.array([40, 80, 120, 160])
    finals = [ensemble(f"PF(pi/30)^{t1} ; PD^50").mean_x[-1] for t1 in t1s]
    slope, intercept = np.polyfit(math.cos(theta) * t1s, finals, 1)
    report("7 <x> ~ cos(theta) T1", [
        ("slope", abs(slope - 1) <= 0.15, f"{slope:.4f}"),
        ("|intercept|", abs(intercept) < 5, f"{abs(intercept):.3f}"),
    ])


def test_c08_entanglement_saturation():
    runs = [ensemble(t) for t in ("D^200", "PD^200")] + [ensemble("F(pi/4)^200", 1)]
    extra = [
        ensemble(preset(n).schedule_text)
        for n in ("fig5a", "fig5c", "fig6a", "fig6b")
    ] + [ensemble(f"PF(pi/30)^{t1} ; PD^50") for t1 in (40, 80, 120, 160)]
    all_entropy = np.concatenate([r.per_trajectory["entropy"].ravel() for r in runs + extra])
    d, pd, f = (r.entropy[-1] for r in runs)
    one_step = apply_step(new_state(InitialSpec(), 1), resolve_coin_field(Fixed(math.pi / 4), PawlConfig(), RngStream(0)))
    e1 = entanglement_entropy(one_step)
    report("8 entanglement saturation", [
        ("entropy range", bool(all_entropy.min() >= 0 and all_entropy.max() <= 1 + 1e-12),
         f"[{all_entropy.min():.3g}, {all_entropy.max():.15f}]"),
        ("S(D,200) > 0.85", d > 0.85, f"{d:.4f}"),
        ("S(PD,200) > 0.85", pd > 0.85, f"{pd:.4f}"),
        ("S(D) > S(F)", d > f, f"{d:.4f} > {f:.4f}"),
        ("S(PD) > S(F)", pd > f, f"{pd:.4f} > {f:.4f}"),
        ("S after 1 step", abs(e1 - 1) < 1e-12, f"{e1!r}"),
    ])


def test_c09_spectral_consistency():
    thetas = [math.pi / 30, math.pi / 6, math.pi / 4, math.pi / 3]
    ks = np.linspace(-math.pi, math.pi, 41)[1:-1]
    h = 1e-5
    eig_err = fd_err = 0.0
    for theta in thetas:
        for k in ks:
            e = dispersion(theta, k).e_plus
            phases = np.abs(eigenphases(momentum_step_matrix(theta, k)))
            eig_err = max(eig_err, float(np.max(np.abs(phases - e))))
            fd = (dispersion(theta, k + h).e_plus - dispersion(theta, k - h).e_plus) / (2 * h)
            fd_err = max(fd_err, abs(fd - group_velocity(theta, k).vg_plus))
    avg = max(abs(averaged_group_velocity(k, n)) for k in ks for n in (2, 64, 360, 1000))
    report("9 spectral consistency", [
        ("eigenphase vs dispersion", eig_err < 1e-12, f"{eig_err:.2e}"),
        ("vg vs finite difference", fd_err < 1e-6, f"{fd_err:.2e}"),
        ("averaged vg", avg < 1e-12, f"{avg:.2e}"),
    ])


def test_c10_oracle_equivalence():
    kinds = [Fixed(math.pi / 5), Disordered(), PawlFixed(math.pi / 5), PawlDisordered()]
    worst = 0.0
    for kind in kinds:
        for seed in (0, 1, 2):
            got = []
            run_schedule(
                InitialSpec(),
                Schedule((Term(kind, 8),), seed=seed),
                sink=lambda t, s: got.append(s.amplitudes.copy()),
            )
            rng = RngStream(seed)
            vec = np.zeros(42, dtype=complex)
            vec[10] = vec[21 + 10] = 1 / math.sqrt(2)
            pawl = (-1, 0) if isinstance(kind, (PawlFixed, PawlDisordered)) else None
            for amps in got:
                bg = kind.theta if isinstance(kind, (Fixed, PawlFixed)) else 2 * math.pi * rng.uniform()
                vec = dense_step_matrix(site_angles(-10, 21, bg, pawl), -10) @ vec
                padded = np.zeros((2, 21), dtype=complex)
                padded[:, 1:-1] = amps
                worst = max(worst, float(np.max(np.abs(padded.ravel() - vec))))
    report("10 oracle equivalence", [("max |engine - dense|", worst < 1e-12, f"{worst:.2e}")])
