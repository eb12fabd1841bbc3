"""Seeded ensemble runs, figure presets and CSV/JSON output."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .dsl import format_schedule, parse_angle, parse_schedule
from .engine import PawlConfig, RngStream, Schedule, apply_step, resolve_coin_field
from .observables import Distribution, entanglement_entropy, mean_and_sd
from .spectral import band_structure
from .state import SUPPORT_THRESHOLD, CoinKind, InitialSpec, new_state

FORMATS = ("csv", "json")
OBSERVABLE_COLUMNS = (
    "t", "mean_x", "se_mean_x", "sd_x", "se_sd_x", "entropy", "se_entropy", "norm",
)


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class OutputError(OSError):
    """Failure writing results; carries the offending path."""

    def __init__(self, path: str | Path, cause: OSError):
        self.path = str(path)
        super().__init__(f"cannot write {self.path}: {cause.strerror or cause}")


@dataclass(frozen=True)
class ExperimentConfig:
    schedule_text: str
    initial: InitialSpec = InitialSpec()
    seed: int = 0
    ensemble: int = 1
    record_every: int = 1
    dump_distribution_at: tuple[int, ...] = ()
    output_path: str | None = None
    format: str = "csv"
    pawl: PawlConfig = PawlConfig()
    label: str = ""

    def schedule(self) -> Schedule:
        return parse_schedule(self.schedule_text, seed=self.seed, pawl=self.pawl)

    def validate(self) -> Schedule:
        """Parse the schedule and check the numeric knobs; returns the schedule."""
        schedule = self.schedule()
        if self.ensemble < 1:
            raise ConfigError(f"ensemble must be >= 1, got {self.ensemble}")
        if self.record_every < 1:
            raise ConfigError(f"record_every must be >= 1, got {self.record_every}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        total = schedule.total_steps
        for t in self.dump_distribution_at:
            if not 0 <= t <= total:
                raise ConfigError(f"dump step {t} outside [0, {total}]")
        return schedule


@dataclass
class EnsembleSummary:
    """Per-step ensemble statistics.

    ``per_trajectory`` maps each of ``mean_x``, ``sd_x`` and ``entropy`` to an
    array of shape ``(ensemble, len(steps))``.  ``distributions`` holds
    ensemble-averaged position distributions keyed by step; the final step is
    always present.
    """

    config: ExperimentConfig
    schedule_text: str
    steps: np.ndarray
    mean_x: np.ndarray
    se_mean_x: np.ndarray
    sd_x: np.ndarray
    se_sd_x: np.ndarray
    entropy: np.ndarray
    se_entropy: np.ndarray
    norm: np.ndarray
    distributions: dict[int, Distribution]
    per_trajectory: dict[str, np.ndarray] = field(repr=False, default_factory=dict)

    @property
    def total_steps(self) -> int:
        return int(self.steps[-1])

    @property
    def final_distribution(self) -> Distribution:
        return self.distributions[self.total_steps]

    def at(self, t: int) -> dict[str, float]:
        """Row of aggregates for recorded step ``t``."""
        (idx,) = np.flatnonzero(self.steps == t)
        return {name: float(getattr(self, name)[idx]) for name in OBSERVABLE_COLUMNS}


def recorded_steps(total: int, every: int) -> list[int]:
    steps = list(range(0, total + 1, every))
    if steps[-1] != total:
        steps.append(total)
    return steps


def _run_trajectory(
    schedule: Schedule,
    initial: InitialSpec,
    index: int,
    record_at: set[int],
    dump_at: set[int],
) -> tuple[np.ndarray, dict[int, np.ndarray]]:
    rng = RngStream(schedule.seed, index)
    state = new_state(initial, schedule.total_steps)
    x = state.positions.astype(np.float64)
    rows = []
    dumps = {}

    def observe() -> None:
        p = state.site_probabilities()
        if state.step in record_at:
            m1, sd = mean_and_sd(x, p)
            rows.append((m1, sd, entanglement_entropy(state), float(p.sum())))
        if state.step in dump_at:
            dumps[state.step] = p

    observe()
    for kind in schedule.kinds():
        state = apply_step(state, resolve_coin_field(kind, schedule.pawl, rng))
        observe()
    return np.array(rows), dumps


def _standard_error(values: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    if n < 2:
        return np.zeros(values.shape[1])
    return values.std(axis=0, ddof=1) / math.sqrt(n)


def run_experiment(config: ExperimentConfig, workers: int = 1) -> EnsembleSummary:
    """Run ``config.ensemble`` trajectories and aggregate them.

    Trajectory ``i`` draws from ``RngStream(config.seed, i)``.  Aggregation
    is in trajectory order, so results do not depend on ``workers``.
    """
    schedule = config.validate()
    total = schedule.total_steps
    steps = recorded_steps(total, config.record_every)
    record_at = set(steps)
    dump_at = set(config.dump_distribution_at) | {total}

    def one(index: int):
        return _run_trajectory(schedule, config.initial, index, record_at, dump_at)

    if workers > 1 and config.ensemble > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(config.ensemble)))
    else:
        results = [one(i) for i in range(config.ensemble)]

    stacked = np.stack([rows for rows, _ in results])  # (ensemble, n_rec, 4)
    mean_x, sd_x, entropy, norm_ = (stacked[:, :, j] for j in range(4))

    positions = new_state(config.initial, total).positions
    distributions = {}
    for t in sorted(dump_at):
        acc = np.zeros(positions.size)
        for _, dumps in results:
            acc += dumps[t]
        distributions[t] = Distribution(positions, acc / config.ensemble)

    return EnsembleSummary(
        config=config,
        schedule_text=format_schedule(schedule),
        steps=np.array(steps),
        mean_x=mean_x.mean(axis=0),
        se_mean_x=_standard_error(mean_x),
        sd_x=sd_x.mean(axis=0),
        se_sd_x=_standard_error(sd_x),
        entropy=entropy.mean(axis=0),
        se_entropy=_standard_error(entropy),
        norm=norm_.mean(axis=0),
        distributions=distributions,
        per_trajectory={"mean_x": mean_x, "sd_x": sd_x, "entropy": entropy},
    )


# ---------------------------------------------------------------------------
# presets

FIG3_THETAS = ("pi/30", "pi/6", "pi/4", "pi/3")

_FIG7_CURVES = {
    "a": "F(pi/4)^200",
    "b": "D^200",
    "c": "PD^200",
    "d": "PF(pi/30)^50 ; PD^50",
    "e": "PF(pi/30)^25 ; PD^25 ; PF(pi/30)^25 ; PD^25",
}

_SINGLE_PRESETS = {
    "fig1-std": ("F(pi/4)^200", (200,)),
    "fig1-disorder": ("D^200", (200,)),
    "fig4": ("PD^200", (50, 100, 150, 200)),
    "fig5a": ("PM(pi/30)^100", (100,)),
    "fig5b": ("PM(pi/6)^100", (100,)),
    "fig5c": ("PF(pi/30)^25 ; PD^25 ; PF(pi/30)^25 ; PD^25", (100,)),
    "fig6a": ("PF(pi/30)^50 ; PD^50", (50, 100)),
    "fig6b": ("PF(pi/30)^100 ; PD^100", (100, 200)),
    "fig6c": ("PF(pi/30)^160 ; PD^50", (160, 210)),
}

PRESET_NAMES = (
    "fig1-std", "fig1-disorder", "fig3", "fig4", "fig5a", "fig5b", "fig5c",
    "fig6a", "fig6b", "fig6c", "fig7",
)


def preset_variants(name: str) -> tuple[str, ...]:
    """Variant keys of a preset; single-series presets have the one key ``""``."""
    _check_preset(name)
    if name == "fig3":
        return FIG3_THETAS
    if name == "fig7":
        return tuple(_FIG7_CURVES)
    return ("",)


def _check_preset(name: str) -> None:
    if name not in PRESET_NAMES:
        raise ConfigError(f"unknown preset {name!r}; valid presets: {', '.join(PRESET_NAMES)}")


def preset(name: str, variant: str | None = None) -> ExperimentConfig:
    """Configuration reproducing one figure's data series.

    ``fig3`` takes the pawl walk's background angle as ``variant`` (any angle
    literal, default ``pi/30``); ``fig7`` takes the curve letter ``a``-``e``
    (default ``a``).  Other presets ignore ``variant``.
    """
    _check_preset(name)
    if name == "fig3":
        angle = variant or FIG3_THETAS[0]
        parse_angle(angle)
        return ExperimentConfig(f"PF({angle})^100", dump_distribution_at=(100,), label=f"{name}:{angle}")
    if name == "fig7":
        curve = variant or "a"
        if curve not in _FIG7_CURVES:
            raise ConfigError(f"fig7 curve must be one of {', '.join(_FIG7_CURVES)}, got {curve!r}")
        return ExperimentConfig(_FIG7_CURVES[curve], label=f"{name}:{curve}")
    text, dumps = _SINGLE_PRESETS[name]
    return ExperimentConfig(text, dump_distribution_at=dumps, label=name)


def preset_family(name: str) -> list[ExperimentConfig]:
    return [preset(name, v or None) for v in preset_variants(name)]


# ---------------------------------------------------------------------------
# output


def fmt(value: float) -> str:
    """12-significant-digit text, with negative zero normalized."""
    return f"{float(value) + 0.0:.12g}"


def _round12(value: float) -> float:
    return float(fmt(value))


def distribution_path(path: str | Path, t: int) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}_dist_t{t}.csv")


def _initial_to_dict(spec: InitialSpec) -> dict:
    out: dict = {"position": spec.position, "coin": spec.coin.value}
    if spec.coin is CoinKind.CUSTOM:
        out["a"] = [spec.a.real, spec.a.imag]
        out["b"] = [spec.b.real, spec.b.imag]
    return out


def summary_rows(summary: EnsembleSummary) -> list[list[str]]:
    rows = []
    for i, t in enumerate(summary.steps):
        rows.append(
            [str(int(t))]
            + [fmt(getattr(summary, col)[i]) for col in OBSERVABLE_COLUMNS[1:]]
        )
    return rows


def summary_to_json(summary: EnsembleSummary) -> dict:
    cfg = summary.config
    records = [
        {"t": int(t), **{col: _round12(getattr(summary, col)[i]) for col in OBSERVABLE_COLUMNS[1:]}}
        for i, t in enumerate(summary.steps)
    ]
    distributions = {
        str(t): [[int(x), _round12(p)] for x, p in zip(*_support_arrays(d))]
        for t, d in summary.distributions.items()
    }
    return {
        "config": {
            "schedule": summary.schedule_text,
            "seed": cfg.seed,
            "ensemble": cfg.ensemble,
            "record_every": cfg.record_every,
            "initial": _initial_to_dict(cfg.initial),
            "pawl": {"reflect_site": cfg.pawl.reflect_site, "pass_site": cfg.pawl.pass_site},
            "label": cfg.label,
        },
        "records": records,
        "distributions": distributions,
    }


def _support_arrays(dist: Distribution) -> tuple[np.ndarray, np.ndarray]:
    mask = dist.p > SUPPORT_THRESHOLD
    return dist.x[mask], dist.p[mask]


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise OutputError(path, exc) from exc


def emit(summary: EnsembleSummary, format: str, path: str | Path) -> list[Path]:
    """Write ``summary`` to ``path``; returns every file written.

    CSV writes the observables table to ``path`` and one ``x,p`` table per
    stored distribution next to it (``<stem>_dist_t<step>.csv``).  JSON writes
    a single document.
    """
    path = Path(path)
    if format == "json":
        try:
            with open(path, "w") as fh:
                json.dump(summary_to_json(summary), fh, indent=1)
                fh.write("\n")
        except OSError as exc:
            raise OutputError(path, exc) from exc
        return [path]
    if format != "csv":
        raise ConfigError(f"format must be one of {FORMATS}, got {format!r}")

    _write_csv(path, list(OBSERVABLE_COLUMNS), summary_rows(summary))
    written = [path]
    for t, dist in sorted(summary.distributions.items()):
        xs, ps = _support_arrays(dist)
        dpath = distribution_path(path, t)
        _write_csv(dpath, ["x", "p"], [[str(int(x)), fmt(p)] for x, p in zip(xs, ps)])
        written.append(dpath)
    return written


def run_band_structure(theta: float, n_k: int, path: str | Path) -> None:
    rows = [
        [fmt(pt.k), fmt(pt.e_plus), fmt(pt.e_minus), fmt(pt.vg_plus), fmt(pt.vg_minus)]
        for pt in band_structure(theta, n_k)
    ]
    _write_csv(Path(path), ["k", "e_plus", "e_minus", "vg_plus", "vg_minus"], rows)


def with_overrides(config: ExperimentConfig, **changes) -> ExperimentConfig:
    return replace(config, **{k: v for k, v in changes.items() if v is not None})
