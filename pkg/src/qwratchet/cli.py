"""Command-line driver.

Exit codes: 0 success, 2 parse/config error, 3 runtime error (window or
numerical corruption), 4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .dsl import ParseError, parse_angle
from .experiment import (
    PRESET_NAMES,
    ConfigError,
    ExperimentConfig,
    OutputError,
    emit,
    preset,
    preset_variants,
    run_band_structure,
    run_experiment,
    with_overrides,
)
from .observables import NumericalCorruptionError
from .state import CoinKind, InitialSpec, WindowError

log = logging.getLogger("qwratchet")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_IO = 4


def parse_initial(text: str) -> InitialSpec:
    """``symmetric|up|down[@pos]`` or ``custom:a_re,a_im,b_re,b_im[@pos]``."""
    body, _, pos_text = text.partition("@")
    try:
        position = int(pos_text) if pos_text else 0
    except ValueError:
        raise ConfigError(f"bad initial position {pos_text!r}") from None
    if body.startswith("custom:"):
        parts = body[len("custom:"):].split(",")
        if len(parts) != 4:
            raise ConfigError("custom initial state needs four numbers: a_re,a_im,b_re,b_im")
        try:
            a_re, a_im, b_re, b_im = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"bad custom amplitudes {body!r}") from None
        return InitialSpec.custom(complex(a_re, a_im), complex(b_re, b_im), position)
    try:
        coin = CoinKind(body)
    except ValueError:
        raise ConfigError(
            f"initial state must be symmetric, up, down or custom:..., got {body!r}"
        ) from None
    if coin is CoinKind.CUSTOM:
        raise ConfigError("custom initial state needs amplitudes: custom:a_re,a_im,b_re,b_im")
    return InitialSpec(position=position, coin=coin)


def _dump_steps(text: str) -> tuple[int, ...]:
    try:
        return tuple(sorted({int(t) for t in text.split(",") if t.strip()}))
    except ValueError:
        raise ConfigError(f"bad --dump-dist list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qwratchet",
        description="Disordered and ratcheted discrete-time quantum walks on a line.",
    )
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--schedule", help="schedule text, e.g. 'PF(pi/30)^50 ; PD^50'")
    src.add_argument("--preset", choices=PRESET_NAMES, help="figure preset")
    src.add_argument("--band-structure", metavar="THETA,N_K", help="dump bands k,E+,E-,vg+,vg-")
    p.add_argument("--variant", help="preset variant (fig3: angle, fig7: curve a-e); default all")
    p.add_argument("--initial", default=None, help="symmetric|up|down[@pos] or custom:a_re,a_im,b_re,b_im[@pos]")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--ensemble", type=int, default=None)
    p.add_argument("--record-every", type=int, default=None)
    p.add_argument("--dump-dist", default=None, metavar="T1,T2,...")
    p.add_argument("--out", required=True, help="output file path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1, help="threads for ensemble members")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _variant_path(out: Path, variant: str) -> Path:
    if not variant:
        return out
    tag = variant.replace("/", "_")
    return out.with_name(f"{out.stem}_{tag}{out.suffix}")


def _configs(args: argparse.Namespace) -> list[tuple[ExperimentConfig, Path]]:
    out = Path(args.out)
    overrides = dict(
        seed=args.seed,
        ensemble=args.ensemble,
        record_every=args.record_every,
        format=args.format,
        initial=parse_initial(args.initial) if args.initial else None,
        dump_distribution_at=_dump_steps(args.dump_dist) if args.dump_dist is not None else None,
    )
    if args.schedule is not None:
        base = ExperimentConfig(args.schedule)
        return [(with_overrides(base, output_path=str(out), **overrides), out)]
    variants = [args.variant] if args.variant else list(preset_variants(args.preset))
    configs = []
    for variant in variants:
        path = _variant_path(out, variant if not args.variant else "")
        cfg = with_overrides(preset(args.preset, variant or None), output_path=str(path), **overrides)
        configs.append((cfg, path))
    return configs


def _band_structure(args: argparse.Namespace) -> None:
    theta_text, _, nk_text = args.band_structure.rpartition(",")
    if not theta_text:
        raise ConfigError("--band-structure expects THETA,N_K")
    theta = parse_angle(theta_text.strip())
    try:
        n_k = int(nk_text)
    except ValueError:
        raise ConfigError(f"bad n_k {nk_text!r}") from None
    if n_k < 2:
        raise ConfigError("n_k must be at least 2")
    run_band_structure(theta, n_k, args.out)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.band_structure is not None:
            _band_structure(args)
            return EXIT_OK
        for cfg, path in _configs(args):
            log.info("running %s (%s), ensemble=%d", cfg.label or "schedule", cfg.schedule_text, cfg.ensemble)
            summary = run_experiment(cfg, workers=args.workers)
            for written in emit(summary, cfg.format, path):
                log.info("wrote %s", written)
    except (ParseError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (WindowError, NumericalCorruptionError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
