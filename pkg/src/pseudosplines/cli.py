"""Command line interface.

Subcommands: filter, cascade, framelets, transform, verify, analyze, sweep.
All file output is byte-deterministic: floats are written with repr, JSON
keys are sorted, and nothing records timestamps or hostnames.

Exit codes: 0 success, 1 I/O failure, 2 invalid configuration or order
parameters, 3 verification failure, 4 unattainable tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import frames
from .analysis import full_report
from .cascade import run_cascade, to_time_domain
from .checks import default_bank_resolution, run_all
from .errors import (
    ConditionError,
    ConsistencyError,
    DomainError,
    PseudoSplineError,
    ToleranceError,
    VerificationFailure,
)
from .serialize import (
    dump_json,
    format_float,
    load_json,
    order_to_dict,
    read_samples_csv,
    symbol_to_dict,
    write_json,
    write_samples_csv,
)
from .symbol import PseudoSplineOrder, TorusGrid, partition_extrema, sample_H0, theta_bound

__all__ = ["main", "build_parser", "RunConfig", "DEFAULT_SWEEP"]

DEFAULT_SWEEP = (
    "1,0;1.5,0;2,0;2,1;"
    "3.5,0;3.5,1;3.5,2;3.5,3;"
    "3.2+1i,0;3.2+1i,1;3.2+1i,2;3.2+1i,3;"
    "4.2,0;4.2,1;4.2,2;4.2,3"
)


def _to_complex(value) -> complex:
    """Accept 'a+bi' strings (also plain reals) and numeric config values."""
    if isinstance(value, complex):
        return value
    if isinstance(value, (int, float)):
        return complex(float(value))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        text = value.strip().replace(" ", "")
        if text.endswith("i"):
            text = text[:-1] + "j"
        try:
            return complex(text)
        except ValueError:
            raise DomainError(f"cannot parse complex order {value!r}; expected e.g. 3.2+1i") from None
    raise DomainError(f"cannot parse complex order {value!r}")


def _to_step(value) -> float:
    """Grid steps are given as fractions like 1/64 (or plain floats)."""
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            try:
                step = float(num) / float(den)
            except (ValueError, ZeroDivisionError):
                raise DomainError(f"cannot parse step {value!r}") from None
        else:
            try:
                step = float(text)
            except ValueError:
                raise DomainError(f"cannot parse step {value!r}") from None
    else:
        step = float(value)
    if not step > 0.0:
        raise DomainError(f"step must be positive, got {value!r}")
    return step


def _order_from_args(ns: argparse.Namespace) -> PseudoSplineOrder:
    if ns.z is None:
        raise DomainError("the order parameter z is required (--z or config key 'z')")
    return PseudoSplineOrder(z=_to_complex(ns.z), ell=int(ns.ell), shift=float(ns.shift))


def _outdir(ns: argparse.Namespace) -> str:
    out = ns.out or os.environ.get("PSEUDOSPLINES_OUTDIR") or "."
    os.makedirs(out, exist_ok=True)
    return out


def _emit(path: str) -> None:
    sys.stdout.write(f"wrote {path}\n")


def _write_series(ns, stem: str, axis_name: str, axis, values, json_obj=None) -> str:
    outdir = _outdir(ns)
    if ns.format == "json" and json_obj is not None:
        path = os.path.join(outdir, stem + ".json")
        write_json(path, json_obj)
    else:
        path = os.path.join(outdir, stem + ".csv")
        write_samples_csv(path, axis_name, axis, values)
    _emit(path)
    return path


@dataclass(frozen=True)
class RunConfig:
    """Normalized record of one invocation; survives a JSON round trip intact."""

    command: str
    params: tuple

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        skip = {"command", "func", "config"}
        items = []
        for key in sorted(vars(ns)):
            if key in skip:
                continue
            value = getattr(ns, key)
            if isinstance(value, complex):
                value = [value.real, value.imag]
            items.append((key, value))
        return cls(command=ns.command, params=tuple(items))

    def to_json_text(self) -> str:
        return dump_json({"command": self.command, "params": [[k, v] for k, v in self.params]})

    @classmethod
    def from_json_text(cls, text: str) -> "RunConfig":
        d = json.loads(text)
        return cls(command=d["command"], params=tuple((k, v) for k, v in d["params"]))


def _parse_bands(text) -> list[int]:
    try:
        bands = sorted({int(tok) for tok in str(text).split(",") if tok.strip() != ""})
    except ValueError:
        raise DomainError(f"cannot parse band list {text!r}; expected e.g. 0,1,2,3") from None
    if not bands or any(b not in (0, 1, 2, 3) for b in bands):
        raise DomainError(f"band indices must lie in 0..3, got {text!r}")
    return bands


def _parse_orders(text: str) -> list[PseudoSplineOrder]:
    orders = []
    for token in str(text).split(";"):
        token = token.strip()
        if not token:
            continue
        parts = token.split(",")
        if len(parts) not in (2, 3):
            raise DomainError(f"cannot parse order token {token!r}; expected z,ell or z,ell,u")
        z = _to_complex(parts[0])
        ell = int(parts[1])
        shift = float(parts[2]) if len(parts) == 3 else 0.0
        orders.append(PseudoSplineOrder(z=z, ell=ell, shift=shift))
    if not orders:
        raise DomainError(f"empty order sweep {text!r}")
    return orders


def _json_value(x: float):
    return x if math.isfinite(x) else repr(x)


def cmd_filter(ns: argparse.Namespace) -> int:
    order = _order_from_args(ns)
    grid = TorusGrid(int(ns.grid))
    bands = _parse_bands(ns.bands)
    if bands == [0]:
        symbols = {0: sample_H0(order, grid)}
    else:
        bank = frames.build_bank(order, grid, truncation_eps=float(ns.eps), max_k=ns.max_k)
        symbols = {b: bank.symbol(b) for b in bands}
    for band in bands:
        sym = symbols[band]
        obj = symbol_to_dict(sym)
        if band != 0:
            obj["band"] = band
        _write_series(ns, f"filter_h{band}", "gamma", grid.gamma, sym.values, obj)
    return 0


def cmd_cascade(ns: argparse.Namespace) -> int:
    order = _order_from_args(ns)
    step = _to_step(ns.step)
    profile, diag = run_cascade(
        order,
        levels=int(ns.levels),
        window=float(ns.window),
        step=step,
        sup_tolerance=float(ns.sup_tolerance),
    )
    _write_series(ns, "cascade_phihat", "gamma", profile.gammas, profile.values, profile.to_dict())
    outdir = _outdir(ns)
    diag_path = os.path.join(outdir, "cascade_diagnostics.json")
    write_json(diag_path, diag.to_dict())
    _emit(diag_path)
    sys.stdout.write(f"converged={diag.converged} level={diag.converged_level}\n")
    if ns.time_half_width is not None:
        tp = to_time_domain(
            profile,
            half_width=float(ns.time_half_width),
            step=_to_step(ns.dt),
            tolerance=float(ns.time_tolerance),
        )
        _write_series(ns, "cascade_phi_time", "t", tp.ts, tp.values, tp.to_dict())
        sys.stdout.write(f"tail_estimate={format_float(tp.tail_estimate)}\n")
    return 0


def cmd_framelets(ns: argparse.Namespace) -> int:
    order = _order_from_args(ns)
    bank = frames.build_bank(
        order, TorusGrid(int(ns.grid)), truncation_eps=float(ns.eps), max_k=ns.max_k
    )
    outdir = _outdir(ns)
    bank_path = os.path.join(outdir, "bank.json")
    write_json(bank_path, frames.bank_to_dict(bank))
    _emit(bank_path)
    for band in range(4):
        c = bank.coeffs[band]
        sys.stdout.write(
            f"band {band}: support_radius={c.support_radius} "
            f"tail_norm={format_float(c.tail_norm)} "
            f"aliasing={format_float(c.aliasing_estimate)}\n"
        )
    profile = None
    if ns.with_hats or ns.with_time:
        step = _to_step(ns.step)
        profile, _ = run_cascade(
            order,
            levels=int(ns.levels),
            window=float(ns.window),
            step=step,
            sup_tolerance=float(ns.sup_tolerance),
        )
    if ns.with_hats:
        w = float(ns.psi_window)
        count = int(round(w / step))
        gammas = (np.arange(2 * count + 1) - count) * step
        for n in (1, 2, 3):
            values = frames.framelet_hat(bank, profile, n, gammas)
            obj = {
                "order": order_to_dict(order),
                "band": n,
                "step": step,
                "values": [[v.real, v.imag] for v in values],
            }
            _write_series(ns, f"framelet_psihat_n{n}", "gamma", gammas, values, obj)
    if ns.with_time:
        phi = to_time_domain(
            profile,
            half_width=float(ns.time_half_width),
            step=_to_step(ns.dt),
            tolerance=float(ns.time_tolerance),
        )
        for n in (1, 2, 3):
            psi = frames.framelet_time(bank, phi, n)
            _write_series(ns, f"framelet_psi_n{n}", "t", psi.ts, psi.values, psi.to_dict())
    return 0


def cmd_transform(ns: argparse.Namespace) -> int:
    if ns.bank is None or ns.input is None:
        raise DomainError("transform requires --bank and --input")
    bank = frames.bank_from_dict(load_json(ns.bank))
    _, values = read_samples_csv(ns.input)
    signal = frames.PeriodicSignal(values)
    levels = int(ns.levels)
    index = np.arange
    if levels == 1:
        subbands = frames.analyze(bank, signal)
        for n, sub in enumerate(subbands):
            _write_series(ns, f"subband_n{n}", "index", index(len(sub)), sub)
        if ns.roundtrip:
            back = frames.synthesize(bank, subbands)
            _write_series(ns, "reconstruction", "index", index(back.length), back.samples)
            err = float(np.linalg.norm(back.samples - signal.samples) / np.linalg.norm(signal.samples))
            sys.stdout.write(f"roundtrip_relative_error={format_float(err)}\n")
    else:
        details, approx = frames.analyze_multilevel(bank, signal, levels)
        _write_series(ns, "subband_approx", "index", index(len(approx)), approx)
        for level, level_details in enumerate(details, start=1):
            for n, sub in enumerate(level_details, start=1):
                _write_series(ns, f"subband_l{level}_n{n}", "index", index(len(sub)), sub)
        if ns.roundtrip:
            back = frames.synthesize_multilevel(bank, details, approx)
            _write_series(ns, "reconstruction", "index", index(back.length), back.samples)
            err = float(np.linalg.norm(back.samples - signal.samples) / np.linalg.norm(signal.samples))
            sys.stdout.write(f"roundtrip_relative_error={format_float(err)}\n")
    sys.stdout.write(f"input_energy={format_float(signal.energy())}\n")
    return 0


def cmd_verify(ns: argparse.Namespace) -> int:
    order = _order_from_args(ns)
    results = run_all(
        order,
        symbol_resolution=int(ns.grid),
        frames_resolution=None if ns.frames_grid is None else int(ns.frames_grid),
        levels=int(ns.levels),
        window=float(ns.window),
        step=_to_step(ns.step),
        truncation_eps=float(ns.eps),
        signals=int(ns.signals),
        signal_length=int(ns.signal_length),
        seed=int(ns.seed),
        tolerance_scale=float(ns.tolerance_scale),
    )
    ext = partition_extrema(order, TorusGrid(int(ns.grid)))
    theta = theta_bound(order)
    sys.stdout.write(
        f"partition min={format_float(ext.min)} theta_bound={format_float(theta)} "
        f"max={format_float(ext.max)}\n"
    )
    all_passed = True
    report = {
        "order": order_to_dict(order),
        "partition": {
            "min": ext.min,
            "argmin": ext.argmin,
            "max": ext.max,
            "argmax": ext.argmax,
            "theta_bound": theta,
        },
        "tolerance_scale": float(ns.tolerance_scale),
        "suites": {},
    }
    for suite in ("symbol", "cascade", "frames"):
        entries = []
        for r in results[suite]:
            status = "PASS" if r.passed else "FAIL"
            all_passed = all_passed and r.passed
            sys.stdout.write(
                f"{status} {suite}.{r.name} observed={format_float(r.observed)} "
                f"limit={format_float(r.limit)}\n"
            )
            d = r.to_dict()
            d["observed"] = _json_value(d["observed"])
            d["margin"] = _json_value(d["margin"])
            entries.append(d)
        report["suites"][suite] = entries
    path = os.path.join(_outdir(ns), "verify_report.json")
    write_json(path, report)
    _emit(path)
    total = sum(len(v) for v in results.values())
    passed = sum(1 for v in results.values() for r in v if r.passed)
    sys.stdout.write(f"{passed}/{total} checks passed\n")
    return 0 if all_passed else 3


def cmd_analyze(ns: argparse.Namespace) -> int:
    order = _order_from_args(ns)
    report = full_report(
        order,
        with_fits=not ns.no_fits,
        levels=int(ns.levels),
        window=float(ns.window),
        step=_to_step(ns.step),
    )
    text = dump_json(report.to_dict())
    path = os.path.join(_outdir(ns), "analyze_report.json")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    sys.stdout.write(text + "\n")
    _emit(path)
    return 0


def cmd_sweep(ns: argparse.Namespace) -> int:
    orders = _parse_orders(ns.orders)
    entries = []
    for order in orders:
        grid = TorusGrid(int(ns.grid))
        ext = partition_extrema(order, grid)
        theta = theta_bound(order)
        frames_grid = int(ns.frames_grid) if ns.frames_grid is not None else default_bank_resolution(order)
        bank = frames.build_bank(order, TorusGrid(frames_grid), truncation_eps=float(ns.eps))
        report = full_report(
            order,
            with_fits=bool(ns.with_fits),
            levels=int(ns.levels),
            window=float(ns.window),
            step=_to_step(ns.step),
        )
        entries.append(
            {
                "label": order.label(),
                "order": order_to_dict(order),
                "theta": theta,
                "partition_min": ext.min,
                "partition_max": ext.max,
                "uep_diagonal_error": bank.uep_diagonal_error,
                "uep_offdiagonal_error": bank.uep_offdiagonal_error,
                "max_support_radius": bank.max_support_radius(),
                "report": report.to_dict(),
            }
        )
        sys.stdout.write(
            f"{order.label()}: theta={format_float(theta)} "
            f"partition_min={format_float(ext.min)} "
            f"uep={format_float(max(bank.uep_diagonal_error, bank.uep_offdiagonal_error))}\n"
        )
    path = os.path.join(_outdir(ns), "sweep_report.json")
    write_json(path, {"orders": entries})
    _emit(path)
    return 0


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", default=None, help="JSON file of defaults for this command")
    sub.add_argument("--out", default=None, help="output directory (default: $PSEUDOSPLINES_OUTDIR or .)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv", help="series output format")


def _add_order(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--z", default=None, help="order z, e.g. 2 or 3.5 or 3.2+1i (Re z >= 1)")
    sub.add_argument("--ell", type=int, default=0, help="integer order parameter ell")
    sub.add_argument("--shift", type=float, default=0.0, help="real shift u")


def _add_cascade_opts(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--levels", type=int, default=24)
    sub.add_argument("--window", type=float, default=64.0)
    sub.add_argument("--step", default="1/64", help="frequency grid step, e.g. 1/64")
    sub.add_argument("--sup-tolerance", type=float, default=1e-10)


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="pseudosplines",
        description="Pseudo-spline refinement filters, refinable functions, and tight framelets.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    subs: dict[str, argparse.ArgumentParser] = {}

    sub = subparsers.add_parser("filter", help="sample the refinement symbols on a grid")
    _add_common(sub)
    _add_order(sub)
    sub.add_argument("--grid", type=int, default=1024, help="grid resolution (power of two)")
    sub.add_argument("--bands", default="0", help="comma list of bands to write, subset of 0,1,2,3")
    sub.add_argument("--eps", type=float, default=1e-10)
    sub.add_argument("--max-k", type=int, default=None)
    sub.set_defaults(func=cmd_filter)
    subs["filter"] = sub

    sub = subparsers.add_parser("cascade", help="run the Fourier-domain cascade")
    _add_common(sub)
    _add_order(sub)
    _add_cascade_opts(sub)
    sub.add_argument("--time-half-width", type=float, default=None, help="also write phi on [-w, w]")
    sub.add_argument("--dt", default="1/32", help="time grid step")
    sub.add_argument("--time-tolerance", type=float, default=1e-3)
    sub.set_defaults(func=cmd_cascade)
    subs["cascade"] = sub

    sub = subparsers.add_parser("framelets", help="build the framelet filter bank")
    _add_common(sub)
    _add_order(sub)
    _add_cascade_opts(sub)
    sub.add_argument("--grid", type=int, default=8192)
    sub.add_argument("--eps", type=float, default=1e-10)
    sub.add_argument("--max-k", type=int, default=None)
    sub.add_argument("--with-hats", action="store_true", help="also write psi_hat samples")
    sub.add_argument("--psi-window", type=float, default=8.0)
    sub.add_argument("--with-time", action="store_true", help="also write time-domain psi samples")
    sub.add_argument("--time-half-width", type=float, default=8.0)
    sub.add_argument("--dt", default="1/32", help="time grid step")
    sub.add_argument("--time-tolerance", type=float, default=1e-2)
    sub.set_defaults(func=cmd_framelets)
    subs["framelets"] = sub

    sub = subparsers.add_parser("transform", help="analyze/synthesize a periodic signal")
    _add_common(sub)
    sub.add_argument("--bank", default=None, help="bank.json produced by the framelets command")
    sub.add_argument("--input", default=None, help="signal CSV (index,re,im,abs)")
    sub.add_argument("--levels", type=int, default=1)
    sub.add_argument("--roundtrip", action="store_true", help="also synthesize and report the error")
    sub.set_defaults(func=cmd_transform)
    subs["transform"] = sub

    sub = subparsers.add_parser("verify", help="run the verification suites")
    _add_common(sub)
    _add_order(sub)
    _add_cascade_opts(sub)
    sub.add_argument("--grid", type=int, default=4096)
    sub.add_argument("--frames-grid", type=int, default=None, help="bank resolution (default: automatic)")
    sub.add_argument("--eps", type=float, default=1e-10)
    sub.add_argument("--signals", type=int, default=50)
    sub.add_argument("--signal-length", type=int, default=1024)
    sub.add_argument("--seed", type=int, default=7)
    sub.add_argument("--tolerance-scale", type=float, default=1.0)
    sub.set_defaults(func=cmd_verify)
    subs["verify"] = sub

    sub = subparsers.add_parser("analyze", help="compute exponents and fitted diagnostics")
    _add_common(sub)
    _add_order(sub)
    _add_cascade_opts(sub)
    sub.add_argument("--no-fits", action="store_true", help="skip cascade-based fits")
    sub.set_defaults(func=cmd_analyze)
    subs["analyze"] = sub

    sub = subparsers.add_parser("sweep", help="tabulate bounds and reports over many orders")
    _add_common(sub)
    _add_cascade_opts(sub)
    sub.add_argument("--orders", default=DEFAULT_SWEEP, help="semicolon list of z,ell or z,ell,u")
    sub.add_argument("--grid", type=int, default=4096)
    sub.add_argument("--frames-grid", type=int, default=None)
    sub.add_argument("--eps", type=float, default=1e-10)
    sub.add_argument("--with-fits", action="store_true")
    sub.set_defaults(func=cmd_sweep)
    subs["sweep"] = sub

    return parser, subs


def _find_config_path(argv: list[str]) -> str | None:
    for i, token in enumerate(argv):
        if token == "--config":
            if i + 1 >= len(argv):
                return None
            return argv[i + 1]
        if token.startswith("--config="):
            return token.split("=", 1)[1]
    return None


def _apply_config(subs: dict[str, argparse.ArgumentParser], path: str) -> None:
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise DomainError(f"config {path} must hold a JSON object")
    known: set[str] = set()
    for sub in subs.values():
        known.update(a.dest for a in sub._actions)
    unknown = sorted(set(cfg) - known)
    if unknown:
        raise DomainError(f"unknown config keys: {', '.join(unknown)}")
    for sub in subs.values():
        dests = {a.dest for a in sub._actions}
        sub.set_defaults(**{k: v for k, v in cfg.items() if k in dests})


def _fail(exc: BaseException, code: int) -> int:
    sys.stderr.write(f"error: {exc}\n")
    return code


def main(argv=None) -> int:
    args = list(sys.argv[1:]) if argv is None else list(argv)
    parser, subs = build_parser()
    config_path = _find_config_path(args)
    if config_path is not None:
        try:
            _apply_config(subs, config_path)
        except OSError as exc:
            return _fail(exc, 1)
        except (json.JSONDecodeError, PseudoSplineError) as exc:
            return _fail(exc, 2)
    ns = parser.parse_args(args)
    try:
        return ns.func(ns)
    except ToleranceError as exc:
        return _fail(exc, 4)
    except (VerificationFailure, ConsistencyError, ConditionError) as exc:
        return _fail(exc, 3)
    except PseudoSplineError as exc:
        return _fail(exc, 2)
    except OSError as exc:
        return _fail(exc, 1)


if __name__ == "__main__":
    sys.exit(main())
