# pipeline.py
"""
Sweep pipeline and command-line entry point.

    swapsim <quantity> [--channel C] [--r R] [--delta D] [--ideal] [--theta1 ..] ...
    swapsim fig --id 4a [--out PATH]

Exit codes: 0 success, 1 numerical failure, 2 usage error.
"""

import argparse
import dataclasses
import sys
import traceback
from typing import Callable, Dict, List, Optional

import numpy as np
from dotenv import load_dotenv
from tqdm import tqdm

from .averaging import AverageScheme, AverageSpec, average_linear_entropy, entangling_power_estimate
from .dynamics import gamma_amplitude, survival_amplitude
from .errors import ConfigError, InvalidParameterError, SwapSimError
from .figures import FIGURE_RECIPES, Quantity, SweepConfig, fig_recipe
from .qubit_algebra import linear_entropy, qubit_reduced_density
from .swap_protocol import BellChannel, PairInit, concurrence_phi_plus, maximal_entanglement_times, swapped_concurrence
from .timeseries import TimeSeries
from .utils import default_seed, load_config_file, log, silent

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


# =========================
# Sweeps
# =========================

def _variant_tag(config: SweepConfig, delta: float, init_index: Optional[int] = None) -> str:
    tag = ""
    if len(config.deltas) > 1:
        tag += f"[d={delta:g}]"
    if init_index is not None and len(config.inits) > 1:
        tag += f"[i={init_index}]"
    return tag


def run_sweep(
    config: SweepConfig,
    log_callback: Optional[Callable[[str], None]] = None,
    progress: bool = True,
) -> TimeSeries:
    """
    Evaluate the configured quantity on the tau grid.

    Args:
        config: Sweep configuration
        log_callback: Receives progress lines (printed to stderr when None)
        progress: Show tqdm bars for averaged quantities

    Returns:
        TimeSeries with one column group per detuning / initial-state variant

    Raises:
        SwapSimError: On numerical failure (zero-probability outcome, ...)
    """
    quantity = config.quantity

    if quantity is Quantity.PEAK_TIMES:
        params = config.params_for(config.deltas[0])
        roots = maximal_entanglement_times(params, config.tau_max, log_callback)
        both_excited = PairInit.identical(0.0)
        peaks = [concurrence_phi_plus(params, both_excited, root) for root in roots]
        log(f"OK: found {len(roots)} maximal-entanglement times", log_callback)
        return TimeSeries.from_columns(np.array(roots, dtype=float), {"concurrence": np.array(peaks, dtype=float)})

    tau = config.tau_grid()
    columns: Dict[str, np.ndarray] = {}

    for delta in config.deltas:
        params = config.params_for(delta)
        tag = _variant_tag(config, delta)

        if quantity is Quantity.AMPLITUDE:
            survival = survival_amplitude(params, tau)
            columns[f"E{tag}"] = survival
            columns[f"abs_E{tag}"] = np.abs(survival)

        elif quantity is Quantity.GAMMA:
            gamma = gamma_amplitude(params, tau)
            columns[f"Gamma{tag}"] = gamma
            columns[f"abs_Gamma{tag}"] = np.abs(gamma)

        elif quantity is Quantity.ENTROPY:
            for index, init in enumerate(config.inits):
                name = f"entropy{_variant_tag(config, delta, index)}"
                columns[name] = np.array(
                    [linear_entropy(qubit_reduced_density(params, init.first, t)) for t in tau]
                )

        elif quantity is Quantity.ENTROPY_AVG:
            bar = tqdm(tau, desc=f"entropy-avg{tag}", file=sys.stderr, disable=not progress, leave=False)
            columns[f"entropy_avg{tag}"] = np.array(
                [average_linear_entropy(params, t, config.average) for t in bar]
            )

        elif quantity is Quantity.CONCURRENCE:
            for index, init in enumerate(config.inits):
                name = f"concurrence{_variant_tag(config, delta, index)}"
                columns[name] = np.array([swapped_concurrence(config.channel, params, init, t) for t in tau])

        elif quantity is Quantity.EPOWER:
            spec = config.average or AverageSpec()
            bar = tqdm(tau, desc=f"epower{tag}", file=sys.stderr, disable=not progress, leave=False)
            estimates = [entangling_power_estimate(config.channel, params, t, spec) for t in bar]
            columns[f"epower{tag}"] = np.array([value for value, _ in estimates])
            if spec.scheme is AverageScheme.MONTECARLO:
                columns[f"epower_stderr{tag}"] = np.array([stderr for _, stderr in estimates])

        log(f"OK: {quantity.value} done for delta={delta:g} ({tau.size} points)", log_callback)

    return TimeSeries.from_columns(tau, columns)


# =========================
# Command line
# =========================

def _to_bool(value: str) -> bool:
    lowered = str(value).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value}")


# settings accepted from a --config file, with their parsers
CONVERTERS: Dict[str, Callable[[str], object]] = {
    "channel": str,
    "r": float,
    "delta": float,
    "ideal": _to_bool,
    "theta1": float,
    "phi1": float,
    "theta2": float,
    "phi2": float,
    "tau_max": float,
    "tau_step": float,
    "scheme": str,
    "nodes": int,
    "angle_nodes": int,
    "samples": int,
    "seed": int,
    "out": str,
    "id": str,
}

DEFAULTS: Dict[str, object] = {
    "channel": None,
    "r": 10.0,
    "delta": 0.0,
    "ideal": False,
    "theta1": 0.0,
    "phi1": 0.0,
    "theta2": 0.0,
    "phi2": 0.0,
    "tau_max": 1.0,
    "tau_step": 0.01,
    "scheme": None,
    "nodes": 32,
    "angle_nodes": 64,
    "samples": 200_000,
    "seed": None,
    "out": None,
    "id": None,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swapsim",
        description="Entanglement swapping between qubits in lossy cavities: sweeps and figure recipes.",
    )
    parser.add_argument("quantity", choices=[q.value for q in Quantity] + ["fig"])
    parser.add_argument("--channel", help="psi-minus, psi-plus, phi-plus or phi-minus")
    parser.add_argument("--r", type=float, help="coupling ratio R = g/kappa (default 10)")
    parser.add_argument("--delta", type=float, help="detuning in units of kappa (default 0)")
    parser.add_argument("--ideal", action="store_true", default=None, help="lossless cavity (g = 1 units)")
    parser.add_argument("--theta1", type=float)
    parser.add_argument("--phi1", type=float)
    parser.add_argument("--theta2", type=float)
    parser.add_argument("--phi2", type=float)
    parser.add_argument("--tau-max", dest="tau_max", type=float)
    parser.add_argument("--tau-step", dest="tau_step", type=float)
    parser.add_argument("--scheme", help="q|quadrature or mc|montecarlo")
    parser.add_argument("--nodes", type=int, help="Gauss-Legendre nodes per x variable (default 32)")
    parser.add_argument("--angle-nodes", dest="angle_nodes", type=int, help="trapezoid nodes per angle (default 64)")
    parser.add_argument("--samples", type=int, help="Monte Carlo samples (default 200000)")
    parser.add_argument("--seed", type=int, help="Monte Carlo seed (default: SWAPSIM_SEED or 42)")
    parser.add_argument("--out", help="output CSV path (default: stdout)")
    parser.add_argument("--id", help=f"figure id for 'fig' ({', '.join(FIGURE_RECIPES)})")
    parser.add_argument("--config", help="key=value file; command-line flags win")
    parser.add_argument("--quiet", action="store_true", help="no progress output")
    return parser


def merge_settings(args: argparse.Namespace) -> Dict[str, object]:
    """Defaults, then --config file values, then explicit flags."""
    settings = dict(DEFAULTS)
    if args.config:
        for key, raw in load_config_file(args.config).items():
            if key not in CONVERTERS:
                raise ConfigError(f"Unknown config key: {key}")
            try:
                settings[key] = CONVERTERS[key](raw)
            except ValueError as e:
                raise ConfigError(f"Bad value for {key}: {raw!r} ({e})") from e
    for key in CONVERTERS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


AVERAGE_FLAGS = ("scheme", "nodes", "angle_nodes", "samples", "seed")


def figure_average(average: AverageSpec, args: argparse.Namespace) -> AverageSpec:
    """Recipe averaging spec with any averaging flags given on the command line applied."""
    overrides = {key: getattr(args, key) for key in AVERAGE_FLAGS if getattr(args, key, None) is not None}
    if not overrides:
        return average
    try:
        if "scheme" in overrides:
            overrides["scheme"] = AverageScheme.parse(overrides["scheme"])
        return dataclasses.replace(average, **overrides)
    except InvalidParameterError as e:
        raise ConfigError(str(e)) from e


def config_from_args(args: argparse.Namespace) -> SweepConfig:
    """
    Translate parsed arguments into a SweepConfig.

    Raises:
        ConfigError: On any invalid or inconsistent setting
    """
    settings = merge_settings(args)

    if args.quantity == "fig":
        if not settings["id"]:
            raise ConfigError("fig requires --id")
        config = fig_recipe(settings["id"])
        if settings["out"]:
            config = dataclasses.replace(config, out=settings["out"])
        if config.average is not None:
            config = dataclasses.replace(config, average=figure_average(config.average, args))
        return config

    quantity = Quantity(args.quantity)
    try:
        channel = BellChannel.parse(settings["channel"]) if settings["channel"] else None
        init = PairInit(settings["theta1"], settings["phi1"], settings["theta2"], settings["phi2"])
        seed = settings["seed"] if settings["seed"] is not None else default_seed()
        average = None
        if quantity is Quantity.EPOWER or settings["scheme"] is not None:
            average = AverageSpec(
                scheme=AverageScheme.parse(settings["scheme"] or "quadrature"),
                nodes=settings["nodes"],
                angle_nodes=settings["angle_nodes"],
                samples=settings["samples"],
                seed=seed,
            )
    except InvalidParameterError as e:
        raise ConfigError(str(e)) from e

    return SweepConfig(
        quantity=quantity,
        channel=channel,
        r=settings["r"],
        deltas=(settings["delta"],),
        ideal=bool(settings["ideal"]),
        inits=(init,),
        tau_max=settings["tau_max"],
        tau_step=settings["tau_step"],
        average=average,
        out=settings["out"],
    )


def main(argv: Optional[List[str]] = None):
    """
    Main entry point for command-line usage.
    """
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    log_callback = silent if args.quiet else None

    try:
        config = config_from_args(args)
        log(f"Running {config.quantity.value}{' (fig ' + config.label + ')' if config.label else ''}...", log_callback)
        series = run_sweep(config, log_callback=log_callback, progress=not args.quiet)
        text = series.emit(config.out)
        if config.out:
            log(f"OK: wrote {len(series)} rows to {config.out}", log_callback)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
    except ConfigError as e:
        parser.print_usage(sys.stderr)
        print(f"swapsim: error: {e}", file=sys.stderr)
        sys.exit(EXIT_USAGE)
    except SwapSimError as e:
        print(f"\n{'=' * 60}", file=sys.stderr)
        print("NUMERICAL ERROR", file=sys.stderr)
        print(f"{'=' * 60}", file=sys.stderr)
        print(f"Error type: {type(e).__name__}", file=sys.stderr)
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(EXIT_NUMERICAL)
    except Exception as e:
        print(f"\n{'=' * 60}", file=sys.stderr)
        print("UNEXPECTED ERROR", file=sys.stderr)
        print(f"{'=' * 60}", file=sys.stderr)
        print(f"Error type: {type(e).__name__}", file=sys.stderr)
        print(f"Error message: {e}", file=sys.stderr)
        traceback.print_exc()
        sys.exit(EXIT_NUMERICAL)

    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
