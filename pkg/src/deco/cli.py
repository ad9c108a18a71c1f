"""Command-line front end: kernel curves, evolution series, oracle checks,
and figure-ready datasets.

Config files are flat ``key = value`` text with dotted keys; ``--set``
overrides on the command line win over the file.  CSV output is
deterministic: 12-significant-digit floats, comma separated, LF endings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .core import Amplitudes, concurrence, l1_coherence
from .dynamics import (
    EvolutionMode,
    coherence_functions,
    matrix_from_dressings,
    uncorrelated_dressings,
)
from .kernels import (
    KernelWeight,
    ModelParams,
    QuadratureConfig,
    QuadratureError,
    gamma,
    gamma0,
    phase_kernel,
)
from .oracle import (
    DiscreteBath,
    DiscreteMode,
    TruncationError,
    compare,
    discrete_density_matrix,
    fock_evolution,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_TRUNCATION = 4
EXIT_IO = 5

ORACLE_GATE = 1e-6
FIGURE_PANELS = ("1a", "1b", "1c", "1d", "2a", "2b")


class ConfigError(ValueError):
    """Malformed or out-of-range configuration input."""


@dataclass(frozen=True)
class RunConfig:
    alpha: float = 1.0
    beta: float = 10.0
    omega0: float = 1.0
    s: float = 1.0
    s_list: tuple[float, ...] = (0.5, 1.0, 2.0, 5.0)
    p: float = 0.5
    amplitudes: tuple[complex, complex, complex, complex] | None = None
    mode: EvolutionMode = EvolutionMode.CORRELATED_THERMAL
    t_max: float = 30.0
    n_steps: int = 241
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    output_format: str = "csv"
    output_path: str | None = None
    bath_modes: tuple[DiscreteMode, ...] | None = None
    bath_n_max: int = 12
    oracle_times: tuple[float, ...] = (0.5, 1.0, 3.0)

    def __post_init__(self) -> None:
        if self.n_steps < 2:
            raise ConfigError(f"n_steps must be >= 2, got {self.n_steps}")
        if self.t_max <= 0.0:
            raise ConfigError(f"t_max must be > 0, got {self.t_max}")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"p must lie in [0, 1], got {self.p}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"output.format must be csv or json, got {self.output_format}")

    def params(self) -> ModelParams:
        return ModelParams(alpha=self.alpha, beta=self.beta,
                           omega0=self.omega0, s=self.s)

    def state(self) -> Amplitudes:
        if self.amplitudes is not None:
            return Amplitudes(*self.amplitudes)
        return Amplitudes.diag_family(self.p)

    def time_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_steps)


# ---------------------------------------------------------------------------
# config parsing / serialization


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _parse_amplitudes(text: str) -> tuple[complex, ...]:
    toks = [tok.strip() for tok in text.split(",") if tok.strip()]
    if len(toks) != 4:
        raise ConfigError(f"amplitudes need 4 entries, got {len(toks)}")
    return tuple(complex(tok) for tok in toks)


def _parse_modes(text: str) -> tuple[DiscreteMode, ...]:
    modes = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) != 4:
            raise ConfigError(f"bath mode needs omega:g:phase1:phase2, got {chunk!r}")
        modes.append(DiscreteMode(omega=float(parts[0]), g=complex(parts[1]),
                                  phase1=float(parts[2]), phase2=float(parts[3])))
    if not modes:
        raise ConfigError("bath.modes is empty")
    return tuple(modes)


def _parse_mode(text: str) -> EvolutionMode:
    try:
        return EvolutionMode(text.strip().lower())
    except ValueError:
        raise ConfigError(f"mode must be correlated or uncorrelated, got {text!r}") from None


def parse_config_pairs(text: str) -> dict[str, str]:
    """Split ``key = value`` lines, allowing blank lines and # comments."""
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        pairs[key.strip()] = value.strip()
    return pairs


def config_from_pairs(pairs: dict[str, str]) -> RunConfig:
    """Build a validated RunConfig from raw key/value strings."""
    cfg = RunConfig()
    quad = {}
    updates: dict[str, object] = {}
    try:
        for key, value in pairs.items():
            if key in ("alpha", "beta", "omega0", "s", "p", "t_max"):
                updates[key] = float(value)
            elif key == "n_steps":
                updates[key] = int(value)
            elif key == "s_list":
                updates[key] = _parse_floats(value)
            elif key == "amplitudes":
                updates[key] = _parse_amplitudes(value)
            elif key == "mode":
                updates[key] = _parse_mode(value)
            elif key == "quad.omega_max":
                quad["omega_max"] = float(value)
            elif key == "quad.rel_tol":
                quad["rel_tol"] = float(value)
            elif key == "quad.min_nodes_per_period":
                quad["min_nodes_per_period"] = int(value)
            elif key == "output.format":
                updates["output_format"] = value
            elif key == "output.path":
                updates["output_path"] = value
            elif key == "bath.modes":
                updates["bath_modes"] = _parse_modes(value)
            elif key == "bath.n_max":
                updates["bath_n_max"] = int(value)
            elif key == "oracle.times":
                updates["oracle_times"] = _parse_floats(value)
            else:
                raise ConfigError(f"unknown config key {key!r}")
        if quad:
            updates["quad"] = replace(cfg.quad, **quad)
        cfg = replace(cfg, **updates)
        # surface parameter-domain errors now rather than mid-run
        cfg.params()
        if cfg.amplitudes is not None:
            cfg.state()
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def format_config(cfg: RunConfig) -> str:
    """Canonical text form; parsing it back reproduces cfg exactly."""
    lines = [
        f"alpha = {cfg.alpha!r}",
        f"beta = {cfg.beta!r}",
        f"omega0 = {cfg.omega0!r}",
        f"s = {cfg.s!r}",
        f"s_list = {','.join(repr(x) for x in cfg.s_list)}",
        f"p = {cfg.p!r}",
        f"mode = {cfg.mode.value}",
        f"t_max = {cfg.t_max!r}",
        f"n_steps = {cfg.n_steps}",
        f"quad.omega_max = {cfg.quad.omega_max!r}",
        f"quad.rel_tol = {cfg.quad.rel_tol!r}",
        f"quad.min_nodes_per_period = {cfg.quad.min_nodes_per_period}",
        f"output.format = {cfg.output_format}",
        f"bath.n_max = {cfg.bath_n_max}",
        f"oracle.times = {','.join(repr(x) for x in cfg.oracle_times)}",
    ]
    if cfg.amplitudes is not None:
        lines.insert(6, f"amplitudes = {','.join(repr(x) for x in cfg.amplitudes)}")
    if cfg.output_path is not None:
        lines.append(f"output.path = {cfg.output_path}")
    if cfg.bath_modes is not None:
        rendered = ";".join(f"{m.omega!r}:{m.g!r}:{m.phase1!r}:{m.phase2!r}"
                            for m in cfg.bath_modes)
        lines.append(f"bath.modes = {rendered}")
    return "\n".join(lines) + "\n"


def load_config(path: str | None, overrides: list[str]) -> RunConfig:
    pairs: dict[str, str] = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            pairs = parse_config_pairs(fh.read())
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        pairs[key.strip()] = value.strip()
    return config_from_pairs(pairs)


# ---------------------------------------------------------------------------
# dataset plumbing


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def write_dataset(columns: list[str], rows: list[list[float]],
                  fmt: str, path: str | None) -> None:
    if fmt == "csv":
        text = ",".join(columns) + "\n"
        text += "".join(",".join(_fmt(x) for x in row) + "\n" for row in rows)
    else:
        payload = {"columns": columns, "rows": [[float(_fmt(x)) for x in row] for row in rows]}
        text = json.dumps(payload, indent=1) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _worker_count() -> int:
    raw = os.environ.get("DECO_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = min(8, os.cpu_count() or 1)
    return n


# ---------------------------------------------------------------------------
# commands


def kernel_rows(cfg: RunConfig) -> tuple[list[str], list[list[float]]]:
    """Decay/correlation/phase kernel curves, one block per separation timescale."""
    ts = cfg.time_grid()
    quad = cfg.quad

    def one_s(s: float) -> list[list[float]]:
        params = ModelParams(alpha=cfg.alpha, beta=cfg.beta, omega0=cfg.omega0, s=s)
        block = []
        for t in ts:
            block.append([
                s, t,
                gamma(t, params, quad),
                gamma0(t, params, quad),
                2.0 * phase_kernel(KernelWeight.PLUS, t, params, quad),
            ])
        return block

    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        blocks = list(pool.map(one_s, cfg.s_list))
    rows = [row for block in blocks for row in block]
    return ["s", "t", "gamma", "gamma0", "phi"], rows


def evolve_rows(cfg: RunConfig) -> tuple[list[str], list[list[float]]]:
    """Concurrence, coherence, and dressing magnitudes over the time grid."""
    psi = cfg.state()
    params = cfg.params()
    quad = cfg.quad
    probs = psi.probabilities()
    ghz = (probs[1] == 0.0 and probs[2] == 0.0) or (probs[0] == 0.0 and probs[3] == 0.0)

    def one_t(t: float) -> list[float]:
        if cfg.mode is EvolutionMode.CORRELATED_THERMAL:
            cf = coherence_functions(t, psi, params, quad)
        else:
            cf = uncorrelated_dressings(t, params, quad)
        rho = matrix_from_dressings(psi, cf)
        c = concurrence(rho)
        n = l1_coherence(rho)
        if ghz and abs(n - c) > 1e-10:
            raise RuntimeError(
                f"coherence/concurrence identity violated at t={t}: C={c!r}, N={n!r}"
            )
        return [t, c, n, *cf.magnitudes().tolist()]

    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        rows = list(pool.map(one_t, cfg.time_grid()))
    columns = ["t", "concurrence", "l1_coherence", "abs_phi", "abs_zeta",
               "abs_kappa", "abs_kappa_bar", "abs_zeta_bar", "abs_phi_bar"]
    return columns, rows


def default_bath_suite() -> list[DiscreteBath]:
    """Small deterministic bath set exercising K = 1 and K = 2."""
    return [
        DiscreteBath((DiscreteMode(1.0, 0.2, 0.3, 1.2),), n_max=40),
        DiscreteBath((DiscreteMode(1.5, 0.15 + 0.05j, 0.0, np.pi),), n_max=32),
        DiscreteBath((DiscreteMode(0.9, 0.12, 0.4, 1.1),
                      DiscreteMode(1.7, 0.18, 2.2, 0.5)), n_max=14),
    ]


def oracle_check_lines(cfg: RunConfig) -> tuple[list[str], float]:
    """Per (bath, t) deviation report between the analytic and Fock paths."""
    if cfg.bath_modes is not None:
        baths = [DiscreteBath(cfg.bath_modes, n_max=cfg.bath_n_max)]
    else:
        baths = default_bath_suite()
    psi = cfg.state()
    worst = 0.0
    lines = []
    for idx, bath in enumerate(baths):
        exact = fock_evolution(bath, psi, cfg.beta, cfg.omega0, cfg.oracle_times)
        for t, rho_fock in zip(cfg.oracle_times, exact):
            rho_sum = discrete_density_matrix(bath, t, psi, cfg.beta, cfg.omega0)
            dev = compare(rho_sum, rho_fock)
            worst = max(worst, dev)
            lines.append(f"bath={idx} K={len(bath.modes)} n_max={bath.n_max} "
                         f"t={_fmt(t)} max_dev={dev:.3e}")
    lines.append(f"worst={worst:.3e} gate={ORACLE_GATE:.0e} "
                 f"{'OK' if worst < ORACLE_GATE else 'FAIL'}")
    return lines, worst


_PANEL_BETA = {"1a": 10.0, "1b": 0.1, "1c": 0.1, "2a": 10.0, "2b": 0.1}


def figure_rows(which: str, cfg: RunConfig) -> tuple[list[str], list[list[float]]]:
    """Plot-ready dataset for one panel: an s sweep in the panel's regime.

    Panels 1a/2a run cold (beta = 10), 1b/1c/2b hot (beta = 0.1); 1d uses
    the configured beta since the phase kernel is temperature independent.
    """
    if which not in FIGURE_PANELS:
        raise ConfigError(f"unknown figure panel {which!r}")
    beta = _PANEL_BETA.get(which, cfg.beta)
    ts = cfg.time_grid()
    quad = cfg.quad

    def one_s(s: float) -> list[list[float]]:
        params = ModelParams(alpha=cfg.alpha, beta=beta, omega0=cfg.omega0, s=s)
        block = []
        for t in ts:
            if which in ("1a", "1b"):
                val = gamma(t, params, quad)
            elif which == "1c":
                val = gamma0(t, params, quad)
            elif which == "1d":
                val = 2.0 * phase_kernel(KernelWeight.PLUS, t, params, quad)
            else:
                cf = coherence_functions(t, Amplitudes.bell(), params, quad)
                rho = matrix_from_dressings(Amplitudes.bell(), cf)
                val = concurrence(rho)
            block.append([s, t, val])
        return block

    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        blocks = list(pool.map(one_s, cfg.s_list))
    column = {"1a": "gamma", "1b": "gamma", "1c": "gamma0",
              "1d": "phi", "2a": "concurrence", "2b": "concurrence"}[which]
    return ["s", "t", column], [row for block in blocks for row in block]


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deco",
        description="Two dephasing qubits in a shared bosonic bath: "
                    "kernels, evolution series, oracle checks, figure datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("kernels", "decay/correlation/phase kernel curves over an s sweep"),
        ("evolve", "concurrence and coherence time series"),
        ("oracle-check", "analytic vs Fock-space agreement report"),
        ("figure", "plot-ready dataset for one figure panel"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", default=None, help="key = value config file")
        sp.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override one config key (repeatable)")
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        if name == "figure":
            sp.add_argument("--which", required=True, choices=FIGURE_PANELS)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.overrides)
        if args.out is not None:
            cfg = replace(cfg, output_path=args.out)
    except ConfigError as exc:
        print(f"deco: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"deco: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        if args.command == "oracle-check":
            lines, worst = oracle_check_lines(cfg)
            text = "\n".join(lines) + "\n"
            if cfg.output_path is None:
                sys.stdout.write(text)
            else:
                with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
                    fh.write(text)
            return EXIT_OK if worst < ORACLE_GATE else 1
        if args.command == "kernels":
            columns, rows = kernel_rows(cfg)
        elif args.command == "evolve":
            columns, rows = evolve_rows(cfg)
        else:
            columns, rows = figure_rows(args.which, cfg)
        write_dataset(columns, rows, cfg.output_format, cfg.output_path)
        return EXIT_OK
    except TruncationError as exc:
        print(f"deco: truncation guard: indicator={exc.indicator:.3e}", file=sys.stderr)
        return EXIT_TRUNCATION
    except QuadratureError as exc:
        print(f"deco: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except RuntimeError as exc:
        print(f"deco: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ConfigError as exc:
        print(f"deco: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"deco: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"deco: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
