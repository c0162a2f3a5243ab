"""Command-line front end.

Every subcommand writes deterministic artifacts named
``<command>_l<order>_t<coupling>.<ext>`` into the output directory and
prints the paths it wrote.  Each artifact starts with a ``#`` comment
line recording the resolved parameter set, and floats are printed with
17 significant digits so a double round-trips exactly.

Parameter resolution: command-line flags override the optional JSON
config file (``--config``), which overrides built-in defaults.  The
output directory falls back to the ``SCALEDCHAIN_OUTDIR`` environment
variable, then the working directory.

Exit status: 0 on success, 2 for bad usage, 1 for runtime failures
(non-convergence, band-edge energies, unwritable output, ...).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .chain import scaled_chain
from .eigensolver import eig_all, eig_values_only
from .hamiltonian import TbParams, build_hamiltonian
from .resonator import compare_to_tb, lrm_gap_width, lrm_spectrum
from .spectral import (
    branch_summary,
    dos,
    eigenstate_map,
    ipr_values,
    spacings,
    write_pgm,
)
from .transport import LeadParams, transmission_sweep

ENV_OUTDIR = "SCALEDCHAIN_OUTDIR"

DEFAULTS = {
    "eps_a": 1.0,
    "eps_b": 2.0,
    "lead_eps": 1.0,
    "lead_t": 1.0,
    "couple_left": 1.0,
    "couple_right": 1.0,
    "bins": 200,
    "grid_points": 4001,
    "format": "csv",
}

_INT_KEYS = {"l", "bins", "grid_points"}
_FLOAT_KEYS = {
    "t", "eps_a", "eps_b", "lead_eps", "lead_t", "couple_left", "couple_right",
}
_STR_KEYS = {"format", "out"}
_LIST_KEYS = {"t_list"}
_CONFIG_KEYS = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS | _LIST_KEYS


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _parse_t_list(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad coupling list {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("coupling list is empty")
    return values


def _load_config(path: str) -> dict:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"config file {path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ValueError(f"config file {path}: expected a JSON object")
    out: dict = {}
    for key, value in raw.items():
        name = key.replace("-", "_")
        if name not in _CONFIG_KEYS:
            raise ValueError(f"config file {path}: unknown key {key!r}")
        if name in _INT_KEYS:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"config file {path}: {key!r} must be an integer")
            out[name] = value
        elif name in _FLOAT_KEYS:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"config file {path}: {key!r} must be a number")
            out[name] = float(value)
        elif name in _LIST_KEYS:
            if isinstance(value, str):
                out[name] = _parse_t_list(value)
            elif isinstance(value, list) and value and all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
            ):
                out[name] = [float(v) for v in value]
            else:
                raise ValueError(
                    f"config file {path}: {key!r} must be a number list"
                )
        else:
            if not isinstance(value, str):
                raise ValueError(f"config file {path}: {key!r} must be a string")
            out[name] = value
    return out


class UsageError(ValueError):
    """Bad flag/config combination; maps to exit status 2."""


class RunConfig:
    """One resolved invocation: command plus merged parameter values.

    Merge order: command-line flags over config-file entries over
    built-in defaults.  Parameters a command does not use are simply
    ignored by it.
    """

    def __init__(self, command: str, values: dict | None = None):
        if command not in _COMMANDS:
            raise UsageError(f"unknown command {command!r}")
        self.command = command
        merged = dict(DEFAULTS)
        merged.update(values or {})
        self._values = merged

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        values = _load_config(args.config) if args.config else {}
        for key in _CONFIG_KEYS:
            flag = getattr(args, key, None)
            if flag is not None:
                values[key] = flag
        return cls(args.command, values)

    def get(self, key):
        return self._values.get(key)

    def usage_error(self, message: str) -> None:
        raise UsageError(message)

    def require(self, key):
        value = self._values.get(key)
        if value is None:
            flag = "--" + key.replace("_", "-")
            raise UsageError(f"{flag} is required for {self.command}")
        return value

    def require_order(self) -> int:
        order = self.require("l")
        if order < 1:
            raise UsageError("--l must be a positive integer")
        return order

    @property
    def outdir(self) -> Path:
        out = self._values.get("out")
        if out is None:
            out = os.environ.get(ENV_OUTDIR) or "."
        return Path(out)


def _header(pairs: list[tuple[str, object]]) -> str:
    return " ".join(f"{k}={_fmt(v)}" for k, v in pairs)


def _write_text(path: Path, header: str, lines: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# {header}\n")
        for line in lines:
            fh.write(line + "\n")


def _tb_params(cfg: RunConfig) -> TbParams:
    return TbParams(
        eps_a=cfg.get("eps_a"), eps_b=cfg.get("eps_b"), t=cfg.require("t")
    )


def _tb_pairs(command: str, order: int, params: TbParams, n: int):
    return [
        ("command", command),
        ("l", order),
        ("t", params.t),
        ("eps_a", params.eps_a),
        ("eps_b", params.eps_b),
        ("n", n),
    ]


def _stem(command: str, order: int, t: float) -> str:
    return f"{command}_l{order}_t{t:g}"


def _cmd_generate(cfg: RunConfig) -> list[Path]:
    order = cfg.require_order()
    chain = scaled_chain(order)
    path = cfg.outdir / f"generate_l{order}.txt"
    header = _header(
        [("command", "generate"), ("l", order), ("n", len(chain))]
    )
    _write_text(path, header, [chain.symbols()])
    return [path]


def _spectrum_lines(energies: np.ndarray) -> list[str]:
    lines = ["m,energy"]
    lines += [f"{m},{_fmt(float(e))}" for m, e in enumerate(energies, start=1)]
    return lines


def _cmd_spectrum(cfg: RunConfig) -> list[Path]:
    order = cfg.require_order()
    params = _tb_params(cfg)
    chain = scaled_chain(order)
    energies = eig_values_only(build_hamiltonian(chain, params))
    path = cfg.outdir / f"{_stem('spectrum', order, params.t)}.csv"
    header = _header(_tb_pairs("spectrum", order, params, len(chain)))
    _write_text(path, header, _spectrum_lines(energies))
    return [path]


def _cmd_spacings(cfg: RunConfig) -> list[Path]:
    order = cfg.require_order()
    params = _tb_params(cfg)
    chain = scaled_chain(order)
    energies = eig_values_only(build_hamiltonian(chain, params))
    gaps = spacings(energies)
    path = cfg.outdir / f"{_stem('spacings', order, params.t)}.csv"
    header = _header(_tb_pairs("spacings", order, params, len(chain)))
    lines = ["m,spacing"]
    lines += [f"{m},{_fmt(float(s))}" for m, s in enumerate(gaps, start=1)]
    _write_text(path, header, lines)
    return [path]


def _cmd_dos(cfg: RunConfig) -> list[Path]:
    order = cfg.require_order()
    params = _tb_params(cfg)
    bins = cfg.get("bins")
    if bins < 1:
        cfg.usage_error("--bins must be a positive integer")
    chain = scaled_chain(order)
    energies = eig_values_only(build_hamiltonian(chain, params))
    hist = dos(energies, bins=bins)
    path = cfg.outdir / f"{_stem('dos', order, params.t)}.csv"
    pairs = _tb_pairs("dos", order, params, len(chain)) + [("bins", bins)]
    lines = ["e_lo,e_hi,count"]
    for j in range(hist.counts.size):
        lo = _fmt(float(hist.bin_edges[j]))
        hi = _fmt(float(hist.bin_edges[j + 1]))
        lines.append(f"{lo},{hi},{int(hist.counts[j])}")
    _write_text(path, _header(pairs), lines)
    return [path]


def _cmd_ipr(cfg: RunConfig) -> list[Path]:
    order = cfg.require_order()
    params = _tb_params(cfg)
    chain = scaled_chain(order)
    result = eig_all(build_hamiltonian(chain, params))
    values = ipr_values(result.eigenvectors)
    path = cfg.outdir / f"{_stem('ipr', order, params.t)}.csv"
    header = _header(_tb_pairs("ipr", order, params, len(chain)))
    lines = ["m,energy,ipr"]
    for m in range(values.size):
        e = _fmt(float(result.eigenvalues[m]))
        lines.append(f"{m + 1},{e},{_fmt(float(values[m]))}")
    _write_text(path, header, lines)
    return [path]


def _cmd_eigmap(cfg: RunConfig) -> list[Path]:
    order = cfg.require_order()
    params = _tb_params(cfg)
    fmt = cfg.get("format")
    chain = scaled_chain(order)
    result = eig_all(build_hamiltonian(chain, params))
    mag = eigenstate_map(result.eigenvectors)
    pairs = _tb_pairs("eigmap", order, params, len(chain)) + [("format", fmt)]
    header = _header(pairs)
    if fmt == "pgm":
        path = cfg.outdir / f"{_stem('eigmap', order, params.t)}.pgm"
        path.parent.mkdir(parents=True, exist_ok=True)
        write_pgm(path, mag, comment=header)
    else:
        path = cfg.outdir / f"{_stem('eigmap', order, params.t)}.csv"
        lines = [",".join(_fmt(float(x)) for x in row) for row in mag]
        _write_text(path, header, lines)
    return [path]


def _cmd_lrm_compare(cfg: RunConfig) -> list[Path]:
    order = cfg.require_order()
    params = _tb_params(cfg)
    chain = scaled_chain(order)
    exact = eig_values_only(build_hamiltonian(chain, params))
    model = lrm_spectrum(order, params)
    cmp = compare_to_tb(model, exact)
    path = cfg.outdir / f"{_stem('lrm-compare', order, params.t)}.txt"
    header = _header(_tb_pairs("lrm-compare", order, params, len(chain)))
    lines = [
        f"levels={len(model)}",
        f"max_deviation={_fmt(cmp.max_deviation)}",
        f"mean_deviation={_fmt(cmp.mean_deviation)}",
        f"model_zero_spacings={cmp.model_zero_spacings}",
        f"model_minigaps={len(cmp.model_minigaps)}",
        f"exact_minigaps={len(cmp.exact_minigaps)}",
        f"matching_minigaps={cmp.matching_minigaps}",
        f"predicted_gap_width={_fmt(lrm_gap_width(order, params))}",
    ]
    _write_text(path, header, lines)
    return [path]


def _cmd_transmit(cfg: RunConfig) -> list[Path]:
    order = cfg.require_order()
    params = _tb_params(cfg)
    points = cfg.get("grid_points")
    if points < 2:
        cfg.usage_error("--grid-points must be at least 2")
    left = LeadParams(
        eps=cfg.get("lead_eps"),
        t_lead=cfg.get("lead_t"),
        t_couple=cfg.get("couple_left"),
    )
    right = LeadParams(
        eps=cfg.get("lead_eps"),
        t_lead=cfg.get("lead_t"),
        t_couple=cfg.get("couple_right"),
    )
    chain = scaled_chain(order)
    curve = transmission_sweep(chain, params, left, right, n_points=points)
    pairs = _tb_pairs("transmit", order, params, len(chain)) + [
        ("lead_eps", left.eps),
        ("lead_t", left.t_lead),
        ("couple_left", left.t_couple),
        ("couple_right", right.t_couple),
        ("grid_points", points),
        ("n_peaks", int(curve.peaks.size)),
    ]
    header = _header(pairs)
    path = cfg.outdir / f"{_stem('transmit', order, params.t)}.csv"
    lines = ["E,T"]
    for e, tv in zip(curve.energies, curve.transmission):
        lines.append(f"{_fmt(float(e))},{_fmt(float(tv))}")
    _write_text(path, header, lines)
    peak_path = cfg.outdir / f"{_stem('transmit-peaks', order, params.t)}.csv"
    peak_lines = ["E,T"]
    for e, tv in zip(curve.peak_energies, curve.peak_heights):
        peak_lines.append(f"{_fmt(float(e))},{_fmt(float(tv))}")
    _write_text(peak_path, header, peak_lines)
    return [path, peak_path]


def _cmd_sweep(cfg: RunConfig) -> list[Path]:
    order = cfg.require_order()
    t_values = cfg.require("t_list")
    eps_a = cfg.get("eps_a")
    eps_b = cfg.get("eps_b")
    chain = scaled_chain(order)
    outdir = cfg.outdir

    def job(t: float):
        params = TbParams(eps_a=eps_a, eps_b=eps_b, t=t)
        energies = eig_values_only(build_hamiltonian(chain, params))
        path = outdir / f"{_stem('spectrum', order, t)}.csv"
        header = _header(_tb_pairs("spectrum", order, params, len(chain)))
        _write_text(path, header, _spectrum_lines(energies))
        return path, branch_summary(energies)

    with ThreadPoolExecutor(max_workers=min(8, len(t_values))) as pool:
        results = list(pool.map(job, t_values))

    summary_path = outdir / f"sweep_l{order}.txt"
    pairs = [
        ("command", "sweep"),
        ("l", order),
        ("t_list", ",".join(f"{t:g}" for t in t_values)),
        ("eps_a", eps_a),
        ("eps_b", eps_b),
        ("n", len(chain)),
    ]
    lines = ["t,branches,gaps,cusps"]
    for t, (_, summary) in zip(t_values, results):
        dec = summary.decomposition
        lines.append(
            f"{t:g},{summary.total_branches},{len(dec.gaps)},{len(summary.cusps)}"
        )
    _write_text(summary_path, _header(pairs), lines)
    return [path for path, _ in results] + [summary_path]


_COMMANDS = {
    "generate": _cmd_generate,
    "spectrum": _cmd_spectrum,
    "spacings": _cmd_spacings,
    "dos": _cmd_dos,
    "ipr": _cmd_ipr,
    "eigmap": _cmd_eigmap,
    "lrm-compare": _cmd_lrm_compare,
    "transmit": _cmd_transmit,
    "sweep": _cmd_sweep,
}


def run(config: RunConfig) -> list[Path]:
    """Execute one command and return the artifact paths it wrote.

    Raises :class:`UsageError` for parameter problems and lets numeric
    or I/O failures propagate; :func:`main` maps the former to exit
    status 2 and the latter to 1.
    """
    return _COMMANDS[config.command](config)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scaledchain",
        description="Spectra, localization and transport of scaled binary chains.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--l", type=int, help="chain order (N = 1 + 2l(l+1))")
    common.add_argument("--out", help="output directory")
    common.add_argument("--config", help="JSON config file (flags take precedence)")
    tb = argparse.ArgumentParser(add_help=False)
    tb.add_argument("--t", type=float, help="inter-site coupling")
    tb.add_argument("--eps-a", type=float, dest="eps_a", help="species A site energy")
    tb.add_argument("--eps-b", type=float, dest="eps_b", help="species B site energy")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("generate", parents=[common], help="write the symbol string")
    sub.add_parser("spectrum", parents=[common, tb], help="write all eigenvalues")
    sub.add_parser("spacings", parents=[common, tb], help="write level spacings")
    p = sub.add_parser("dos", parents=[common, tb], help="write a DOS histogram")
    p.add_argument("--bins", type=int, help="histogram bin count")
    sub.add_parser("ipr", parents=[common, tb], help="write per-state IPR values")
    p = sub.add_parser(
        "eigmap", parents=[common, tb], help="write the eigenstate magnitude map"
    )
    p.add_argument("--format", choices=("csv", "pgm"), help="artifact format")
    sub.add_parser(
        "lrm-compare",
        parents=[common, tb],
        help="compare the resonator model with the exact spectrum",
    )
    p = sub.add_parser(
        "transmit", parents=[common, tb], help="sweep the transmission coefficient"
    )
    p.add_argument("--lead-eps", type=float, dest="lead_eps", help="lead site energy")
    p.add_argument("--lead-t", type=float, dest="lead_t", help="lead coupling")
    p.add_argument(
        "--couple-left", type=float, dest="couple_left", help="left contact coupling"
    )
    p.add_argument(
        "--couple-right", type=float, dest="couple_right", help="right contact coupling"
    )
    p.add_argument("--grid-points", type=int, dest="grid_points", help="energy grid size")
    p = sub.add_parser(
        "sweep", parents=[common, tb], help="spectra and branch counts over couplings"
    )
    p.add_argument(
        "--t-list", type=_parse_t_list, dest="t_list", help="comma-separated couplings"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        artifacts = run(RunConfig.from_args(args))
    except UsageError as exc:
        parser.error(str(exc))
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in artifacts:
        print(path)
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
