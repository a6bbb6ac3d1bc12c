"""Command-line interface: single-config analysis, capacity sweeps, and
analytic-vs-Monte-Carlo validation reports.

Exit codes are part of the interface:
  0  success
  1  input error (bad flags, unreadable file, invalid config — message names
     the offending field)
  2  numeric failure (quadrature/series breakdown — message names the stage)
  3  validation ran fine but at least one tolerance failed

Units: JSON reports carry capacities in bit/s; CSV sweeps carry kbit/s (the
usual plotting unit for these scenarios).  Reports contain no timestamps or
environment echoes, so a fixed (config, samples, seed) is byte-reproducible.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, replace

import numpy as np
from scipy import special as sps

from . import capacity, mcsim
from .cinr import cinr_distribution
from .interference import gamma_fit, mean_interference, second_moment
from .model import ConfigError, NetworkConfig, derived_geometry, load_config
from .specfun import NumericsError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERIC = 2
EXIT_VALIDATION = 3

_SWEEPABLE = ("p_bs", "lambda", "p_bar")
_OUTPUT_ORDER = ("fd_opt", "fd_opt_cf", "fd_fixed", "hd", "fd_opt_mc",
                 "fd_fixed_mc")
_SWEPT_COLUMN = {"p_bs": "p_bs_w", "lambda": "lambda_per_m2",
                 "p_bar": "p_bar_w"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse's default error handling exits with code 2, which this tool
    # reserves for numeric failures; route flag mistakes to exit 1 instead.
    def error(self, message):
        raise _UsageError(message)


@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter over an ascending grid, plus which columns to emit."""

    swept_parameter: str
    grid: tuple
    base_config: NetworkConfig
    outputs: tuple

    def __post_init__(self):
        if self.swept_parameter not in _SWEEPABLE:
            raise ValueError(f"cannot sweep {self.swept_parameter!r}; "
                             f"choose one of {_SWEEPABLE}")
        if len(self.grid) == 0:
            raise ValueError("sweep grid is empty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("sweep grid must be strictly ascending")
        bad = [o for o in self.outputs if o not in _OUTPUT_ORDER]
        if bad:
            raise ValueError(f"unknown outputs {bad}; choose from {_OUTPUT_ORDER}")


def _parse_lambda(text: str) -> float:
    """BS intensity override: plain numbers are 1/m^2, '<x>/km2' is 1/km^2."""
    text = text.strip()
    if text.endswith("/km2"):
        return float(text[: -len("/km2")]) / 1e6
    return float(text)


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("FDCAP_WORKERS", "1")))
    except ValueError:
        return 1


def _load(args) -> NetworkConfig:
    cfg = load_config(args.config)
    if args.lam is not None:
        cfg = replace(cfg, lam=_parse_lambda(args.lam))
    from .model import validate
    return validate(cfg)


def _mc_from(args) -> mcsim.MCConfig:
    return mcsim.MCConfig(n_samples=args.samples, seed=args.seed,
                          tail_epsilon=args.tail_epsilon,
                          workers=args.workers)


def _config_doc(cfg: NetworkConfig) -> dict:
    return {
        "lambda": cfg.lam, "p_bs": cfg.p_bs, "eta": cfg.eta, "n0": cfg.n0,
        "bandwidth": cfg.bandwidth, "p_bar": cfg.p_bar,
        "m_int": cfg.fading_interferer.shape,
        "omega_int": cfg.fading_interferer.mean,
        "m_sig": cfg.fading_signal.shape,
        "omega_sig": cfg.fading_signal.mean,
    }


def cmd_analyze(args) -> int:
    cfg = _load(args)
    geo = derived_geometry(cfg)
    fit = gamma_fit(cfg)
    d = cinr_distribution(cfg, fit)
    mc = _mc_from(args)
    rho = args.rho if args.rho is not None else capacity.default_rho(cfg)
    rep = capacity.compare(cfg, rho, mc)
    doc = {
        "config": _config_doc(cfg),
        "derived": {
            "r0_m": geo.r0,
            "rbar_m": geo.rbar,
            "m_I": fit.gamma.shape,
            "omega_I_w": fit.gamma.mean,
            "k": d.k,
            "a0_w": rep.a0,
        },
        "capacity_bit_per_s": {
            "c_fd_optimal": {
                "value": rep.c_fd_optimal,
                "provenance": rep.provenance.get("c_fd_optimal"),
            },
            "c_fd_optimal_closed_form": {
                "value": rep.c_fd_optimal_closed_form,
                "provenance": rep.provenance.get("c_fd_optimal_closed_form",
                                                 "unavailable"),
            },
            "c_fd_fixed": {
                "value": rep.c_fd_fixed,
                "provenance": rep.provenance.get("c_fd_fixed"),
            },
            "c_hd": {
                "value": rep.c_hd,
                "std_error": rep.c_hd_std_error,
                "provenance": rep.provenance.get("c_hd"),
            },
        },
        "flags": {"fd_harmful": rep.fd_harmful,
                  "fd_beneficial": rep.fd_beneficial},
        "mc": {"n_samples": mc.n_samples, "seed": mc.seed,
               "tail_epsilon": mc.tail_epsilon, "rho_w": rho},
    }
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def _sweep_config(cfg: NetworkConfig, param: str, value: float) -> NetworkConfig:
    field = {"p_bs": "p_bs", "lambda": "lam", "p_bar": "p_bar"}[param]
    return replace(cfg, **{field: value})


def cmd_sweep(args) -> int:
    base = _load(args)
    points = args.points
    if points < 1:
        raise _UsageError(f"--points must be >= 1, got {points}")
    if points > 1 and not args.start < args.stop:
        raise _UsageError("--from must be strictly less than --to")
    if args.log:
        if not args.start > 0:
            raise _UsageError("--log needs a positive --from")
        grid = np.geomspace(args.start, args.stop, points)
    else:
        grid = np.linspace(args.start, args.stop, points)
    outputs = tuple(o for o in _OUTPUT_ORDER
                    if o in {s.strip() for s in args.outputs.split(",")})
    requested = {s.strip() for s in args.outputs.split(",")}
    spec = SweepSpec(swept_parameter=args.sweep, grid=tuple(float(v) for v in grid),
                     base_config=base, outputs=outputs)
    if requested - set(outputs):
        raise _UsageError(f"unknown outputs {sorted(requested - set(outputs))}; "
                          f"choose from {_OUTPUT_ORDER}")
    mc = _mc_from(args)

    need_solution = bool({"fd_opt", "fd_opt_cf", "fd_opt_mc"} & set(spec.outputs))
    lines = [",".join([_SWEPT_COLUMN[spec.swept_parameter]]
                      + [f"{name}_kbps" for name in spec.outputs])]
    for value in spec.grid:
        cfg = _sweep_config(base, spec.swept_parameter, value)
        from .model import validate
        validate(cfg)
        cell = {}
        if need_solution:
            d, sol = capacity.solve_network(cfg)
            if "fd_opt" in spec.outputs:
                cell["fd_opt"] = capacity.waterfill_rate(d, sol.a0, cfg.bandwidth)
            if "fd_opt_cf" in spec.outputs:
                cell["fd_opt_cf"] = capacity.fd_optimal_capacity_closed_form(
                    d, sol.a0, cfg.bandwidth)
            if "fd_opt_mc" in spec.outputs:
                cell["fd_opt_mc"] = mcsim.estimate_fd_optimal(cfg, mc, sol).mean
        if "fd_fixed" in spec.outputs:
            cell["fd_fixed"] = capacity.fd_fixed_power_capacity(cfg)
        if "fd_fixed_mc" in spec.outputs:
            cell["fd_fixed_mc"] = mcsim.estimate_fd_fixed(cfg, mc).mean
        if "hd" in spec.outputs:
            rho = args.rho if args.rho is not None else capacity.default_rho(cfg)
            cell["hd"] = mcsim.estimate_hd(cfg, rho, mc).mean
        row = [f"{value:.10g}"]
        for name in spec.outputs:
            v = cell[name]
            row.append("" if v is None else f"{v / 1e3:.6f}")
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _ks_vs_gamma(samples: np.ndarray, shape: float, scale: float) -> float:
    """Kolmogorov-Smirnov distance between the sample and Gamma(shape, scale)."""
    x = np.sort(samples)
    cdf = sps.gammainc(shape, x / scale)
    n = x.size
    hi = np.arange(1, n + 1) / n - cdf
    lo = cdf - np.arange(0, n) / n
    return float(max(hi.max(), lo.max()))


def cmd_validate(args) -> int:
    cfg = _load(args)
    if args.samples < 10_000:
        print(f"validate needs --samples >= 10000 (got {args.samples}): "
              f"moment and distribution checks are meaningless below that",
              file=sys.stderr)
        return EXIT_INPUT
    if args.r0 is not None and not args.r0 > 0:
        print(f"--r0 must be > 0, got {args.r0}", file=sys.stderr)
        return EXIT_INPUT
    geo = derived_geometry(cfg)
    r_min = args.r0 if args.r0 is not None else geo.r0
    mc = _mc_from(args)

    samples = mcsim.interference_samples(cfg, mc, r_min=args.r0)
    stats = mcsim.summarize(samples, histogram=True)
    n = stats.n
    mean_model = mean_interference(cfg, r_min=args.r0)
    second_model = second_moment(cfg, r_min=args.r0)
    second_mc = stats.mean ** 2 + stats.variance * (n - 1) / n
    fit = gamma_fit(cfg, r_min=args.r0)
    ks = _ks_vs_gamma(samples, fit.gamma.shape, fit.gamma.scale)

    d, sol = capacity.solve_network(cfg)
    c_quad = capacity.waterfill_rate(d, sol.a0, cfg.bandwidth)
    fd_mc = mcsim.estimate_fd_optimal(cfg, mc, sol)
    fd_gap = abs(fd_mc.mean - c_quad) / c_quad

    checks = [
        {"name": "interference_mean_vs_model",
         "mc": stats.mean, "model": mean_model,
         "rel_error": abs(stats.mean - mean_model) / mean_model,
         "tolerance": 0.01},
        {"name": "interference_second_moment_vs_model",
         "mc": second_mc, "model": second_model,
         "rel_error": abs(second_mc - second_model) / second_model,
         "tolerance": 0.02},
        {"name": "ks_samples_vs_gamma_fit",
         "statistic": ks, "tolerance": 0.03},
        {"name": "fd_optimal_mc_vs_quadrature",
         "mc": fd_mc.mean, "mc_std_error": fd_mc.std_error,
         "quadrature": c_quad, "rel_error": fd_gap, "tolerance": 0.03},
    ]
    for c in checks:
        c["pass"] = bool(c.get("rel_error", c.get("statistic")) < c["tolerance"])
    all_pass = all(c["pass"] for c in checks)

    if args.hist_out:
        shape, scale = fit.gamma.shape, fit.gamma.scale
        log_norm = -math.lgamma(shape) - shape * math.log(scale)

        def gamma_pdf(x: float) -> float:
            if x <= 0:
                return 0.0
            return math.exp((shape - 1.0) * math.log(x) - x / scale + log_norm)

        mcsim.write_histogram_csv(args.hist_out, stats, pdf=gamma_pdf)

    doc = {
        "config": _config_doc(cfg),
        "mc": {"n_samples": mc.n_samples, "seed": mc.seed,
               "tail_epsilon": mc.tail_epsilon},
        "exclusion_radius_m": r_min,
        "gamma_fit": {"shape": fit.gamma.shape, "mean_w": fit.gamma.mean},
        "a0_w": sol.a0,
        "checks": checks,
        "all_pass": all_pass,
        "histogram_csv": args.hist_out,
    }
    print(json.dumps(doc, indent=2))
    return EXIT_OK if all_pass else EXIT_VALIDATION


def _add_common(p: argparse.ArgumentParser, samples_default: int) -> None:
    p.add_argument("config", help="scenario config file (key = value lines)")
    p.add_argument("--lambda", dest="lam", default=None, metavar="L",
                   help="override BS intensity; plain value in 1/m^2, or "
                        "'<x>/km2' for 1/km^2 (e.g. 5/km2)")
    p.add_argument("--samples", type=int, default=samples_default,
                   help=f"Monte Carlo sample count (default {samples_default})")
    p.add_argument("--seed", type=int, default=0,
                   help="Monte Carlo seed (default 0)")
    p.add_argument("--tail-epsilon", type=float, default=1e-3,
                   help="relative interference-tail budget for the field "
                        "truncation radius (default 1e-3; cost per sample "
                        "scales like 1/eps at eta=4)")
    p.add_argument("--workers", type=int, default=_default_workers(),
                   help="Monte Carlo worker threads (default: FDCAP_WORKERS "
                        "env var, else 1); results are worker-count independent")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="fdcap",
                  description="Upper bound on uplink capacity in an in-band "
                              "full-duplex cellular network, with Monte Carlo "
                              "validation.")
    sub = top.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="all capacity quantities for one "
                                        "config, JSON on stdout (bit/s)")
    _add_common(pa, samples_default=100_000)
    pa.add_argument("--rho", type=float, default=None,
                    help="received-power target (W) for the half-duplex "
                         "benchmark (default: p_bar * rbar^-eta)")

    ps = sub.add_parser("sweep", help="capacity-vs-parameter sweep, CSV "
                                      "on stdout or --out (kbit/s)")
    _add_common(ps, samples_default=100_000)
    ps.add_argument("--sweep", required=True, choices=_SWEEPABLE,
                    help="which config field to sweep")
    ps.add_argument("--from", dest="start", type=float, required=True,
                    help="first grid value")
    ps.add_argument("--to", dest="stop", type=float, required=True,
                    help="last grid value")
    ps.add_argument("--points", type=int, default=10,
                    help="number of grid points (default 10)")
    ps.add_argument("--log", action="store_true",
                    help="log-spaced grid instead of linear")
    ps.add_argument("--outputs", default="fd_opt,fd_opt_cf,fd_fixed,hd",
                    help="comma list from fd_opt,fd_opt_cf,fd_fixed,hd,"
                         "fd_opt_mc,fd_fixed_mc "
                         "(default fd_opt,fd_opt_cf,fd_fixed,hd)")
    ps.add_argument("--out", default=None, help="write CSV here instead of stdout")
    ps.add_argument("--rho", type=float, default=None,
                    help="received-power target (W) for the half-duplex "
                         "benchmark (default: p_bar * rbar^-eta per point)")

    pv = sub.add_parser("validate",
                        help="Monte-Carlo-vs-analytic validation report, "
                             "JSON on stdout; exit 3 if any tolerance fails")
    _add_common(pv, samples_default=100_000)
    pv.add_argument("--r0", type=float, default=None,
                    help="override the interferer exclusion radius (m) for "
                         "the interference-field checks (default: "
                         "1/sqrt(pi*lambda); the capacity check always uses "
                         "the default)")
    pv.add_argument("--hist-out", default="interference_hist.csv",
                    help="histogram CSV path (bin_left,bin_right,density,"
                         "model_density); default interference_hist.csv")
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        return cmd_validate(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericsError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
