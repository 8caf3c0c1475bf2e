"""Command line harness: solve, weak-limit, discontinuity, gauge-check, survey.

Options can be preloaded from a key=value config file (--config); explicit
flags override file entries. Output directory resolution order:
--out-dir flag, TORUSNLS_OUTDIR environment variable, current directory.
Exit code is 0 iff every verdict in the emitted report passed.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click
import numpy as np

from .grid import GridSpec, field_from_modes
from .integrator import SolverConfig, save_trajectory, solve
from .experiments import (
    SURVEY_KINDS,
    WeakLimitConfig,
    run_discontinuity,
    run_gauge_check,
    run_surveys,
    run_weak_limit,
)
from .reports import write_line_plot


def _read_config_file(path: str | None) -> dict:
    """Parse a key=value file; '#' starts a comment."""
    if path is None:
        return {}
    entries = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.UsageError(f"bad config line: {raw!r}")
        key, val = line.split("=", 1)
        entries[key.strip().replace("-", "_")] = val.strip()
    return entries


def _merge(ctx_params: dict, file_entries: dict, casts: dict) -> dict:
    """File entries fill in parameters the user left at their defaults."""
    merged = dict(ctx_params)
    for key, val in file_entries.items():
        if key not in casts:
            raise click.UsageError(f"unknown config key {key!r}")
        src = click.get_current_context().get_parameter_source(key)
        if src is not None and src.name == "COMMANDLINE":
            continue
        merged[key] = casts[key](val)
    return merged


def _out_dir(out_dir: str | None) -> Path:
    path = Path(out_dir or os.environ.get("TORUSNLS_OUTDIR", "."))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _emit(report, out_dir: str | None, name: str, plot=None) -> None:
    directory = _out_dir(out_dir)
    csv_path = directory / f"{name}.csv"
    report.to_csv(csv_path)
    click.echo(f"wrote {csv_path}")
    if plot is not None:
        x, series, xlabel, ylabel, logy = plot
        svg_path = directory / f"{name}.svg"
        write_line_plot(svg_path, x, series, xlabel, ylabel, logy=logy)
        click.echo(f"wrote {svg_path}")
    for v in report.verdicts:
        status = "PASS" if v.passed else "FAIL"
        click.echo(f"{status} {v.criterion}: measured={v.measured:.6g} "
                   f"threshold={v.threshold:.6g}")
    if not report.all_pass:
        sys.exit(1)


def _parse_ints(text) -> tuple:
    if isinstance(text, tuple):  # click re-converts default values
        return text
    return tuple(int(x) for x in text.split(","))


def _parse_floats(text) -> tuple:
    if isinstance(text, tuple):
        return text
    return tuple(float(x) for x in text.split(","))


@click.group()
def main():
    """Spectral experiments for the periodic cubic Schrodinger equation."""


@main.command()
@click.option("--equation", type=click.Choice(["cubic", "limit"]), default="cubic")
@click.option("--gamma", type=float, default=1.0)
@click.option("--alpha-sq", type=float, default=0.0)
@click.option("--n-modes", type=int, default=128)
@click.option("--dt", type=float, default=1e-3)
@click.option("--t-end", type=float, default=1.0)
@click.option("--record-every", type=int, default=10)
@click.option("--mode", "modes", multiple=True,
              help="Initial datum term k,re,im (repeatable).")
@click.option("--out-dir", default=None)
@click.option("--name", default="trajectory")
def solve_cmd(equation, gamma, alpha_sq, n_modes, dt, t_end, record_every,
              modes, out_dir, name):
    """Integrate one initial datum and write the trajectory CSV."""
    if not modes:
        raise click.UsageError("provide at least one --mode k,re,im")
    grid = GridSpec(n_modes)
    amplitudes = {}
    for spec in modes:
        k, re, im = spec.split(",")
        amplitudes[int(k)] = float(re) + 1j * float(im)
    u0 = field_from_modes(grid, amplitudes)
    config = SolverConfig(equation=equation, gamma=gamma, grid=grid, dt=dt,
                          t_end=t_end, alpha_sq=alpha_sq,
                          record_every=record_every)
    traj = solve(u0, config)
    path = _out_dir(out_dir) / f"{name}.csv"
    save_trajectory(traj, path)
    click.echo(f"wrote {path}")


main.add_command(solve_cmd, name="solve")


_WEAK_CASTS = {
    "beta1": complex, "beta2": complex, "gamma": float,
    "t_eval": _parse_floats, "n_sweep": _parse_ints, "probe_band": int,
    "n_modes": int, "dt": float,
}


def _weak_config(params: dict, config_file: str | None) -> WeakLimitConfig:
    merged = _merge(params, _read_config_file(config_file), _WEAK_CASTS)
    return WeakLimitConfig(
        beta1=merged["beta1"], beta2=merged["beta2"], gamma=merged["gamma"],
        t_eval=merged["t_eval"], n_sweep=merged["n_sweep"],
        probe_band=merged["probe_band"], n_modes=merged["n_modes"],
        dt=merged["dt"],
    )


def _weak_options(fn):
    opts = [
        click.option("--beta1", type=complex, default=complex(1.0)),
        click.option("--beta2", type=complex, default=complex(1.0)),
        click.option("--gamma", type=float, default=1.0),
        click.option("--t-eval", type=_parse_floats, default=(0.5,)),
        click.option("--n-sweep", type=_parse_ints, default=(8, 16, 32, 64)),
        click.option("--probe-band", type=int, default=4),
        click.option("--n-modes", type=int, default=None),
        click.option("--dt", type=float, default=1e-3),
        click.option("--config", "config_file", default=None,
                     help="key=value config file"),
        click.option("--out-dir", default=None),
        click.option("--plot", is_flag=True, default=False),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


@main.command(name="weak-limit")
@_weak_options
def weak_limit_cmd(config_file, out_dir, plot, **params):
    """Weak-limit phase anomaly sweep over the high mode n."""
    config = _weak_config(params, config_file)
    report = run_weak_limit(config)
    plot_spec = None
    if plot:
        ns = sorted(set(report.column("n")))
        t_star = config.t_eval[-1]
        gap_a, gap_b = [], []
        for n in ns:
            rows = [r for r in report.rows
                    if r[0] == n and r[4] == 0 and abs(r[2] - t_star) < 1e-12]
            gap_a.append(rows[0][7])
            gap_b.append(rows[0][8])
        plot_spec = (ns, {"gap_A": gap_a, "gap_B": gap_b}, "n", "gap", True)
    _emit(report, out_dir, "weak_limit", plot_spec)


@main.command(name="discontinuity")
@_weak_options
@click.option("--sobolev-s", type=float, default=-0.5)
def discontinuity_cmd(config_file, out_dir, plot, sobolev_s, **params):
    """Flow-map discontinuity exhibit in H^s, s < 0."""
    config = _weak_config(params, config_file)
    report = run_discontinuity(config, sobolev_s)
    plot_spec = None
    if plot:
        ns = report.column("n")
        plot_spec = (ns, {"input_dist": report.column("input_dist"),
                          "output_dist": report.column("output_dist")},
                     "n", "H^s distance", True)
    _emit(report, out_dir, "discontinuity", plot_spec)


@main.command(name="gauge-check")
@click.option("--gamma", type=float, default=1.0)
@click.option("--theta-sq", type=float, default=0.7)
@click.option("--t-end", type=float, default=1.0)
@click.option("--dt", type=float, default=1e-3)
@click.option("--n-modes", type=int, default=128)
@click.option("--u0-seed", type=int, default=7,
              help="Seed for the random 5-mode initial datum.")
@click.option("--out-dir", default=None)
def gauge_check_cmd(gamma, theta_sq, t_end, dt, n_modes, u0_seed, out_dir):
    """Limit equation + gauge transform vs the cubic NLS flow."""
    grid = GridSpec(n_modes)
    rng = np.random.default_rng(u0_seed)
    amps = {int(k): complex(rng.standard_normal() + 1j * rng.standard_normal())
            for k in rng.choice(np.arange(-5, 6), size=5, replace=False)}
    u0 = field_from_modes(grid, amps)
    report = run_gauge_check(u0, gamma, theta_sq, t_end=t_end, dt=dt)
    _emit(report, out_dir, "gauge_check")


@main.command(name="survey")
@click.argument("kind", type=click.Choice(SURVEY_KINDS))
@click.option("--seed", type=int, default=42)
@click.option("--size", type=int, default=None)
@click.option("--samples", type=int, default=None)
@click.option("--out-dir", default=None)
def survey_cmd(kind, seed, size, samples, out_dir):
    """Run one diagnostic survey and emit its CSV."""
    report = run_surveys(kind, seed=seed, size=size, samples=samples)
    _emit(report, out_dir, f"survey_{kind.replace('-', '_')}")


if __name__ == "__main__":
    main()
