from __future__ import annotations

import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import click
import pandas as pd
import uvicorn

from src.app.core.config import Settings, load_settings
from src.app.schemas.model import PHI_PRIORS, ModelSpec, RunManifest, Variant
from src.app.utils.artifacts import hash_artifacts, read_manifest, write_csv, write_manifest
from src.app.utils.logger import get_logger
from src.dist.mixture import load_mixture
from src.dsptheory.checks import CHECK_GROUPS, run_checks
from src.evaluate.metrics import VolEstimate, score
from src.evaluate.summary import summary_stats
from src.evaluate.tables import aggregate_table, per_path_table
from src.simulate.dgp import SimPath, generate_path, generate_paths
from src.simulate.io import read_path, write_path
from src.volatility.errors import DivergenceError, SeriesFormatError
from src.volatility.report import posterior_frames
from src.volatility.runner import run_chain
from src.volatility.series import TimeSeries, read_series_csv

logger = get_logger("app.cli")

EXIT_USAGE = 1
EXIT_SERIES = 2
EXIT_DIVERGENCE = 3

DEFAULT_BENCHMARK_MODELS = ("ASV_DHS", "RWSV")


class VolatilityCLI(click.Group):
    """Command group with the exit-code contract: 1 usage, 2 malformed series, 3 divergence."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        if not standalone_mode:
            return super().main(args, prog_name, complete_var, standalone_mode=False, **extra)

        try:
            rv = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.UsageError as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.ClickException as e:
            e.show()
            sys.exit(e.exit_code)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(1)
        except SeriesFormatError as e:
            click.echo(f"Error: malformed series: {e}", err=True)
            sys.exit(EXIT_SERIES)
        except DivergenceError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_DIVERGENCE)
        sys.exit(rv if isinstance(rv, int) else 0)


def _parse_variant(ctx, param, value):
    if value is None:
        return None
    try:
        return Variant.parse(value)
    except ValueError as e:
        raise click.BadParameter(str(e)) from e


def _settings(ctx: click.Context) -> Settings:
    return ctx.find_root().obj["settings"]


def _or(value, default):
    return default if value is None else value


def _build_spec(settings: Settings, variant: Variant, **params) -> ModelSpec:
    """Every settings-backed field is passed explicitly so the ModelSpec does not depend on the cached settings."""
    try:
        return ModelSpec(
            variant=variant,
            k=params["k"],
            k_beta=params["k_beta"],
            seed=params["seed"],
            n_burn=_or(params.get("burn"), settings.N_BURN),
            n_draw=_or(params.get("draws"), settings.N_DRAW),
            thin=_or(params.get("thin"), settings.THIN),
            offset_c=_or(params.get("offset"), settings.OFFSET_C),
            phi_prior=_or(params.get("phi_prior"), settings.PHI_PRIOR),
            mu_update=_or(params.get("mu_update"), settings.MU_UPDATE),
            phi_likelihood=_or(params.get("phi_likelihood"), settings.PHI_LIKELIHOOD),
            slice_width=_or(params.get("slice_width"), settings.SLICE_WIDTH),
            slice_max_steps=_or(params.get("slice_max_steps"), settings.SLICE_MAX_STEPS),
            pg_truncation=_or(params.get("pg_truncation"), settings.PG_TRUNCATION),
        )
    except ValueError as e:
        raise click.UsageError(str(e)) from e


def _mixture_path(settings: Settings, **params) -> Optional[str]:
    path = params.get("omori_path") or settings.OMORI_PATH
    return str(Path(path).resolve()) if path else None


def _spec_flags(spec: ModelSpec, mixture_path: Optional[str] = None) -> List[str]:
    flags = [
        "--k", str(spec.k),
        "--k-beta", str(spec.k_beta),
        "--burn", str(spec.n_burn),
        "--draws", str(spec.n_draw),
        "--thin", str(spec.thin),
        "--seed", str(spec.seed),
        "--offset", repr(spec.offset_c),
        "--phi-prior", spec.phi_prior,
        "--mu-update", spec.mu_update,
        "--phi-likelihood", spec.phi_likelihood,
        "--slice-width", repr(spec.slice_width),
        "--slice-max-steps", str(spec.slice_max_steps),
        "--pg-truncation", str(spec.pg_truncation),
    ]
    if mixture_path:
        flags += ["--omori-path", mixture_path]
    return flags


def _finish(out: Path, command: List[str], artifacts: Dict[str, str], seed: int, t0: float, spec: Optional[ModelSpec] = None, **extra) -> None:
    manifest = RunManifest(
        command=command,
        spec=spec,
        seed=seed,
        wall_time_s=time.time() - t0,
        artifacts=artifacts,
        version=_settings(click.get_current_context()).APP_VERSION,
        extra={k: str(v) for k, v in extra.items()},
    )
    write_manifest(manifest, out)


@click.group(cls=VolatilityCLI)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Dotenv file with settings overrides.")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str]):
    """Adaptive stochastic volatility: fit, simulate, evaluate and check."""
    ctx.ensure_object(dict)
    ctx.obj["settings"] = load_settings(config_path)


def _spec_options(f):
    options = [
        click.option("--k", type=click.IntRange(1, 3), default=1, show_default=True, help="Differencing order of h."),
        click.option("--k-beta", type=click.IntRange(1, 3), default=2, show_default=True, help="Differencing order of the trend."),
        click.option("--burn", type=click.IntRange(min=0), default=None, help="Burn-in sweeps [N_BURN]."),
        click.option("--draws", type=click.IntRange(min=1), default=None, help="Post-burn-in sweeps [N_DRAW]."),
        click.option("--thin", type=click.IntRange(min=1), default=None, help="Keep every n-th sweep [THIN]."),
        click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True),
        click.option("--offset", type=float, default=None, help="Offset c in log(y^2 + c) [OFFSET_C]."),
        click.option("--phi-prior", type=click.Choice(sorted(PHI_PRIORS)), default=None),
        click.option("--mu-update", type=click.Choice(["displayed", "exact"]), default=None),
        click.option("--phi-likelihood", type=click.Choice(["displayed", "exact"]), default=None),
        click.option("--slice-width", type=click.FloatRange(min=0, min_open=True), default=None,
                     help="Initial bracket of the phi slice step [SLICE_WIDTH]."),
        click.option("--slice-max-steps", type=click.IntRange(min=1), default=None, help="Cap on slice shrinkage proposals [SLICE_MAX_STEPS]."),
        click.option("--pg-truncation", type=click.IntRange(min=10), default=None,
                     help="Series terms for PG(b, c) with b > 1 [PG_TRUNCATION]."),
        click.option("--omori-path", type=click.Path(exists=True, dir_okay=False), default=None,
                     help="Alternative 10-component mixture table [OMORI_PATH]."),
    ]
    for option in reversed(options):
        f = option(f)
    return f


# ---------------------
# fit
# ---------------------
@cli.command()
@click.argument("input_csv", type=click.Path(dir_okay=False))
@click.option("--model", "variant", default="ASV_DHS", show_default=True, callback=_parse_variant,
              help=f"One of {', '.join(v.value for v in Variant)}.")
@_spec_options
@click.option("--center", type=click.Choice(["none", "mean"]), default="none", show_default=True)
@click.option("--kappa-threshold", type=click.FloatRange(0, 1, min_open=True, max_open=True), default=0.9, show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.pass_context
def fit(ctx, input_csv, variant, center, kappa_threshold, out_dir, **params):
    """Fit one chain to a CSV series and write posterior summaries."""
    settings = _settings(ctx)
    spec = _build_spec(settings, variant, **params)
    mixture_path = _mixture_path(settings, **params)
    out = Path(out_dir)
    t0 = time.time()

    series = read_series_csv(input_csv).centered(center)
    mixture = load_mixture(mixture_path)
    draws = run_chain(series, spec, progress=settings.PROGRESS, mixture=mixture)
    frames = posterior_frames(draws, series.label_column(), kappa_threshold, initial=spec.h_order)

    artifacts = {name: write_csv(frame, out / name) for name, frame in frames.items()}
    command = [
        "fit", str(Path(input_csv).resolve()),
        "--model", spec.variant.value,
        *_spec_flags(spec, mixture_path),
        "--center", center,
        "--kappa-threshold", repr(kappa_threshold),
        "--out", str(out),
    ]
    _finish(out, command, artifacts, spec.seed, t0, spec=spec, run_id=draws.meta.get("run_id", ""), T=series.T)

    flagged = int(frames["v_summary.csv"]["flag"].sum())
    click.echo(f"{spec.variant.value}: T={series.T} kept={draws.n_keep} flagged={flagged} -> {out}")


# ---------------------
# simulate
# ---------------------
def _simulate_job(args) -> SimPath:
    dgp, T, seed, index = args
    return generate_path(dgp, T, seed, index)


@cli.command()
@click.option("--dgp", type=click.IntRange(1, 8), required=True)
@click.option("--t", "T", type=click.IntRange(min=8), default=1000, show_default=True)
@click.option("--paths", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=None, help="Worker processes [JOBS].")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.pass_context
def simulate(ctx, dgp, T, paths, seed, jobs, out_dir):
    """Simulate benchmark paths; one CSV per path."""
    jobs = jobs or _settings(ctx).JOBS
    out = Path(out_dir)
    t0 = time.time()

    tasks = [(dgp, T, seed, i) for i in range(paths)]
    if jobs <= 1 or paths == 1:
        sim = [_simulate_job(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, paths)) as pool:
            sim = list(pool.map(_simulate_job, tasks))

    artifacts = {}
    for i, path in enumerate(sim):
        name = f"dgp{dgp}_path{i:03d}.csv"
        artifacts[name] = write_path(path, out / name)

    command = ["simulate", "--dgp", str(dgp), "--t", str(T), "--paths", str(paths), "--seed", str(seed),
               "--jobs", str(jobs), "--out", str(out)]
    _finish(out, command, artifacts, seed, t0, dgp=dgp)
    click.echo(f"dgp={dgp}: wrote {paths} paths of T={T} -> {out}")


# ---------------------
# evaluate
# ---------------------
def _read_estimate(estimate_dir: Path) -> VolEstimate:
    file = estimate_dir / "sigma_summary.csv"
    try:
        frame = pd.read_csv(file)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise SeriesFormatError(f"unreadable estimate ({e})", path=str(file)) from e

    missing = [c for c in ("sigma_mean", "sigma_q05", "sigma_q95") if c not in frame.columns]
    if missing:
        raise SeriesFormatError(f"missing columns {missing}", path=str(file))
    return VolEstimate(
        point=frame["sigma_mean"].to_numpy(dtype=float),
        q05=frame["sigma_q05"].to_numpy(dtype=float),
        q95=frame["sigma_q95"].to_numpy(dtype=float),
    )


@cli.command()
@click.argument("truth_csv", type=click.Path(dir_okay=False))
@click.argument("estimate_dir", type=click.Path(file_okay=False))
@click.option("--out", "out_file", type=click.Path(dir_okay=False), required=True)
def evaluate(truth_csv, estimate_dir, out_file):
    """Score a fitted sigma band against the true sigma path."""
    truth = read_path(truth_csv)
    estimate = _read_estimate(Path(estimate_dir))
    if truth.T != estimate.point.size:
        raise SeriesFormatError(f"truth has {truth.T} rows, estimate has {estimate.point.size}")

    row = score(truth.sigma_true, estimate)
    h_file = Path(estimate_dir) / "h_summary.csv"
    if h_file.exists():
        stats = summary_stats(pd.read_csv(h_file)["h_mean"].to_numpy(dtype=float))
        row.update(
            mean_abs_diff=stats.mean_abs_diff,
            excess_kurtosis=stats.excess_kurtosis,
            cp_count=stats.cp_count,
        )
    write_csv(pd.DataFrame([row]), out_file)
    click.echo(f"mae={row['mae']:.6g} ec={row['ec']:.4f} mciw={row['mciw']:.6g} -> {out_file}")


# ---------------------
# benchmark
# ---------------------
def _benchmark_job(args) -> dict:
    dgp, path_id, y, sigma_true, spec, mixture = args
    draws = run_chain(TimeSeries(y), spec, chain_id=path_id, progress=False, mixture=mixture)
    row = {"dgp": dgp, "path": path_id, "variant": spec.variant.value}
    row.update(score(sigma_true, VolEstimate.from_draws(draws)))
    return row


@cli.command()
@click.option("--dgp", type=click.IntRange(1, 8), required=True)
@click.option("--t", "T", type=click.IntRange(min=8), default=300, show_default=True)
@click.option("--paths", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--models", "models", multiple=True, default=DEFAULT_BENCHMARK_MODELS, show_default=True,
              help="Variant to fit; repeat for several.")
@_spec_options
@click.option("--jobs", type=click.IntRange(min=1), default=None, help="Worker processes [JOBS].")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.pass_context
def benchmark(ctx, dgp, T, paths, models, jobs, out_dir, **params):
    """Simulate paths of one DGP, fit every model to each, and tabulate MAE, EC and MCIW."""
    settings = _settings(ctx)
    variants = [_parse_variant(ctx, None, m) for m in models]
    specs = [_build_spec(settings, v, **params) for v in variants]
    mixture_path = _mixture_path(settings, **params)
    mixture = load_mixture(mixture_path)
    jobs = jobs or settings.JOBS
    out = Path(out_dir)
    t0 = time.time()

    sim = generate_paths(dgp, T, paths, params["seed"])
    tasks = [(dgp, i, p.y, p.sigma_true, spec, mixture) for i, p in enumerate(sim) for spec in specs]
    logger.info("benchmark dgp=%d T=%d paths=%d models=%s jobs=%d", dgp, T, paths, ",".join(models), jobs)

    if jobs <= 1:
        rows = [_benchmark_job(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_benchmark_job, tasks))

    per_path = per_path_table(rows)
    summary = aggregate_table(per_path)
    artifacts = {
        "metrics_per_path.csv": write_csv(per_path, out / "metrics_per_path.csv"),
        "metrics_summary.csv": write_csv(summary, out / "metrics_summary.csv"),
    }
    command = ["benchmark", "--dgp", str(dgp), "--t", str(T), "--paths", str(paths)]
    for v in variants:
        command += ["--models", v.value]
    command += [*_spec_flags(specs[0], mixture_path), "--jobs", str(jobs), "--out", str(out)]
    _finish(out, command, artifacts, params["seed"], t0, dgp=dgp)

    for row in summary.itertuples(index=False):
        click.echo(f"dgp={row.dgp} {row.variant}: mae={row.mae_mean:.4f} ec={row.ec_mean:.4f} mciw={row.mciw_mean:.4f}")


# ---------------------
# theory
# ---------------------
@cli.command()
@click.option("--check", type=click.Choice(["all", *CHECK_GROUPS]), default="all", show_default=True)
def theory(check):
    """Numerical checks of the shrinkage-process densities, bounds and stationary law."""
    results = run_checks(check)
    for r in results:
        click.echo(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")

    failed = [r.name for r in results if not r.passed]
    if failed:
        raise click.ClickException(f"failing checks: {', '.join(failed)}")


# ---------------------
# verify
# ---------------------
def _with_out(command: Sequence[str], out: str) -> List[str]:
    tokens = list(command)
    if "--out" not in tokens:
        raise click.UsageError("manifest command has no --out")
    tokens[tokens.index("--out") + 1] = out
    return tokens


@cli.command()
@click.argument("manifest_path", type=click.Path(exists=True, dir_okay=False))
def verify(manifest_path):
    """Re-run a recorded command into a temporary directory and compare artifact hashes."""
    manifest = read_manifest(manifest_path)
    with tempfile.TemporaryDirectory(prefix="verify_") as tmp:
        cli.main(args=_with_out(manifest.command, tmp), standalone_mode=False)
        fresh = hash_artifacts(tmp, manifest.artifacts)

    mismatched = [name for name, digest in manifest.artifacts.items() if fresh[name] != digest]
    for name in manifest.artifacts:
        click.echo(f"{'MISMATCH' if name in mismatched else 'OK'} {name}")
    if mismatched:
        raise click.ClickException(f"{len(mismatched)} artifact(s) differ: {', '.join(mismatched)}")
    click.echo(f"verified {len(manifest.artifacts)} artifacts (version {manifest.version})")


# ---------------------
# serve
# ---------------------
@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Start the HTTP API."""
    uvicorn.run("src.app.main:app", host=host, port=port)


if __name__ == "__main__":
    cli()
