"""Command-line interface: project / bench / recover.

Exit codes: 0 success, 2 bad arguments, 3 I/O error, 4 internal
invariant violation (cross-algorithm disagreement).
"""

from __future__ import annotations

import sys

import click
import numpy as np

from .api import Algorithm, project_weighted_l1_ball_with_result
from .bench import (
    BENCH_HEADER,
    RECOVER_HEADER,
    gen_instance,
    run_recovery_table,
    run_timing_sweep,
    write_csv,
)
from .core import ProblemInstance, weighted_l1_norm
from .errors import MalformedVectorFile, ProjectionError
from .vecio import read_vector_file, write_vector_file

EXIT_IO = 3
EXIT_INTERNAL = 4

_ALGO_NAMES = [a.value for a in Algorithm]


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(part)) for part in text.split(",") if part]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated integer list, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated number list, got {text!r}")


def _open_out(path: str):
    if path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="")


@click.group()
def main():
    """Weighted l1-ball projection toolkit."""


@main.command()
@click.option("--input", "input_path", type=click.Path(), default=None,
              help="Vector file to project (alternative to --random-d).")
@click.option("--random-d", type=int, default=None,
              help="Generate a random input of this size instead of reading one.")
@click.option("--dist", type=click.Choice(["uniform", "gaussian"]), default="uniform",
              show_default=True, help="Distribution for --random-d.")
@click.option("--std", type=float, default=0.1, show_default=True,
              help="Gaussian standard deviation.")
@click.option("--radius", type=float, required=True, help="Ball radius a.")
@click.option("--weights", "weights_spec", default="unit", show_default=True,
              help="'unit', 'uniform', or a weight vector file path.")
@click.option("--algo", type=click.Choice(_ALGO_NAMES), default=Algorithm.BUCKET_FILTER.value,
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write the projection to this vector file.")
def project(input_path, random_d, dist, std, radius, weights_spec, algo, seed, out_path):
    """Project one vector onto the weighted l1 ball."""
    if (input_path is None) == (random_d is None):
        raise click.UsageError("give exactly one of --input or --random-d")
    try:
        if input_path is not None:
            y = read_vector_file(input_path)
            d = y.size
            rng = np.random.default_rng(seed)
            if weights_spec == "unit":
                w = np.ones(d)
            elif weights_spec == "uniform":
                w = rng.random(d)
                while (w == 0.0).any():
                    w[w == 0.0] = rng.random(int((w == 0.0).sum()))
            else:
                w = read_vector_file(weights_spec)
        else:
            mode = weights_spec if weights_spec in ("unit", "uniform") else "file"
            inst = gen_instance(random_d, dist, std, mode, seed, a=radius,
                                weights_path=None if mode != "file" else weights_spec)
            y, w = inst.y, inst.w
        instance = ProblemInstance(y, w, radius)
        x, res = project_weighted_l1_ball_with_result(instance, Algorithm(algo))
        if out_path is not None:
            write_vector_file(out_path, x)
    except (OSError, MalformedVectorFile) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)
    except ProjectionError as exc:
        raise click.UsageError(str(exc))
    click.echo(
        f"d={y.size} algo={algo} lambda={res.lam!r} support={res.support_size} "
        f"ops_visited={res.ops_visited} wnorm={weighted_l1_norm(x, w)!r}"
    )


@main.command()
@click.option("--sizes", default="100000", show_default=True,
              help="Comma-separated vector sizes.")
@click.option("--radii", default="4", show_default=True,
              help="Comma-separated radii.")
@click.option("--dists", default="uniform", show_default=True,
              help="Comma-separated distributions (uniform, gaussian).")
@click.option("--std", type=float, default=0.1, show_default=True)
@click.option("--algos", default=",".join(_ALGO_NAMES), show_default=True)
@click.option("--trials", type=int, default=50, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--weights", "weight_mode", type=click.Choice(["unit", "uniform"]),
              default="uniform", show_default=True)
@click.option("--path", "proj_path", type=click.Choice(["auto", "ball", "simplex"]),
              default="auto", show_default=True,
              help="Projection path; auto = ball for gaussian, simplex for uniform.")
@click.option("--csv", "csv_path", default="-", show_default=True,
              help="Output CSV path ('-' for stdout).")
def bench(sizes, radii, dists, std, algos, trials, seed, weight_mode, proj_path, csv_path):
    """Run the projection timing sweep and emit CSV."""
    sizes = _int_list(sizes)
    radii = _float_list(radii)
    algo_list = [a.strip() for a in algos.split(",") if a.strip()]
    for name in algo_list:
        if name not in _ALGO_NAMES:
            raise click.BadParameter(f"unknown algorithm {name!r}")
    if trials < 1:
        raise click.BadParameter("--trials must be >= 1")
    dist_list = [s.strip() for s in dists.split(",") if s.strip()]
    all_ok = True
    records = []
    for dist in dist_list:
        if dist not in ("uniform", "gaussian"):
            raise click.BadParameter(f"unknown distribution {dist!r}")
        recs, ok = run_timing_sweep(
            sizes, radii, algo_list, trials, dist, std, seed,
            weight_mode=weight_mode, path=proj_path,
        )
        records.extend(recs)
        all_ok = all_ok and ok
    try:
        fh = _open_out(csv_path)
        try:
            write_csv(records, BENCH_HEADER, fh)
        finally:
            if fh is not sys.stdout:
                fh.close()
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)
    if not all_ok:
        click.echo("error: cross-algorithm threshold disagreement above tolerance",
                   err=True)
        sys.exit(EXIT_INTERNAL)


@main.command()
@click.option("--n", type=int, default=100, show_default=True)
@click.option("--m", type=int, default=256, show_default=True)
@click.option("--k", default="5", show_default=True, help="Comma-separated sparsities.")
@click.option("--radius", default="5", show_default=True, help="Comma-separated radii.")
@click.option("--num-p", default="3", show_default=True,
              help="Comma-separated schedule lengths.")
@click.option("--eps", type=float, default=0.01, show_default=True)
@click.option("--seed", default="0", show_default=True,
              help="Comma-separated seeds (one run per seed).")
@click.option("--max-iter", type=int, default=5000, show_default=True)
@click.option("--csv", "csv_path", default="-", show_default=True)
def recover(n, m, k, radius, num_p, eps, seed, max_iter, csv_path):
    """Run sparse-recovery experiments and emit CSV."""
    records = run_recovery_table(
        n, m, _int_list(k), _float_list(radius), _int_list(num_p),
        _int_list(seed), epsilon=eps, max_iter=max_iter,
    )
    try:
        fh = _open_out(csv_path)
        try:
            write_csv(records, RECOVER_HEADER, fh)
        finally:
            if fh is not sys.stdout:
                fh.close()
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)


if __name__ == "__main__":
    main()
