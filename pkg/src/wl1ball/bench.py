"""Benchmark harness: seeded instance generation, timing sweeps, recovery tables.

Instances are generated with numpy's default PCG64 generator seeded from a
``SeedSequence`` keyed by (root seed, grid position, trial), so identical
invocations produce identical instances on any platform.  Timing uses the
monotonic nanosecond clock, excludes instance generation, and discards one
warm-up run per grid cell.  All requested algorithms run on the same
instances; the sort oracle's threshold is always computed as the agreement
reference, timed only when "sort" is among the requested algorithms.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .api import (
    Algorithm,
    project_simplex_with_result,
    project_weighted_l1_ball_with_result,
)
from .core import REL_TOL, ProblemInstance
from .errors import InvalidSize, LengthMismatch
from .sirl1 import RecoveryProblem, make_p_schedule, sirl1
from .vecio import read_vector_file

BENCH_HEADER = [
    "algo", "dist", "d", "a", "std_dev", "seed", "trial",
    "time_ns", "lambda", "support", "ops_visited", "lambda_err",
]
RECOVER_HEADER = [
    "algo", "n", "m", "k", "radius", "num_p", "seed",
    "l0", "l1", "rec", "iters", "time_ms", "converged",
]


@dataclass
class BenchRecord:
    """One timing row (trial = "mean" for per-cell aggregate rows)."""

    algo: str
    dist: str
    d: int
    a: float
    std_dev: float
    seed: int
    trial: str
    time_ns: int
    lam: float
    support: float
    ops_visited: float
    lambda_err: float

    def as_row(self) -> list[str]:
        return [
            self.algo, self.dist, str(self.d), repr(self.a), repr(self.std_dev),
            str(self.seed), self.trial, str(self.time_ns), repr(self.lam),
            _count_str(self.support), _count_str(self.ops_visited),
            repr(self.lambda_err),
        ]


@dataclass
class RecoveryRecord:
    """One recovery row (seed = "mean" for per-config aggregate rows)."""

    algo: str
    n: int
    m: int
    k: int
    radius: float
    num_p: int
    seed: str
    l0: float
    l1: float
    rec: float
    iters: float
    time_ms: float
    converged: str

    def as_row(self) -> list[str]:
        return [
            self.algo, str(self.n), str(self.m), str(self.k), repr(self.radius),
            str(self.num_p), self.seed, _count_str(self.l0), repr(self.l1),
            repr(self.rec), _count_str(self.iters), repr(self.time_ms),
            self.converged,
        ]


def _count_str(v) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def gen_instance(
    d: int,
    distribution: str,
    std_dev: float,
    weight_mode: str,
    seed,
    a: float = 1.0,
    weights_path=None,
) -> ProblemInstance:
    """Deterministically generate one problem instance.

    ``distribution`` is "uniform" (entries in [0, 1)) or "gaussian"
    (mean 0, sigma ``std_dev``); ``weight_mode`` is "unit", "uniform"
    (strictly positive draws, zeros resampled) or "file".
    """
    if d < 1:
        raise InvalidSize(f"instance size must be >= 1, got {d}")
    rng = np.random.default_rng(seed)
    if distribution == "uniform":
        y = rng.random(d)
    elif distribution == "gaussian":
        y = rng.normal(0.0, std_dev, d)
    else:
        raise ValueError(f"unknown distribution {distribution!r}")
    if weight_mode == "unit":
        w = np.ones(d)
    elif weight_mode == "uniform":
        w = rng.random(d)
        while True:
            zero = w == 0.0
            if not zero.any():
                break
            w[zero] = rng.random(int(zero.sum()))
    elif weight_mode == "file":
        w = read_vector_file(weights_path)
        if w.size != d:
            raise LengthMismatch(f"weight file holds {w.size} values, need {d}")
    else:
        raise ValueError(f"unknown weight mode {weight_mode!r}")
    return ProblemInstance(y, w, a)


def _project_for_bench(instance: ProblemInstance, algo: Algorithm, use_ball: bool):
    if use_ball:
        return project_weighted_l1_ball_with_result(instance, algo)
    return project_simplex_with_result(instance, algo)


def run_timing_sweep(
    sizes,
    radii,
    algos,
    trials: int,
    distribution: str,
    std_dev: float,
    seed: int,
    weight_mode: str = "uniform",
    path: str = "auto",
) -> tuple[list[BenchRecord], bool]:
    """Time every algorithm over the (sizes x radii) grid.

    Returns the records (per-trial rows followed by one mean row per
    algorithm and cell) and a flag that is False if any algorithm
    disagreed with the sort oracle beyond the relative tolerance.

    Gaussian instances go through the ball path (signs allowed), uniform
    ones through the simplex path; ``path`` overrides with "ball" or
    "simplex".
    """
    algos = [Algorithm(a) for a in algos]
    use_ball = path == "ball" or (path == "auto" and distribution == "gaussian")
    records: list[BenchRecord] = []
    agreement_ok = True
    for di, d in enumerate(sizes):
        for ai, a in enumerate(radii):
            cell: dict[Algorithm, list[BenchRecord]] = {alg: [] for alg in algos}
            # Warm-up run, excluded from statistics.
            warm = gen_instance(
                d, distribution, std_dev, weight_mode,
                np.random.SeedSequence((seed, di, ai, trials)), a=a,
            )
            for alg in algos:
                _project_for_bench(warm, alg, use_ball)
            for trial in range(trials):
                inst = gen_instance(
                    d, distribution, std_dev, weight_mode,
                    np.random.SeedSequence((seed, di, ai, trial)), a=a,
                )
                lam_ref = None
                for alg in algos:
                    t0 = time.perf_counter_ns()
                    _, res = _project_for_bench(inst, alg, use_ball)
                    dt = time.perf_counter_ns() - t0
                    if alg is Algorithm.SORT:
                        lam_ref = res.lam
                    cell[alg].append(BenchRecord(
                        alg.value, distribution, d, float(a), float(std_dev),
                        seed, str(trial), dt, res.lam, res.support_size,
                        res.ops_visited, 0.0,
                    ))
                if lam_ref is None:
                    _, ref = _project_for_bench(inst, Algorithm.SORT, use_ball)
                    lam_ref = ref.lam
                for alg in algos:
                    rec = cell[alg][-1]
                    err = abs(rec.lam - lam_ref)
                    if lam_ref != 0.0:
                        err /= abs(lam_ref)
                    rec.lambda_err = err
                    if err > REL_TOL:
                        agreement_ok = False
            for alg in algos:
                rows = cell[alg]
                records.extend(rows)
                records.append(BenchRecord(
                    alg.value, distribution, d, float(a), float(std_dev),
                    seed, "mean",
                    int(np.mean([r.time_ns for r in rows])),
                    float(np.mean([r.lam for r in rows])),
                    float(np.mean([r.support for r in rows])),
                    float(np.mean([r.ops_visited for r in rows])),
                    float(np.mean([r.lambda_err for r in rows])),
                ))
    return records, agreement_ok


def plant_recovery_instance(n: int, m: int, k: int, seed):
    """Draw a k-sparse +-1 signal, a scaled Gaussian matrix, and x0.

    ``A`` has unit-variance entries scaled by 1/sqrt(n); ``b = A x_true``
    (noiseless).
    """
    rng = np.random.default_rng(seed)
    support = rng.choice(m, size=k, replace=False)
    x_true = np.zeros(m)
    x_true[support] = rng.choice([-1.0, 1.0], size=k)
    A = rng.standard_normal((n, m)) / np.sqrt(n)
    b = A @ x_true
    x0 = rng.standard_normal(m)
    return A, b, x_true, x0


def run_recovery_table(
    n: int,
    m: int,
    k_list,
    radius_list,
    num_p_list,
    seeds,
    epsilon: float = 0.01,
    max_iter: int = 5000,
) -> list[RecoveryRecord]:
    """Run the recovery solver over a configuration grid.

    One row per (k, radius, num_p, seed) plus a mean row per
    configuration; the mean row's ``converged`` column is the fraction
    of converged seeds.
    """
    records: list[RecoveryRecord] = []
    for k in k_list:
        for radius in radius_list:
            for num_p in num_p_list:
                algo_name = "lasso" if num_p == 1 else "sirl1"
                rows: list[RecoveryRecord] = []
                for seed in seeds:
                    radius_bits = int(np.float64(radius).view(np.uint64))
                    A, b, x_true, x0 = plant_recovery_instance(
                        n, m, k, np.random.SeedSequence((seed, n, m, k, radius_bits))
                    )
                    problem = RecoveryProblem(
                        A, b, radius, epsilon=epsilon,
                        p_schedule=make_p_schedule(num_p), max_iter=max_iter,
                    )
                    report = sirl1(problem, x0, x_true=x_true)
                    rows.append(RecoveryRecord(
                        algo_name, n, m, k, float(radius), num_p, str(seed),
                        report.l0, report.l1, report.rec, report.iters,
                        report.time_s * 1e3,
                        "true" if report.converged else "false",
                    ))
                records.extend(rows)
                records.append(RecoveryRecord(
                    algo_name, n, m, k, float(radius), num_p, "mean",
                    float(np.mean([r.l0 for r in rows])),
                    float(np.mean([r.l1 for r in rows])),
                    float(np.mean([r.rec for r in rows])),
                    float(np.mean([r.iters for r in rows])),
                    float(np.mean([r.time_ms for r in rows])),
                    repr(float(np.mean([r.converged == "true" for r in rows]))),
                ))
    return records


def write_csv(records, header, fh) -> None:
    """Emit rows as UTF-8 CSV with LF line endings."""
    fh.write(",".join(header) + "\n")
    for rec in records:
        fh.write(",".join(rec.as_row()) + "\n")
