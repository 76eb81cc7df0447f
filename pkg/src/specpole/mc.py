"""Replication harness for the estimation experiment.

Runs many independent realizations of a configured pipeline, estimates
per replication, and aggregates mean squared errors against the known
limits.  Both generation back-ends plug in here: the exact Gaussian
sampler (needs a closed spectral density) and the simulated-path route
(needs a moving-average recipe pushed through the time-domain filter).

Replications fan out over a thread pool with seeds base_seed + index,
and results are collected positionally, so worker count and completion
order never change the output bytes.
"""

import json
import os
import threading
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .estimator import estimate, first_statistic
from .model import (
    GegenbauerSpec,
    SpectralModel,
    builtin_filter,
    filter_from_json,
    filter_to_json,
    model_from_json,
    model_to_json,
)
from .simulate import PROVENANCES, exact_coefficient_sample, gegenbauer_path
from .transform import (
    TransformRequest,
    lattice_window,
    panel_from_path,
    schedule_from_json,
    schedule_to_json,
)

__all__ = [
    "ExperimentConfig",
    "MseTable",
    "run_experiment",
    "summarize",
    "summary_json",
    "write_outputs",
    "experiment_from_json",
    "experiment_to_json",
]


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """Full description of one replication experiment."""

    model: object
    filter_name: str
    schedule: object
    backend: str
    replications: int
    base_seed: int
    sigma: float = 1.0
    out_dir: str = None
    workers: int = None

    def __post_init__(self):
        if self.backend not in PROVENANCES:
            raise ValueError(
                "ExperimentConfig: backend must be one of %r" % (PROVENANCES,)
            )
        if not (isinstance(self.replications, int) and self.replications >= 1):
            raise ValueError("ExperimentConfig: replications must be >= 1")
        filt = builtin_filter(self.filter_name, sigma=self.sigma)
        if self.backend == "exact-gaussian":
            if not isinstance(self.model, SpectralModel):
                raise TypeError(
                    "ExperimentConfig: the exact-gaussian backend needs a "
                    "SpectralModel; a moving-average spec has no closed "
                    "density to integrate"
                )
        else:
            if not isinstance(self.model, GegenbauerSpec):
                raise TypeError(
                    "ExperimentConfig: the path-transform backend needs a "
                    "GegenbauerSpec recipe; use exact-gaussian for density "
                    "models"
                )
            if filt.psi is None:
                raise ValueError(
                    "ExperimentConfig: filter %r has no time-domain form, "
                    "so it cannot transform simulated paths" % self.filter_name
                )

    def targets(self):
        """True parameter values and statistic limits for this model."""
        if isinstance(self.model, GegenbauerSpec):
            s0 = self.model.singularity
            alpha = self.model.d
        else:
            s0 = self.model.s0
            alpha = self.model.alpha
        filt = builtin_filter(self.filter_name, sigma=self.sigma)
        return {
            "s0": s0,
            "alpha": alpha,
            "delta_bar": filt.c2 * s0 ** (-4.0 * alpha),
            "ddelta": alpha * filt.c3 * s0 ** (-4.0 * alpha - 2.0),
        }


def experiment_from_json(doc):
    """Build a config from its JSON document form."""
    model = model_from_json(doc["model"])
    filt_doc = dict(doc["filter"])
    return ExperimentConfig(
        model=model,
        filter_name=filt_doc["name"],
        sigma=float(filt_doc.get("sigma", 1.0)),
        schedule=schedule_from_json(doc["schedule"]),
        backend=doc["backend"],
        replications=int(doc["replications"]),
        base_seed=int(doc["base_seed"]),
        out_dir=doc.get("out_dir"),
        workers=doc.get("workers"),
    )


def experiment_to_json(config):
    """JSON document form of a config (inverse of experiment_from_json)."""
    doc = {
        "model": model_to_json(config.model),
        "filter": filter_to_json(
            builtin_filter(config.filter_name, sigma=config.sigma)
        ),
        "schedule": schedule_to_json(config.schedule),
        "backend": config.backend,
        "replications": config.replications,
        "base_seed": config.base_seed,
    }
    if config.out_dir is not None:
        doc["out_dir"] = str(config.out_dir)
    if config.workers is not None:
        doc["workers"] = config.workers
    return doc


# ---------------------------------------------------------------------------
# Replication execution
# ---------------------------------------------------------------------------


def _one_replication(config, filt, rep):
    seed = config.base_seed + rep
    if config.backend == "exact-gaussian":
        panel = exact_coefficient_sample(
            config.model, filt, config.schedule, seed
        )
    else:
        t_lo, t_hi = lattice_window(filt, config.schedule)
        path = gegenbauer_path(
            config.model, t_hi - t_lo + 1, float(t_lo), 1.0, seed
        )
        panel = panel_from_path(
            TransformRequest(path=path, filter=filt, schedule=config.schedule)
        )
    results = estimate(panel, filt)
    by_j = {res.j: res for res in results}
    rows = []
    for lv in panel.levels:
        res = by_j.get(lv.j)
        rows.append(
            {
                "rep": rep,
                "seed": seed,
                "j": lv.j,
                "a_j": lv.a_j,
                "delta_bar": first_statistic(panel, lv.j),
                "ddelta": res.row.ddelta if res else None,
                "s0_hat": res.s0_hat if res else None,
                "alpha_hat": res.alpha_hat if res else None,
                "case": res.point.case_applied if res else "",
            }
        )
    return rows


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MseTable:
    """Aggregated mean squared errors, one entry per scale level."""

    js: tuple
    a_js: tuple
    counts: tuple
    mse_delta_bar: tuple
    mse_ddelta: tuple
    mse_s0_hat: tuple
    mse_alpha_hat: tuple
    targets: dict
    replications: int
    failures: tuple
    rows: tuple = field(repr=False)


def _mse(values, target):
    vals = [v for v in values if v is not None]
    if not vals:
        return None
    return float(np.mean((np.asarray(vals, dtype=float) - target) ** 2))


def _aggregate(config, all_rows, failures):
    targets = config.targets()
    js = tuple(lv.j for lv in config.schedule.levels)
    a_js = tuple(lv.a_j for lv in config.schedule.levels)
    per_j = {j: [] for j in js}
    flat = []
    for rep_rows in all_rows:
        if rep_rows is None:
            continue
        for row in rep_rows:
            per_j[row["j"]].append(row)
            flat.append(row)
    counts, mse_db, mse_dd, mse_s0, mse_al = [], [], [], [], []
    for j in js:
        rows = per_j[j]
        counts.append(len(rows))
        mse_db.append(_mse([r["delta_bar"] for r in rows], targets["delta_bar"]))
        mse_dd.append(_mse([r["ddelta"] for r in rows], targets["ddelta"]))
        mse_s0.append(_mse([r["s0_hat"] for r in rows], targets["s0"]))
        mse_al.append(_mse([r["alpha_hat"] for r in rows], targets["alpha"]))
    return MseTable(
        js=js,
        a_js=a_js,
        counts=tuple(counts),
        mse_delta_bar=tuple(mse_db),
        mse_ddelta=tuple(mse_dd),
        mse_s0_hat=tuple(mse_s0),
        mse_alpha_hat=tuple(mse_al),
        targets=targets,
        replications=config.replications,
        failures=tuple(failures),
        rows=tuple(flat),
    )


def run_experiment(config):
    """Run all replications, aggregate, and write outputs if configured.

    Per-replication failures are recorded and skipped; more than 20%
    of them aborts the experiment.  With out_dir set, writes
    replications.csv, mse_table.csv and summary.json.
    """
    filt = builtin_filter(config.filter_name, sigma=config.sigma)
    n_rep = config.replications
    all_rows = [None] * n_rep
    failures = []
    failure_lock = threading.Lock()

    def work(rep):
        try:
            all_rows[rep] = _one_replication(config, filt, rep)
        except Exception as exc:
            with failure_lock:
                failures.append((rep, "%s: %s" % (type(exc).__name__, exc)))

    workers = config.workers or min(n_rep, os.cpu_count() or 1)
    if workers <= 1 or n_rep == 1:
        for rep in range(n_rep):
            work(rep)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, range(n_rep)))

    failures.sort()
    if len(failures) > 0.2 * n_rep:
        raise RuntimeError(
            "run_experiment: %d of %d replications failed (over 20%%); "
            "first error: %s" % (len(failures), n_rep, failures[0][1])
        )
    if failures:
        warnings.warn(
            "run_experiment: %d of %d replications failed and were skipped"
            % (len(failures), n_rep)
        )
    table = _aggregate(config, all_rows, failures)
    if config.out_dir is not None:
        write_outputs(table, config.out_dir)
    return table


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _fmt(value):
    return "" if value is None else "%.17g" % value


def write_outputs(table, out_dir):
    """Write replications.csv, mse_table.csv and summary.json."""
    os.makedirs(out_dir, exist_ok=True)
    rep_path = os.path.join(out_dir, "replications.csv")
    with open(rep_path, "w") as handle:
        handle.write("rep,seed,j,a_j,delta_bar,ddelta,s0_hat,alpha_hat,case\n")
        for row in table.rows:
            handle.write(
                "%d,%d,%d,%s,%s,%s,%s,%s,%s\n"
                % (
                    row["rep"],
                    row["seed"],
                    row["j"],
                    _fmt(row["a_j"]),
                    _fmt(row["delta_bar"]),
                    _fmt(row["ddelta"]),
                    _fmt(row["s0_hat"]),
                    _fmt(row["alpha_hat"]),
                    row["case"],
                )
            )
    mse_path = os.path.join(out_dir, "mse_table.csv")
    with open(mse_path, "w") as handle:
        handle.write("j,a_j,n,mse_delta_bar,mse_ddelta,mse_s0_hat,mse_alpha_hat\n")
        for i, j in enumerate(table.js):
            handle.write(
                "%d,%s,%d,%s,%s,%s,%s\n"
                % (
                    j,
                    _fmt(table.a_js[i]),
                    table.counts[i],
                    _fmt(table.mse_delta_bar[i]),
                    _fmt(table.mse_ddelta[i]),
                    _fmt(table.mse_s0_hat[i]),
                    _fmt(table.mse_alpha_hat[i]),
                )
            )
    with open(os.path.join(out_dir, "summary.json"), "w") as handle:
        json.dump(summary_json(table), handle, indent=2, sort_keys=True)
        handle.write("\n")
    return rep_path, mse_path


def summary_json(table):
    """Machine-readable form of the aggregated table."""
    return {
        "replications": table.replications,
        "failed": len(table.failures),
        "failures": [list(f) for f in table.failures],
        "targets": dict(table.targets),
        "per_j": [
            {
                "j": table.js[i],
                "a_j": table.a_js[i],
                "n": table.counts[i],
                "mse_delta_bar": table.mse_delta_bar[i],
                "mse_ddelta": table.mse_ddelta[i],
                "mse_s0_hat": table.mse_s0_hat[i],
                "mse_alpha_hat": table.mse_alpha_hat[i],
            }
            for i in range(len(table.js))
        ],
    }


def summarize(table):
    """Aligned text report, one block per scale level."""
    if not table.js:
        raise ValueError("summarize: table has no levels")
    t = table.targets
    lines = [
        "replications: %d (%d failed)"
        % (table.replications, len(table.failures)),
        "targets: s0 = %.6g, alpha = %.6g, mean square -> %.6g, "
        "difference -> %.6g"
        % (t["s0"], t["alpha"], t["delta_bar"], t["ddelta"]),
        "",
        "%3s %8s %5s %14s %14s %14s %14s"
        % ("j", "a_j", "n", "mse(mean sq)", "mse(diff)", "mse(s0)", "mse(alpha)"),
    ]
    for i, j in enumerate(table.js):
        def cell(value):
            return "%14.6g" % value if value is not None else "%14s" % "-"

        lines.append(
            "%3d %8g %5d %s %s %s %s"
            % (
                j,
                table.a_js[i],
                table.counts[i],
                cell(table.mse_delta_bar[i]),
                cell(table.mse_ddelta[i]),
                cell(table.mse_s0_hat[i]),
                cell(table.mse_alpha_hat[i]),
            )
        )
    return "\n".join(lines) + "\n"
