"""Dynamics evaluation grid: methods x training epochs x horizons.

Every cell is trained and scored per seed; the report carries mean and
standard error over seeds. Per-run rows (method, epochs, horizon, seed,
rmse) stream to an optional sink as they are produced.
"""

import csv
import json
import math
from dataclasses import dataclass, field

from ..dynamics import (
    DynModelSpec,
    Normalizer,
    V2SDynamics,
    multistep_rmse,
    train_baseline,
)
from ..errors import InputError, MissingArtifactError
from ..seeding import derive_seed

BASELINE_KINDS = ("PNN", "DNN", "DE", "PE")


@dataclass
class EvalReport:
    rows: list[dict]
    metadata: dict = field(default_factory=dict)

    def cell(self, method: str, epochs: int, horizon) -> dict:
        for row in self.rows:
            if (
                row["method"] == method
                and row["epochs"] == epochs
                and str(row["horizon"]) == str(horizon)
            ):
                return row
        raise InputError(f"missing report cell ({method}, {epochs}, {horizon})")

    def write_csv(self, path) -> None:
        cols = ["method", "epochs", "horizon", "rmse_mean", "rmse_stderr", "seed_count"]
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=cols)
            writer.writeheader()
            for row in self.rows:
                writer.writerow({c: row[c] for c in cols})

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(
                {"rows": self.rows, "metadata": self.metadata},
                fh,
                indent=2,
                sort_keys=True,
            )


def _aggregate(samples: dict, methods, epochs_list, horizons, seeds) -> list[dict]:
    rows = []
    for method in methods:
        for epochs in epochs_list:
            for horizon in horizons:
                values = []
                for seed in seeds:
                    key = (method, epochs, str(horizon), seed)
                    if key not in samples:
                        raise InputError(
                            f"missing evaluation cell (method={method}, "
                            f"epochs={epochs}, horizon={horizon}, seed={seed})"
                        )
                    values.append(samples[key])
                n = len(values)
                mean = sum(values) / n
                if n > 1:
                    var = sum((v - mean) ** 2 for v in values) / (n - 1)
                    stderr = math.sqrt(var / n)
                else:
                    stderr = 0.0
                rows.append(
                    {
                        "method": method,
                        "epochs": epochs,
                        "horizon": str(horizon),
                        "rmse_mean": mean,
                        "rmse_stderr": stderr,
                        "seed_count": n,
                    }
                )
    return rows


def dynamics_report(
    methods,
    train_trajectories,
    eval_trajectories,
    epochs_list=(1, 5, 10),
    horizons=(2, 5, "full"),
    seeds=(0, 1, 2),
    v2s_provider=None,
    baseline_spec=None,
    max_windows: int = 4,
    metadata: dict | None = None,
    row_sink=None,
) -> EvalReport:
    """Run the full evaluation grid and aggregate over seeds.

    ``v2s_provider(seed, epochs)`` must return a V2SDynamics built from
    checkpoints adapted for that many epochs under that seed; required when
    "V2S" is among the methods. ``baseline_spec(kind)`` may override the
    default DynModelSpec. Raises MissingArtifactError if a provider cannot
    supply a required checkpoint, naming the cell.
    """
    if not eval_trajectories or not train_trajectories:
        raise InputError("need non-empty train and eval trajectory sets")
    for m in methods:
        if m != "V2S" and m not in BASELINE_KINDS:
            raise InputError(f"unknown method {m!r}")
    if "V2S" in methods and v2s_provider is None:
        raise MissingArtifactError(
            "V2S rows need a checkpoint provider", stage="distill"
        )
    normalizer = Normalizer.fit(train_trajectories)
    epochs_sorted = sorted(set(int(e) for e in epochs_list))
    samples = {}

    def record(method, epochs, seed, rmse_by_h):
        for horizon in horizons:
            key = "full" if horizon == "full" else int(horizon)
            value = rmse_by_h[key]
            samples[(method, epochs, str(horizon), seed)] = value
            if row_sink is not None:
                row_sink(
                    {
                        "method": method,
                        "epochs": epochs,
                        "horizon": str(horizon),
                        "seed": seed,
                        "rmse": value,
                    }
                )

    for seed in seeds:
        for method in methods:
            if method == "V2S":
                for epochs in epochs_sorted:
                    dyn = v2s_provider(seed, epochs)
                    if not isinstance(dyn, V2SDynamics):
                        raise InputError("v2s_provider must return a V2SDynamics")
                    record(
                        method,
                        epochs,
                        seed,
                        multistep_rmse(
                            dyn, eval_trajectories, horizons, normalizer, max_windows
                        ),
                    )
                continue
            spec = (
                baseline_spec(method) if baseline_spec is not None else DynModelSpec(method)
            )
            snapshots = {}
            train_baseline(
                spec,
                train_trajectories,
                epochs=max(epochs_sorted),
                seed=derive_seed(seed, "baseline", method),
                normalizer=normalizer,
                snapshot_epochs=tuple(epochs_sorted),
                snapshot_cb=lambda e, m: snapshots.update({e: m}),
            )
            for epochs in epochs_sorted:
                record(
                    method,
                    epochs,
                    seed,
                    multistep_rmse(
                        snapshots[epochs],
                        eval_trajectories,
                        horizons,
                        normalizer,
                        max_windows,
                    ),
                )

    rows = _aggregate(samples, methods, epochs_sorted, horizons, seeds)
    return EvalReport(rows=rows, metadata=metadata or {})
