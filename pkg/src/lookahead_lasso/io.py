"""CSV and JSON readers/writers.

Floats are written with ``repr`` (shortest round-trip form), so reading a
file back reproduces the in-memory values exactly.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .data import DataError
from .path import PathResult, StopReason, Strategy
from .screening import ScreenMask, Source

STEP_FIELDS = [
    "step",
    "lambda",
    "dev_ratio",
    "n_active",
    "passes",
    "wall_time",
    "n_screened_lookahead",
    "n_screened_dynamic",
]
SCREENMAP_FIELDS = ["step", "lambda", "predictor", "discarded", "source"]
BENCH_FIELDS = [
    "snr",
    "strategy",
    "repetition",
    "seed",
    "wall_time_s",
    "total_passes",
    "total_coord_updates",
    "steps_done",
]


class InputError(DataError):
    """Malformed input file."""


def read_input_csv(path) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Read ``y`` and the predictor matrix from a CSV with a header row.

    The first column must be named ``y``. Returns ``(X, y, predictor_names)``.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f"input file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise InputError(f"{path}: empty file")
        header = [h.strip() for h in header]
        if not header or header[0] != "y":
            raise InputError(f"{path}: first column must be named 'y', got {header[:1]}")
        if len(header) < 2:
            raise InputError(f"{path}: no predictor columns")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise InputError(
                    f"{path}: row {lineno} has {len(row)} fields, expected {len(header)}"
                )
            values = []
            for col, cell in enumerate(row):
                try:
                    v = float(cell)
                except ValueError:
                    v = math.nan
                if not math.isfinite(v):
                    raise InputError(
                        f"{path}: row {lineno}, column {col + 1} ({header[col]!r}):"
                        f" not a finite number: {cell!r}"
                    )
                values.append(v)
            rows.append(values)
    if len(rows) < 2:
        raise InputError(f"{path}: need at least 2 data rows, got {len(rows)}")
    data = np.array(rows)
    return data[:, 1:], data[:, 0], header[1:]


def write_input_csv(path, X, y, names=None) -> None:
    X = np.asarray(X)
    if names is None:
        names = [f"x{j}" for j in range(X.shape[1])]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["y", *names])
        for yi, row in zip(y, X):
            w.writerow([repr(float(yi)), *(repr(float(v)) for v in row)])


def _num(s: str):
    v = float(s)
    return int(v) if s.lstrip("-").isdigit() else v


def _write_rows(path, fields, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(fields)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def step_rows(result: PathResult) -> list[list]:
    look = result.n_screened(Source.LOOK_AHEAD)
    dyn = result.n_screened(Source.GAP_SAFE_DYNAMIC)
    n_active = result.n_active
    return [
        [
            k,
            float(result.lambdas[k]),
            float(result.dev_ratios[k]),
            int(n_active[k]),
            int(result.passes[k]),
            float(result.wall_times[k]),
            int(look[k]),
            int(dyn[k]),
        ]
        for k in range(result.steps_done)
    ]


def write_steps_csv(path, result: PathResult) -> None:
    _write_rows(path, STEP_FIELDS, step_rows(result))


def read_steps_csv(path) -> list[dict]:
    return [{k: _num(v) for k, v in row.items()} for row in _read_rows(path)]


def screenmap_rows(mask: ScreenMask, lambdas, predictors=None, index_map=None, steps=None):
    """Long-format rows (step, lambda, predictor, discarded, source).

    ``predictors`` selects a subset (internal indices); ``index_map`` maps
    internal indices to the labels written in the predictor column.
    """
    p, K = mask.shape
    if predictors is None:
        predictors = range(p)
    if steps is None:
        steps = range(K)
    rows = []
    for k in steps:
        for j in predictors:
            label = int(j) if index_map is None else int(index_map[j])
            rows.append([
                int(k),
                float(lambdas[k]),
                label,
                int(mask.discard[j, k]),
                Source(mask.source[j, k]).label,
            ])
    return rows


def write_screenmap_csv(path, mask: ScreenMask, lambdas, predictors=None, index_map=None) -> None:
    _write_rows(path, SCREENMAP_FIELDS, screenmap_rows(mask, lambdas, predictors, index_map))


def read_screenmap_csv(path, p: int | None = None):
    """Rebuild ``(mask, lambdas, predictors)`` from a screenmap CSV.

    Predictor labels are mapped onto rows of the mask in order of first
    appearance; ``predictors`` lists those labels.
    """
    rows = _read_rows(path)
    steps = sorted({int(r["step"]) for r in rows})
    labels = list(dict.fromkeys(int(r["predictor"]) for r in rows))
    pos = {lab: i for i, lab in enumerate(labels)}
    K = steps[-1] + 1
    mask = ScreenMask(p or len(labels), K)
    lambdas = np.full(K, np.nan)
    for r in rows:
        j, k = pos[int(r["predictor"])], int(r["step"])
        lambdas[k] = float(r["lambda"])
        mask.discard[j, k] = r["discarded"] == "1"
        mask.source[j, k] = Source.from_label(r["source"])
    return mask, lambdas, labels


def write_bench_csv(path, rows: list[dict]) -> None:
    _write_rows(path, BENCH_FIELDS, [[row[f] for f in BENCH_FIELDS] for row in rows])


def read_bench_csv(path) -> list[dict]:
    out = []
    for row in _read_rows(path):
        row = dict(row)
        for f in BENCH_FIELDS:
            if f != "strategy":
                row[f] = _num(row[f])
        out.append(row)
    return out


def result_to_dict(result: PathResult) -> dict:
    return {
        "strategy": result.strategy.value,
        "stop_reason": result.stop_reason.value,
        "lambdas": result.lambdas.tolist(),
        "betas": result.betas.T.tolist(),
        "dev_ratios": result.dev_ratios.tolist(),
        "gaps": result.gaps.tolist(),
        "infeas": result.infeas.tolist(),
        "passes": result.passes.tolist(),
        "coord_updates": result.coord_updates.tolist(),
        "wall_times": result.wall_times.tolist(),
        "mask": {
            "shape": list(result.mask.shape),
            "discard": np.argwhere(result.mask.discard).tolist(),
            "source": [int(result.mask.source[j, k]) for j, k in np.argwhere(result.mask.discard)],
        },
    }


def result_from_dict(d: dict) -> PathResult:
    p, K = d["mask"]["shape"]
    mask = ScreenMask(p, K)
    for (j, k), src in zip(d["mask"]["discard"], d["mask"]["source"]):
        mask.discard[j, k] = True
        mask.source[j, k] = src
    betas = np.array(d["betas"], dtype=float).reshape(-1, p).T
    return PathResult(
        betas=betas,
        lambdas=np.array(d["lambdas"], dtype=float),
        dev_ratios=np.array(d["dev_ratios"], dtype=float),
        gaps=np.array(d["gaps"], dtype=float),
        infeas=np.array(d["infeas"], dtype=float),
        mask=mask,
        passes=np.array(d["passes"], dtype=np.int64),
        coord_updates=np.array(d["coord_updates"], dtype=np.int64),
        wall_times=np.array(d["wall_times"], dtype=float),
        stop_reason=StopReason(d["stop_reason"]),
        strategy=Strategy(d["strategy"]),
    )


def write_result_json(path, result: PathResult, **extra) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({**result_to_dict(result), **extra}, fh)


def read_result_json(path) -> PathResult:
    with open(path, encoding="utf-8") as fh:
        return result_from_dict(json.load(fh))
