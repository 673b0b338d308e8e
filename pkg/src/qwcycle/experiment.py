"""Run configs and sweeps, write CSV.

``distributions.csv``: ``t, x, p_noG, p_withG``

``metrics.csv``: ``tau, t, d, d0, D, C, C_1..C_M, c_1..c_M``

* ``d`` compares the configured run with and without its gate.
* ``d0`` and ``C_0(m)`` come from the same config with the noise removed
  (the reference run).  ``D = d/d0``, ``c_m = C_m / C_0(m)``.
* ``C`` and ``C_m`` describe the run without the gate.

Undefined values (no reference, zero denominator, no bins on a line,
``tau`` off an odd cycle) are written as empty fields.  Floats use 17
significant digits so files round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import _kernels
from .config import (
    MAX_SWEEP_POINTS,
    ExperimentConfig,
    SweepSpec,
    build_config,
    parse_lines,
    split_sweep,
)
from .errors import ValidationError
from .evolution import EvolutionRecord, evolve
from .observables import UNDEFINED_BELOW, kolmogorov_distance

PRESETS = ("fig1", "fig2", "fig3", "fig4")


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return ""
    return format(value, ".17g")


def _ratio(num, den):
    if den is None or num is None or abs(den) < UNDEFINED_BELOW:
        return None
    return num / den


@dataclass
class ExperimentResult:
    dist_header: list[str]
    dist_rows: list[list]
    metric_header: list[str]
    metric_rows: list[list]


def _pair(cfg: ExperimentConfig, spec) -> tuple[EvolutionRecord, EvolutionRecord]:
    kw = dict(record_every=cfg.record_every, coherence_M=cfg.coherence_M)
    _, plain = evolve(spec.without_gate(), **kw)
    if spec.gate is None:
        return plain, plain
    _, gated = evolve(spec, **{**kw, "coherence_M": None})
    return plain, gated


def _distances(a: EvolutionRecord, b: EvolutionRecord) -> list[float]:
    return [kolmogorov_distance(p, q) for p, q in zip(a.distributions, b.distributions)]


def compute(cfg: ExperimentConfig) -> ExperimentResult:
    spec = cfg.run
    M = cfg.coherence_M
    plain, gated = _pair(cfg, spec)
    d = _distances(plain, gated)

    ref_plain = None
    d0 = [None] * len(d)
    if cfg.reference_run:
        if spec.noise is None:
            ref_plain, d0 = plain, list(d)
        else:
            ref_plain, ref_gated = _pair(cfg, spec.noiseless())
            d0 = _distances(ref_plain, ref_gated)

    half = spec.half
    n_bins = M or 0
    metric_header = ["tau", "t", "d", "d0", "D", "C"]
    metric_header += [f"C_{m}" for m in range(1, n_bins + 1)]
    metric_header += [f"c_{m}" for m in range(1, n_bins + 1)]
    metric_rows = []
    for i, t in enumerate(plain.steps):
        tau = t / half if half else None
        if plain.coherence is not None:
            prof = plain.coherence[i]
            total, bins = prof.total, list(prof.bins)
        else:
            total, bins = None, [None] * n_bins
        if ref_plain is not None and ref_plain.coherence is not None:
            ref_bins = ref_plain.coherence[i].bins
            c = [_ratio(b, r) for b, r in zip(bins, ref_bins)]
        else:
            c = [None] * n_bins
        row = [tau, int(t), d[i], d0[i], _ratio(d[i], d0[i]), total, *bins, *c]
        metric_rows.append(row)

    dist_rows = []
    if cfg.write_distributions:
        labels = plain.labels
        for i, t in enumerate(plain.steps):
            p, q = plain.distributions[i], gated.distributions[i]
            for x, pv, qv in zip(labels, p, q):
                dist_rows.append([int(t), int(x), pv, qv])
    return ExperimentResult(["t", "x", "p_noG", "p_withG"], dist_rows, metric_header, metric_rows)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="")


def _prepare(output_dir) -> Path:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise PermissionError(f"output directory {out} is not writable")
    return out


def run_experiment(cfg: ExperimentConfig, output_dir) -> list[Path]:
    """Write ``metrics.csv`` (and ``distributions.csv``) for one config."""
    out = _prepare(output_dir)
    res = compute(cfg)
    written = []
    if cfg.write_distributions:
        _write(out / "distributions.csv", _csv_text(res.dist_header, res.dist_rows))
        written.append(out / "distributions.csv")
    _write(out / "metrics.csv", _csv_text(res.metric_header, res.metric_rows))
    written.append(out / "metrics.csv")
    return written


def _sweep_point(args):
    backend, base, point = args
    if _kernels.get_backend() != backend:
        _kernels.set_backend(backend)
    cfg = build_config({**base, **point})
    return compute(cfg)


def run_sweep(spec: SweepSpec, output_dir, jobs: int = 1, cap: int = MAX_SWEEP_POINTS) -> list[Path]:
    """Evaluate every grid point and write ``sweep.csv``.

    Points are independent; with ``jobs > 1`` they run in a process pool
    and are merged back in grid order.
    """
    points = spec.points(cap)
    for point in points:
        build_config({**spec.base, **point})
    out = _prepare(output_dir)
    tasks = [(_kernels.get_backend(), spec.base, p) for p in points]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(task) for task in tasks]

    axis_cols = list(spec.axes)
    metric_rows, dist_rows = [], []
    for point, res in zip(points, results):
        prefix = [point[k] for k in axis_cols]
        metric_rows += [prefix + row for row in res.metric_rows]
        dist_rows += [prefix + row for row in res.dist_rows]
    header = axis_cols + results[0].metric_header
    _write(out / "sweep.csv", _csv_text(header, metric_rows))
    written = [out / "sweep.csv"]
    if dist_rows:
        _write(out / "sweep_distributions.csv", _csv_text(axis_cols + results[0].dist_header, dist_rows))
        written.append(out / "sweep_distributions.csv")
    return written


def run_text(text: str, output_dir, jobs: int = 1, overrides: dict | None = None) -> list[Path]:
    """Dispatch a config text to a run or a sweep depending on ``sweep.*`` keys."""
    raw = parse_lines(text)
    raw.update(overrides or {})
    spec = split_sweep(raw)
    if spec.axes:
        return run_sweep(spec, output_dir, jobs=jobs)
    return run_experiment(build_config(spec.base), output_dir)


def preset_files(name: str) -> list[tuple[str, str]]:
    """``(stem, text)`` for each config shipped with a preset, sorted by name."""
    if name not in PRESETS:
        raise ValidationError(f"unknown preset {name!r}; choose from {PRESETS}", "preset")
    root = resources.files("qwcycle").joinpath("presets", name)
    files = sorted((p for p in root.iterdir() if p.name.endswith(".cfg")), key=lambda p: p.name)
    return [(p.name[:-4], p.read_text()) for p in files]


def run_preset(name: str, output_dir, jobs: int = 1, overrides: dict | None = None) -> list[Path]:
    written = []
    for stem, text in preset_files(name):
        written += run_text(text, Path(output_dir) / name / stem, jobs=jobs, overrides=overrides)
    return written

