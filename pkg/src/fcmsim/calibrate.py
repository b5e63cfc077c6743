"""Sweep engine configurations against the recorded reference outcomes.

The tool the bundled scenarios were originally built in does not
document its update rule, so exact magnitudes cannot be promised by
any one config. This module runs every kernel x squash x steepness
combination from a fixed grid over the three bundled scenarios and
scores each config by mean absolute deviation (MAD) and sign agreement
against the recorded reference cells, with the documented sign
corrections applied. The sweep order, and therefore the report, is
deterministic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .fixtures import (
    FIXTURE_IDS,
    ReferenceOutcomes,
    load_fixture_document,
    load_reference_outcomes,
)
from .inference import (
    InferenceConfig,
    KernelKind,
    KernelSpec,
    SquashKind,
    SquashSpec,
    run_scenario,
)

KERNELS = (KernelKind.KOSKO, KernelKind.MODIFIED_KOSKO, KernelKind.RESCALED)
SQUASHES = (SquashKind.LOGISTIC, SquashKind.TANH, SquashKind.LINEAR_CLIP)
STEEPNESS_GRID = (0.5, 1.0, 2.0, 5.0)

_SIGN_EPS = 1e-9


def _sign(x: float) -> int:
    if x > _SIGN_EPS:
        return 1
    if x < -_SIGN_EPS:
        return -1
    return 0


@dataclass(frozen=True)
class CalibrationRow:
    """Score of one config over every reference cell."""

    kernel: KernelKind
    squash: SquashKind
    steepness: float
    mad: float
    sign_agreement: float  # fraction of cells with matching sign
    cells: int
    non_converged_runs: int


@dataclass(frozen=True)
class Residual:
    fixture_id: str
    concept_id: str
    engine: float
    reference: float

    @property
    def deviation(self) -> float:
        return abs(self.engine - self.reference)


@dataclass(frozen=True)
class CalibrationReport:
    rows: tuple[CalibrationRow, ...]
    best: CalibrationRow
    # per-cell residuals for the best config, in fixture then model order
    residuals: tuple[Residual, ...]


def _score_config(
    config: InferenceConfig,
    reference: ReferenceOutcomes,
    collect: bool,
) -> tuple[CalibrationRow, tuple[Residual, ...]]:
    deviations: list[float] = []
    agreements = 0
    cells = 0
    non_converged = 0
    residuals: list[Residual] = []
    for fixture_id in FIXTURE_IDS:
        document = load_fixture_document(fixture_id)
        scenario = document.scenarios[0]
        outcome = run_scenario(document.model, scenario, config)
        if not outcome.clamped.converged or not outcome.baseline.converged:
            non_converged += 1
        expected = reference.corrected(fixture_id)
        for concept in document.model.concepts:
            if concept.id not in expected:
                continue
            engine = outcome.relative_change[concept.id]
            target = expected[concept.id]
            deviations.append(abs(engine - target))
            if _sign(engine) == _sign(target):
                agreements += 1
            cells += 1
            if collect:
                residuals.append(
                    Residual(
                        fixture_id=fixture_id,
                        concept_id=concept.id,
                        engine=engine,
                        reference=target,
                    )
                )
    row = CalibrationRow(
        kernel=config.kernel.kind,
        squash=config.squash.kind,
        steepness=config.squash.steepness,
        mad=math.fsum(deviations) / cells if cells else 0.0,
        sign_agreement=agreements / cells if cells else 1.0,
        cells=cells,
        non_converged_runs=non_converged,
    )
    return row, tuple(residuals)


def sweep_configs() -> tuple[InferenceConfig, ...]:
    """The full grid, in the fixed documented order."""
    configs = []
    for kernel in KERNELS:
        for squash in SQUASHES:
            for steepness in STEEPNESS_GRID:
                configs.append(
                    InferenceConfig(
                        kernel=KernelSpec(kernel),
                        squash=SquashSpec(kind=squash, steepness=steepness),
                    )
                )
    return tuple(configs)


def run_calibration() -> CalibrationReport:
    """Score every grid config; best = lowest MAD (grid order breaks ties)."""
    reference = load_reference_outcomes()
    rows: list[CalibrationRow] = []
    for config in sweep_configs():
        row, _ = _score_config(config, reference, collect=False)
        rows.append(row)
    best = min(rows, key=lambda r: r.mad)
    best_config = InferenceConfig(
        kernel=KernelSpec(best.kernel),
        squash=SquashSpec(kind=best.squash, steepness=best.steepness),
    )
    _, residuals = _score_config(best_config, reference, collect=True)
    return CalibrationReport(rows=tuple(rows), best=best, residuals=residuals)


def report_to_obj(report: CalibrationReport) -> dict:
    def row_obj(row: CalibrationRow) -> dict:
        return {
            "kernel": row.kernel.value,
            "squash": row.squash.value,
            "steepness": row.steepness,
            "mad": row.mad,
            "sign_agreement": row.sign_agreement,
            "cells": row.cells,
            "non_converged_runs": row.non_converged_runs,
        }

    return {
        "rows": [row_obj(r) for r in report.rows],
        "best": row_obj(report.best),
        "residuals": [
            {
                "fixture": r.fixture_id,
                "concept": r.concept_id,
                "engine": r.engine,
                "reference": r.reference,
                "deviation": r.deviation,
            }
            for r in report.residuals
        ],
    }


def render_markdown(report: CalibrationReport) -> str:
    """Markdown report: sweep table, best config, residual table."""
    lines = [
        "# Calibration report",
        "",
        "Every engine config from the sweep grid, scored against the",
        "recorded reference outcomes of the three bundled scenarios",
        "(sign-corrected cells evaluated with their corrected sign).",
        "MAD is the mean absolute deviation over all reference cells.",
        "",
        "| kernel | squash | steepness | MAD | sign agreement | non-converged runs |",
        "|---|---|---:|---:|---:|---:|",
    ]
    for row in report.rows:
        lines.append(
            f"| {row.kernel.value} | {row.squash.value} | {row.steepness:g} "
            f"| {row.mad:.4f} | {row.sign_agreement:.1%} | {row.non_converged_runs} |"
        )
    best = report.best
    lines += [
        "",
        "## Best config",
        "",
        f"- kernel: `{best.kernel.value}`",
        f"- squash: `{best.squash.value}`",
        f"- steepness: {best.steepness:g}",
        f"- MAD: {best.mad:.4f} over {best.cells} cells",
        f"- sign agreement: {best.sign_agreement:.1%}",
        "",
        "## Residuals of the best config",
        "",
        "| scenario | concept | engine | reference | deviation |",
        "|---|---|---:|---:|---:|",
    ]
    for r in report.residuals:
        lines.append(
            f"| {r.fixture_id} | {r.concept_id} | {r.engine:+.4f} "
            f"| {r.reference:+.2f} | {r.deviation:.4f} |"
        )
    return "\n".join(lines) + "\n"
