"""Bundled example scenarios and their recorded reference outcomes.

Three ready-to-run documents ship inside the package under stable,
well-known ids. Each bundles one weighted model with one clamp
scenario; the three share a single structural skeleton (same concepts,
same edge pairs) and differ only in weights and clamp values. The
accompanying reference table holds the per-concept outcome values
recorded for these scenarios by the tool they were originally built
in, which the calibration sweep measures itself against.

A few reference cells are listed under ``sign_corrections``: their
printed sign contradicts both the surrounding prose and the edge signs
of the corresponding model, so comparisons treat the flipped sign as
the intended one.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .io import ModelDocument, read_document

FIXTURE_IDS = ("paper-scenario-1", "paper-scenario-2", "paper-scenario-3")


class UnknownFixture(ValueError):
    def __init__(self, fixture_id: str):
        known = ", ".join(FIXTURE_IDS)
        super().__init__(f"unknown fixture {fixture_id!r} (known: {known})")
        self.fixture_id = fixture_id


def _data_text(filename: str) -> str:
    return (resources.files("fcmsim") / "data" / filename).read_text(encoding="utf-8")


def _check_id(fixture_id: str) -> None:
    if fixture_id not in FIXTURE_IDS:
        raise UnknownFixture(fixture_id)


def load_fixture_text(fixture_id: str) -> str:
    """The raw document text of a bundled fixture."""
    _check_id(fixture_id)
    return _data_text(f"{fixture_id}.json")


def load_fixture_document(fixture_id: str) -> ModelDocument:
    """A bundled fixture, parsed: model + its single clamp scenario."""
    return read_document(load_fixture_text(fixture_id))


def load_fixture_matrix(fixture_id: str) -> str:
    """The same fixture's weights in the delimited grid format."""
    _check_id(fixture_id)
    return _data_text(f"{fixture_id}.csv")


@dataclass(frozen=True)
class ReferenceOutcomes:
    """Recorded outcome values to compare engine output against.

    ``cells`` holds the values exactly as printed in the source
    material; ``sign_corrections`` lists cells whose printed sign is
    wrong. ``corrected`` applies those flips.
    """

    cells: dict[str, dict[str, float]]
    sign_corrections: dict[str, tuple[str, ...]]

    def corrected(self, fixture_id: str) -> dict[str, float]:
        flips = set(self.sign_corrections.get(fixture_id, ()))
        return {
            cid: -value if cid in flips else value
            for cid, value in self.cells[fixture_id].items()
        }

    def cell_count(self) -> int:
        return sum(len(row) for row in self.cells.values())


def load_reference_outcomes() -> ReferenceOutcomes:
    obj = json.loads(_data_text("reference-outcomes.json"))
    return ReferenceOutcomes(
        cells={
            fid: {str(c): float(v) for c, v in row.items()}
            for fid, row in obj["cells"].items()
        },
        sign_corrections={
            fid: tuple(ids) for fid, ids in obj["sign_corrections"].items()
        },
    )
