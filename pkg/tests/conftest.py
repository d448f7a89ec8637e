"""Shared fixtures: scenario paths and small world factories."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "src" / "swarmsteer" / "scenarios"
SCRIPT_DIR = SCENARIO_DIR / "scripts"

ALL_SCENARIOS = [
    "case1_outside.json",
    "case1_inside.json",
    "case2_switch.json",
    "case3_obstacles.json",
    "tableI.json",
]


@pytest.fixture(scope="session")
def scenario_dir() -> Path:
    return SCENARIO_DIR


def scenario_path(name: str) -> Path:
    return SCENARIO_DIR / name


def load_script(name: str) -> list[dict]:
    with open(SCRIPT_DIR / name, encoding="utf-8") as fh:
        return json.load(fh)


CRITERION_RESULTS: list[tuple[int, str]] = []


def record_criterion(n: int, status: str) -> None:
    CRITERION_RESULTS.append((n, status))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if CRITERION_RESULTS:
        terminalreporter.section("acceptance criteria")
        for n, status in sorted(CRITERION_RESULTS):
            terminalreporter.write_line(f"CRITERION {n}: {status}")


def minimal_doc(**overrides) -> dict:
    """A tiny valid scenario document; override fields per test."""
    doc = {
        "robots": [[0.0, 0.0], [60.0, 0.0], [30.0, 50.0]],
        "fires": [],
        "obstacles": [],
        "topology": {"radius": 1e9},
        "weights": {},
        "dt": 0.02,
    }
    doc.update(overrides)
    return doc
