"""Regenerate the golden fixtures: ``python3 tests/regen_fixtures.py``.

The worked-example moments are fixed input and are not rewritten.  The
analyze report is the golden CLI output, and the eight-atom sequence comes
from a seeded synthetic measure whose atoms are stored next to it.
"""

from __future__ import annotations

import contextlib
import io
import json
import random
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
FIXTURES = HERE.parent / "fixtures"
sys.path.insert(0, str(HERE))

from momentlab.cli import main  # noqa: E402
from momentlab.moments import moments_from_atoms  # noqa: E402
from synth import densities, eight_on_cubic  # noqa: E402

EIGHT_ATOMS_SEED = 8


def eight_atom_measure():
    rng = random.Random(EIGHT_ATOMS_SEED)
    atoms = eight_on_cubic(rng)
    rho = densities(rng, len(atoms))
    return atoms, rho


def analyze_output(path: Path) -> str:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        main(["analyze", str(path)])
    return buf.getvalue()


def regenerate() -> None:
    atoms, rho = eight_atom_measure()
    beta = moments_from_atoms(atoms, rho, 3)
    (FIXTURES / "eight-atoms.json").write_text(beta.to_json() + "\n", encoding="utf-8")
    planted = {"atoms": [[str(x), str(y)] for x, y in atoms], "densities": [str(r) for r in rho]}
    (FIXTURES / "eight-atoms.atoms.json").write_text(json.dumps(planted, indent=2) + "\n", encoding="utf-8")
    report = analyze_output(FIXTURES / "worked-example.json")
    (FIXTURES / "worked-example.report.json").write_text(report, encoding="utf-8")


if __name__ == "__main__":
    regenerate()
