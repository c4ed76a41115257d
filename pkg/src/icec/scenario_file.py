"""Flat key=value scenario files.

Example::

    # Br + Cl- pair at three distances
    capture_species = ../species/br.species
    neighbor { species = ../species/cl_minus.species; R_nm = 1.0; count = 1 }
    neighbor {
        species = ../species/cl_minus.species
        R_angstrom = 20
    }
    grid.start_eV = 0.05
    grid.stop_eV = 1.0
    grid.points = 25
    grid.spacing = log
    options.C_S = 1
    options.wigner_extension = false

Statements are separated by newlines or ``;``; ``#`` starts a comment.
Relative paths are resolved against the scenario file's directory.
Problems with the file itself raise :class:`ScenarioSchemaError` with a line
number; problems with the referenced data surface later, when the species
files are loaded.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import Neighbor, ScanOptions, Scenario
from .errors import ScenarioSchemaError
from .units import Length, ev_to_hartree
from .xs_tables import load_species

_TOKEN = re.compile(
    r"\s*(?:(?P<open>neighbor\s*\{)|(?P<close>\})|(?P<sep>;)|(?P<key>[A-Za-z_][\w.]*)\s*=\s*(?P<value>[^;{}]*))"
)

_TOP_KEYS = {
    "capture_species",
    "grid.start_eV",
    "grid.stop_eV",
    "grid.points",
    "grid.spacing",
    "options.C_S",
    "options.wigner_extension",
}
_BLOCK_KEYS = {"species", "R_nm", "R_angstrom", "count"}
_REQUIRED_TOP = ("capture_species", "grid.start_eV", "grid.stop_eV", "grid.points")
_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


@dataclass(frozen=True)
class GridSpec:
    start_eV: float
    stop_eV: float
    points: int
    spacing: str = "linear"

    def energies_eV(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.start_eV])
        if self.spacing == "log":
            return np.geomspace(self.start_eV, self.stop_eV, self.points)
        return np.linspace(self.start_eV, self.stop_eV, self.points)


@dataclass(frozen=True)
class NeighborSpec:
    species: Path
    distance: Length
    count: int
    line: int


@dataclass(frozen=True)
class ScenarioConfig:
    path: Path
    capture_species: Path
    neighbors: tuple[NeighborSpec, ...]
    grid: GridSpec
    options: ScanOptions = field(default_factory=ScanOptions)

    def build(self) -> Scenario:
        """Load the referenced species files (data errors propagate)."""
        cache: dict[Path, object] = {}

        def species(p: Path):
            if p not in cache:
                cache[p] = load_species(p)
            return cache[p]

        capture = species(self.capture_species)
        neighbors = [Neighbor(species(n.species), n.distance, n.count) for n in self.neighbors]
        return Scenario(capture, neighbors, ev_to_hartree(self.grid.energies_eV()), self.options)


def _fail(msg: str, line: int | None, path) -> ScenarioSchemaError:
    return ScenarioSchemaError(msg, line=line, path=str(path))


def _number(value: str, key: str, line: int, path, kind=float):
    try:
        x = kind(value)
    except ValueError:
        raise _fail(f"{key} expects {'an integer' if kind is int else 'a number'}, got {value!r}", line, path) from None
    if kind is float and not math.isfinite(x):
        raise _fail(f"{key} must be finite", line, path)
    return x


def _bool(value: str, key: str, line: int, path) -> bool:
    v = value.lower()
    if v in _TRUE:
        return True
    if v in _FALSE:
        return False
    raise _fail(f"{key} expects true/false, got {value!r}", line, path)


def _statements(text: str, path):
    """Yield (kind, key, value, line) with kind in {'kv', 'open', 'close'}."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if not line[pos:].strip():
                break
            m = _TOKEN.match(line, pos)
            if not m or m.end() == pos:
                raise _fail(f"cannot parse {line[pos:].strip()!r}", lineno, path)
            pos = m.end()
            if m.group("open"):
                yield "open", None, None, lineno
            elif m.group("close"):
                yield "close", None, None, lineno
            elif m.group("key"):
                value = m.group("value").strip()
                if not value:
                    raise _fail(f"empty value for {m.group('key')}", lineno, path)
                yield "kv", m.group("key"), value, lineno


def _neighbor(block: dict, start: int, base: Path, path) -> NeighborSpec:
    if "species" not in block:
        raise _fail("neighbor block without species", start, path)
    has_nm, has_a = "R_nm" in block, "R_angstrom" in block
    if has_nm == has_a:
        raise _fail("neighbor block needs exactly one of R_nm or R_angstrom", start, path)
    key = "R_nm" if has_nm else "R_angstrom"
    value, line = block[key]
    r = _number(value, key, line, path)
    if r <= 0:
        raise _fail(f"{key} must be > 0", line, path)
    count = 1
    if "count" in block:
        count = _number(block["count"][0], "count", block["count"][1], path, int)
        if count < 1:
            raise _fail("count must be >= 1", block["count"][1], path)
    return NeighborSpec(
        species=(base / block["species"][0]).resolve(),
        distance=Length(r, "nm" if has_nm else "angstrom"),
        count=count,
        line=start,
    )


def parse_scenario(text: str, path="<string>", base: Path | None = None) -> ScenarioConfig:
    base = Path(base) if base is not None else (Path(path).parent if path != "<string>" else Path.cwd())
    top: dict[str, tuple[str, int]] = {}
    neighbors: list[NeighborSpec] = []
    block: dict | None = None
    block_line = 0
    last_line = 0
    for kind, key, value, line in _statements(text, path):
        last_line = line
        if kind == "open":
            if block is not None:
                raise _fail("nested neighbor block", line, path)
            block, block_line = {}, line
        elif kind == "close":
            if block is None:
                raise _fail("'}' without an open neighbor block", line, path)
            neighbors.append(_neighbor(block, block_line, base, path))
            block = None
        elif block is not None:
            if key not in _BLOCK_KEYS:
                raise _fail(f"unknown neighbor key {key!r}", line, path)
            if key in block:
                raise _fail(f"duplicate neighbor key {key!r}", line, path)
            block[key] = (value, line)
        else:
            if key not in _TOP_KEYS:
                raise _fail(f"unknown key {key!r}", line, path)
            if key in top:
                raise _fail(f"duplicate key {key!r} (first on line {top[key][1]})", line, path)
            top[key] = (value, line)
    if block is not None:
        raise _fail("unterminated neighbor block", block_line, path)
    for key in _REQUIRED_TOP:
        if key not in top:
            raise _fail(f"missing required key {key!r}", last_line or None, path)
    if not neighbors:
        raise _fail("no neighbor blocks", last_line or None, path)

    def num(key, kind=float):
        value, line = top[key]
        return _number(value, key, line, path, kind)

    start = num("grid.start_eV")
    stop = num("grid.stop_eV")
    points = num("grid.points", int)
    spacing, sp_line = top.get("grid.spacing", ("linear", None))
    if spacing not in ("linear", "log"):
        raise _fail(f"grid.spacing must be linear or log, got {spacing!r}", sp_line, path)
    if points < 1:
        raise _fail("grid.points must be >= 1", top["grid.points"][1], path)
    if start <= 0:
        raise _fail("grid.start_eV must be > 0", top["grid.start_eV"][1], path)
    if points > 1 and stop <= start:
        raise _fail("grid.stop_eV must exceed grid.start_eV", top["grid.stop_eV"][1], path)

    c_s = num("options.C_S") if "options.C_S" in top else 1.0
    wig = False
    if "options.wigner_extension" in top:
        value, line = top["options.wigner_extension"]
        wig = _bool(value, "options.wigner_extension", line, path)

    return ScenarioConfig(
        path=Path(path),
        capture_species=(base / top["capture_species"][0]).resolve(),
        neighbors=tuple(neighbors),
        grid=GridSpec(start, stop, points, spacing),
        options=ScanOptions(spin_coefficient=c_s, wigner_extension=wig),
    )


def load_scenario_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioSchemaError(f"cannot read scenario file ({exc.strerror})", path=str(path)) from None
    return parse_scenario(text, path, path.parent)


def load_scenario(path) -> Scenario:
    return load_scenario_config(path).build()
