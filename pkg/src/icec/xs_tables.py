"""Tabulated photoionization / photodetachment cross sections.

Curve files are small CSVs::

    # parameterization=photon, units=eV,Mb, l=0
    # source: free text describing where the numbers come from
    3.40,1.25
    3.50,2.10

Species metadata files are flat ``key=value`` text.  Curves are held in
atomic units and, once attached to a species, indexed by photoelectron
energy.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import units
from .errors import (
    ConfigurationError,
    CurveFormatError,
    DanglingReferenceError,
    DataValidationError,
    MissingFieldError,
    MissingParameterizationError,
    MonotonicityError,
    NegativeSigmaError,
    OutOfRangeError,
    TooFewPointsError,
)
from .units import Area, Energy

PHOTON = "photon"
PHOTOELECTRON = "photoelectron"
_PARAMETERIZATIONS = {PHOTON, PHOTOELECTRON}
_INTERP = {"linear", "loglog"}

_HEADER_KEY = re.compile(r"(\w+)\s*=\s*(.*?)\s*(?=,\s*\w+\s*=|$)")


@dataclass(frozen=True, eq=False)
class CrossSectionCurve:
    """sigma(E) on a strictly increasing energy grid, atomic units."""

    energy: np.ndarray
    sigma: np.ndarray
    parameterization: str
    source_label: str = ""
    l: int | None = None
    interp: str = "linear"
    kind: str = "PI"
    binding_energy: float | None = field(default=None)  # hartree, set once re-indexed

    def __post_init__(self):
        e = np.array(self.energy, dtype=float)
        s = np.array(self.sigma, dtype=float)
        e.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "energy", e)
        object.__setattr__(self, "sigma", s)
        _validate_arrays(e, s)
        if self.parameterization not in _PARAMETERIZATIONS:
            raise MissingParameterizationError(
                f"parameterization must be one of {sorted(_PARAMETERIZATIONS)}, got {self.parameterization!r}"
            )
        if self.interp not in _INTERP:
            raise ConfigurationError(f"unknown interpolation {self.interp!r}")
        if self.interp == "loglog" and (np.any(e <= 0) or np.any(s <= 0)):
            raise CurveFormatError("log-log interpolation needs strictly positive energies and sigma")
        if self.l is not None and self.l < 0:
            raise CurveFormatError(f"partial wave l must be >= 0, got {self.l}")

    def __len__(self):
        return len(self.energy)

    @property
    def points(self) -> list[tuple[Energy, Area]]:
        return [(Energy(x, "hartree"), Area(y, "au")) for x, y in zip(self.energy, self.sigma)]

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.energy[0]), float(self.energy[-1])

    def to_photoelectron(self, binding_energy) -> "CrossSectionCurve":
        """Re-index by photoelectron energy eps' = E_photon - binding."""
        ip = units.as_hartree(binding_energy)
        if self.parameterization == PHOTOELECTRON:
            return replace(self, binding_energy=ip)
        shifted = self.energy - ip
        if shifted[0] < -1e-12 * max(1.0, ip):
            raise CurveFormatError(
                f"curve {self.source_label!r} starts at photon energy "
                f"{units.hartree_to_ev(self.energy[0]):.6g} eV, below the binding energy "
                f"{units.hartree_to_ev(ip):.6g} eV"
            )
        shifted[0] = max(shifted[0], 0.0)
        return replace(self, energy=shifted, parameterization=PHOTOELECTRON, binding_energy=ip)

    def to_photon(self, binding_energy) -> "CrossSectionCurve":
        ip = units.as_hartree(binding_energy)
        if self.parameterization == PHOTON:
            return self
        return replace(self, energy=self.energy + ip, parameterization=PHOTON, binding_energy=ip)


def _validate_arrays(e: np.ndarray, s: np.ndarray) -> None:
    if e.ndim != 1 or e.shape != s.shape:
        raise CurveFormatError("energy and sigma must be 1-D arrays of equal length")
    if len(e) < 2:
        raise TooFewPointsError(f"a curve needs at least 2 points, got {len(e)}")
    if not (np.all(np.isfinite(e)) and np.all(np.isfinite(s))):
        raise CurveFormatError("non-finite value in curve")
    bad = np.nonzero(np.diff(e) <= 0)[0]
    if bad.size:
        i = int(bad[0]) + 1
        raise MonotonicityError(f"energies not strictly increasing at point {i + 1}", row=i + 1)
    neg = np.nonzero(s < 0)[0]
    if neg.size:
        i = int(neg[0])
        raise NegativeSigmaError(f"negative cross section at point {i + 1}", row=i + 1)


# -- CSV I/O ----------------------------------------------------------------


def parse_header(line: str) -> dict[str, str]:
    body = line.lstrip("#").strip()
    return {k.strip(): v.strip() for k, v in _HEADER_KEY.findall(body)}


def parse_curve(text: str, source: str = "<string>") -> CrossSectionCurve:
    lines = text.splitlines()
    header = None
    label = ""
    energies: list[float] = []
    sigmas: list[float] = []
    rows: list[int] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if header is None and "parameterization" in line:
                header = parse_header(line)
            elif line[1:].strip().lower().startswith("source:"):
                label = line[1:].strip()[len("source:"):].strip()
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise CurveFormatError(f"{source}:{lineno}: expected 'energy,sigma', got {raw!r}")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            raise CurveFormatError(f"{source}:{lineno}: non-numeric row {raw!r}") from None
        energies.append(x)
        sigmas.append(y)
        rows.append(lineno)

    if header is None or "parameterization" not in header:
        raise MissingParameterizationError(f"{source}: missing '# parameterization=...' header")
    par = header["parameterization"]
    par = {"photon": PHOTON, "photoelectron": PHOTOELECTRON}.get(par)
    if par is None:
        raise MissingParameterizationError(
            f"{source}: parameterization must be photon or photoelectron, got {header['parameterization']!r}"
        )
    unit_tags = [u.strip() for u in header.get("units", "eV,Mb").split(",")]
    if len(unit_tags) != 2:
        raise CurveFormatError(f"{source}: units header must name energy and area units")
    e_unit, s_unit = unit_tags
    l_val = header.get("l")
    l = int(l_val) if l_val not in (None, "") else None

    if len(energies) < 2:
        raise TooFewPointsError(f"{source}: a curve needs at least 2 rows, found {len(energies)}")
    for i in range(1, len(energies)):
        if energies[i] <= energies[i - 1]:
            raise MonotonicityError(
                f"{source}:{rows[i]}: energy {energies[i]!r} does not exceed previous {energies[i - 1]!r}",
                row=rows[i],
            )
    for i, y in enumerate(sigmas):
        if y < 0:
            raise NegativeSigmaError(f"{source}:{rows[i]}: negative cross section {y!r}", row=rows[i])

    e = units.convert(np.array(energies), e_unit, "hartree", "energy")
    s = units.convert(np.array(sigmas), s_unit, "au", "area")
    return CrossSectionCurve(
        energy=e,
        sigma=s,
        parameterization=par,
        source_label=label,
        l=l,
        interp=header.get("interp", "linear"),
        kind=header.get("kind", "PI"),
    )


def load_curve(path) -> CrossSectionCurve:
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except FileNotFoundError:
        raise DanglingReferenceError(f"curve file not found: {path}", path=str(path)) from None
    return parse_curve(text, source=str(path))


def format_float(x: float) -> str:
    return f"{x:.9g}"


def serialize_curve(curve: CrossSectionCurve) -> str:
    """Curve -> CSV text in eV and Mb, 9 significant figures.

    Photoelectron-indexed curves are written as such; no shift is applied.
    """
    head = f"# parameterization={curve.parameterization}, units=eV,Mb"
    if curve.l is not None:
        head += f", l={curve.l}"
    if curve.interp != "linear":
        head += f", interp={curve.interp}"
    if curve.kind != "PI":
        head += f", kind={curve.kind}"
    out = [head]
    if curve.source_label:
        out.append(f"# source: {curve.source_label}")
    e = units.hartree_to_ev(curve.energy)
    s = units.au_to_mb(curve.sigma)
    out.extend(f"{format_float(x)},{format_float(y)}" for x, y in zip(e, s))
    return "\n".join(out) + "\n"


def save_curve(curve: CrossSectionCurve, path) -> None:
    Path(path).write_text(serialize_curve(curve), encoding="ascii")


# -- interpolation ----------------------------------------------------------


def sigma_at(curve: CrossSectionCurve, x, extend: bool = False) -> np.ndarray:
    """Vectorised evaluation in atomic units (energy in hartree -> sigma in bohr^2).

    Below the first node the Wigner law sigma ~ eps^(l + 1/2) is used when
    ``extend`` is set and the curve declares ``l``; otherwise out-of-range
    energies raise :class:`OutOfRangeError`.
    """
    x = np.asarray(x, dtype=float)
    e, s = curve.energy, curve.sigma
    lo, hi = e[0], e[-1]
    can_extend = extend and curve.l is not None and curve.parameterization == PHOTOELECTRON
    lower = 0.0 if can_extend else lo
    # tolerate round-off at the table edges
    slack = 1e-12 * max(abs(lo), abs(hi), 1e-300)
    bad = (x < lower - slack) | (x > hi + slack) | ~np.isfinite(x)
    if np.any(bad):
        xb = float(np.atleast_1d(x)[np.atleast_1d(bad)][0])
        raise OutOfRangeError(
            f"energy {units.hartree_to_ev(xb):.9g} eV outside curve {curve.source_label or '<unnamed>'!r}"
            f" admissible interval [{units.hartree_to_ev(lower):.9g}, {units.hartree_to_ev(hi):.9g}] eV",
            interval=(lower, float(hi)),
            energy=xb,
        )
    xc = np.clip(x, lo, hi)
    if curve.interp == "loglog":
        y = np.exp(np.interp(np.log(xc), np.log(e), np.log(s)))
    else:
        y = np.interp(xc, e, s)
    if can_extend:
        below = x < lo
        if np.any(below):
            ratio = np.where(below, np.maximum(x, 0.0) / lo, 1.0)
            y = np.where(below, s[0] * ratio ** (curve.l + 0.5), y)
    return y


def interpolate(curve: CrossSectionCurve, energy, extend: bool = False) -> Area:
    """sigma at one energy, as an :class:`Area` in atomic units."""
    return Area(float(sigma_at(curve, units.as_hartree(energy), extend)), "au")


# -- species ----------------------------------------------------------------

_REQUIRED = ("name", "binding_energy_eV", "g_initial", "g_final", "curve")


@dataclass(frozen=True, eq=False)
class SpeciesRecord:
    """Capture center (binding energy = EA) or neighbor (binding energy = IP).

    For a capture center A the attached curve is the photodetachment /
    photoionization cross section of A^-; ``g_initial`` is the weight of A
    and ``g_final`` that of A^-.
    """

    name: str
    binding_energy: Energy
    g_initial: int
    g_final: int
    curve: CrossSectionCurve
    radius: float | None = None  # bohr, nominal size used for validity warnings
    source: str | None = None

    def __post_init__(self):
        if not self.binding_energy.au > 0:
            raise DataValidationError(f"{self.name}: binding energy must be > 0")
        for key in ("g_initial", "g_final"):
            g = getattr(self, key)
            if int(g) != g or g < 1:
                raise DataValidationError(f"{self.name}: {key} must be a positive integer, got {g!r}")
        if self.curve.parameterization != PHOTOELECTRON or self.curve.binding_energy is None:
            object.__setattr__(self, "curve", self.curve.to_photoelectron(self.binding_energy))

    @property
    def ea(self) -> float:
        """Binding energy in hartree."""
        return self.binding_energy.au

    @property
    def g_ratio(self) -> float:
        return self.g_final / self.g_initial


def parse_keyvalue(text: str, source: str = "<string>") -> dict[str, tuple[str, int]]:
    out: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CurveFormatError(f"{source}:{lineno}: expected key=value, got {raw!r}")
        k, v = line.split("=", 1)
        out[k.strip()] = (v.strip(), lineno)
    return out


def load_species(path) -> SpeciesRecord:
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except FileNotFoundError:
        raise DanglingReferenceError(f"species file not found: {path}", path=str(path)) from None
    kv = parse_keyvalue(text, str(path))
    for key in _REQUIRED:
        if key not in kv:
            raise MissingFieldError(f"{path}: missing field {key!r}", field=key)
    name = kv["name"][0]
    try:
        ea = float(kv["binding_energy_eV"][0])
        g_i = int(kv["g_initial"][0])
        g_f = int(kv["g_final"][0])
        radius = float(kv["radius_angstrom"][0]) if "radius_angstrom" in kv else None
    except ValueError as exc:
        raise DataValidationError(f"{path}: bad numeric field ({exc})") from None
    curve_path = (path.parent / kv["curve"][0]).resolve()
    if not curve_path.is_file():
        raise DanglingReferenceError(
            f"species {name!r}: curve file {curve_path} does not exist", species=name, path=str(curve_path)
        )
    curve = load_curve(curve_path)
    if not math.isfinite(ea) or ea <= 0:
        raise DataValidationError(f"{path}: binding_energy_eV must be a positive number")
    return SpeciesRecord(
        name=name,
        binding_energy=Energy(ea, "eV"),
        g_initial=g_i,
        g_final=g_f,
        curve=curve,
        radius=None if radius is None else units.convert(radius, "angstrom", "bohr", "length"),
        source=str(path),
    )
