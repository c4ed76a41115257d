"""Oracle spec files: key=value lines describing a dipole model and a check.

::

    # one capture state, one ionization state; m = -1 0 +1
    d_capture = 0.3 1.0 0.2j
    d_ionize  = 0.5-0.1j 0.8 0
    E_vph_eV = 13.6
    eps_in_eV = 1.0
    eps_out_eV = 0.5
    R_bohr = 10, 20, 40
    C_S = 1
    order = 16
    tolerance = 5e-3

``d_capture`` / ``d_ionize`` may repeat (degenerate initial / final
states).  ``B0``, ``B1`` override the coupling coefficients and
``expected_prefactor`` the constant the ratio is checked against; both
exist to demonstrate that a corrupted identity is detected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from . import units
from .core import P_PREFACTOR
from .errors import DomainError, ScenarioSchemaError
from .oracle import B_COEFFS, DipoleModel, QuadratureSpec

_SCALAR_KEYS = {
    "E_vph_eV", "E_vph_hartree", "eps_in_eV", "eps_in_hartree", "eps_out_eV", "eps_out_hartree",
    "R_bohr", "R_nm", "C_S", "order", "tolerance", "B0", "B1", "expected_prefactor",
}
_LIST_KEYS = {"d_capture", "d_ionize"}


@dataclass(frozen=True, eq=False)
class OracleSpec:
    model: DipoleModel
    r_list: tuple[float, ...]  # bohr
    quad: QuadratureSpec
    coupling: tuple[float, float, float] | None = None
    prefactor: float = P_PREFACTOR


def _complex_row(value: str, key: str, line: int, path) -> list[complex]:
    toks = value.replace(",", " ").split()
    if len(toks) != 3:
        raise ScenarioSchemaError(f"{key} needs 3 complex values (m = -1, 0, +1), got {len(toks)}", line, str(path))
    try:
        return [complex(t) for t in toks]
    except ValueError as exc:
        raise ScenarioSchemaError(f"{key}: {exc}", line, str(path)) from None


def parse_oracle_spec(text: str, path="<string>") -> OracleSpec:
    rows: dict[str, list] = {k: [] for k in _LIST_KEYS}
    scalars: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioSchemaError(f"expected key = value, got {line!r}", lineno, str(path))
        key, value = (s.strip() for s in line.split("=", 1))
        if key in _LIST_KEYS:
            rows[key].append(_complex_row(value, key, lineno, path))
        elif key in _SCALAR_KEYS:
            if key in scalars:
                raise ScenarioSchemaError(f"duplicate key {key!r}", lineno, str(path))
            scalars[key] = (value, lineno)
        else:
            raise ScenarioSchemaError(f"unknown key {key!r}", lineno, str(path))

    def num(key, default=None, kind=float):
        if key not in scalars:
            return default
        value, line = scalars[key]
        try:
            x = kind(value)
        except ValueError:
            raise ScenarioSchemaError(f"{key}: not a number: {value!r}", line, str(path)) from None
        if not math.isfinite(x):
            raise ScenarioSchemaError(f"{key} must be finite", line, str(path))
        return x

    def energy(stem, default_hartree):
        if f"{stem}_eV" in scalars and f"{stem}_hartree" in scalars:
            raise ScenarioSchemaError(f"give {stem} in one unit only", scalars[f"{stem}_eV"][1], str(path))
        if f"{stem}_eV" in scalars:
            return units.ev_to_hartree(num(f"{stem}_eV"))
        return num(f"{stem}_hartree", default_hartree)

    for key in _LIST_KEYS:
        if not rows[key]:
            raise ScenarioSchemaError(f"missing {key}", None, str(path))

    if "R_bohr" in scalars and "R_nm" in scalars:
        raise ScenarioSchemaError("give R_bohr or R_nm, not both", scalars["R_nm"][1], str(path))
    r_key = "R_nm" if "R_nm" in scalars else "R_bohr"
    if r_key not in scalars:
        raise ScenarioSchemaError("missing R_bohr", None, str(path))
    r_text, r_line = scalars[r_key]
    try:
        r_vals = [float(t) for t in r_text.replace(",", " ").split()]
    except ValueError:
        raise ScenarioSchemaError(f"{r_key}: bad distance list {r_text!r}", r_line, str(path)) from None
    if not r_vals or any(not (r > 0 and math.isfinite(r)) for r in r_vals):
        raise ScenarioSchemaError(f"{r_key}: distances must be positive", r_line, str(path))
    if r_key == "R_nm":
        r_vals = [units.convert(r, "nm", "bohr", "length") for r in r_vals]

    coupling = None
    if "B0" in scalars or "B1" in scalars:
        b1 = num("B1", B_COEFFS[0])
        coupling = (b1, num("B0", B_COEFFS[1]), b1)

    try:
        model = DipoleModel(
            d_capture=rows["d_capture"],
            d_ionize=rows["d_ionize"],
            e_vph=energy("E_vph", 0.5),
            r=r_vals[0],
            c_s=num("C_S", 1.0),
            eps_in=energy("eps_in", 0.05),
            eps_out=energy("eps_out", 0.02),
        )
        quad = QuadratureSpec(order=num("order", 16, int), tolerance=num("tolerance", 5e-3))
    except DomainError as exc:
        raise ScenarioSchemaError(str(exc), None, str(path)) from None
    return OracleSpec(model, tuple(r_vals), quad, coupling, num("expected_prefactor", P_PREFACTOR))


def load_oracle_spec(path) -> OracleSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioSchemaError(f"cannot read oracle spec ({exc.strerror})", None, str(path)) from None
    return parse_oracle_spec(text, path)
