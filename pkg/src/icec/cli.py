"""Command line front end.

    icec run <scenario> [--out DIR] [--plot-data] [-v]
    icec oracle <spec> [--out DIR]
    icec validate <scenario>

Exit codes: 0 success, 2 malformed scenario/spec or arguments, 3 data
validation failure, 4 quadrature failure, 5 factorization check failed.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

from . import units
from .core import format_results, result_rows, scan
from .errors import (
    ConfigurationError,
    ConvergenceError,
    DataValidationError,
    DomainError,
    FactorizationMismatch,
)
from .oracle import verify_factorization
from .oracle_file import load_oracle_spec
from .scenario_file import load_scenario_config

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_DATA = 3
EXIT_QUADRATURE = 4
EXIT_FACTORIZATION = 5

log = logging.getLogger("icec")


@dataclass(frozen=True)
class RunConfig:
    scenario: Path
    out_dir: Path
    emit_plot_data: bool = False
    verbosity: int = 0


def _series_name(stem: str, i: int, nb) -> str:
    r_nm = units.convert(nb.r, "bohr", "nm", "length")
    return f"{stem}_icec_n{i}_R{r_nm:.6g}nm_N{nb.count}.dat"


def _write_series(path: Path, legend: str, pairs) -> None:
    lines = [f"# {legend}", "# eps_eV sigma_Mb"] + [f"{e} {s}" for e, s in pairs]
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


def run(config: RunConfig) -> int:
    """Scan a scenario and write ``<stem>_results.csv`` (plus plot series)."""
    cfg = load_scenario_config(config.scenario)
    scenario = cfg.build()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        scenario.check_validity()
    for w in caught:
        log.warning("%s", w.message)
    rows = scan(scenario)
    n = len(scenario.neighbors)

    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    stem = config.scenario.stem
    csv_path = out / f"{stem}_results.csv"
    csv_path.write_text(format_results(rows, n), encoding="ascii")
    log.info("wrote %s (%d rows)", csv_path, len(rows))

    if config.emit_plot_data:
        # the strings are the same cells written to the CSV
        cells = result_rows(rows)
        _write_series(out / f"{stem}_pr.dat", f"sigma_PR {scenario.capture_species.name}",
                      [(c[0], c[1]) for c in cells])
        for i, nb in enumerate(scenario.neighbors):
            base = 2 + 5 * i
            r_nm = units.convert(nb.r, "bohr", "nm", "length")
            legend = f"sigma_ICEC {nb.count} x {nb.species.name} at R = {r_nm:.6g} nm"
            pairs = [(c[0], c[base + 3]) for c in cells if c[base + 4] == "1"]
            path = out / _series_name(stem, i, nb)
            _write_series(path, legend, pairs)
            log.info("wrote %s", path)
    return EXIT_OK


def validate(path: Path) -> int:
    cfg = load_scenario_config(path)
    scenario = cfg.build()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        scenario.check_validity()
    rows = scan(scenario)
    for w in caught:
        print(f"warning: {w.message}")
    print(f"{path}: ok ({len(scenario.neighbors)} neighbor blocks, {len(rows)} grid points)")
    return EXIT_OK


def oracle(spec_path: Path, out_dir: Path) -> int:
    spec = load_oracle_spec(spec_path)
    report = verify_factorization(spec.model, spec.r_list, spec.quad, spec.coupling, spec.prefactor)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = spec_path.stem
    (out_dir / f"{stem}_report.txt").write_text(report.to_text(), encoding="ascii")
    (out_dir / f"{stem}_report.csv").write_text(report.to_csv(), encoding="ascii")
    sys.stdout.write(report.to_text())
    report.raise_for_failure()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="icec", description="Asymptotic ICEC cross sections.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="scan a scenario and write result CSV")
    r.add_argument("scenario", type=Path)
    r.add_argument("--out", type=Path, default=Path("."), help="output directory (default: .)")
    r.add_argument("--plot-data", action="store_true", help="also write two-column series per curve")
    r.add_argument("-v", "--verbose", action="count", default=0)

    o = sub.add_parser("oracle", help="check the factorized formula against brute-force quadrature")
    o.add_argument("spec", type=Path)
    o.add_argument("--out", type=Path, default=Path("."))
    o.add_argument("-v", "--verbose", action="count", default=0)

    v = sub.add_parser("validate", help="parse a scenario and check its data")
    v.add_argument("scenario", type=Path)
    v.add_argument("-v", "--verbose", action="count", default=0)
    return p


def _dispatch(args) -> int:
    if args.command == "run":
        return run(RunConfig(args.scenario, args.out, args.plot_data, args.verbose))
    if args.command == "oracle":
        return oracle(args.spec, args.out)
    return validate(args.scenario)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors as well
        return int(exc.code or 0)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s", stream=sys.stderr, force=True)

    try:
        return _dispatch(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except DataValidationError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ConvergenceError as exc:
        print(f"quadrature error: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except FactorizationMismatch as exc:
        print(f"factorization check failed: {exc}", file=sys.stderr)
        return EXIT_FACTORIZATION
    except DomainError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
