"""Command-line driver: ``gaugecheck check <name> ...`` and ``gaugecheck --emit <entry>``."""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

from . import LOGGER, VERBOSE
from .catalog import CATALOG, CatalogEntry, catalog_entry
from .const import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    FLOAT_FORMAT,
    JACOBIATOR_TOLERANCE,
    SEMICLASSICAL_TOLERANCE,
)
from .exceptions import (
    ClosureError,
    ElementLeavesAlgebraError,
    InputError,
    SingularMatrixError,
)
from .formats import (
    dump_entry,
    encode_complex,
    load_rmatrix,
    load_tensor,
    load_two_link,
    read_document,
    referenced_paths,
)
from .frt_braid import (
    cross_relations,
    homomorphism_residual,
    straightening_consistency,
)
from .lie_tensor import (
    CoefTensor2,
    ad_invariance_residual,
    cybe,
    mixed_obstructions,
    quasitriangular_sense,
    split_sym_anti,
)
from .poisson_geom import (
    TwoLinkSpec,
    jacobi_residual,
    multiplication_residual,
    one_link_residual,
    phi_condition_check,
    pushforward_formula_check,
    sample_points,
)
from .rmatrix import RMat, braid_residual, qybe_residual, semiclassical_w, star_report

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT_ERROR = 2

INPUT_ERRORS = (
    InputError,
    OSError,
    json.JSONDecodeError,
    ClosureError,
    ElementLeavesAlgebraError,
    SingularMatrixError,
)


@dataclass
class CheckReport:
    """Residuals of one check with its verdict."""

    check_name: str
    inputs_digest: str
    residuals: dict[str, float]
    tolerance: float
    seed: int
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """``True`` iff every residual is within tolerance."""
        return all(value <= self.tolerance for value in self.residuals.values())

    @property
    def verdict(self) -> str:
        """``"pass"`` or ``"fail"``."""
        return "pass" if self.passed else "fail"

    def to_text(self) -> str:
        """One ``name value`` line per residual, then ``PASS`` or ``FAIL``."""
        lines = [f"{name} {value:{FLOAT_FORMAT}}" for name, value in self.residuals.items()]
        lines.append(self.verdict.upper())
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        """Canonical JSON with sorted keys."""
        return (
            json.dumps(
                {
                    "check_name": self.check_name,
                    "inputs_digest": self.inputs_digest,
                    "residuals": {k: float(format(v, FLOAT_FORMAT)) for k, v in self.residuals.items()},
                    "verdict": self.verdict,
                    "seed": self.seed,
                    "tolerance": self.tolerance,
                    "details": self.details,
                },
                indent=2,
                sort_keys=True,
            )
            + "\n"
        )


class Inputs:
    """Resolves the objects a check needs from ``--input`` or ``--catalog``."""

    def __init__(self, args: argparse.Namespace) -> None:
        """Wrap parsed arguments."""
        self.args = args
        self.path = Path(args.input) if args.input else None

    @property
    def entry(self) -> CatalogEntry:
        """The selected catalog entry."""
        if self.args.catalog is None:
            raise InputError("this check needs --catalog")
        return catalog_entry(self.args.catalog)

    def tensor(self) -> CoefTensor2:
        """A tensor file, or the chosen tensor of the catalog entry."""
        if self.path:
            return load_tensor(self.path)
        return self.entry.tensor(self.args.tensor)

    def two_link(self) -> TwoLinkSpec:
        """A two-link file, or the constant structure ``φ = −w`` with ``r`` the antisymmetric part of w."""
        if self.path and "phi" in read_document(self.path):
            return load_two_link(self.path)
        w = self.tensor()
        _, r = split_sym_anti(w)
        return TwoLinkSpec.with_constant_phi(w.algebra, r, -w)

    def rmatrix(self) -> RMat:
        """An R-matrix file, or the catalog family at ``--q``."""
        if self.path:
            return load_rmatrix(self.path)
        if self.args.q is None:
            raise InputError("--q is required with --catalog for R-matrix checks")
        return self.entry.rmatrix(self.args.q)

    def digest(self, check_name: str) -> str:
        """sha256 over the check, the selection flags and the bytes of the input and its algebra file."""
        digest = hashlib.sha256()
        selection = {
            "check": check_name,
            "catalog": self.args.catalog,
            "tensor": self.args.tensor,
            "q": self.args.q,
            "samples": self.args.samples,
        }
        digest.update(json.dumps(selection, sort_keys=True).encode())
        if self.path:
            for path in referenced_paths(self.path):
                digest.update(path.read_bytes())
        return digest.hexdigest()


Outcome = tuple[dict[str, float], dict]
CheckFunction = Callable[[Inputs, float], Outcome]


def _check_cybe(inputs: Inputs, tolerance: float) -> Outcome:
    w = inputs.tensor()
    _, r = split_sym_anti(w)
    first, second = mixed_obstructions(w.algebra, r, w)
    details = {
        "quasitriangular_sense": quasitriangular_sense(w, tolerance).value,
        "T1": first.max_abs(),
        "T2": second.max_abs(),
    }
    return {"cybe": cybe(w.algebra, w).max_abs()}, details


def _check_invariance(inputs: Inputs, tolerance: float) -> Outcome:
    t = inputs.tensor()
    sym, _ = split_sym_anti(t)
    details = {"symmetric_part": ad_invariance_residual(sym.algebra, sym)}
    return {"invariance": ad_invariance_residual(t.algebra, t)}, details


def _sampled(inputs: Inputs, arity: int) -> tuple[TwoLinkSpec, list]:
    link = inputs.two_link()
    points = sample_points(link.algebra, inputs.args.samples, arity, inputs.args.seed)
    return link, points


def _check_jacobi(inputs: Inputs, tolerance: float) -> Outcome:
    link, points = _sampled(inputs, 2)
    return {"jacobiator": jacobi_residual(link, points)}, {}


def _check_one_link(inputs: Inputs, tolerance: float) -> Outcome:
    link, points = _sampled(inputs, 3)
    return {"one_link": one_link_residual(link.algebra, link.r, points)}, {}


def _check_two_link(inputs: Inputs, tolerance: float) -> Outcome:
    link, points = _sampled(inputs, 3)
    result = phi_condition_check(link, points, tolerance)
    return {"cocycle": result.cocycle_residual, "two_link": result.map_residual}, {}


def _check_compose(inputs: Inputs, tolerance: float) -> Outcome:
    link, points = _sampled(inputs, 2)
    return {"multiplication": multiplication_residual(link, points)}, {}


def _check_pushforward(inputs: Inputs, tolerance: float) -> Outcome:
    link, points = _sampled(inputs, 3)
    return {
        side: max(
            pushforward_formula_check(link.algebra, link.r, a, g, b, side) for a, g, b in points
        )
        for side in ("right", "left")
    }, {}


def _check_ybe(inputs: Inputs, tolerance: float) -> Outcome:
    rmat = inputs.rmatrix()
    return {
        "qybe": qybe_residual(rmat.to_plain()),
        "braid": braid_residual(rmat.to_hat()),
    }, {}


def _check_star(inputs: Inputs, tolerance: float) -> Outcome:
    report = star_report(inputs.rmatrix().to_hat(), tolerance)
    return {
        "self_adjoint": report.self_adjoint.residual,
        "unitary": report.unitary.residual,
        "involutive": report.involutive.residual,
    }, {}


def _check_semiclassical(inputs: Inputs, tolerance: float) -> Outcome:
    if inputs.path:
        raise InputError("semiclassical needs an R-matrix family from --catalog")
    entry = inputs.entry
    if entry.rmatrix_family is None:
        raise InputError(f"{entry.name} has no R-matrix family")
    limit = semiclassical_w(entry.rmatrix_family, entry.algebra)
    details = {
        "derivative": encode_complex(limit.derivative),
        "w": encode_complex(limit.w.coeffs),
        "r": encode_complex(limit.r.coeffs),
        "s": encode_complex(limit.s.coeffs),
        "s_is_real": limit.s_is_real,
    }
    return {"cybe": cybe(entry.algebra, limit.w).max_abs()}, details


def _check_braiding(inputs: Inputs, tolerance: float) -> Outcome:
    rhat = inputs.rmatrix().to_hat()
    rules = cross_relations(rhat)
    details = {f"{w}*{v}": str(rule) for (w, v), rule in sorted(rules.items())}
    return {"braid": braid_residual(rhat)}, {"cross_rules": details}


def _check_homomorphism(inputs: Inputs, tolerance: float) -> Outcome:
    report = homomorphism_residual(inputs.rmatrix().to_hat(), tolerance)
    certificates = [
        {
            "member": certificate.member,
            "distance": certificate.distance,
            "coefficients": [[label, c.real, c.imag] for label, c in certificate.coefficients],
        }
        for certificate in report.certificates
    ]
    return {
        "homomorphism": report.residual,
        "braid": report.braid_residual,
    }, {"certificates": certificates}


def _check_consistency(inputs: Inputs, tolerance: float) -> Outcome:
    return {"consistency": straightening_consistency(inputs.rmatrix().to_hat())}, {}


CHECKS: dict[str, tuple[CheckFunction, float]] = {
    "cybe": (_check_cybe, DEFAULT_TOLERANCE),
    "invariance": (_check_invariance, DEFAULT_TOLERANCE),
    "jacobi": (_check_jacobi, JACOBIATOR_TOLERANCE),
    "poisson-map one-link": (_check_one_link, DEFAULT_TOLERANCE),
    "poisson-map two-link": (_check_two_link, DEFAULT_TOLERANCE),
    "poisson-map compose": (_check_compose, DEFAULT_TOLERANCE),
    "pushforward": (_check_pushforward, DEFAULT_TOLERANCE),
    "ybe": (_check_ybe, DEFAULT_TOLERANCE),
    "star": (_check_star, DEFAULT_TOLERANCE),
    "semiclassical": (_check_semiclassical, SEMICLASSICAL_TOLERANCE),
    "braiding": (_check_braiding, DEFAULT_TOLERANCE),
    "homomorphism": (_check_homomorphism, DEFAULT_TOLERANCE),
    "consistency": (_check_consistency, DEFAULT_TOLERANCE),
}


def run_check(args: argparse.Namespace) -> CheckReport:
    """Run the check named by ``args`` and build its report."""
    check_name = args.check if args.check != "poisson-map" else f"poisson-map {args.mode}"
    function, default_tolerance = CHECKS[check_name]
    tolerance = default_tolerance if args.tolerance is None else args.tolerance
    inputs = Inputs(args)
    LOGGER.debug("Running %s with tolerance %g", check_name, tolerance)
    residuals, details = function(inputs, tolerance)
    return CheckReport(
        check_name=check_name,
        inputs_digest=inputs.digest(check_name),
        residuals=residuals,
        tolerance=tolerance,
        seed=args.seed,
        details=details,
    )


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--input", metavar="FILE", help="JSON input document")
    source.add_argument("--catalog", metavar="NAME", choices=sorted(CATALOG))
    common.add_argument("--tensor", metavar="NAME", help="tensor of the catalog entry")
    common.add_argument("--q", type=float, help="deformation parameter of a catalog family")
    common.add_argument("--tolerance", type=float)
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--report", choices=("text", "json"), default="text")
    common.add_argument("--output", metavar="FILE")
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)
    return common


def build_parser() -> argparse.ArgumentParser:
    """The ``gaugecheck`` argument grammar."""
    common = _common_arguments()
    parser = argparse.ArgumentParser(
        prog="gaugecheck",
        description="Verify Poisson and quantum gauge-transformation conditions.",
    )
    parser.add_argument("--emit", metavar="NAME", choices=sorted(CATALOG))
    parser.add_argument("--q", dest="emit_q", type=float, help="include the R-matrix at q")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    commands = parser.add_subparsers(dest="command")
    check = commands.add_parser("check", help="run a check")
    checks = check.add_subparsers(dest="check", required=True)
    for name in (
        "cybe",
        "invariance",
        "jacobi",
        "pushforward",
        "ybe",
        "star",
        "semiclassical",
        "braiding",
        "homomorphism",
        "consistency",
    ):
        checks.add_parser(name, parents=[common])
    poisson_map = checks.add_parser("poisson-map")
    modes = poisson_map.add_subparsers(dest="mode", required=True)
    for mode in ("one-link", "two-link", "compose"):
        modes.add_parser(mode, parents=[common])
    return parser


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    """Entry point; returns 0 on pass, 1 on fail, 2 on input or usage errors."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_PASS if err.code == 0 else EXIT_INPUT_ERROR

    level = {0: logging.WARNING, 1: logging.DEBUG}.get(args.verbose, VERBOSE)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        if args.emit:
            entry = catalog_entry(args.emit)
            _write(json.dumps(dump_entry(entry, args.emit_q), indent=2) + "\n", None)
            return EXIT_PASS
        if args.command != "check":
            parser.print_usage(sys.stderr)
            return EXIT_INPUT_ERROR
        report = run_check(args)
    except INPUT_ERRORS as err:
        print(f"gaugecheck: error: {err}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    text = report.to_json() if args.report == "json" else report.to_text()
    _write(text, args.output)
    return EXIT_PASS if report.passed else EXIT_FAIL
