"""``jsc`` command-line entry point.

Exit codes: 0 success, 1 a ``verify`` check failed, 2 invalid input or
parameters, 3 enumeration budget or dimension cap exceeded, 4 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .bounds import DEFAULT_BUDGET, enumerate_bounds, trace_sequence
from .checks import cone_check, verify
from .cones import PolyhedralCone
from .errors import JscError, ValidationError
from .inputs import parse_input
from .kronlift import kron_lift_bounds
from .linalg import DEFAULT_DIM_CAP, NORM_KINDS
from .perturb import perturbation_study
from .report import emit_report
from .subradius import subradius_bounds

log = logging.getLogger("jsc")

COMMANDS = ("bounds", "subradius", "kron", "trace-seq", "cone-check", "perturb", "verify")


@dataclass
class JobSpec:
    command: str
    input: str
    t_max: int = 8
    k_max: int = 3
    tol: float = 1e-10
    norm_kind: str = "two"
    deltas: list[float] = field(default_factory=lambda: [0.1, 0.01, 0.001])
    trials: int = 20
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    dim_cap: int = DEFAULT_DIM_CAP
    samples: int = 2000
    window: int = 6
    cone: str | None = None
    format: str = "human"
    out: str | None = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        for name in ("t_max", "k_max", "trials", "budget", "dim_cap", "samples", "window"):
            if getattr(self, name) < 1:
                raise ValidationError(f"--{name.replace('_', '-')} must be positive")
        if self.tol <= 0:
            raise ValidationError("--tol must be positive")
        if self.norm_kind not in NORM_KINDS:
            raise ValidationError(f"--norm must be one of {', '.join(NORM_KINDS)}")
        if self.cone not in (None, "orthant", "none"):
            raise ValidationError("--cone accepts 'orthant' or 'none'")
        if self.format not in ("human", "machine"):
            raise ValidationError("--format must be human or machine")


def _deltas(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad delta list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="jsc",
        description="Bounds on the joint spectral radius and subradius of a matrix set.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="matrix-set file")
    p.add_argument("--t-max", type=int, default=8, help="longest product length")
    p.add_argument("--k-max", type=int, default=3, help="largest Kronecker power")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--norm", dest="norm_kind", default="two", choices=NORM_KINDS)
    p.add_argument("--deltas", type=_deltas, default=[0.1, 0.01, 0.001],
                   help="comma-separated perturbation radii")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="maximum number of products of one length")
    p.add_argument("--dim-cap", type=int, default=DEFAULT_DIM_CAP,
                   help="maximum Kronecker-lift dimension")
    p.add_argument("--samples", type=int, default=2000,
                   help="sampled lines for the chord-ratio estimate")
    p.add_argument("--window", type=int, default=6,
                   help="trailing lengths used by the trace-seq diagnostic")
    p.add_argument("--cone", default=None,
                   help="'orthant' or 'none' to override the cone in the input file")
    p.add_argument("--format", default="human", choices=("human", "machine"))
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def job_from_args(args: argparse.Namespace) -> JobSpec:
    names = {f.name for f in dataclasses.fields(JobSpec)}
    return JobSpec(**{k: v for k, v in vars(args).items() if k in names})


def _resolve_cone(job: JobSpec, parsed):
    if job.cone == "orthant":
        return PolyhedralCone.orthant(parsed.sigma.n)
    if job.cone == "none":
        return None
    return parsed.cone


def execute(job: JobSpec):
    """Run ``job`` and return its report object."""
    job.validate()
    parsed = parse_input(job.input)
    sigma = parsed.sigma
    cone = _resolve_cone(job, parsed)
    log.info("loaded %d matrices of dimension %d", sigma.m, sigma.n)
    if job.command == "bounds":
        return enumerate_bounds(sigma, job.t_max, job.norm_kind, budget=job.budget,
                                tol=max(job.tol, 1e-9))
    if job.command == "subradius":
        return subradius_bounds(sigma, job.t_max, cone, job.tol, job.budget)
    if job.command == "kron":
        return kron_lift_bounds(sigma, job.k_max, cone, job.dim_cap)
    if job.command == "trace-seq":
        return trace_sequence(sigma, job.t_max, job.window, budget=job.budget)
    if job.command == "cone-check":
        if cone is None:
            raise ValidationError("cone-check needs a cone (input file or --cone orthant)")
        return cone_check(sigma, cone, parsed.inner_cone, job.samples, job.seed)
    if job.command == "perturb":
        return perturbation_study(sigma, job.deltas, job.trials, job.seed, job.t_max,
                                  cone, budget=job.budget)
    return verify(sigma, cone, job.t_max, job.k_max, max(job.tol, 1e-9), job.budget,
                  job.dim_cap)


def run(job: JobSpec) -> int:
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            report = execute(job)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        text = emit_report(report, job.format, dataclasses.asdict(job))
    except JscError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if job.out:
        Path(job.out).write_text(text)
    else:
        sys.stdout.write(text)
    if job.command == "verify" and not report.passed:
        return 1
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    return run(job_from_args(args))


if __name__ == "__main__":
    raise SystemExit(main())
