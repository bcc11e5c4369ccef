import functools
import logging
import os
import sys
import tempfile
from typing import Optional

import click
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

# Load environment variables
load_dotenv()

# Configure logging
logging.basicConfig(
    level=os.getenv("CWDW_LOG_LEVEL", "INFO").upper(),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
)
logger = logging.getLogger(__name__)

from app.code import DEFAULT_BUDGET, CodeMode, validate_spec, weight_distribution
from app.errors import ConsistencyError, CwdwError, InvalidParameterError, VerificationError
from app.expsum import default_jobs, value_distribution
from app.field import construct_field
from app.reports import FieldReport, TableRow, TablesReport, report_to_csv, to_json
from app.tables import (
    enumerator_string,
    expected_moments,
    minimum_distance,
    moment_sums,
    solve_frequency_system,
    table1,
    table3,
)
from app.verify import SUITES, VerificationSuite

DEFAULT_SAMPLES = 100_000


class RunConfig(BaseModel):
    """Validated command-line parameters; built before any computation starts."""

    command: str
    p: Optional[int] = None
    m: Optional[int] = Field(None, ge=1)
    k: Optional[int] = Field(None, ge=1)
    e: int = Field(1, ge=1)
    mode: CodeMode = CodeMode.COPRIME
    method: str = "exact"
    samples: Optional[int] = Field(None, ge=1)
    seed: Optional[int] = 0
    budget: int = Field(DEFAULT_BUDGET, ge=1)
    jobs: int = Field(1, ge=1)
    out: Optional[str] = None
    format: str = Field("json", pattern="^(json|csv)$")
    which: Optional[str] = None

    def has_spec(self) -> bool:
        return None not in (self.p, self.m, self.k)


def make_config(command: str, **params) -> RunConfig:
    if params.get("jobs") is None:
        params["jobs"] = default_jobs()
    params = {k: v for k, v in params.items() if v is not None or k in ("seed",)}
    try:
        return RunConfig(command=command, **params)
    except ValidationError as e:
        raise InvalidParameterError(str(e))


def emit(report: BaseModel, cfg: RunConfig) -> None:
    """Write the whole report at once, to stdout or atomically to --out."""
    text = to_json(report) if cfg.format == "json" else report_to_csv(report)
    if not cfg.out:
        click.echo(text, nl=False)
        return
    directory = os.path.dirname(os.path.abspath(cfg.out))
    with tempfile.NamedTemporaryFile("w", dir=directory, delete=False, suffix=".tmp") as handle:
        handle.write(text)
        temp_path = handle.name
    os.replace(temp_path, cfg.out)
    logger.info(f"Report written to {cfg.out}")


def handle_errors(command):
    """Map workbench errors onto stable exit codes."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except CwdwError as e:
            logger.error(f"{type(e).__name__}: {e}")
            click.echo(f"Error: {e}", err=True)
            sys.exit(e.exit_code)

    return wrapper


def spec_options(command):
    command = click.option("--k", type=int, required=True, help="Exponent parameter k >= 1")(command)
    command = click.option("--m", type=int, required=True, help="Extension degree")(command)
    command = click.option("--p", type=int, required=True, help="Odd prime characteristic")(command)
    command = click.option("--mode", type=click.Choice(["t2", "t3"]), default="t2", show_default=True,
                           help="t2: gcd(m, k) = 1; t3: general e = gcd(m, k)")(command)
    return command


def run_options(command):
    command = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
                           show_default=True)(command)
    command = click.option("--out", type=click.Path(dir_okay=False), help="Write the report to this file")(command)
    command = click.option("--jobs", type=int, help="Worker processes (default: CWDW_JOBS or CPU count)")(command)
    command = click.option("--budget", type=int, default=DEFAULT_BUDGET, show_default=True,
                           help="Largest admissible operation count for exhaustive runs")(command)
    command = click.option("--seed", type=int, default=0, show_default=True)(command)
    command = click.option("--samples", type=int, help="Sample size for sampled methods")(command)
    return command


@click.group()
def cli():
    """Weight distributions of five-weight cyclic codes, by enumeration, rank and closed forms."""


@cli.command()
@click.option("--p", type=int, required=True)
@click.option("--m", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@handle_errors
def field(p, m, out, fmt):
    """Construct GF(p^m) and print its modulus and generator."""
    cfg = make_config("field", p=p, m=m, out=out, format=fmt, jobs=1)
    fd = construct_field(cfg.p, cfg.m)
    emit(FieldReport(**fd.describe()), cfg)


@cli.command()
@spec_options
@click.option("--method", type=click.Choice(["exact", "closed", "sampled", "verify"]), default="exact",
              show_default=True)
@run_options
@handle_errors
def wd(p, m, k, mode, method, samples, seed, budget, jobs, out, fmt):
    """Weight distribution of the code."""
    cfg = make_config("wd", p=p, m=m, k=k, mode=mode, method=method, samples=samples, seed=seed,
                      budget=budget, jobs=jobs, out=out, format=fmt)
    spec = validate_spec(cfg.p, cfg.m, cfg.k, cfg.mode)
    fd = construct_field(spec.p, spec.m)

    if cfg.method == "verify":
        exact = weight_distribution(spec, fd, "exact", budget=cfg.budget, jobs=cfg.jobs)
        closed = weight_distribution(spec, fd, "closed")
        report = exact.to_report()
        report.method = "verify"
        emit(report, cfg)
        if exact.weights != closed.weights:
            raise VerificationError(f"exact and closed-form distributions of {spec} differ")
        return

    dist = weight_distribution(spec, fd, cfg.method, samples=cfg.samples or DEFAULT_SAMPLES, seed=cfg.seed,
                               budget=cfg.budget, jobs=cfg.jobs)
    emit(dist.to_report(), cfg)


@cli.command("s-dist")
@spec_options
@click.option("--method", type=click.Choice(["exact", "sampled"]), default="exact", show_default=True)
@click.option("--rank/--no-rank", "with_rank", default=False, help="Also report the rank histogram")
@run_options
@handle_errors
def s_dist(p, m, k, mode, method, with_rank, samples, seed, budget, jobs, out, fmt):
    """Value distribution of the exponential sums."""
    cfg = make_config("s-dist", p=p, m=m, k=k, mode=mode, method=method, samples=samples, seed=seed,
                      budget=budget, jobs=jobs, out=out, format=fmt)
    spec = validate_spec(cfg.p, cfg.m, cfg.k, cfg.mode)
    fd = construct_field(spec.p, spec.m)
    dist = value_distribution(spec, fd, mode="full" if cfg.method == "exact" else "sampled",
                              samples=cfg.samples or DEFAULT_SAMPLES, seed=cfg.seed, budget=cfg.budget,
                              jobs=cfg.jobs, with_rank=with_rank)
    if dist.inconsistent:
        raise ConsistencyError(f"{dist.inconsistent} triples violate the rank/value relation")
    emit(dist.to_report(), cfg)


@cli.command()
@click.option("--which", type=click.Choice(SUITES), required=True)
@click.option("--p", type=int)
@click.option("--m", type=int)
@click.option("--k", type=int)
@click.option("--mode", type=click.Choice(["t2", "t3"]), default="t2", show_default=True)
@run_options
@handle_errors
def verify(which, p, m, k, mode, samples, seed, budget, jobs, out, fmt):
    """Run a verification suite; exits 4 if any hard assertion fails."""
    cfg = make_config("verify", which=which, p=p, m=m, k=k, mode=mode, samples=samples, seed=seed,
                      budget=budget, jobs=jobs, out=out, format=fmt)
    spec, fd = None, None
    if cfg.has_spec():
        spec = validate_spec(cfg.p, cfg.m, cfg.k, cfg.mode)
        fd = construct_field(spec.p, spec.m)
    suite = VerificationSuite(spec, fd, budget=cfg.budget, jobs=cfg.jobs, samples=cfg.samples, seed=cfg.seed)
    report = suite.run(cfg.which)
    emit(report, cfg)
    if not report.passed:
        failed = [r.lemma for r in report.reports if r.hard and not r.match]
        raise VerificationError(f"hard assertions failed: {', '.join(failed)}")


@cli.command()
@click.option("--p", type=int, required=True)
@click.option("--m", type=int, required=True)
@click.option("--e", type=int, default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@handle_errors
def tables(p, m, e, out, fmt):
    """Closed-form value and weight tables, moments and code parameters."""
    cfg = make_config("tables", p=p, m=m, e=e, out=out, format=fmt, jobs=1)
    values = table1(cfg.p, cfg.m, cfg.e)
    weights = table3(cfg.p, cfg.m, cfg.e)
    report = TablesReport(
        p=cfg.p,
        m=cfg.m,
        e=cfg.e,
        parameters=[cfg.p ** cfg.m - 1, 3 * cfg.m, minimum_distance(cfg.p, cfg.m, cfg.e)],
        values=[TableRow(label=s, freq=str(f)) for s, f in values.rows],
        weights=[TableRow(label=w, freq=str(f)) for w, f in weights.sorted_rows()],
        enumerator=enumerator_string(weights),
    )
    if cfg.e == 1:
        report.moments = [str(v) for v in moment_sums(values)]
        if list(moment_sums(values)) != list(expected_moments(cfg.p, cfg.m)):
            raise ConsistencyError(f"moments of the value table for ({cfg.p}, {cfg.m}) do not reconcile")
        report.frequency_system = [str(v) for v in solve_frequency_system(cfg.p, cfg.m)]
    emit(report, cfg)

