import dataclasses
import logging
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import click
import lark

from ._config import Config, Tolerances
from ._geometry import (
    NotHomogeneous,
    NotQuartic,
    SingularPoint,
    WeightSumMismatch,
    find_flexes,
)
from ._group import (
    MixedWeightOrbit,
    NonInvariantCurve,
    NotAGroup,
    fixed_locus,
    klein_four,
)
from ._kuribayashi import (
    NotSmooth,
    Params,
    TableMismatch,
    build_curve,
    classify,
    reproduce_example,
    sweep_resultant_identities,
    worked_examples,
)
from ._poly import PolynomialSyntaxError, parse_polynomial
from ._report import (
    FORMATS,
    render_classification,
    render_examples,
    render_flexes,
    render_orbits,
    render_verification,
)
from ._solve import (
    AllCoefficientsBelowTolerance,
    DegenerateLeadingCoefficient,
    NonConvergence,
    ZeroPolynomial,
)
from ._utils import (
    ComplexLiteralError,
    QuarticFlexError,
    SourceContext,
    parse_complex_literal,
)
from ._version import __version__

logger = logging.getLogger(__name__)


#: Exit status of each failure, success exits with 0
EXIT_CODES = (
    (
        (
            ComplexLiteralError,
            PolynomialSyntaxError,
            NotHomogeneous,
            NotQuartic,
            lark.exceptions.LarkError,
        ),
        1,
    ),
    ((NotSmooth, SingularPoint), 2),
    (
        (
            WeightSumMismatch,
            NonConvergence,
            MixedWeightOrbit,
            NonInvariantCurve,
            NotAGroup,
            DegenerateLeadingCoefficient,
            AllCoefficientsBelowTolerance,
            ZeroPolynomial,
        ),
        3,
    ),
    ((TableMismatch,), 4),
)


def _load_configuration(config_path=None):
    """Load and merge configuration from CWD and optional files.

    Parameters
    ----------
    config_path : Path

    Returns
    -------
    config : ~.Config
    """
    config = Config.from_default()

    for candidate in (Path.cwd() / "pyproject.toml", Path.cwd() / "quarticflex.toml"):
        if candidate.is_file():
            logger.info("using %s", candidate)
            config = config.merge(Config.from_toml(candidate))

    if config_path:
        logger.info("using %s", config_path)
        config = config.merge(Config.from_toml(config_path))

    return config


def _setup_logging(*, verbose):
    _VERBOSITY_LEVEL = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG}
    verbose = min(2, max(0, verbose))  # Limit to range [0, 2]

    format_ = "%(levelname)s: %(message)s"
    if verbose >= 2:
        format_ += " py_source=%(filename)s#L%(lineno)d::%(funcName)s"

    logging.basicConfig(
        level=_VERBOSITY_LEVEL[verbose],
        format=format_,
        stream=sys.stderr,
    )


@contextmanager
def report_execution_time():
    start = time.time()
    try:
        yield
    finally:
        stop = time.time()
        total_seconds = stop - start

        hours, remainder = divmod(total_seconds, 3600)
        minutes, seconds = divmod(remainder, 60)

        formated_duration = f"{seconds:.3f} s"
        if minutes:
            formated_duration = f"{minutes:.0f} min {formated_duration}"
        if hours:
            formated_duration = f"{hours:.0f} h {formated_duration}"

        logger.info("finished in %s", formated_duration)


@contextmanager
def exit_on_error():
    """Print quarticflex errors and exit with their status from `EXIT_CODES`."""
    try:
        yield
    except tuple(cls for classes, _ in EXIT_CODES for cls in classes) as error:
        code = next(code for classes, code in EXIT_CODES if isinstance(error, classes))
        click.secho(f"error: {error}", fg="red", err=True)
        sys.exit(code)


@dataclasses.dataclass(frozen=True, slots=True, kw_only=True)
class _Session:
    """Settings shared by all subcommands of one invocation."""

    config: Config
    tolerances: Tolerances
    fmt: str
    seed: int

    @property
    def solver_options(self):
        return {
            "max_iters": self.config.max_iters,
            "interpolation_radius": self.config.interpolation_radius,
            "newton_iters": self.config.newton_iters,
        }


def _params_from_literals(a, b, c):
    return Params(*(parse_complex_literal(text) for text in (a, b, c)))


def _read_polynomial(path):
    """Parse the polynomial in `path`, printing syntax errors in context."""
    text = path.read_text(encoding="utf-8")
    try:
        return parse_polynomial(text)
    except lark.exceptions.UnexpectedInput as error:
        SourceContext.from_error(path, error).print_message(
            click.style("invalid polynomial", fg="red"),
            details=error.get_context(text).rstrip(),
            err=True,
        )
        raise


_parameter_options = [
    click.option(
        "--a", "a", required=True, help="Coefficient of x²y², e.g. 3 or 0+2.236i."
    ),
    click.option("--b", "b", required=True, help="Coefficient of x²z²."),
    click.option("--c", "c", required=True, help="Coefficient of y²z²."),
]


def parameter_options(func):
    for option in reversed(_parameter_options):
        func = option(func)
    return func


@click.group()
@click.version_option(__version__)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(FORMATS),
    help="Output format, defaults to the configured one.",
)
@click.option(
    "--tol",
    type=click.FloatRange(min=0, min_open=True),
    default=1.0,
    show_default=True,
    help="Factor applied to all numeric tolerances.",
)
@click.option("--seed", type=click.IntRange(min=0), help="Seed of random sampling.")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Set configuration file explicitly.",
)
@click.option("-v", "--verbose", count=True, help="Log more details.")
@click.help_option("-h", "--help")
@click.pass_context
def main(ctx, fmt, tol, seed, config_path, verbose):
    """Find and classify the flexes of plane quartics."""
    _setup_logging(verbose=verbose)
    config = _load_configuration(config_path)
    try:
        tolerances = config.to_tolerances(scale=tol)
    except (TypeError, ValueError) as error:
        raise click.BadParameter(str(error), param_hint="configuration") from error
    fmt = fmt or config.output_format
    if fmt not in FORMATS:
        msg = f"unknown output format {fmt!r}, expected one of {', '.join(FORMATS)}"
        raise click.BadParameter(msg, param_hint="configuration")
    ctx.obj = _Session(
        config=config,
        tolerances=tolerances,
        fmt=fmt,
        seed=config.seed if seed is None else seed,
    )
    logger.debug("tolerances %s", tolerances)


@main.command("classify")
@parameter_options
@click.pass_obj
@report_execution_time()
def classify_command(session, a, b, c):
    """Classify the flexes of the Kuribayashi quartic C(a, b, c)."""
    with exit_on_error():
        params = _params_from_literals(a, b, c)
        report = classify(
            params, tolerances=session.tolerances, **session.solver_options
        )
        click.echo(render_classification(report, session.fmt))
        report.raise_for_mismatch()


@main.command("flexes")
@click.argument(
    "path", type=click.Path(exists=True, dir_okay=False, path_type=Path)
)
@click.pass_obj
@report_execution_time()
def flexes_command(session, path):
    """Find the flexes of the quartic written in PATH."""
    with exit_on_error():
        F = _read_polynomial(path)
        flexes = find_flexes(
            F, tolerances=session.tolerances, **session.solver_options
        )
        click.echo(render_flexes(flexes, session.fmt))


@main.command("verify")
@click.option(
    "--samples",
    type=click.IntRange(min=0),
    help="Number of random parameter triples, defaults to the configured one.",
)
@click.pass_obj
@report_execution_time()
def verify_command(session, samples):
    """Check the resultant identities on random parameters."""
    samples = session.config.samples if samples is None else samples
    with exit_on_error():
        summary = sweep_resultant_identities(
            samples,
            seed=session.seed,
            threshold=session.config.max_relative_error,
            tolerances=session.tolerances,
        )
    click.echo(render_verification(summary, session.fmt))
    if not summary["passed"]:
        sys.exit(3)


@main.command("orbits")
@parameter_options
@click.pass_obj
@report_execution_time()
def orbits_command(session, a, b, c):
    """Report the points of C(a, b, c) fixed by a sign flip."""
    with exit_on_error():
        params = _params_from_literals(a, b, c)
        F = build_curve(params, tol=session.tolerances.smoothness)
        orbits = fixed_locus(klein_four(), F, tolerances=session.tolerances)
        click.echo(render_orbits(params, orbits, session.fmt))


@main.command("examples")
@click.option(
    "--only",
    "names",
    multiple=True,
    help="Reproduce only the named example, may be repeated.",
)
@click.pass_obj
@report_execution_time()
def examples_command(session, names):
    """Reproduce the published worked examples."""
    catalogue = worked_examples()
    known = [example.name for example in catalogue]
    unknown = sorted(set(names) - set(known))
    if unknown:
        msg = f"unknown example {', '.join(unknown)}, expected one of {', '.join(known)}"
        raise click.BadParameter(msg, param_hint="--only")

    selected = [e for e in catalogue if not names or e.name in names]
    checks, failed = [], []
    for example in selected:
        try:
            check = reproduce_example(
                example, tolerances=session.tolerances, **session.solver_options
            )
        except QuarticFlexError as error:
            logger.error("example %s failed: %s", example.name, error)
            failed.append(example.name)
            continue
        checks.append(check)
        if not check.passed:
            failed.append(example.name)
    click.echo(render_examples(checks, session.fmt))
    if failed:
        logger.warning("not reproduced: %s", ", ".join(failed))
        sys.exit(4)
