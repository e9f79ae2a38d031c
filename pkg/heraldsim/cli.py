"""
Console script for heraldsim.

Exit codes: 0 on success, 2 for invalid input (bad parameters, malformed
files, database configuration) and 3 for numerical or physical failures
(unphysical states, zero-probability patterns, refinements that did not
converge).
"""

import functools
import json
import logging
from typing import Any, Callable, Dict, List, Optional

import click

from heraldsim.config import (
    DEFAULT_D_MAX,
    DEFAULT_REL_TOL,
    DEFAULT_THREADS,
    OUTPUT_FORMATS,
    RunConfig,
    load_env_config,
    parse_grid,
)
from heraldsim.db_utils import db_access
from heraldsim.exceptions import (
    ConvergenceException,
    DatabaseException,
    InvalidParameterException,
    UnphysicalStateException,
    ZeroProbabilityException,
)
from heraldsim.lhaf_utils import PRECISIONS
from heraldsim.lhaf_utils.cost import COST_LEGEND, cost_table
from heraldsim.lhaf_utils.lhaf_engine import lhaf_repeated, lhaf_spm
from heraldsim.merit_utils.merits import experiment_time, required_copies
from heraldsim.merit_utils.wigner import (
    auto_half_extent,
    purity_from_wigner,
    wigner,
    wigner_minimum,
)
from heraldsim.scheme_utils import preset_defaults, report_table
from heraldsim.scheme_utils.circuit_file import read_circuit, read_loop_matrix
from heraldsim.scheme_utils.schemes import CircuitSpec, herald_state, preset, run, sweep

INPUT_ERROR = 2
NUMERICAL_ERROR = 3

_EXIT_CODES = (
    (InvalidParameterException, INPUT_ERROR),
    (DatabaseException, INPUT_ERROR),
    (AssertionError, INPUT_ERROR),
    (UnphysicalStateException, NUMERICAL_ERROR),
    (ZeroProbabilityException, NUMERICAL_ERROR),
    (ConvergenceException, NUMERICAL_ERROR),
)


def exit_on_error(command: Callable) -> Callable:
    """Turn heraldsim exceptions into an error message and the matching exit code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except tuple(error for error, _ in _EXIT_CODES) as e:
            code = next(code for error, code in _EXIT_CODES if isinstance(e, error))
            click.echo(f"Error: {getattr(e, 'message', e)}", err=True)
            click.get_current_context().exit(code)

    return wrapper


def format_complex(value: complex) -> str:
    """Print ``value`` as re+im i with 15 significant digits."""
    value = complex(value)
    sign = "-" if value.imag < 0 else "+"
    return f"{value.real:.15g}{sign}{abs(value.imag):.15g}i"


def _parse_counts(text: str) -> List[int]:
    try:
        counts = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InvalidParameterException(f"{text!r} is not a comma separated list of integers")
    return counts


def circuit_options(command: Callable) -> Callable:
    """Options selecting a circuit from a file or a preset."""
    options = [
        click.argument("circuit_file", required=False, type=click.Path()),
        click.option(
            "--preset",
            "preset_name",
            type=click.Choice(sorted(preset_defaults)),
            help="Use a built-in circuit instead of a file.",
        ),
        click.option("--r", type=float, help="Two-mode squeezing of the fock preset."),
        click.option("--z", type=float, help="Squeezing of the cat preset."),
        click.option("--m", type=int, help="Detected photons of the fock and cat presets."),
        click.option("--a", type=float, help="Target parameter of the cubic preset."),
        click.option("--mesh", help="Beamsplitter ordering of the cubic preset."),
        click.option(
            "--rel-tol",
            type=float,
            envvar="HERALDSIM_REL_TOL",
            default=DEFAULT_REL_TOL,
            show_default=True,
            help="Relative tolerance of the adaptive cutoff.",
        ),
        click.option(
            "--d-max",
            type=int,
            envvar="HERALDSIM_D_MAX",
            default=DEFAULT_D_MAX,
            show_default=True,
            help="Largest Fock cutoff.",
        ),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def load_circuit(
    circuit_file: Optional[str], preset_name: Optional[str], eta1: Any, eta2: Any, **params: Any
) -> CircuitSpec:
    """
    load_circuit reads a circuit file or builds a preset.

    Parameters
    ----------
    circuit_file : Optional[str]
        path of a circuit file
    preset_name : Optional[str]
        name of a preset, used when no file is given
    eta1, eta2 : Any
        transmissions or placeholders handed to the preset
    **params
        preset parameters given on the command line; None entries are ignored

    Returns
    -------
    CircuitSpec
        the circuit
    """
    overrides = {key: value for key, value in params.items() if value is not None}
    if (circuit_file is None) == (preset_name is None):
        raise InvalidParameterException("give either a circuit file or --preset")
    if circuit_file is not None:
        if overrides:
            raise InvalidParameterException(
                f"{sorted(overrides)} only apply to presets, not to circuit files"
            )
        return read_circuit(circuit_file)
    return preset(preset_name, eta1=eta1, eta2=eta2, **overrides)


def _write_text(text: str, path: str) -> None:
    try:
        with open(path, "w") as f:
            f.write(text)
    except OSError as e:
        raise InvalidParameterException(f"cannot write {path}: {e.strerror}")


def _closed_circuit(spec: CircuitSpec, eta1: float, eta2: float) -> CircuitSpec:
    return spec.bind(eta1, eta2) if spec.open_losses else spec


@click.group()
@click.option(
    "--env-file",
    default=".env",
    show_default=True,
    help="File with HERALDSIM_* settings, read when it exists.",
)
@click.option("-v", "--verbose", is_flag=True, help="Log debugging detail.")
@click.option("-q", "--quiet", is_flag=True, help="Only log warnings and errors.")
@click.pass_context
def cli(ctx: click.Context, env_file: str, verbose: bool, quiet: bool):
    """Simulate heralded non-Gaussian state preparation from lossy Gaussian circuits."""
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif quiet:
        logging.getLogger().setLevel(logging.WARNING)
    ctx.obj = load_env_config(env_file)


@cli.command()
@click.argument("matrix_file", type=click.Path())
@click.option("--oracle", is_flag=True, help="Sum over all single-pair matchings instead.")
@click.option(
    "--precision",
    type=click.Choice(PRECISIONS),
    default="auto",
    show_default=True,
    help="Accumulation precision of the repeated-index sum.",
)
@exit_on_error
def lhaf(matrix_file: str, oracle: bool, precision: str):
    """Print the loop hafnian of the matrix in MATRIX_FILE."""
    spec = read_loop_matrix(matrix_file)
    value = lhaf_spm(spec.expand()) if oracle else lhaf_repeated(spec, precision)
    click.echo(format_complex(value))


@cli.command("run")
@circuit_options
@click.option("--eta1", type=float, default=1.0, show_default=True, help="First transmission.")
@click.option("--eta2", type=float, default=1.0, show_default=True, help="Second transmission.")
@click.option("--out", type=click.Path(), help="Write the report here instead of stdout.")
@click.option("--format", "output_format", type=click.Choice(OUTPUT_FORMATS), default="json")
@click.option(
    "--epsilon",
    type=float,
    default=1e-3,
    show_default=True,
    help="Failure rate used for the number of parallel copies.",
)
@click.option(
    "--frequency",
    type=float,
    default=1e6,
    show_default=True,
    help="Repetition rate in Hz used for the time per heralded state.",
)
@exit_on_error
def run_command(
    circuit_file, preset_name, r, z, m, a, mesh, rel_tol, d_max, eta1, eta2, out,
    output_format, epsilon, frequency,
):
    """Herald one circuit and report p, F and the WLN."""
    config = RunConfig(
        "run", circuit_file, out, rel_tol=rel_tol, d_max=d_max, output_format=output_format
    )
    spec = load_circuit(circuit_file, preset_name, eta1, eta2, r=r, z=z, m=m, a=a, mesh=mesh)
    report = run(_closed_circuit(spec, eta1, eta2), config.rel_tol, config.d_max)
    if config.output_format == "csv":
        text = report_table.write_table(
            report_table.reports_to_frame([report]), config.output_path, "csv"
        )
    else:
        payload: Dict[str, Any] = {
            "scheme": spec.name,
            "loss_mapping": spec.loss_mapping,
            **report.to_dict(),
        }
        if report.p > 0:
            payload["required_copies"] = required_copies(report.p, epsilon)
            payload["seconds_per_state"] = experiment_time(1, frequency, report.p)
        text = json.dumps(payload, indent=2) + "\n"
        if config.output_path is not None:
            _write_text(text, config.output_path)
    if config.output_path is None:
        click.echo(text, nl=False)


@cli.command("sweep")
@circuit_options
@click.option("--eta1", "eta1_text", default="1", show_default=True, help="Value or a:b:n grid.")
@click.option("--eta2", "eta2_text", default="1", show_default=True, help="Value or a:b:n grid.")
@click.option(
    "--threads",
    type=int,
    envvar="HERALDSIM_THREADS",
    default=DEFAULT_THREADS,
    show_default=True,
    help="Number of workers.",
)
@click.option("--out", type=click.Path(), help="Write the table here instead of stdout.")
@click.option("--format", "output_format", type=click.Choice(OUTPUT_FORMATS), default="csv")
@click.option("--svg", "svg_prefix", help="Write PREFIX_p.svg, PREFIX_F.svg and PREFIX_wln.svg.")
@click.option("--timing/--no-timing", default=True, help="Record the seconds per point.")
@click.option(
    "--db-config",
    type=click.Path(),
    help="Env file of a results database the table is stored in.",
)
@exit_on_error
def sweep_command(
    circuit_file, preset_name, r, z, m, a, mesh, rel_tol, d_max, eta1_text, eta2_text,
    threads, out, output_format, svg_prefix, timing, db_config,
):
    """Run a circuit over a grid of eta1 x eta2 transmissions."""
    config = RunConfig(
        "sweep",
        circuit_file,
        out,
        rel_tol=rel_tol,
        d_max=d_max,
        eta1_grid=parse_grid(eta1_text),
        eta2_grid=parse_grid(eta2_text),
        threads=threads,
        output_format=output_format,
    )
    template = load_circuit(
        circuit_file, preset_name, "eta1", "eta2", r=r, z=z, m=m, a=a, mesh=mesh
    )
    if template.loss_mapping:
        logging.info(f"{template.name} loss mapping: {template.loss_mapping}")
    reports = sweep(
        template,
        config.eta1_grid,
        config.eta2_grid,
        rel_tol=config.rel_tol,
        d_max=config.d_max,
        threads=config.threads,
    )
    frame = report_table.reports_to_frame(reports, timing=timing)
    text = report_table.write_table(frame, config.output_path, config.output_format)
    if config.output_path is None:
        click.echo(text, nl=False)
    if svg_prefix is not None:
        report_table.write_svg_heatmaps(frame, svg_prefix)
    if db_config is not None:
        engine = db_access.create_db_with_tables(db_config)
        run_id = db_access.upload_sweep(
            frame, engine, template.name, template.loss_mapping, config.rel_tol, config.d_max
        )
        engine.dispose()
        logging.info(f"Stored sweep {run_id} in the results database")


@cli.command("wigner")
@circuit_options
@click.option("--eta1", type=float, default=1.0, show_default=True, help="First transmission.")
@click.option("--eta2", type=float, default=1.0, show_default=True, help="Second transmission.")
@click.option("--n-pts", type=int, default=201, show_default=True, help="Points per axis.")
@click.option("--half-extent", type=float, help="Half width L of the grid; sized from the state by default.")
@click.option("--out", type=click.Path(), help="Write the x,p,W table here instead of stdout.")
@exit_on_error
def wigner_command(
    circuit_file, preset_name, r, z, m, a, mesh, rel_tol, d_max, eta1, eta2, n_pts,
    half_extent, out,
):
    """Sample the Wigner function of a heralded state as an x,p,W table."""
    spec = load_circuit(circuit_file, preset_name, eta1, eta2, r=r, z=z, m=m, a=a, mesh=mesh)
    result = herald_state(_closed_circuit(spec, eta1, eta2), rel_tol, d_max)
    if half_extent is None:
        half_extent = auto_half_extent(result.rho)
    grid = wigner(result.rho, half_extent, n_pts)
    logging.info(
        f"W integrates to {grid.integral():.6f}; min W = {wigner_minimum(grid):.6f}, "
        f"purity from W = {purity_from_wigner(grid):.6f}"
    )
    text = report_table.write_table(report_table.wigner_to_frame(grid), out, "csv")
    if out is None:
        click.echo(text, nl=False)


@cli.command()
@click.option("--n", "n_text", required=True, help="Ket photon numbers, e.g. 1,2,20.")
@click.option("--m", "m_text", help="Bra photon numbers, by default equal to --n.")
@click.option("--cutoff", "-d", type=int, required=True, help="Cutoff d of the Fock methods.")
@click.option("--format", "output_format", type=click.Choice(("text",) + OUTPUT_FORMATS), default="text")
@exit_on_error
def cost(n_text: str, m_text: Optional[str], cutoff: int, output_format: str):
    """Compare the step counts of the loop hafnian methods for one Fock element."""
    n = _parse_counts(n_text)
    m = _parse_counts(m_text) if m_text is not None else n
    table = cost_table(n, m, cutoff)
    if output_format == "text":
        click.echo(f"n = {tuple(n)}, m = {tuple(m)}, d = {cutoff}")
        click.echo(table.to_string(float_format=lambda v: f"{v:.4g}"))
        click.echo(COST_LEGEND)
    else:
        click.echo(report_table.write_table(table.reset_index(), None, output_format), nl=False)


if __name__ == "__main__":
    cli()
