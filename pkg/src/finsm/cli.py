"""Command line front end.

Exit codes are script-friendly and stable:

* 0: success (including ACCEPT and EQUIVALENT)
* 1: machine rejected the tape
* 2: machine failed DFA validation (the one-line diagnostic is the output)
* 3: machines are not equivalent up to the bound
* 64: usage error (bad flags, missing arguments)
* 65: unreadable, unparsable or invariant-violating input file

Results go to standard output; error text goes to standard error.
"""

from __future__ import annotations

import sys

import click

from finsm.analysis import (
    equivalent_up_to,
    format_definition,
    run_tape,
    subset_construction,
    validate_as_dfa,
)
from finsm.machine import FinsmError, Machine
from finsm.persistence import deserialize, serialize
from finsm.tikz import ExportOptions, export_tikz

__all__ = ["cli", "main"]


def _load_machine(path: str) -> Machine:
    with open(path, "r", encoding="utf-8") as handle:
        return deserialize(handle.read())


def _write_text(path: str | None, text: str):
    if path is None:
        click.echo(text, nl=False)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def _format_states(machine: Machine, states) -> str:
    return "{%s}" % ", ".join(sorted(machine.state_names[s] for s in states))


@click.group()
def cli():
    """Build, simulate, validate and export finite state machines."""


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--kind", type=click.Choice(["dfa", "nfa"]), required=True)
def validate(file: str, kind: str):
    """Check a machine against the determinism rules of the given kind."""
    machine = _load_machine(file)
    if kind == "dfa":
        error = validate_as_dfa(machine)
        if error is not None:
            click.echo(error.message)
            sys.exit(2)
    click.echo("OK")


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--tape", "tape_text", default=None, help="Tape as one character per symbol.")
@click.option(
    "--symbol",
    "symbols",
    multiple=True,
    help="One tape symbol; repeat for multi-character symbols.",
)
@click.option("--kind", type=click.Choice(["dfa", "nfa"]), default="nfa", show_default=True)
@click.option("--trace", is_flag=True, help="Print the active state set at every ticker position.")
def run(file: str, tape_text: str | None, symbols: tuple[str, ...], kind: str, trace: bool):
    """Run a tape and print ACCEPT or REJECT."""
    if tape_text is None and not symbols:
        raise click.UsageError("provide a tape with --tape (may be empty) or --symbol")
    if tape_text is not None and symbols:
        raise click.UsageError("--tape and --symbol are mutually exclusive")
    tape = tuple(tape_text) if tape_text is not None else tuple(symbols)

    machine = _load_machine(file)
    if kind == "dfa":
        error = validate_as_dfa(machine)
        if error is not None:
            click.echo(error.message)
            sys.exit(2)
    result = run_tape(machine, tape)
    if trace:
        for active in result.trace:
            click.echo(_format_states(machine, active))
    if result.accepted:
        click.echo("ACCEPT")
    else:
        click.echo("REJECT")
        sys.exit(1)


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def determinize(file: str, output: str | None):
    """Determinize a machine via subset construction."""
    machine = _load_machine(file)
    _write_text(output, serialize(subset_construction(machine)))


@cli.command()
@click.argument("file_a", type=click.Path(dir_okay=False))
@click.argument("file_b", type=click.Path(dir_okay=False))
@click.option("--max-len", type=click.IntRange(min=0), default=10, show_default=True)
def equiv(file_a: str, file_b: str, max_len: int):
    """Compare the languages of two machines on all tapes up to a length."""
    a = _load_machine(file_a)
    b = _load_machine(file_b)
    result = equivalent_up_to(a, b, max_len)
    if result.equivalent:
        click.echo("EQUIVALENT")
    else:
        tape = " ".join(result.counterexample) if result.counterexample else "ε"
        click.echo(f"COUNTEREXAMPLE: {tape}")
        sys.exit(3)


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--nonce", default=None, help="Fix node-name hashing for reproducible output.")
@click.option("--grid", type=click.FloatRange(min=0), default=0.0, show_default=True)
@click.option("--scale", type=click.FloatRange(min=0, min_open=True), default=1.0, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def export(file: str, nonce: str | None, grid: float, scale: float, output: str | None):
    """Export a machine as TikZ code."""
    machine = _load_machine(file)
    document = export_tikz(machine, ExportOptions(scale=scale, grid_snap=grid, nonce=nonce))
    _write_text(output, document.source)


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False))
def definition(file: str):
    """Print the machine's formal 5-tuple definition."""
    click.echo(format_definition(_load_machine(file)), nl=False)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option(
    "--port", type=int, default=8040, envvar="FINSM_PORT", show_default=True,
    help="Flag wins over FINSM_PORT.",
)
@click.option(
    "--data-dir", default="finsm-data", envvar="FINSM_DATA_DIR", show_default=True,
    help="Flag wins over FINSM_DATA_DIR.",
)
@click.option("--cors-origin", default="*", show_default=True)
def serve(host: str, port: int, data_dir: str, cors_origin: str):
    """Run the HTTP service."""
    import uvicorn

    from finsm.service import create_app

    uvicorn.run(create_app(data_dir, cors_origin=cors_origin), host=host, port=port)


def main(argv: list[str] | None = None) -> int:
    """Entry point mapping every failure mode to its exit code."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 64
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return 130
    except FinsmError as exc:
        click.echo(f"error: {exc}", err=True)
        return 65
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return 65
    return 0


if __name__ == "__main__":
    sys.exit(main())
