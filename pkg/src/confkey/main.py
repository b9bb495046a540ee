import logging
from importlib.metadata import version as pkg_version
from typing import Optional

import typer

from confkey.cli.analyze_cmd import analyze_star_command
from confkey.cli.compare_cmd import compare_command
from confkey.cli.sweep_cmd import sweep_command
from confkey.cli.threshold_cmd import threshold_command
from confkey.cli.topology_cmd import generate_topology_command
from confkey.cli.validate_cmd import validate_command

app = typer.Typer(
    name="confkey",
    help="Multiparty conference key distribution over quantum repeater networks.",
    no_args_is_help=True,
    invoke_without_command=True,
)

app.command("generate-topology")(generate_topology_command)
app.command("sweep")(sweep_command)
app.command("analyze-star")(analyze_star_command)
app.command("validate")(validate_command)
app.command("compare")(compare_command)
app.command("threshold")(threshold_command)


def version_callback(value: bool):
    if value:
        typer.echo(f"confkey {pkg_version('confkey')}")
        raise typer.Exit()


@app.callback()
def main(
    version: Optional[bool] = typer.Option(
        None,
        "--version",
        "-v",
        callback=version_callback,
        is_eager=True,
        help="Show version and exit.",
    ),
    debug: bool = typer.Option(
        False,
        "--debug",
        help="Enable debug logging.",
    ),
):
    """Multiparty conference key distribution over quantum repeater networks."""
    level = logging.DEBUG if debug else logging.WARNING
    logging.basicConfig(
        level=logging.WARNING, format="%(name)s %(levelname)s: %(message)s"
    )
    logging.getLogger("confkey").setLevel(level)
    # Sweep INFO records go to the log file only.
    for handler in logging.getLogger().handlers:
        handler.setLevel(level)


if __name__ == "__main__":
    app()
