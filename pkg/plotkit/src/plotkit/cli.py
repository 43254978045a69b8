"""Command-line entry points: one command per figure kind."""

import sys

import click

from .figures import FigureSpec, ParseError, render


def _render_or_die(spec):
    try:
        out = render(spec)
    except ParseError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"wrote {out}")


@click.command()
@click.option("--solution", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="solution.csv written by the experiment harness.")
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Output image path.")
@click.option("--title", default=None, help="Optional figure title.")
def heatmap(solution, out, title):
    """Space-time heatmap of the real part of a stored solution."""
    labels = (title,) if title else ()
    _render_or_die(FigureSpec("heatmap", (solution,), out, labels=labels))


@click.command()
@click.option("--inputs", required=True, multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="One or more errors.csv files (repeat the flag).")
@click.option("--labels", multiple=True,
              help="Legend labels, one per input (defaults to run names).")
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Output image path.")
def errors(inputs, labels, out):
    """Overlay per-step relative-error curves on a log axis."""
    if labels and len(labels) != len(inputs):
        raise click.ClickException(
            f"got {len(labels)} labels for {len(inputs)} inputs")
    _render_or_die(FigureSpec("error_curves", inputs, out, labels=labels))


@click.command()
@click.option("--residuals", "residuals_csv", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="residuals.csv written by the experiment harness.")
@click.option("--stages", "stages_csv", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="stages.csv with the stage boundaries to mark.")
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Output image path.")
def residuals(residuals_csv, stages_csv, out):
    """Residual trace with dashed lines at stage boundaries."""
    _render_or_die(
        FigureSpec("residual_trace", (residuals_csv, stages_csv), out))


@click.command()
@click.option("--residuals-a", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--stages-a", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--residuals-b", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--stages-b", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--labels", multiple=True,
              help="Two panel titles (defaults provided).")
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Output image path.")
def segmentation(residuals_a, stages_a, residuals_b, stages_b, labels, out):
    """Stack two residual/stage traces for side-by-side comparison."""
    if labels and len(labels) != 2:
        raise click.ClickException("segmentation takes exactly two labels")
    _render_or_die(FigureSpec(
        "segmentation_compare",
        (residuals_a, stages_a, residuals_b, stages_b), out, labels=labels))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(heatmap())
