"""wl1plot: turn benchmark CSVs into figures."""

from __future__ import annotations

import click

from .render import FigureSpec, PlotDataError, render


@click.command()
@click.option("--csv", "csv_path", required=True, type=click.Path(),
              help="Input CSV (bench or recover schema).")
@click.option("--x", default="d", show_default=True, help="X-axis column.")
@click.option("--y", default="time_ns", show_default=True, help="Y-axis column.")
@click.option("--group", default="algo", show_default=True,
              help="One line per distinct value of this column.")
@click.option("--logx", is_flag=True, help="Logarithmic x axis.")
@click.option("--logy", is_flag=True, help="Logarithmic y axis.")
@click.option("--out", "out_path", default="figure.svg", show_default=True,
              type=click.Path(), help="Output image (.svg or .png).")
def main(csv_path, x, y, group, logx, logy, out_path):
    """Plot one line per group from a benchmark CSV."""
    spec = FigureSpec(csv_path=csv_path, x=x, y=y, group=group,
                      logx=logx, logy=logy, out_path=out_path)
    try:
        written = render(spec)
    except (OSError, PlotDataError) as exc:
        raise click.ClickException(str(exc))
    click.echo(written)


if __name__ == "__main__":
    main()
