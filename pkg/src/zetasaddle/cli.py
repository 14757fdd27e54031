"""Command-line front end.

    zetasaddle eval --n 20 --a 2 --mode both
    zetasaddle table 3 --format csv
    zetasaddle trace --n 20 --a 1 --what paths

Data goes to stdout, diagnostics to stderr.  Exit status is 0 on success,
1 for usage errors and 2 for numerical failures.
"""

from __future__ import annotations

import csv
import json
import math
import sys

import click

from .direct import SeriesPoint, a_direct_s
from .errors import ZetaSaddleError
from .saddles import contributory_range
from .sdexp import EvaluationReport, assemble
from .tables import regenerate
from .tracer import classify_paths

EXIT_USAGE = 1
EXIT_NUMERIC = 2


def _write_csv(header: list[str], rows) -> None:
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(header)
    for r in rows:
        out.writerow(r)


def _report_text(rep: EvaluationReport) -> str:
    lines = [f"n = {rep.n}  a = {rep.a}  sigma = {rep.sigma}  s = {rep.s}"]
    if rep.m is not None:
        lines.append(f"contributory saddles {rep.k_star}..{rep.m} ({rep.method}), order j <= {rep.j_max}")
    if rep.direct is not None:
        lines.append(f"direct     {rep.direct.real:+.10f} {rep.direct.imag:+.10f}i")
    if rep.asymptotic is not None:
        lines.append(f"asymptotic {rep.asymptotic.real:+.10f} {rep.asymptotic.imag:+.10f}i")
    if rep.rel_err is not None:
        lines.append(f"abs_err {rep.abs_err:.3e}  rel_err {rep.rel_err:.3e}")
    for k, ih, om in rep.per_saddle:
        lines.append(f"  k={k:3d}  i_hat={ih:.6e}  omega={om:.6f}")
    if rep.flags:
        lines.append("flags: " + ", ".join(rep.flags))
    return "\n".join(lines)


def _report_csv(rep: EvaluationReport) -> None:
    def part(z, attr):
        return "" if z is None else getattr(z, attr)

    _write_csv(
        ["n", "a", "sigma", "k_star", "m", "method", "direct_re", "direct_im",
         "asymptotic_re", "asymptotic_im", "abs_err", "rel_err", "flags"],
        [[rep.n, rep.a, rep.sigma, rep.k_star, rep.m, rep.method,
          part(rep.direct, "real"), part(rep.direct, "imag"),
          part(rep.asymptotic, "real"), part(rep.asymptotic, "imag"),
          rep.abs_err, rep.rel_err, ";".join(rep.flags)]],
    )


def evaluate(n: int, a: float | None, sigma: float, order: int, mode: str, trace_classify: bool,
             s_real: float | None, s_imag: float | None, precision: int | None) -> EvaluationReport:
    override = s_real is not None or s_imag is not None
    if override:
        if mode != "direct":
            raise click.UsageError("--s-real/--s-imag apply to --mode direct only")
        s = complex(sigma if s_real is None else s_real, 0.0 if s_imag is None else s_imag)
        return EvaluationReport(n=n, a=a, sigma=s.real, s=s, direct=a_direct_s(n, s, precision))
    if a is None:
        raise click.UsageError("--a is required unless --s-real/--s-imag are given")
    if n < 1:
        raise click.UsageError("s = sigma + i a n needs n >= 1; use --s-real/--s-imag for n = 0")
    p = SeriesPoint(n, a, sigma)
    if mode == "direct":
        return EvaluationReport(n=n, a=a, sigma=sigma, s=p.s, direct=a_direct_s(n, p.s, precision))
    rng = contributory_range(p, "traced" if trace_classify else "heuristic")
    return assemble(p, rng, j_max=order, with_direct=(mode == "both"), precision_digits=precision)


@click.group()
def cli():
    """Saddle-point asymptotics of the terms A(n, s) of the binomial zeta series."""


@cli.command("eval")
@click.option("--n", "n", type=click.IntRange(min=0), required=True)
@click.option("--a", "a", type=float, default=None)
@click.option("--sigma", type=float, default=0.5, show_default=True)
@click.option("--order", type=click.IntRange(0, 2), default=2, show_default=True)
@click.option("--mode", type=click.Choice(["direct", "asymptotic", "both"]), default="both", show_default=True)
@click.option("--trace-classify/--heuristic-classify", default=True, show_default=True,
              help="Contributory range from traced descent paths or from the closed-form estimate.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="text", show_default=True)
@click.option("--s-real", type=float, default=None, help="Direct mode: override Re s.")
@click.option("--s-imag", type=float, default=None, help="Direct mode: override Im s.")
@click.option("--precision", type=click.IntRange(min=16), default=None,
              help="Digits for the multiprecision direct sum.")
def eval_cmd(n, a, sigma, order, mode, trace_classify, fmt, s_real, s_imag, precision):
    """Evaluate A(n, s) at s = sigma + i a n."""
    if a is not None and not a > 0:
        raise click.BadParameter("must be positive", param_hint="--a")
    rep = evaluate(n, a, sigma, order, mode, trace_classify, s_real, s_imag, precision)
    if fmt == "json":
        click.echo(json.dumps(rep.to_dict(), indent=2))
    elif fmt == "csv":
        _report_csv(rep)
    else:
        click.echo(_report_text(rep))
    for f in rep.flags:
        click.echo(f"warning: {f}", err=True)


@cli.command("table")
@click.argument("table_id", type=click.IntRange(1, 4))
@click.option("--format", "fmt", type=click.Choice(["csv", "json", "text"]), default="csv", show_default=True)
@click.option("--order", type=click.IntRange(0, 2), default=2, show_default=True)
def table_cmd(table_id, fmt, order):
    """Regenerate one of the four reference tables."""
    rows = regenerate(table_id, order)
    if fmt == "json":
        click.echo(json.dumps(rows, indent=2))
        return
    header = list(rows[0])
    if fmt == "csv":
        _write_csv(header, ([r[h] for h in header] for r in rows))
        return
    for r in rows:
        click.echo("  ".join(f"{h}={r[h]}" for h in header if r[h] != ""))


@cli.command("trace")
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--a", "a", type=float, required=True)
@click.option("--sigma", type=float, default=0.5, show_default=True)
@click.option("--what", type=click.Choice(["paths", "ihat", "omega"]), default="paths", show_default=True)
@click.option("--step", type=click.FloatRange(1e-4, 0.1), default=0.05, show_default=True)
def trace_cmd(n, a, sigma, what, step):
    """Descent-path polylines, or per-saddle magnitudes or decay rates, as CSV."""
    if not a > 0:
        raise click.BadParameter("must be positive", param_hint="--a")
    p = SeriesPoint(n, a, sigma)
    rng, paths = classify_paths(p, step=step)
    if what == "paths":
        def rows():
            for k in rng.indices:
                for q in paths[k]:
                    role = "forward" if math.isclose(q.direction, rng.forward.get(k, math.nan)) else "backward"
                    for pt in q.points:
                        yield [k, role, str(q.endpoint), q.winding, pt.tau, pt.w.real, pt.w.imag, pt.re_psi, pt.im_psi]

        _write_csv(["k", "branch", "endpoint", "winding", "tau", "re_w", "im_w", "re_psi", "im_psi_continued"], rows())
        return
    rep = assemble(p, rng, with_direct=False)
    if what == "ihat":
        _write_csv(["k", "log10_i_hat"], ([k, math.log10(ih)] for k, ih, _ in rep.per_saddle))
    else:
        _write_csv(["k", "omega"], ([k, om] for k, _, om in rep.per_saddle))


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, prog_name="zetasaddle", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except ZetaSaddleError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return EXIT_NUMERIC
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
