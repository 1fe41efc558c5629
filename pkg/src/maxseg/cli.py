"""``maxseg`` command line: gen, mine, verify, bench.

Exit codes: 0 success, 1 usage error, 2 verification mismatch, 3 I/O failure.
Every option can also be set through an environment variable named
``MAXSEG_<OPTION>`` (e.g. ``MAXSEG_MIN_SUP``); command-line flags win.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click

from . import bench as bench_mod
from .core import (
    SupportThreshold,
    format_itemset,
    read_label_map,
    read_transactions,
    write_transactions,
)
from .datagen import GenConfig, generate
from .oracle import oracle_mfs

EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_IO = 3

log = logging.getLogger("maxseg")


class IOFailure(click.ClickException):
    exit_code = EXIT_IO


class Mismatch(click.ClickException):
    exit_code = EXIT_MISMATCH


def _opt(*decls, **kw):
    long = next(d for d in decls if d.startswith("--"))
    name = long[2:].replace("-", "_").upper()
    return click.option(*decls, envvar=f"MAXSEG_{name}", show_envvar=True, **kw)


def _threshold(min_sup: int | None, min_sup_pct: float | None) -> SupportThreshold:
    if (min_sup is None) == (min_sup_pct is None):
        raise click.UsageError("give exactly one of --min-sup or --min-sup-pct")
    try:
        if min_sup is not None:
            return SupportThreshold.absolute(min_sup)
        return SupportThreshold.percentage(min_sup_pct)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def _load(path: str):
    try:
        return read_transactions(path)
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise IOFailure(f"{path}: {exc}") from exc


def _labels(input_path: str, labels_path: str | None) -> dict[int, str] | None:
    """Explicit --labels, else a sibling ``<stem>.labels`` file if present."""
    path = Path(labels_path) if labels_path else Path(input_path).with_suffix(".labels")
    if not labels_path and not path.exists():
        return None
    try:
        return read_label_map(path)
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise IOFailure(f"{path}: {exc}") from exc


def _write(text: str, output: str | None) -> None:
    if output is None:
        click.echo(text, nl=False)
        return
    try:
        Path(output).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IOFailure(f"cannot write {output}: {exc.strerror or exc}") from exc


threshold_options = [
    _opt("--min-sup", type=click.IntRange(min=1), help="Absolute minimum support count."),
    _opt("--min-sup-pct", type=click.FloatRange(min=0, max=100, min_open=True),
         help="Minimum support as a percentage of transactions."),
]


def with_threshold(f):
    for decorator in reversed(threshold_options):
        f = decorator(f)
    return f


@click.group()
@_opt("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def cli(verbose: bool) -> None:
    """Maximal frequent itemset mining by segmentation, with a Pincer-search baseline."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


@cli.command()
@_opt("--t", "avg_len", type=click.IntRange(min=1), default=10, show_default=True,
      help="Average transaction length.")
@_opt("--i", "pattern_len", type=click.IntRange(min=1), default=3, show_default=True,
      help="Average base-pattern length.")
@_opt("--d", "num_tx", type=click.IntRange(min=0), default=10_000, show_default=True,
      help="Number of transactions.")
@_opt("--items", type=click.IntRange(min=1), default=100, show_default=True, help="Item universe size.")
@_opt("--patterns", type=click.IntRange(min=1), default=20, show_default=True,
      help="Number of base patterns.")
@_opt("--noise", type=click.FloatRange(0, 1), default=0.1, show_default=True,
      help="Probability that a pattern item is replaced by a random item.")
@_opt("--seed", type=int, default=0, show_default=True)
@_opt("--output", type=click.Path(dir_okay=False), help="Destination file (default stdout).")
def gen(avg_len, pattern_len, num_tx, items, patterns, noise, seed, output):
    """Generate a synthetic transaction file."""
    try:
        config = GenConfig(avg_len, pattern_len, num_tx, items, patterns, noise, seed)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    source = generate(config)
    if output is None:
        for t in source.transactions:
            click.echo(" ".join(map(str, t.items)))
        return
    try:
        write_transactions(source, output)
    except OSError as exc:
        raise IOFailure(f"cannot write {output}: {exc.strerror or exc}") from exc
    log.info("wrote %d transactions (%s) to %s", len(source), config.name, output)


@cli.command("mine")
@_opt("--algo", type=click.Choice(bench_mod.ALGORITHMS), default="seg", show_default=True)
@_opt("--input", "input_path", required=True, type=click.Path(dir_okay=False),
      help="Transaction file, one whitespace-separated transaction per line.")
@with_threshold
@_opt("--segments", type=click.IntRange(min=1), help="Segment count (clamped to 100 / min_sup%).")
@_opt("--exact-counts", is_flag=True, help="Spend one extra pass to report true supports.")
@_opt("--labels", "labels_path", type=click.Path(dir_okay=False),
      help="Label map 'id<TAB>label'; defaults to <input>.labels when present.")
@_opt("--output", type=click.Path(dir_okay=False), help="Destination file (default stdout).")
def mine_cmd(algo, input_path, min_sup, min_sup_pct, segments, exact_counts, labels_path, output):
    """Mine maximal frequent itemsets and print one per line: items<TAB>count."""
    threshold = _threshold(min_sup, min_sup_pct)
    source = _load(input_path)
    labels = _labels(input_path, labels_path)
    try:
        result = bench_mod.run_algorithm(algo, source, threshold, segments=segments, exact_counts=exact_counts)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    _write(result.format(labels), output)
    click.echo(
        f"algo={result.algorithm} mfs={len(result.mfs)} passes={result.passes} "
        f"patterns={result.patterns_processed} ms={result.elapsed_ms:.3f} "
        f"exact_counts={'yes' if result.exact_counts else 'no'}",
        err=True,
    )


@cli.command()
@_opt("--input", "input_path", required=True, type=click.Path(dir_okay=False))
@with_threshold
@_opt("--segments", type=click.IntRange(min=1))
@_opt("--labels", "labels_path", type=click.Path(dir_okay=False))
def verify(input_path, min_sup, min_sup_pct, segments, labels_path):
    """Run seg, pincer and the oracle; exit 2 if their itemset sets differ."""
    threshold = _threshold(min_sup, min_sup_pct)
    source = _load(input_path)
    labels = _labels(input_path, labels_path)
    try:
        found = {
            "seg": set(bench_mod.run_algorithm("seg", source.snapshot(), threshold, segments=segments).mfs),
            "pincer": set(bench_mod.run_algorithm("pincer", source.snapshot(), threshold).mfs),
            "oracle": set(oracle_mfs(source, threshold)),
        }
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    ok = True
    for algo in ("seg", "pincer"):
        diff = found[algo] ^ found["oracle"]
        if diff:
            ok = False
            for s in sorted(diff):
                side = "extra" if s in found[algo] else "missing"
                click.echo(f"{algo} {side}: {format_itemset(s, labels)}", err=True)
    if not ok:
        raise Mismatch("maximal itemset sets differ")
    click.echo(f"ok: {len(found['oracle'])} maximal itemsets agree across seg, pincer, oracle", err=True)


def _csv_list(kind):
    def parse(ctx, param, value):
        if value is None:
            return None
        try:
            return [kind(v) for v in value.split(",") if v.strip()]
        except ValueError as exc:
            raise click.BadParameter(str(exc)) from exc
    return parse


@cli.command("bench")
@_opt("--datasets", "datasets", required=True, multiple=True, type=click.Path(dir_okay=False),
      help="Transaction files; list them after the flag or repeat it.")
@_opt("--supports", default="10,20,30,40,50", show_default=True, callback=_csv_list(float),
      help="Comma-separated support percentages.")
@_opt("--algos", default="seg,pincer", show_default=True, callback=_csv_list(str),
      help="Comma-separated algorithms.")
@_opt("--reps", type=click.IntRange(min=1), default=3, show_default=True)
@_opt("--csv", "csv_path", type=click.Path(dir_okay=False), help="CSV destination (default stdout).")
@_opt("--plot-data", "plot_path", type=click.Path(dir_okay=False),
      help="Write per-dataset plot blocks here.")
@click.argument("more_datasets", nargs=-1, type=click.Path(dir_okay=False))
def bench_cmd(datasets, supports, algos, reps, csv_path, plot_path, more_datasets):
    """Time the miners over datasets and supports; emit CSV and plot data."""
    unknown = [a for a in algos if a not in bench_mod.ALGORITHMS]
    if unknown:
        raise click.UsageError(f"unknown algorithm(s): {', '.join(unknown)}")
    if any(not 0 < s <= 100 for s in supports):
        raise click.UsageError("supports must be percentages in (0, 100]")
    paths = [p for entry in datasets for p in entry.split()] + list(more_datasets)
    sources = {Path(p).stem: _load(p) for p in paths}
    rows = bench_mod.run_benchmark(sources, algos, supports, reps)
    _write(bench_mod.emit_csv(rows), csv_path)
    if plot_path:
        _write(bench_mod.emit_plot_data(rows), plot_path)
    if "seg" in algos and "pincer" in algos:
        click.echo(bench_mod.trend_summary(rows), err=True)
    bad = bench_mod.mismatches(rows)
    if bad:
        for dataset, pct in bad:
            click.echo(f"mismatch: {dataset} at {pct:g}%", err=True)
        raise Mismatch("algorithms disagree on some cells")


def main(argv: list[str] | None = None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="maxseg", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(main())
