"""Operator CLI: gen, build, search, update, stats, serve, bench."""

from __future__ import annotations

import sys
import time
from pathlib import Path

import click

from . import bench as bench_mod
from . import persist
from .errors import BenchMismatch, CrossIndexError, DuplicateKey, EmptyQuery
from .index import GlobalIndex
from .ingest import SourceConfig, load_sources
from .model import CustomerType
from .normalize import AbbreviationTable
from .synth import GeneratorParams, generate

EXIT_USAGE = 2
EXIT_DUPLICATES = 3
EXIT_EMPTY_QUERY = 4
EXIT_FAILURE = 1


def _load_table(path: str | None) -> AbbreviationTable:
    if path:
        return AbbreviationTable.load(path)
    return AbbreviationTable.default()


def _load_config(path: str) -> SourceConfig:
    if not Path(path).exists():
        click.echo(f"source config not found: {path}", err=True)
        sys.exit(EXIT_USAGE)
    return SourceConfig.load(path)


def _load_snapshot(path: str) -> GlobalIndex:
    if not Path(path).exists():
        click.echo(f"snapshot not found: {path}", err=True)
        sys.exit(EXIT_USAGE)
    return persist.load(path)


def _parse_type(value: str | None) -> CustomerType | None:
    if not value:
        return None
    aliases = {"c": CustomerType.CORPORATE, "corporate": CustomerType.CORPORATE,
               "i": CustomerType.INDIVIDUAL, "individual": CustomerType.INDIVIDUAL,
               "j": CustomerType.JOINT, "joint": CustomerType.JOINT}
    try:
        return aliases[value.strip().lower()]
    except KeyError:
        click.echo(f"unknown customer type: {value}", err=True)
        sys.exit(EXIT_USAGE)


@click.group()
def main():
    """Cross-database customer identity index."""


@main.command()
@click.option("--count", type=int, required=True, help="Total records to generate.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-dir", type=click.Path(), required=True)
@click.option("--fids", type=int, default=16, show_default=True,
              help="Number of logical databases.")
@click.option("--corporate-fraction", type=float, default=0.4, show_default=True)
@click.option("--missing-field-rate", type=float, default=0.10, show_default=True)
@click.option("--typo-rate", type=float, default=0.05, show_default=True)
@click.option("--abbreviation-variant-rate", type=float, default=0.10, show_default=True)
@click.option("--transposition-rate", type=float, default=0.05, show_default=True)
@click.option("--duplicate-rate", type=float, default=0.03, show_default=True)
@click.option("--incoherent-address-rate", type=float, default=0.03, show_default=True)
def gen(count, seed, out_dir, fids, corporate_fraction, missing_field_rate, typo_rate,
        abbreviation_variant_rate, transposition_rate, duplicate_rate,
        incoherent_address_rate):
    """Generate a synthetic dirty corpus plus its clean-truth file."""
    params = GeneratorParams(
        count=count, seed=seed, fids=fids, corporate_fraction=corporate_fraction,
        missing_field_rate=missing_field_rate, typo_rate=typo_rate,
        abbreviation_variant_rate=abbreviation_variant_rate,
        transposition_rate=transposition_rate, duplicate_rate=duplicate_rate,
        incoherent_address_rate=incoherent_address_rate,
    )
    try:
        report = generate(params, out_dir)
    except CrossIndexError as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_FAILURE)
    click.echo(f"wrote {len(report.files)} source files ({report.count} records) to {out_dir}")
    click.echo(f"truth file: {report.truth_file}")
    click.echo(f"source config: {report.config_file}")
    for defect in sorted(report.applied):
        click.echo(f"  {defect}: {report.applied[defect]} applied "
                   f"/ {report.applicable[defect]} applicable")


@main.command()
@click.option("--sources", envvar="CROSSINDEX_SOURCES", required=True,
              help="Source config file (FID<TAB>path lines).")
@click.option("--abbrev", default=None, help="Abbreviation table file.")
@click.option("--snapshot", type=click.Path(), required=True, help="Snapshot output path.")
def build(sources, abbrev, snapshot):
    """Scan all sources once and build the index."""
    cfg = _load_config(sources)
    table = _load_table(abbrev)
    try:
        records = load_sources(cfg)
    except CrossIndexError as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_USAGE)
    start = time.perf_counter()
    try:
        index = GlobalIndex.build(records, table)
    except DuplicateKey as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_DUPLICATES)
    elapsed = time.perf_counter() - start
    persist.save(index, snapshot)
    stats = index.stats()
    click.echo(f"indexed {stats.record_count} records in {elapsed:.2f} s")
    click.echo(f"partitions: {stats.partition_count}, tokens: {stats.token_count}, "
               f"unindexable: {stats.unindexable_count}")
    for (country, ctype), p in stats.partitions.items():
        click.echo(f"  {country}/{ctype}: records={p.record_count} names={p.name_count} "
                   f"height={p.tree_height} address_tokens={p.address_token_count}")
    click.echo(f"snapshot: {snapshot}")


@main.command()
@click.option("--snapshot", required=True)
@click.option("--name", default="")
@click.option("--address", default="")
@click.option("--country", default="")
@click.option("--type", "ctype", default="")
@click.option("--prefix", is_flag=True, help="Company-name prefix search.")
@click.option("--format", "fmt", type=click.Choice(["human", "tsv"]), default="human",
              show_default=True)
def search(snapshot, name, address, country, ctype, prefix, fmt):
    """Search the index and extract the matching raw records."""
    index = _load_snapshot(snapshot)
    req = index.request(name=name, address=address, country=country,
                        customer_type=_parse_type(ctype), prefix=prefix)
    try:
        result = index.search(req)
    except EmptyQuery as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_EMPTY_QUERY)
    records = index.extract(result.keys)
    if fmt == "tsv":
        for key, raw in zip(result.keys, records):
            matched = ",".join(sorted(result.provenance[key]))
            fields = [key.fid, key.cid, raw.customer_type.value, matched,
                      raw.first_name, raw.last_name, raw.company_name,
                      raw.street, raw.town, raw.zip, raw.country_code, raw.country]
            click.echo("\t".join(fields))
        return
    click.echo(f"{len(result.keys)} results")
    for key, raw in zip(result.keys, records):
        matched = ",".join(sorted(result.provenance[key]))
        click.echo(f"  ({key.fid}, {key.cid}) matched by {matched}")
        if raw.customer_type is CustomerType.CORPORATE:
            click.echo(f"    {raw.company_name}")
        else:
            click.echo(f"    {raw.first_name} {raw.last_name}".rstrip())
        address_line = " ".join(p for p in (raw.street, raw.town, raw.zip,
                                            raw.country_code, raw.country) if p)
        if address_line:
            click.echo(f"    {address_line}")


@main.command()
@click.option("--snapshot", required=True)
@click.option("--sources", envvar="CROSSINDEX_SOURCES", required=True,
              help="Source config holding the latest exports.")
def update(snapshot, sources):
    """Apply records not yet in the index; rewrite the snapshot and audit log."""
    index = _load_snapshot(snapshot)
    cfg = _load_config(sources)
    try:
        records = load_sources(cfg)
    except CrossIndexError as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_USAGE)
    fresh = [r for r in records if r.key not in index.record_store]
    report = index.update(fresh)
    persist.save(index, snapshot)
    persist.append_audit(index, snapshot + ".audit.log")
    click.echo(f"inserted {len(report.inserted)}, rejected {len(report.rejected)}, "
               f"unindexable {len(report.unindexable)} "
               f"({len(records) - len(fresh)} already indexed)")


@main.command()
@click.option("--snapshot", required=True)
def stats(snapshot):
    """Print index statistics."""
    index = _load_snapshot(snapshot)
    s = index.stats()
    click.echo(f"records: {s.record_count}")
    click.echo(f"partitions: {s.partition_count}")
    click.echo(f"tokens: {s.token_count}")
    click.echo(f"unindexable: {s.unindexable_count}")
    click.echo(f"approx memory: {s.approx_bytes} bytes")
    for (country, ctype), p in s.partitions.items():
        click.echo(f"  {country}/{ctype}: records={p.record_count} names={p.name_count} "
                   f"height={p.tree_height} address_tokens={p.address_token_count}")


@main.command()
@click.option("--snapshot", required=True)
@click.option("--listen", default="127.0.0.1:8080", show_default=True)
@click.option("--sources", envvar="CROSSINDEX_SOURCES", default=None)
@click.option("--interval", type=float, default=None,
              help="Rescan sources every N seconds and apply new records.")
def serve(snapshot, listen, sources, interval):
    """Run the long-lived search/update service."""
    import uvicorn

    from .service import IndexHolder, ServiceConfig, create_app, start_rescan_timer

    index = _load_snapshot(snapshot)
    config = ServiceConfig(
        snapshot_path=Path(snapshot),
        source_config_path=Path(sources) if sources else None,
        update_scan_interval=interval,
    )
    holder = IndexHolder(index)
    app = create_app(holder, config)
    if interval is not None and sources:
        start_rescan_timer(holder, config)
    host, _, port = listen.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8080))


@main.command(name="bench")
@click.option("--sources", envvar="CROSSINDEX_SOURCES", required=True)
@click.option("--snapshot", default=None,
              help="Existing snapshot; omitted = build from sources first.")
@click.option("--abbrev", default=None)
@click.option("--queries", type=int, default=500, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--repetitions", type=int, default=1, show_default=True)
def bench(sources, snapshot, abbrev, queries, seed, repetitions):
    """Benchmark indexed search against the linear-scan baseline."""
    cfg = _load_config(sources)
    try:
        records = load_sources(cfg)
    except CrossIndexError as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_USAGE)
    if snapshot:
        index = _load_snapshot(snapshot)
        table = index.table
    else:
        table = _load_table(abbrev)
        start = time.perf_counter()
        index = GlobalIndex.build(records, table)
        click.echo(f"built index in {time.perf_counter() - start:.2f} s")
    baseline = bench_mod.BaselineScanner(records, table)
    battery = bench_mod.make_query_battery(records, table, queries, seed=seed)
    try:
        report = bench_mod.run_bench(index, baseline, battery, repetitions=repetitions)
    except BenchMismatch as exc:
        click.echo(f"BENCH MISMATCH: {exc}", err=True)
        sys.exit(EXIT_FAILURE)
    click.echo(report.summary())


if __name__ == "__main__":
    main()
