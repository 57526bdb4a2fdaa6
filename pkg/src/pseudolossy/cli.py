"""`plc` command line interface."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import bench as bench_mod
from . import bundle as bundle_mod
from . import metrics as metrics_mod
from . import plot as plot_mod
from .edgemap import CannyParams
from .encoder import EncodeConfig, FilePromptProvider, Strategy, encode_image, fetch_prompt
from .errors import CodecError
from .preview import preview_reconstruct
from .raster import load_ppm, save_ppm
from .salient import Rect

_STRATEGY_BY_FLAG = {s.value: s for s in Strategy}


@click.group()
def main():
    """Pseudo-lossy image codec: conditioning-input bundles instead of pixels."""


def _parse_region(value: str) -> Rect:
    try:
        x, y, w, h = (int(t) for t in value.split(","))
    except ValueError:
        raise click.BadParameter(f"expected x,y,w,h got {value!r}")
    return Rect(x, y, w, h)


@main.command()
@click.argument("input_ppm", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--original-size", type=int, default=None,
              help="On-disk byte size of the served original (default: input file size).")
@click.option("--prompt-file", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              required=True)
@click.option("--strategy", type=click.Choice(sorted(_STRATEGY_BY_FLAG)), default="canny-color")
@click.option("--region", "regions", multiple=True, metavar="X,Y,W,H",
              help="Salient region; repeatable.")
@click.option("--grid", type=int, default=32, help="Color grid cells per side.")
@click.option("--canny-sigma", type=float, default=1.4)
@click.option("--canny-low", type=float, default=0.10)
@click.option("--canny-high", type=float, default=0.20)
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), required=True)
def encode(input_ppm, original_size, prompt_file, strategy, regions, grid,
           canny_sigma, canny_low, canny_high, output):
    """Encode a PPM image into a .plcb bundle."""
    data = input_ppm.read_bytes()
    image = load_ppm(data)
    prompt = fetch_prompt(FilePromptProvider(prompt_file), data)
    config = EncodeConfig(
        strategy=_STRATEGY_BY_FLAG[strategy],
        canny=CannyParams(sigma=canny_sigma, low_ratio=canny_low, high_ratio=canny_high),
        grid_w=grid,
        grid_h=grid,
        salient_regions=tuple(_parse_region(r) for r in regions),
    )
    b, report = encode_image(
        image, original_size if original_size is not None else len(data), prompt, config
    )
    output.write_bytes(bundle_mod.pack(b))
    click.echo(
        f"{output}: {report.bundle_bytes} B, savings {report.savings:.4f}"
        + (" [below break-even]" if report.below_break_even else "")
    )


@main.command()
@click.argument("input_plcb", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--preview", "preview_out", type=click.Path(dir_okay=False, path_type=Path),
              help="Write the deterministic preview reconstruction here.")
def decode(input_plcb, preview_out):
    """Inspect a .plcb bundle; optionally render the baseline preview."""
    b = bundle_mod.unpack(input_plcb.read_bytes())
    report = bundle_mod.savings_report(b)
    click.echo(f"original: {b.original_width}x{b.original_height}, "
               f"{b.original_byte_size} B on disk")
    for tag, payload in b.sections:
        click.echo(f"  section {bundle_mod.TAG_NAMES.get(tag, tag)}: {len(payload)} B")
    click.echo(f"bundle: {report.bundle_bytes} B, savings {report.savings:.4f}")
    if preview_out:
        preview_out.write_bytes(save_ppm(preview_reconstruct(b)))
        click.echo(f"preview written to {preview_out}")


@main.command()
@click.argument("image_a", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("image_b", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--ssim", "want_ssim", is_flag=True)
@click.option("--embed", "embed_spec", default="builtin",
              help='"builtin" or "cmd:<provider command>".')
def metrics(image_a, image_b, want_ssim, embed_spec):
    """Similarity metrics between two PPM images."""
    a = load_ppm(image_a.read_bytes())
    b = load_ppm(image_b.read_bytes())
    if want_ssim:
        click.echo(f"ssim {metrics_mod.ssim(a, b):.6f}")
    if embed_spec == "builtin":
        provider = metrics_mod.BuiltinHistogramEmbedder()
    elif embed_spec.startswith("cmd:"):
        provider = metrics_mod.ExternalEmbeddingProvider(embed_spec[4:])
    else:
        raise click.BadParameter(f"unknown embed provider {embed_spec!r}")
    try:
        sim = metrics_mod.cosine_similarity(
            provider.embed_path(image_a), provider.embed_path(image_b)
        )
    finally:
        provider.close()
    click.echo(f"embed_sim {sim:.6f}")


@main.command()
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--strategies", default="all",
              help='"all" or comma-separated strategy names.')
@click.option("--csv", "csv_out", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--plot", "plot_out", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--paper-filter", is_flag=True,
              help="Apply the 512x256 minimum-resolution corpus filter.")
@click.option("--converter", default=None, metavar="CMD",
              help="External converter template with {src} and {dst} placeholders.")
@click.option("--jobs", type=int, default=1)
def bench(corpus_dir, strategies, csv_out, plot_out, paper_filter, converter, jobs):
    """Run all strategies over a corpus and report savings/similarity."""
    if strategies == "all":
        strats = tuple(Strategy)
    else:
        strats = tuple(_STRATEGY_BY_FLAG[s.strip()] for s in strategies.split(","))
    rows, aggregates = bench_mod.run_corpus(
        corpus_dir, strategies=strats, paper_filter=paper_filter,
        converter=converter, jobs=jobs,
    )
    for agg in aggregates:
        click.echo(
            f"{agg.strategy}: n={agg.count} savings med/min/max "
            f"{agg.median_savings:.4f}/{agg.min_savings:.4f}/{agg.max_savings:.4f} "
            f"embed_sim med {agg.median_embed_sim:.4f}"
        )
    if csv_out:
        csv_out.write_text(bench_mod.rows_to_csv(rows))
        click.echo(f"csv written to {csv_out}")
    if plot_out:
        plot_out.write_bytes(plot_mod.emit_tradeoff_plot(rows))
        click.echo(f"plot written to {plot_out}")


def run():
    try:
        main(standalone_mode=False)
    except CodecError as e:
        click.echo(f"error: {type(e).__name__}: {e}", err=True)
        sys.exit(1)
    except click.ClickException as e:
        e.show()
        sys.exit(e.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)


if __name__ == "__main__":
    run()
