"""Corpus runner: per-image savings and similarity, aggregates, CSV output.

Consumes a directory of .ppm images with sibling prompt files (<stem>.txt)
and optional region files (<stem>.regions, one "x y w h" line per region).
Non-PPM images can enter through an external converter command; the ORIGINAL
file's on-disk byte size is always what savings are measured against.

CSV column order (fixed): path, category, strategy, original_bytes,
bundle_bytes, savings, ssim_preview, embed_sim_preview, below_break_even,
error.
"""

from __future__ import annotations

import csv
import io
import logging
import subprocess
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from . import metrics, preview
from .bundle import savings_report
from .encoder import EncodeConfig, Strategy, encode_image
from .errors import CodecError, EmptyCorpus
from .raster import load_ppm
from .salient import Rect

log = logging.getLogger(__name__)

CSV_COLUMNS = [
    "path",
    "category",
    "strategy",
    "original_bytes",
    "bundle_bytes",
    "savings",
    "ssim_preview",
    "embed_sim_preview",
    "below_break_even",
    "error",
]

_CONVERTIBLE = {".jpg", ".jpeg", ".png", ".webp"}


@dataclass(frozen=True)
class CorpusEntry:
    path: Path
    category: str
    original_bytes: int
    width: int
    height: int


@dataclass(frozen=True)
class RunRow:
    path: str
    category: str
    strategy: str
    original_bytes: int
    bundle_bytes: int | None
    savings: float | None
    ssim_preview: float | None
    embed_sim_preview: float | None
    below_break_even: bool = False
    error: str | None = None


@dataclass(frozen=True)
class AggregateRow:
    strategy: str
    count: int
    median_savings: float
    min_savings: float
    max_savings: float
    median_embed_sim: float
    min_embed_sim: float
    max_embed_sim: float


def lower_median(values) -> float:
    """Median taking the lower of the two middle elements for even counts."""
    s = sorted(values)
    if not s:
        raise ValueError("no values")
    return s[(len(s) - 1) // 2]


def _paper_filter_ok(w: int, h: int) -> bool:
    # minimum 512x256 in either orientation
    return (w >= 512 and h >= 256) or (h >= 512 and w >= 256)


def load_regions(path: Path) -> list[Rect]:
    rects = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        x, y, w, h = (int(t) for t in line.replace(",", " ").split())
        rects.append(Rect(x, y, w, h))
    return rects


def default_region(width: int, height: int) -> Rect:
    """Central quarter-area region used when no sidecar region file exists."""
    return Rect(width // 4, height // 4, width // 2, height // 2)


def _read_image(path: Path, converter: str | None):
    """Load pixels, invoking the external converter for non-PPM files."""
    if path.suffix.lower() == ".ppm":
        return load_ppm(path.read_bytes())
    if converter is None:
        raise CodecError(f"no converter configured for {path.suffix} file")
    with tempfile.NamedTemporaryFile(suffix=".ppm") as tmp:
        cmd = [t.format(src=str(path), dst=tmp.name) for t in converter.split()]
        subprocess.run(cmd, check=True, capture_output=True)
        return load_ppm(Path(tmp.name).read_bytes())


def discover_corpus(
    directory, paper_filter: bool = False, converter: str | None = None
) -> list[CorpusEntry]:
    root = Path(directory)
    entries = []
    exts = {".ppm"} | (_CONVERTIBLE if converter else set())
    for path in sorted(root.rglob("*")):
        if not (path.is_file() and path.suffix.lower() in exts):
            continue
        if not path.with_suffix(".txt").is_file():
            log.warning("skipping %s: no sibling prompt file", path)
            continue
        try:
            img = _read_image(path, converter)
        except (CodecError, subprocess.CalledProcessError) as e:
            log.warning("skipping %s: %s", path, e)
            continue
        if paper_filter and not _paper_filter_ok(img.width, img.height):
            continue
        rel = path.relative_to(root)
        category = rel.parts[0] if len(rel.parts) > 1 else ""
        entries.append(
            CorpusEntry(
                path=path,
                category=category,
                original_bytes=path.stat().st_size,
                width=img.width,
                height=img.height,
            )
        )
    return entries


def _run_entry(entry: CorpusEntry, strategy: Strategy, config: EncodeConfig, converter, embedder):
    name = str(entry.path.name)
    try:
        image = _read_image(entry.path, converter)
        prompt = entry.path.with_suffix(".txt").read_text(encoding="utf-8").strip()
        cfg = replace(config, strategy=strategy)
        if strategy is Strategy.SALIENT_FEATURES:
            regions_file = entry.path.with_suffix(".regions")
            if regions_file.is_file():
                rects = load_regions(regions_file)
            else:
                rects = [default_region(image.width, image.height)]
            cfg = replace(cfg, salient_regions=tuple(rects))
        b, _ = encode_image(image, entry.original_bytes, prompt, cfg)
        report = savings_report(b)
        recon = preview.preview_reconstruct(b)
        sim = metrics.cosine_similarity(embedder.embed(image), embedder.embed(recon))
        return RunRow(
            path=name,
            category=entry.category,
            strategy=strategy.value,
            original_bytes=entry.original_bytes,
            bundle_bytes=report.bundle_bytes,
            savings=report.savings,
            ssim_preview=metrics.ssim(image, recon),
            embed_sim_preview=sim,
            below_break_even=report.below_break_even,
        )
    except CodecError as e:
        log.warning("entry %s failed under %s: %s", name, strategy.value, e)
        return RunRow(
            path=name,
            category=entry.category,
            strategy=strategy.value,
            original_bytes=entry.original_bytes,
            bundle_bytes=None,
            savings=None,
            ssim_preview=None,
            embed_sim_preview=None,
            error=type(e).__name__,
        )


def run_corpus(
    directory,
    strategies=tuple(Strategy),
    config: EncodeConfig = EncodeConfig(),
    paper_filter: bool = False,
    converter: str | None = None,
    jobs: int = 1,
) -> tuple[list[RunRow], list[AggregateRow]]:
    entries = discover_corpus(directory, paper_filter=paper_filter, converter=converter)
    if not entries:
        raise EmptyCorpus(f"no eligible images under {directory}")
    embedder = metrics.BuiltinHistogramEmbedder()
    tasks = [(e, s) for e in entries for s in strategies]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(
                pool.map(lambda t: _run_entry(t[0], t[1], config, converter, embedder), tasks)
            )
    else:
        rows = [_run_entry(e, s, config, converter, embedder) for e, s in tasks]
    rows.sort(key=lambda r: (r.path, r.strategy))
    aggregates = []
    for s in strategies:
        ok = [r for r in rows if r.strategy == s.value and r.error is None]
        if not ok:
            continue
        sav = [r.savings for r in ok]
        sim = [r.embed_sim_preview for r in ok]
        aggregates.append(
            AggregateRow(
                strategy=s.value,
                count=len(ok),
                median_savings=lower_median(sav),
                min_savings=min(sav),
                max_savings=max(sav),
                median_embed_sim=lower_median(sim),
                min_embed_sim=min(sim),
                max_embed_sim=max(sim),
            )
        )
    return rows, aggregates


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow(
            [
                r.path,
                r.category,
                r.strategy,
                r.original_bytes,
                "" if r.bundle_bytes is None else r.bundle_bytes,
                "" if r.savings is None else f"{r.savings:.6f}",
                "" if r.ssim_preview is None else f"{r.ssim_preview:.6f}",
                "" if r.embed_sim_preview is None else f"{r.embed_sim_preview:.6f}",
                int(r.below_break_even),
                r.error or "",
            ]
        )
    return buf.getvalue()


def csv_to_rows(text: str) -> list[RunRow]:
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for rec in reader:
        rows.append(
            RunRow(
                path=rec["path"],
                category=rec["category"],
                strategy=rec["strategy"],
                original_bytes=int(rec["original_bytes"]),
                bundle_bytes=int(rec["bundle_bytes"]) if rec["bundle_bytes"] else None,
                savings=float(rec["savings"]) if rec["savings"] else None,
                ssim_preview=float(rec["ssim_preview"]) if rec["ssim_preview"] else None,
                embed_sim_preview=(
                    float(rec["embed_sim_preview"]) if rec["embed_sim_preview"] else None
                ),
                below_break_even=bool(int(rec["below_break_even"])),
                error=rec["error"] or None,
            )
        )
    return rows
