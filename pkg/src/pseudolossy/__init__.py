"""Pseudo-lossy image codec: ship conditioning inputs, not pixels.

An image is reduced to a prompt, a compressed edge map, a coarse color grid
and optional untouched salient patches, packed into a bit-exact .plcb bundle.
A deterministic preview decoder and similarity/savings tooling complete the
desk-scale pipeline; generative reconstruction lives in a separate sidecar.
"""

from .bundle import Bundle, SavingsReport, pack, savings_report, unpack
from .colorgrid import ColorGrid, decode_grid, encode_grid, extract_grid
from .edgemap import CannyParams, canny
from .encoder import EncodeConfig, FilePromptProvider, Strategy, encode_image
from .metrics import cosine_similarity, embed_builtin, ssim
from .preview import PreviewParams, preview_reconstruct
from .raster import BitImage, LumaImage, RasterImage, load_ppm, save_ppm, to_luma

__version__ = "0.1.0"

__all__ = [
    "BitImage",
    "Bundle",
    "CannyParams",
    "ColorGrid",
    "EncodeConfig",
    "FilePromptProvider",
    "LumaImage",
    "PreviewParams",
    "RasterImage",
    "SavingsReport",
    "Strategy",
    "canny",
    "cosine_similarity",
    "decode_grid",
    "embed_builtin",
    "encode_grid",
    "encode_image",
    "extract_grid",
    "load_ppm",
    "pack",
    "preview_reconstruct",
    "save_ppm",
    "savings_report",
    "ssim",
    "to_luma",
    "unpack",
]
