"""Spectral toolkit for the degenerate Zakharov system.

Thin wrapper over the C++ core. `run` mirrors the `dzak` command line.
"""

from ._dzak import (
    DzakError,
    __version__,
    annulus_projection,
    apply_flow,
    ball_volume,
    config_schema,
    directional_decompose,
    effective_config,
    l2_norm,
    lens_volume,
    run,
    sha256_hex,
    slab_ball_measure,
    strichartz_exponent,
)

COMMANDS = ("simulate", "verify-linear", "verify-bilinear", "counterexample", "norms", "picard")

__all__ = [
    "COMMANDS",
    "DzakError",
    "__version__",
    "annulus_projection",
    "apply_flow",
    "ball_volume",
    "config_schema",
    "directional_decompose",
    "effective_config",
    "l2_norm",
    "lens_volume",
    "run",
    "sha256_hex",
    "slab_ball_measure",
    "strichartz_exponent",
]
