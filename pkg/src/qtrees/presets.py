"""Pinned pipeline configurations known to validate end to end.

Each preset fixes the space, the scale parameter, the truncation level,
the covering generator with its shape parameters, and the page capacity.
The scale parameter is space-dependent: covering members must contain
open balls of diameter 4r^(j+1) while staying below mesh r^j with
same-color members disjoint, and on a densely sampled circle that forces
r <= 1/12; the triadic sample tolerates r = 1/9 because its gaps are
empty.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional


@dataclass(frozen=True)
class PipelineConfig:
    space_kind: str = "cantor"
    space_param: int = 4
    space_file: Optional[str] = None
    r: Fraction = Fraction(1, 9)
    max_level: Optional[int] = 4
    covering_kind: str = "ultrametric"
    n_colors: int = 1
    kappa: Optional[int] = None  # default: 15 * n_colors + 1
    research_kappa: bool = False
    seed: int = 0
    jobs: int = 1
    out_dir: Optional[str] = None
    preset: str = ""
    covering_params: tuple = ()  # sorted (key, value) pairs

    def params(self) -> dict:
        return dict(self.covering_params)


PRESETS: dict[str, PipelineConfig] = {
    "cantor": PipelineConfig(
        space_kind="cantor",
        space_param=4,
        r=Fraction(1, 9),
        max_level=4,
        covering_kind="ultrametric",
        n_colors=1,
        kappa=16,
        preset="cantor",
    ),
    "circle": PipelineConfig(
        space_kind="circle",
        space_param=81,
        r=Fraction(1, 12),
        max_level=2,
        covering_kind="shifted_arcs",
        n_colors=2,
        kappa=31,
        preset="circle",
    ),
    "grid": PipelineConfig(
        space_kind="grid",
        space_param=9,
        r=Fraction(1, 64),
        max_level=1,
        covering_kind="shifted_cubes",
        n_colors=3,
        kappa=46,
        preset="grid",
    ),
}

DEFAULT_R = {
    "cantor": Fraction(1, 9),
    "circle": Fraction(1, 12),
    "grid": Fraction(1, 64),
}

DEFAULT_PARAM = {"cantor": 4, "circle": 81, "grid": 9}

COVERING_FOR_SPACE = {
    "cantor": "ultrametric",
    "circle": "shifted_arcs",
    "grid": "shifted_cubes",
}


def config_for(preset: Optional[str] = None, **overrides) -> PipelineConfig:
    if preset:
        if preset not in PRESETS:
            raise KeyError(f"unknown preset {preset!r}; "
                           f"have {sorted(PRESETS)}")
        cfg = PRESETS[preset]
    else:
        kind = overrides.get("space_kind", "cantor")
        cfg = PipelineConfig(
            space_kind=kind,
            space_param=DEFAULT_PARAM.get(kind, 4),
            r=DEFAULT_R.get(kind, Fraction(1, 9)),
            max_level=None,
            covering_kind=COVERING_FOR_SPACE.get(kind, "ultrametric"),
            n_colors={"cantor": 1, "circle": 2, "grid": 3}.get(kind, 1),
        )
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(cfg, **overrides)
