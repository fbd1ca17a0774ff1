"""Shipped permutation-group presets.

File format: first line ``degree N``, then ``key value`` metadata lines
(``order`` is mandatory and checked against the generated group), then one
generator per line in cycle notation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .permgrp import GROUP_CAP, Group, generate, parse_cycles


class PresetError(ValueError):
    pass


@dataclass
class Preset:
    name: str
    degree: int
    order: int
    generators: list[str]
    meta: dict[str, str] = field(default_factory=dict)

    @property
    def simple(self) -> bool:
        return self.meta.get("simple") == "yes"

    @property
    def family(self) -> str:
        return self.meta.get("family", "")

    @property
    def opt_in(self) -> bool:
        return self.meta.get("opt_in") == "yes"

    @property
    def q(self) -> int | None:
        return int(self.meta["q"]) if "q" in self.meta else None

    def group(self, cap: int = GROUP_CAP) -> Group:
        gens = [parse_cycles(g, self.degree) for g in self.generators]
        G = generate(gens, cap=cap, degree=self.degree, name=self.name)
        if G.order != self.order:
            raise PresetError(f"{self.name}: generated order {G.order}, file says {self.order}")
        return G


def parse_preset(text: str, source: str = "<preset>") -> Preset:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("degree "):
        raise PresetError(f"{source}: first line must be 'degree N'")
    try:
        degree = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise PresetError(f"{source}: bad degree line {lines[0]!r}") from None
    meta: dict[str, str] = {}
    gens = []
    for ln in lines[1:]:
        if ln.startswith("("):
            gens.append(ln)
        else:
            key, _, value = ln.partition(" ")
            meta[key] = value.strip()
    if "order" not in meta:
        raise PresetError(f"{source}: missing 'order' line")
    name = meta.pop("name", Path(source).stem)
    return Preset(name, degree, int(meta.pop("order")), gens, meta)


def _preset_dir():
    return resources.files("intergraph") / "presets"


def available() -> list[str]:
    return sorted(p.name[:-4] for p in _preset_dir().iterdir() if p.name.endswith(".txt"))


def load(name: str) -> Preset:
    key = name.lower().replace("(", "_").replace(")", "").replace(",", "_").rstrip("_")
    path = _preset_dir() / f"{key}.txt"
    if not path.is_file():
        p = Path(name)
        if p.is_file():
            return parse_preset(p.read_text(), str(p))
        raise PresetError(f"unknown preset {name!r}; available: {', '.join(available())}")
    return parse_preset(path.read_text(), path.name)
