"""Run configuration: sectioned ``key = value`` files (INI grammar).

Required sections are ``[grid]``, ``[slab]`` and ``[medium]``; everything
else has defaults.  Unknown sections and keys are rejected.  See README for
the full key list.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path

from .dielectric import LorentzModel, TabulatedSusceptibility, load_susceptibility_table
from .emission import DEFAULT_CROSSOVER_WINDOW, EmissionState
from .errors import MalformedTable, ParseError, ValidationError
from .slab import DEFAULT_LASING_GUARD
from .squeezing import SqueezeInput

KEYS = {
    "grid": {"e_min", "e_max", "count"},
    "slab": {"thickness_um"},
    "medium": {"model", "resonance_ev", "linewidth_ev", "strength_ev2", "path"},
    "emission": {"temperature_k", "chemical_potential_ev"},
    "squeeze": {"magnitude", "phase", "carrier_ev"},
    "output": {"directory", "plot"},
    "thresholds": {"lasing_guard", "crossover_window", "jump"},
    "run": {"workers"},
}
REQUIRED = ("grid", "slab", "medium")

DEFAULT_TEMPERATURE = 300.0
DEFAULT_MAGNITUDE = 0.2


@dataclass(frozen=True)
class GridSpec:
    e_min: float
    e_max: float
    count: int


@dataclass(frozen=True)
class MediumSpec:
    model: str                      # "lorentz" | "table"
    lorentz: LorentzModel | None = None
    table_path: Path | None = None
    table: TabulatedSusceptibility | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class Thresholds:
    lasing_guard: float = DEFAULT_LASING_GUARD
    crossover_window: float = DEFAULT_CROSSOVER_WINDOW
    jump: float | None = None


@dataclass(frozen=True)
class RunConfig:
    grid: GridSpec
    thickness: float                # m
    medium: MediumSpec
    emission: EmissionState
    squeeze: SqueezeInput
    output_dir: Path = Path("output")
    emit_plot: bool = True
    thresholds: Thresholds = Thresholds()
    workers: int = 1
    source: Path | None = None


def _locate(text, section, key=None):
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if key is None and current == section:
                return lineno
        elif current == section and key is not None:
            name = line.split("=", 1)[0].split(":", 1)[0].strip().lower()
            if name == key:
                return lineno
    return None


class _Reader:
    def __init__(self, parser, text, origin):
        self.parser = parser
        self.text = text
        self.origin = origin

    def where(self, section, key=None):
        lineno = _locate(self.text, section, key)
        loc = f"{self.origin}:{lineno}" if lineno else str(self.origin)
        return f"{loc} [{section}]" + (f" {key}" if key else "")

    def has(self, section, key):
        return self.parser.has_option(section, key)

    def raw(self, section, key, default=None):
        if not self.has(section, key):
            if default is None:
                raise ParseError(f"{self.where(section)}: missing required key '{key}'")
            return default
        return self.parser.get(section, key)

    def number(self, section, key, default=None, kind=float):
        if not self.has(section, key):
            if default is None:
                raise ParseError(f"{self.where(section)}: missing required key '{key}'")
            return default
        text = self.parser.get(section, key)
        try:
            value = kind(text)
        except ValueError:
            raise ParseError(f"{self.where(section, key)}: cannot read {text!r} as {kind.__name__}") from None
        if kind is float and not math.isfinite(value):
            raise ValidationError(section, f"{key} must be finite")
        return value

    def flag(self, section, key, default):
        if not self.has(section, key):
            return default
        try:
            return self.parser.getboolean(section, key)
        except ValueError:
            raise ParseError(f"{self.where(section, key)}: not a boolean") from None


def parse_config(text, origin="<config>", base_dir=None) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string(text, source=str(origin))
    except configparser.Error as exc:
        raise ParseError(str(exc)) from None
    rd = _Reader(parser, text, origin)

    for section in parser.sections():
        if section not in KEYS:
            raise ParseError(f"{rd.where(section)}: unknown section")
        for key in parser.options(section):
            if key not in KEYS[section]:
                raise ParseError(f"{rd.where(section, key)}: unknown key")
    for section in REQUIRED:
        if not parser.has_section(section):
            raise ParseError(f"{origin}: missing required section [{section}]")
    for section in KEYS:
        if not parser.has_section(section):
            parser.add_section(section)

    grid = GridSpec(rd.number("grid", "e_min"), rd.number("grid", "e_max"),
                    rd.number("grid", "count", kind=int))
    if grid.e_min <= 0:
        raise ValidationError("grid", "e_min must be > 0")
    if grid.e_min >= grid.e_max:
        raise ValidationError("grid", "e_min must be < e_max")
    if grid.count < 2:
        raise ValidationError("grid", "count must be >= 2")

    thickness_um = rd.number("slab", "thickness_um")
    if thickness_um <= 0:
        raise ValidationError("slab", "thickness_um must be > 0")

    base_dir = Path(base_dir) if base_dir is not None else Path.cwd()
    model = rd.raw("medium", "model").strip().lower()
    if model == "lorentz":
        for key in ("path",):
            if rd.has("medium", key):
                raise ParseError(f"{rd.where('medium', key)}: not valid for model = lorentz")
        strength = rd.number("medium", "strength_ev2", default=math.nan)
        try:
            lorentz = LorentzModel(
                rd.number("medium", "resonance_ev"),
                rd.number("medium", "linewidth_ev"),
                None if math.isnan(strength) else strength,
            )
        except ValueError as exc:
            raise ValidationError("medium", str(exc)) from None
        medium = MediumSpec("lorentz", lorentz=lorentz)
    elif model == "table":
        for key in ("resonance_ev", "linewidth_ev", "strength_ev2"):
            if rd.has("medium", key):
                raise ParseError(f"{rd.where('medium', key)}: not valid for model = table")
        path = Path(rd.raw("medium", "path").strip())
        if not path.is_absolute():
            path = base_dir / path
        if not path.is_file():
            raise ParseError(f"{rd.where('medium', 'path')}: table file not found: {path}")
        try:
            table = load_susceptibility_table(path)
        except MalformedTable as exc:
            raise ParseError(f"{rd.where('medium', 'path')}: {exc}") from None
        lo, hi = table.span
        if grid.e_min < lo or grid.e_max > hi:
            raise ValidationError("grid", f"grid [{grid.e_min}, {grid.e_max}] eV leaves table span [{lo}, {hi}] eV")
        medium = MediumSpec("table", table_path=path, table=table)
    else:
        raise ParseError(f"{rd.where('medium', 'model')}: model must be 'lorentz' or 'table', got {model!r}")

    try:
        emission = EmissionState(
            rd.number("emission", "temperature_k", DEFAULT_TEMPERATURE),
            rd.number("emission", "chemical_potential_ev", 0.0),
        )
    except ValueError as exc:
        raise ValidationError("emission", str(exc)) from None

    carrier = rd.number("squeeze", "carrier_ev", 0.5 * (grid.e_min + grid.e_max))
    if not grid.e_min <= carrier <= grid.e_max:
        raise ValidationError("squeeze", "carrier_ev must lie inside the grid")
    try:
        squeeze = SqueezeInput(rd.number("squeeze", "magnitude", DEFAULT_MAGNITUDE),
                               rd.number("squeeze", "phase", 0.0), carrier)
    except ValueError as exc:
        raise ValidationError("squeeze", str(exc)) from None

    thresholds = Thresholds(
        rd.number("thresholds", "lasing_guard", DEFAULT_LASING_GUARD),
        rd.number("thresholds", "crossover_window", DEFAULT_CROSSOVER_WINDOW),
        rd.number("thresholds", "jump", math.inf),
    )
    if thresholds.lasing_guard <= 0 or thresholds.crossover_window <= 0 or thresholds.jump <= 0:
        raise ValidationError("thresholds", "thresholds must be > 0")
    if math.isinf(thresholds.jump):
        thresholds = Thresholds(thresholds.lasing_guard, thresholds.crossover_window, None)

    workers = rd.number("run", "workers", 1, kind=int)
    if workers < 1:
        raise ValidationError("run", "workers must be >= 1")

    return RunConfig(
        grid=grid,
        thickness=thickness_um * 1e-6,
        medium=medium,
        emission=emission,
        squeeze=squeeze,
        output_dir=Path(rd.raw("output", "directory", "output").strip()),
        emit_plot=rd.flag("output", "plot", True),
        thresholds=thresholds,
        workers=workers,
        source=Path(origin) if origin != "<config>" else None,
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return parse_config(text, origin=path, base_dir=path.parent)
