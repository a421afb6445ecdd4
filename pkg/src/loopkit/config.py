"""
INI project files.

Sections are ``[loop:<name>]``, ``[feed:<name>]``, ``[sweep:<name>]`` plus
optional ``[output]`` and ``[tolerance]``. Every error names the offending
``section.key`` so it can be found in the file.

A loop may start from a built-in stack with ``preset = stripline`` or
``preset = microstrip`` and override single keys::

    [loop:narrow]
    preset = stripline
    width = 4e-3
    slit_angle_deg = 10
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import presets
from .feedline import FeedlineSpec
from .resonator import LoopGeometry
from .tline import Coax, Conductor, Dielectric, Microstrip, Stripline


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


LOOP_KEYS = {
    "preset", "type", "loop_radius", "cross_width", "width", "h", "d", "t",
    "inner_radius", "outer_radius", "eps_r", "tan_d", "sigma", "copper",
    "slit_angle_deg", "cross_thickness",
}
FEED_KEYS = {"preset", "gamma_re", "gamma_im", "z0_re", "z0_im", "length"}
SWEEP_KEYS = {"loop", "param", "start", "stop", "steps"}
SWEEP_PARAMS = ("width", "slit_angle_deg", "eps_r", "loop_radius")


@dataclass
class LoopDef:
    """Flat parameter set of one loop; ``geometry()`` builds the model input."""

    name: str
    kind: str
    values: dict

    def with_value(self, key: str, value: float) -> "LoopDef":
        return LoopDef(self.name, self.kind, {**self.values, key: value})

    def geometry(self) -> LoopGeometry:
        v = self.values
        path = f"loop:{self.name}"
        try:
            dielectric = Dielectric(eps_r=v["eps_r"], tan_d=v["tan_d"])
            conductor = Conductor(sigma=v["sigma"], thickness=v["copper"])
            if self.kind == "stripline":
                cs = Stripline(width=v["width"], h=v["h"], t=v["t"])
            elif self.kind == "microstrip":
                cs = Microstrip(width=v["width"], d=v["d"], t=v["t"])
            else:
                cs = Coax(inner_radius=v["inner_radius"], outer_radius=v["outer_radius"])
            return LoopGeometry(
                loop_radius=v["loop_radius"],
                cross_width=v["outer_radius"] if self.kind == "coax" else v["cross_width"],
                cross_section=cs,
                dielectric=dielectric,
                conductor=conductor,
                slit_angle=math.radians(v["slit_angle_deg"]),
                cross_thickness=v.get("cross_thickness"),
            )
        except KeyError as exc:
            raise ConfigError(f"{path}.{exc.args[0]}", "required key missing") from None
        except ValueError as exc:
            raise ConfigError(path, str(exc)) from None


@dataclass(frozen=True)
class SweepDef:
    name: str
    loop: str
    param: str
    start: float
    stop: float
    steps: int

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass
class ProjectConfig:
    loops: dict = field(default_factory=dict)
    feeds: dict = field(default_factory=dict)
    sweeps: dict = field(default_factory=dict)
    output_dir: Optional[Path] = None
    tolerances: dict = field(default_factory=dict)

    def loop(self, name: str) -> LoopDef:
        return _lookup(self.loops, name, "loop")

    def feed(self, name: str) -> FeedlineSpec:
        return _lookup(self.feeds, name, "feed")

    def sweep(self, name: str) -> SweepDef:
        return _lookup(self.sweeps, name, "sweep")


def _lookup(table: dict, name: str, kind: str):
    if name not in table:
        available = ", ".join(sorted(table)) or "none defined"
        raise ConfigError(f"{kind}:{name}", f"no such {kind} (available: {available})")
    return table[name]


def _stripline_defaults() -> dict:
    g = presets.stripline_loop()
    return {
        "type": "stripline", "loop_radius": g.loop_radius, "cross_width": g.cross_width,
        "width": g.cross_section.width, "h": g.cross_section.h, "t": g.cross_section.t,
        "eps_r": g.dielectric.eps_r, "tan_d": g.dielectric.tan_d, "sigma": g.conductor.sigma,
        "copper": g.conductor.thickness, "slit_angle_deg": 180.0,
        "cross_thickness": g.cross_thickness,
    }


def _microstrip_defaults() -> dict:
    g = presets.microstrip_loop()
    return {
        "type": "microstrip", "loop_radius": g.loop_radius, "cross_width": g.cross_width,
        "width": g.cross_section.width, "d": g.cross_section.d, "t": g.cross_section.t,
        "eps_r": g.dielectric.eps_r, "tan_d": g.dielectric.tan_d, "sigma": g.conductor.sigma,
        "copper": g.conductor.thickness, "slit_angle_deg": 180.0,
        "cross_thickness": g.cross_thickness,
    }


LOOP_PRESETS = {"stripline": _stripline_defaults, "microstrip": _microstrip_defaults}
FEED_PRESETS = {
    "feed50": {
        "gamma_re": presets.FEED_GAMMA.real, "gamma_im": presets.FEED_GAMMA.imag,
        "z0_re": presets.FEED_Z0.real, "z0_im": presets.FEED_Z0.imag,
    }
}


def _float(section, key: str, path: str) -> float:
    raw = section[key]
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{path}.{key}", f"expected a number, got {raw!r}") from None


def _check_keys(section, allowed: set, path: str):
    for key in section:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}", "unknown key")


def _parse_loop(name: str, section) -> LoopDef:
    path = f"loop:{name}"
    _check_keys(section, LOOP_KEYS, path)
    values: dict = {}
    preset = section.get("preset")
    if preset is not None:
        if preset not in LOOP_PRESETS:
            raise ConfigError(f"{path}.preset", f"unknown preset {preset!r} (choose {', '.join(LOOP_PRESETS)})")
        values = LOOP_PRESETS[preset]()
    kind = section.get("type", values.pop("type", None))
    if kind not in ("stripline", "microstrip", "coax"):
        raise ConfigError(f"{path}.type", "must be stripline, microstrip or coax")
    values.setdefault("slit_angle_deg", 180.0)
    values.setdefault("tan_d", 0.0)
    values.setdefault("sigma", presets.COPPER_SIGMA)
    for key in section:
        if key not in ("preset", "type"):
            values[key] = _float(section, key, path)
    if "t" not in values and kind != "coax" and "copper" in values:
        values["t"] = values["copper"]
    return LoopDef(name, kind, values)


def _parse_feed(name: str, section) -> FeedlineSpec:
    path = f"feed:{name}"
    _check_keys(section, FEED_KEYS, path)
    values: dict = {}
    preset = section.get("preset")
    if preset is not None:
        if preset not in FEED_PRESETS:
            raise ConfigError(f"{path}.preset", f"unknown preset {preset!r}")
        values = dict(FEED_PRESETS[preset])
    for key in section:
        if key != "preset":
            values[key] = _float(section, key, path)
    for key in ("gamma_re", "gamma_im", "z0_re", "z0_im", "length"):
        if key not in values:
            raise ConfigError(f"{path}.{key}", "required key missing")
    try:
        return FeedlineSpec(
            gamma=complex(values["gamma_re"], values["gamma_im"]),
            z0=complex(values["z0_re"], values["z0_im"]),
            length=values["length"],
        )
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from None


def _parse_sweep(name: str, section, loops: dict) -> SweepDef:
    path = f"sweep:{name}"
    _check_keys(section, SWEEP_KEYS, path)
    for key in SWEEP_KEYS:
        if key not in section:
            raise ConfigError(f"{path}.{key}", "required key missing")
    if section["loop"] not in loops:
        raise ConfigError(f"{path}.loop", f"references undefined loop {section['loop']!r}")
    if section["param"] not in SWEEP_PARAMS:
        raise ConfigError(f"{path}.param", f"must be one of {', '.join(SWEEP_PARAMS)}")
    try:
        steps = int(section["steps"])
    except ValueError:
        raise ConfigError(f"{path}.steps", "expected an integer") from None
    start, stop = _float(section, "start", path), _float(section, "stop", path)
    if steps < 1:
        raise ConfigError(f"{path}.steps", "must be at least 1")
    if steps > 1 and start == stop:
        raise ConfigError(path, "degenerate range: start equals stop")
    return SweepDef(name, section["loop"], section["param"], start, stop, steps)


def parse_config(text: str, base_dir: Optional[Path] = None) -> ProjectConfig:
    parser = configparser.ConfigParser(interpolation=None, strict=True)
    try:
        parser.read_string(text)
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(exc.section, "defined more than once") from None
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"{exc.section}.{exc.option}", "defined more than once") from None
    except configparser.Error as exc:
        raise ConfigError("<file>", str(exc).splitlines()[0]) from None

    cfg = ProjectConfig()
    deferred_sweeps = []
    for title in parser.sections():
        section = parser[title]
        kind, _, name = title.partition(":")
        kind, name = kind.strip(), name.strip()
        if kind in ("loop", "feed", "sweep") and not name:
            raise ConfigError(title, "section needs a name, e.g. [loop:main]")
        if kind == "loop":
            cfg.loops[name] = _parse_loop(name, section)
        elif kind == "feed":
            cfg.feeds[name] = _parse_feed(name, section)
        elif kind == "sweep":
            deferred_sweeps.append((name, section))
        elif title == "output":
            _check_keys(section, {"dir"}, "output")
            if "dir" in section:
                out = Path(section["dir"])
                cfg.output_dir = out if base_dir is None or out.is_absolute() else base_dir / out
        elif title == "tolerance":
            cfg.tolerances = {k: _float(section, k, "tolerance") for k in section}
        else:
            raise ConfigError(title, "unknown section")
    for name, section in deferred_sweeps:
        cfg.sweeps[name] = _parse_sweep(name, section, cfg.loops)
    return cfg


def load_config(path) -> ProjectConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read: {exc.strerror}") from None
    return parse_config(text, base_dir=path.parent)


def default_config() -> ProjectConfig:
    """Built-in loops and feeds available without a project file."""
    return parse_config(
        """
[loop:stripline]
preset = stripline

[loop:microstrip]
preset = microstrip

[loop:stripline-shifted]
preset = stripline
slit_angle_deg = 10

[feed:feed50]
preset = feed50
length = 0.1

[sweep:stripline-width]
loop = stripline
param = width
start = 2e-3
stop = 10e-3
steps = 9

[sweep:microstrip-width]
loop = microstrip
param = width
start = 2e-3
stop = 10e-3
steps = 9
"""
    )
