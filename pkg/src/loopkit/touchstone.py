"""Touchstone 1.x reader and writer for one- and two-port S-parameter sweeps."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

UNITS = {"HZ": 1.0, "KHZ": 1e3, "MHZ": 1e6, "GHZ": 1e9}
FORMATS = ("RI", "MA", "DB")
PARAMETERS = ("S", "Y", "Z", "H", "G")

PASSIVE_WARN = 1.0
PASSIVE_LIMIT = 1.05


class TouchstoneError(ValueError):
    """Malformed or unsupported Touchstone content."""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where = f"{source}:{line}: " if line is not None else f"{source}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


@dataclass
class TouchstoneData:
    f: np.ndarray
    s: np.ndarray  # shape (n_points, n_ports, n_ports)
    z_ref: float = 50.0
    unit: str = "HZ"
    fmt: str = "RI"
    parameter: str = "S"

    @property
    def n_ports(self) -> int:
        return self.s.shape[1]

    def s11(self) -> np.ndarray:
        return self.s[:, 0, 0]


def _parse_options(tokens, lineno, source):
    unit, param, fmt, z_ref = "GHZ", "S", "MA", 50.0
    i = 0
    while i < len(tokens):
        tok = tokens[i].upper()
        if tok in UNITS:
            unit = tok
        elif tok in PARAMETERS:
            param = tok
        elif tok in FORMATS:
            fmt = tok
        elif tok == "R":
            try:
                z_ref = float(tokens[i + 1])
            except (IndexError, ValueError):
                raise TouchstoneError("option line 'R' needs a numeric reference impedance", lineno, source)
            i += 1
        else:
            raise TouchstoneError(f"unknown option token {tokens[i]!r}", lineno, source)
        i += 1
    if param != "S":
        raise TouchstoneError(f"{param}-parameters are not supported, only S", lineno, source)
    if not z_ref > 0:
        raise TouchstoneError("reference impedance must be positive", lineno, source)
    return unit, param, fmt, z_ref


def _to_complex(a, b, fmt):
    if fmt == "RI":
        return complex(a, b)
    mag = 10.0 ** (a / 20.0) if fmt == "DB" else a
    return mag * np.exp(1j * np.deg2rad(b))


def parse_touchstone(text: str, n_ports: Optional[int] = None, source: Optional[str] = None) -> TouchstoneData:
    """Parse Touchstone 1.x text into SI frequencies and complex S-matrices.

    The port count is taken from ``n_ports`` when given, otherwise from the
    column count of the first data line (3 for one port, 9 for two ports).
    """
    options = None
    freqs, mats = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if line.startswith("#"):
            if options is not None:
                raise TouchstoneError("duplicate option line", lineno, source)
            options = _parse_options(line[1:].split(), lineno, source)
            continue
        if options is None:
            options = ("GHZ", "S", "MA", 50.0)
        unit, _, fmt, _ = options
        try:
            values = [float(v) for v in line.split()]
        except ValueError:
            raise TouchstoneError("non-numeric data", lineno, source) from None
        if n_ports is None:
            if len(values) == 3:
                n_ports = 1
            elif len(values) == 9:
                n_ports = 2
            else:
                raise TouchstoneError(f"expected 3 or 9 columns, got {len(values)}", lineno, source)
        expected = 1 + 2 * n_ports * n_ports
        if len(values) != expected:
            raise TouchstoneError(f"expected {expected} columns, got {len(values)}", lineno, source)
        f = values[0] * UNITS[unit]
        if freqs and f <= freqs[-1]:
            raise TouchstoneError("frequencies must be strictly increasing", lineno, source)
        entries = [_to_complex(values[1 + 2 * k], values[2 + 2 * k], fmt) for k in range(n_ports**2)]
        m = np.array(entries, dtype=complex).reshape(n_ports, n_ports)
        # two-port rows are ordered S11 S21 S12 S22
        if n_ports == 2:
            m = m.T
        peak = np.max(np.abs(m))
        if peak > PASSIVE_LIMIT:
            raise TouchstoneError(f"|S| = {peak:.4f} exceeds passivity limit", lineno, source)
        if peak > PASSIVE_WARN:
            warnings.warn(f"line {lineno}: |S| = {peak:.4f} slightly above 1", stacklevel=2)
        freqs.append(f)
        mats.append(m)
    if not freqs:
        raise TouchstoneError("no data lines", None, source)
    unit, param, fmt, z_ref = options
    return TouchstoneData(np.array(freqs), np.array(mats), z_ref, unit, fmt, param)


def read_touchstone(path) -> TouchstoneData:
    path = Path(path)
    n_ports = None
    suffix = path.suffix.lower()
    if suffix in (".s1p", ".s2p"):
        n_ports = int(suffix[2])
    return parse_touchstone(path.read_text(), n_ports=n_ports, source=str(path))


def _format_pair(z: complex, fmt: str) -> str:
    if fmt == "RI":
        a, b = z.real, z.imag
    else:
        mag = abs(z)
        a = 20.0 * np.log10(mag) if fmt == "DB" else mag
        b = float(np.rad2deg(np.angle(z)))
    return f"{a:.17g} {b:.17g}"


def format_touchstone(data: TouchstoneData, fmt: str = "RI", unit: str = "HZ", z_ref: Optional[float] = None) -> str:
    """Render ``data`` as Touchstone 1.1 text (S-parameters only)."""
    fmt, unit = fmt.upper(), unit.upper()
    if fmt not in FORMATS or unit not in UNITS:
        raise ValueError(f"unsupported format/unit {fmt}/{unit}")
    z_ref = data.z_ref if z_ref is None else z_ref
    lines = [f"# {unit} S {fmt} R {z_ref:g}"]
    scale = UNITS[unit]
    for f, m in zip(data.f, data.s):
        cells = m.T.reshape(-1) if data.n_ports == 2 else m.reshape(-1)
        row = " ".join(_format_pair(complex(z), fmt) for z in cells)
        lines.append(f"{f / scale:.17g} {row}")
    return "\n".join(lines) + "\n"


def write_touchstone(path, data: TouchstoneData, **kwargs) -> None:
    Path(path).write_text(format_touchstone(data, **kwargs))
