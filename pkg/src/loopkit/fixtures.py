"""
Reference tables, stored at their recorded precision.

Each cell keeps the recorded string so the number of significant digits is
not lost, and every table carries a provenance tag ("full-wave",
"measurement", "model" or "lumped") per row. ``FIXTURE_SHA256`` pins the
whole set; ``verify_integrity`` fails if any cell is edited.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from types import MappingProxyType

COLUMNS = ("label", "f0_mhz", "l_uh", "c_pf", "r_ohm", "q")


@dataclass(frozen=True)
class FixtureRow:
    label: str
    f0_mhz: str
    l_uh: str
    c_pf: str
    r_ohm: str
    q: str
    provenance: str

    def value(self, column: str) -> float:
        return float(getattr(self, column))

    @property
    def f0(self) -> float:
        return float(self.f0_mhz) * 1e6

    @property
    def L(self) -> float:
        return float(self.l_uh) * 1e-6

    @property
    def C(self) -> float:
        return float(self.c_pf) * 1e-12

    @property
    def R(self) -> float:
        return float(self.r_ohm)

    @property
    def Q(self) -> float:
        return float(self.q)


@dataclass(frozen=True)
class FixtureTable:
    table_id: str
    title: str
    rows: tuple

    def row(self, label: str) -> FixtureRow:
        for r in self.rows:
            if r.label == label:
                return r
        raise KeyError(f"table {self.table_id} has no row {label!r}")

    def column(self, name: str) -> list[float]:
        return [r.value(name) for r in self.rows]


def _width_table(tid: str, title: str, body: str) -> FixtureTable:
    rows = []
    for w, line in enumerate(body.strip().splitlines(), start=2):
        f0, l, c, r, q = line.split()
        rows.append(FixtureRow(f"{w} mm", f0, l, c, r, q, "full-wave"))
    return FixtureTable(tid, title, tuple(rows))


def _comparison_table(tid: str, title: str, body: str) -> FixtureTable:
    rows = []
    for line in body.strip().splitlines():
        label, f0, l, c, r, q = line.split()
        prov = {"Simulation": "full-wave", "Measurement": "measurement", "Model": "model"}[label]
        rows.append(FixtureRow(label, f0, l, c, r, q, prov))
    return FixtureTable(tid, title, tuple(rows))


_TABLES = (
    _width_table("I", "Shielded stripline, full-wave", """
        54.7 0.400 21.2 0.532 258
        49.1 0.379 27.7 0.394 297
        44.9 0.376 33.5 0.325 325
        41.7 0.367 39.7 0.279 345
        39.2 0.357 46.4 0.240 365
        37.0 0.350 52.9 0.215 378
        35.2 0.342 59.9 0.195 388
        33.6 0.344 65.5 0.183 396
        32.2 0.337 72.6 0.166 410
    """),
    _width_table("II", "Unplated shielded stripline, full-wave", """
        54.5 0.406 21.0 0.527 264
        49.1 0.381 27.6 0.381 308
        45.0 0.372 33.6 0.343 307
        41.8 0.362 40.0 0.264 360
        39.2 0.357 46.0 0.231 382
        37.1 0.353 52.2 0.205 401
        35.3 0.344 59.3 0.183 415
        33.7 0.338 66.1 0.168 427
        32.3 0.336 72.2 0.155 440
    """),
    _width_table("III", "Shielded stripline with the slit 10 degrees from the input, full-wave", """
        37.8 0.416 42.5 0.388 255
        34.0 0.396 55.4 0.302 280
        31.2 0.386 67.5 0.255 296
        29.0 0.368 81.8 0.219 306
        27.3 0.360 94.5 0.194 319
        25.8 0.351 108.5 0.175 326
        24.5 0.348 121.1 0.164 327
        23.5 0.338 136.2 0.147 339
        22.5 0.335 149.0 0.139 343
    """),
    _comparison_table("IV", "Unplated stripline, W = 10 mm", """
        Simulation 32.3 0.336 72.2 0.16 440
        Measurement 32.1 0.326 75.4 0.20 348
        Model 29.0 0.364 82.5 0.14 490
    """),
    _width_table("V", "Microstrip, full-wave", """
        68.6 0.414 13.0 0.598 299
        61.6 0.409 16.4 0.477 331
        57.1 0.391 19.9 0.394 356
        53.4 0.381 23.4 0.343 372
        50.9 0.372 26.4 0.291 407
        48.4 0.362 29.8 0.256 430
        46.0 0.367 32.6 0.248 427
        44.2 0.364 35.6 0.229 442
        42.8 0.358 38.7 0.203 474
    """),
    _width_table("VI", "Microstrip with the slit 10 degrees from the input, full-wave", """
        46.4 0.443 26.5 0.369 350
        42.4 0.431 32.7 0.289 398
        39.3 0.421 39.0 0.267 389
        36.9 0.407 45.8 0.234 403
        34.8 0.408 51.3 0.219 407
        32.9 0.401 58.2 0.209 398
        31.5 0.377 67.6 0.185 403
        30.3 0.384 71.8 0.179 409
        29.3 0.375 79.0 0.167 412
    """),
    FixtureTable(
        "VII",
        "Series RLC seen through the lumped L-match",
        (FixtureRow("Lumped", "42.4", "0.469", "30", "0.244", "512", "lumped"),),
    ),
    _comparison_table("VIII", "Microstrip, W = 10 mm", """
        Simulation 42.8 0.358 38.7 0.20 474
        Measurement 42.1 0.347 41.3 0.24 381
        Model 39.2 0.364 45.3 0.26 346
    """),
)

TABLES = MappingProxyType({t.table_id: t for t in _TABLES})

# coupled-link figures quoted alongside the microstrip comparison
LINK_PEAK_EFFICIENCY = 0.96
LINK_BANDWIDTH_HZ = 6e6
LINK_DISTANCE = 0.10
LINK_MATCH_FREQUENCY = 42.8e6

FIXTURE_SHA256 = "5f4e20a278a12082b88252aa47e76dbe534a87826f167ea18a812767bafbb5e7"


def canonical_bytes() -> bytes:
    payload = [
        [t.table_id, [[r.label, r.f0_mhz, r.l_uh, r.c_pf, r.r_ohm, r.q, r.provenance] for r in t.rows]]
        for t in _TABLES
    ]
    return json.dumps(payload, separators=(",", ":")).encode()


def fixture_digest() -> str:
    return hashlib.sha256(canonical_bytes()).hexdigest()


def verify_integrity() -> bool:
    return fixture_digest() == FIXTURE_SHA256


def table(table_id: str) -> FixtureTable:
    try:
        return TABLES[table_id]
    except KeyError:
        raise KeyError(f"unknown table {table_id!r} (have {', '.join(TABLES)})") from None
