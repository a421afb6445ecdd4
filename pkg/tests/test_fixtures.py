import pytest

from loopkit import fixtures
from loopkit.fixtures import FixtureRow, FixtureTable


def test_integrity_holds():
    assert fixtures.verify_integrity()
    assert fixtures.fixture_digest() == fixtures.FIXTURE_SHA256


def test_tampering_detected(monkeypatch):
    first = fixtures._TABLES[0]
    edited = FixtureRow(*[*first.rows[0].__dict__.values()][:5], "259", "full-wave")
    tampered = (FixtureTable(first.table_id, first.title, (edited, *first.rows[1:])), *fixtures._TABLES[1:])
    monkeypatch.setattr(fixtures, "_TABLES", tampered)
    assert not fixtures.verify_integrity()


def test_table_inventory():
    assert list(fixtures.TABLES) == ["I", "II", "III", "IV", "V", "VI", "VII", "VIII"]
    for tid in ("I", "II", "III", "V", "VI"):
        t = fixtures.table(tid)
        assert [r.label for r in t.rows] == [f"{w} mm" for w in range(2, 11)]
    with pytest.raises(KeyError, match="have I"):
        fixtures.table("IX")


def test_stripline_width_column():
    t = fixtures.table("I")
    assert t.column("f0_mhz") == [54.7, 49.1, 44.9, 41.7, 39.2, 37.0, 35.2, 33.6, 32.2]
    assert t.row("10 mm").q == "410"


def test_unit_conversions():
    row = fixtures.table("VIII").row("Model")
    assert (row.f0, row.L, row.C, row.R, row.Q) == pytest.approx((39.2e6, 0.364e-6, 45.3e-12, 0.26, 346))


def test_recorded_precision_kept():
    assert fixtures.table("IV").row("Simulation").r_ohm == "0.16"
    assert fixtures.table("VII").row("Lumped").c_pf == "30"


def test_provenance_tags():
    assert {r.provenance for r in fixtures.table("IV").rows} == {"full-wave", "measurement", "model"}
    assert fixtures.table("VII").rows[0].provenance == "lumped"
    assert all(r.provenance == "full-wave" for r in fixtures.table("III").rows)


def test_missing_row():
    with pytest.raises(KeyError, match="no row"):
        fixtures.table("I").row("11 mm")


def test_rows_are_frozen():
    with pytest.raises(AttributeError):
        fixtures.table("I").rows[0].q = "1"
    with pytest.raises(TypeError):
        fixtures.TABLES["X"] = None


def test_link_figures():
    assert fixtures.LINK_PEAK_EFFICIENCY == 0.96
    assert fixtures.LINK_BANDWIDTH_HZ == 6e6
    assert fixtures.LINK_MATCH_FREQUENCY == 42.8e6
