import json

import numpy as np
import pytest

from kp5figs.artifacts import TABLES, ArtifactIndex
from kp5figs.cli import main
from kp5figs.errors import ManifestError, MissingTableError, TableSchemaError
from kp5figs.render import render


def _csv_text(header, rows):
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(str(r[k]) for k in header))
    return "\n".join(lines) + "\n"


def _decay_rows():
    rows = []
    for N in (2.0, 4.0):
        for t in (0.01, 0.1, 1.0):
            sup = t**-0.5 * N**1.5
            rows.append(
                {"N": N, "t": t, "sup_abs_G": sup, "c1_ratio": 1.0, "c2_ratio": 2.0}
            )
    return rows


def _conservation_rows(zero_drift=False):
    rows = []
    for i, t in enumerate(np.linspace(0.0, 1.0, 11)):
        d = 0.0 if zero_drift else 1e-9 * i
        rows.append(
            {"t": t, "mass": 1.0, "energy": 2.0, "mass_rel_drift": d, "energy_rel_drift": 2 * d}
        )
    return rows


def _strichartz_rows():
    rows = [
        {
            "N": N,
            "q": 4.0,
            "r": 4.0,
            "mode": "homogeneous",
            "sample_count": 2,
            "max_ratio": 1.5 + 0.1 * k,
            "median_ratio": 1.2,
            "boundary_mass": 1e-8,
        }
        for k, N in enumerate((4.0, 8.0, 16.0, 32.0))
    ]
    rows.append(
        {
            "N": 8.0,
            "q": np.inf,
            "r": 2.0,
            "mode": "homogeneous",
            "sample_count": 2,
            "max_ratio": 1.0,
            "median_ratio": 1.0,
            "boundary_mass": 1e-8,
        }
    )
    return rows


def _uniqueness_rows():
    return [
        {"t": t, "w_l2": 1e-8 * (1 + t), "w_h025": 2e-8, "w_h05": 4e-8}
        for t in np.linspace(0.0, 0.2, 6)
    ]


_ROWS = {
    "decay": _decay_rows,
    "conservation": _conservation_rows,
    "strichartz": _strichartz_rows,
    "uniqueness": _uniqueness_rows,
}


def make_artifacts(tmp_path, sets=("decay", "conservation", "strichartz", "uniqueness")):
    names = []
    for s in sets:
        fname, header = TABLES[s]
        (tmp_path / fname).write_text(_csv_text(header, _ROWS[s]()))
        names.append({"name": fname, "kind": "csv"})
    manifest = tmp_path / "manifest.json"
    manifest.write_text(
        json.dumps({"suite": "test", "ok": True, "seed": 0, "config_hash": "x", "artifacts": names})
    )
    return manifest


def test_render_all_available_sets(tmp_path):
    manifest = make_artifacts(tmp_path)
    out = tmp_path / "figs"
    rep = render(str(manifest), str(out))
    assert sorted(p.name for p in out.iterdir()) == [
        "conservation.png",
        "decay.png",
        "strichartz.png",
        "uniqueness.png",
    ]
    assert rep["warnings"] == []


def test_rerender_is_byte_identical(tmp_path):
    manifest = make_artifacts(tmp_path)
    a, b = tmp_path / "a", tmp_path / "b"
    render(str(manifest), str(a))
    render(str(manifest), str(b))
    for p in sorted(a.iterdir()):
        assert p.read_bytes() == (b / p.name).read_bytes()


def test_empty_manifest_warns_and_exits_zero(tmp_path, capsys):
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps({"suite": "resonance", "ok": True, "artifacts": []}))
    out = tmp_path / "figs"
    assert main(["--manifest", str(manifest), "--out", str(out)]) == 0
    assert "nothing to render" in capsys.readouterr().err
    assert not out.exists()


def test_missing_table_is_named_error(tmp_path):
    manifest = make_artifacts(tmp_path, sets=("conservation",))
    with pytest.raises(MissingTableError, match="decay"):
        render(str(manifest), str(tmp_path / "figs"), which=["decay"])
    rc = main(
        ["--manifest", str(manifest), "--out", str(tmp_path / "f2"), "--which", "decay"]
    )
    assert rc == 1


def test_default_which_skips_missing_tables(tmp_path):
    manifest = make_artifacts(tmp_path, sets=("uniqueness",))
    out = tmp_path / "figs"
    rep = render(str(manifest), str(out))
    assert rep["sets"] == ["uniqueness"]
    assert [p.name for p in out.iterdir()] == ["uniqueness.png"]


def test_schema_mismatch_rejected(tmp_path):
    manifest = make_artifacts(tmp_path, sets=("conservation",))
    (tmp_path / "conservation.csv").write_text("t,mass\n0.0,1.0\n")
    with pytest.raises(TableSchemaError):
        ArtifactIndex(str(manifest)).table("conservation")


def test_malformed_manifest(tmp_path):
    bad = tmp_path / "manifest.json"
    bad.write_text("{not json")
    with pytest.raises(ManifestError):
        ArtifactIndex(str(bad))
    assert main(["--manifest", str(bad), "--out", str(tmp_path / "o")]) == 2


def test_zero_drift_floors_at_epsilon(tmp_path):
    fname, header = TABLES["conservation"]
    (tmp_path / fname).write_text(_csv_text(header, _conservation_rows(zero_drift=True)))
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps({"artifacts": [{"name": fname, "kind": "csv"}]}))
    out = tmp_path / "figs"
    rep = render(str(manifest), str(out), which=["conservation"])
    assert rep["written"] and (out / "conservation.png").stat().st_size > 0


def test_unknown_which_rejected_by_cli(tmp_path, capsys):
    manifest = make_artifacts(tmp_path)
    with pytest.raises(SystemExit):
        main(["--manifest", str(manifest), "--out", str(tmp_path / "o"), "--which", "spectra"])
