"""Verification suites, run configuration handling and artifact persistence.

Every suite is a pure function of (config, seed) returning a JSON-able report
with an ``ok`` flag; the CLI maps reports to exit codes.  Artifacts are
written atomically (temp file + rename) and indexed in a manifest keyed by the
canonical config hash, so identical inputs yield byte-identical outputs.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

import numpy as np
from jsonschema import Draft202012Validator

from kp5lab import dispersion, kernel, multipliers, resonance, strichartz
from kp5lab.errors import ConfigurationError, KP5Error
from kp5lab.evolution import ModelParams, evolve, initial_data, shell_energy_identity
from kp5lab.experiments import scaling_bookkeeping, time_split_centers, uniqueness_experiment
from kp5lab.grid import build_grid
from kp5lab.modulation import modulation_besov
from kp5lab.shells import ShellSystem
from kp5lab.timecut import time_partition

SUITES = (
    "resonance",
    "commutator",
    "acceptability",
    "decay",
    "strichartz",
    "partition",
    "energy_identity",
)

RUN_CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["delta", "grid", "dt", "T", "init"],
    "properties": {
        "delta": {"enum": [-1, 1]},
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["Lx", "Ly", "nx", "ny"],
            "properties": {
                "Lx": {"type": "number", "exclusiveMinimum": 0},
                "Ly": {"type": "number", "exclusiveMinimum": 0},
                "nx": {"type": "integer", "minimum": 8},
                "ny": {"type": "integer", "minimum": 8},
            },
        },
        "dt": {"type": "number", "exclusiveMinimum": 0},
        "T": {"type": "number", "exclusiveMinimum": 0},
        "dealias": {"type": "number", "exclusiveMinimum": 0, "maximum": 2.0 / 3.0},
        "c3": {"type": "number"},
        "init": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "seed"],
            "properties": {
                "kind": {"enum": ["gaussian-band", "low-modes", "line-soliton"]},
                "seed": {"type": "integer", "minimum": 0},
                "amplitude": {"type": "number", "exclusiveMinimum": 0},
                "band": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "record_stride": {"type": "integer", "minimum": 1},
        "linear_only": {"type": "boolean"},
    },
}


def thread_count() -> int:
    """Parallelism cap from KP5_THREADS (>=1); suites here run sequentially."""
    try:
        return max(1, int(os.environ.get("KP5_THREADS", "1")))
    except ValueError:
        return 1


def validate_config(doc: dict) -> dict:
    errors = sorted(
        Draft202012Validator(RUN_CONFIG_SCHEMA).iter_errors(doc),
        key=lambda e: list(e.absolute_path),
    )
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "<root>"
        raise ConfigurationError(f"config invalid at {where}: {first.message}")
    return doc


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return validate_config(doc)


def build_from_config(cfg: dict):
    grid = build_grid(**cfg["grid"])
    init = cfg["init"]
    u0 = initial_data(
        grid,
        kind=init["kind"],
        seed=init["seed"],
        amplitude=init.get("amplitude", 1e-2),
        band=init.get("band", 2.0),
    )
    params = ModelParams(
        delta=cfg["delta"],
        dt=cfg["dt"],
        T=cfg["T"],
        dealias=cfg.get("dealias", 2.0 / 3.0),
        c3=cfg.get("c3", 1.0 / 3.0),
        record_stride=cfg.get("record_stride", 1),
        linear_only=cfg.get("linear_only", False),
    )
    return grid, u0, params


def config_hash(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def atomic_write_text(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(row[h]) for h in header))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_json(path: str, obj) -> None:
    atomic_write_text(path, json.dumps(obj, sort_keys=True, indent=2) + "\n")


class ArtifactDir:
    """Output directory with a manifest indexing every written artifact."""

    def __init__(self, out: str, seed: int, config) -> None:
        self.out = out
        self.seed = seed
        self.config = config
        self.entries = []

    def path(self, name: str) -> str:
        return os.path.join(self.out, name)

    def add_csv(self, name: str, header, rows) -> None:
        write_csv(self.path(name), header, rows)
        self.entries.append({"name": name, "kind": "csv"})

    def add_json(self, name: str, obj) -> None:
        write_json(self.path(name), obj)
        self.entries.append({"name": name, "kind": "json"})

    def finish(self, suite: str, ok: bool) -> None:
        write_json(
            self.path("manifest.json"),
            {
                "suite": suite,
                "ok": bool(ok),
                "seed": self.seed,
                "config_hash": config_hash(self.config),
                "artifacts": sorted(self.entries, key=lambda e: e["name"]),
            },
        )


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def suite_resonance(art: ArtifactDir, samples: int = 1_000_000, seed: int = 42) -> dict:
    sweep = resonance.sweep_gap_bounds(samples=samples, seed=seed)
    coher = resonance.sign_coherence_check(samples=min(samples, 100_000), seed=seed + 1)
    ok = sweep["failures"] == 0 and coher["kp2_conflict_fraction"] == 0.0
    report = {"ok": ok, "sweep": sweep, "coherence": coher}
    art.add_json("resonance.json", report)
    return report


def suite_commutator(art: ArtifactDir, samples: int = 0, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    n, Lx = 4096, 32 * np.pi
    rows, worst = [], 0.0
    for N3 in (2.0, 1.0, 0.5):
        N = 16.0
        gg = multipliers._random_band_limited(rng, n, n // 4)
        hh = multipliers._random_band_limited(rng, n, n // 4)
        spec_route = multipliers.commutator_spectral(gg, hh, N, N3, Lx)
        lam_route = 1j * N3 * multipliers.lambda_apply(
            multipliers.symbol_a1(N, N3), gg, hh, Lx
        )
        scale = max(np.max(np.abs(spec_route)), 1e-300)
        gap = float(np.max(np.abs(spec_route - lam_route)) / scale)
        worst = max(worst, gap)
        rows.append({"N": N, "N3": N3, "route_gap": gap})
    ok = worst < 1e-10
    report = {"ok": ok, "worst_route_gap": worst, "rows": rows}
    art.add_json("commutator.json", report)
    return report


def suite_acceptability(art: ArtifactDir, samples: int = 40, seed: int = 0) -> dict:
    g_n, g_Lx = 512, 8 * np.pi
    specs = {
        "one": multipliers.SYMBOL_ONE,
        "a1": multipliers.symbol_a1(8.0, 1.0),
        "a2": multipliers.symbol_a2(8.0),
        "a3": multipliers.symbol_a3(8.0),
    }
    rows = []
    for name, spec in specs.items():
        probe = multipliers.acceptability_probe(
            spec, g_n, g_Lx, samples=samples, seed=seed
        )
        rows.append({"symbol": name, **probe})
    ok = all(np.isfinite(r["max_ratio"]) and r["max_ratio"] < 1e3 for r in rows)
    report = {"ok": ok, "rows": rows}
    art.add_json("acceptability.json", report)
    return report


def suite_decay(art: ArtifactDir, samples: int = 0, seed: int = 0) -> dict:
    rep = kernel.decay_sweep(
        ts=(0.01, 0.1, 1.0, 10.0), Ns=(2.0, 4.0, 8.0, 16.0), n_alpha=60
    )
    art.add_csv(
        "decay.csv",
        ["N", "t", "sup_abs_G", "c1_ratio", "c2_ratio"],
        rep["rows"],
    )
    ok = rep["env_spread"] <= 5.0
    report = {"ok": ok, "env_spread": rep["env_spread"], "max_env_ratio": rep["max_env_ratio"]}
    art.add_json("decay.json", report)
    return report


def suite_strichartz(art: ArtifactDir, samples: int = 4, seed: int = 0) -> dict:
    rows = []
    sweep = strichartz.probe_sweep(
        Ns=(4.0, 8.0, 16.0, 32.0),
        pair=dispersion.AdmissiblePair(4, 4),
        samples=samples,
        seed=seed,
    )
    rows.extend(sweep["rows"])
    unit = strichartz.strichartz_probe(
        8.0, dispersion.AdmissiblePair(np.inf, 2), samples=samples, seed=seed
    )
    rows.append(unit)
    art.add_csv(
        "strichartz.csv",
        ["N", "q", "r", "mode", "sample_count", "max_ratio", "median_ratio", "boundary_mass"],
        rows,
    )
    ok = sweep["spread"] <= 3.0 and abs(unit["max_ratio"] - 1.0) < 1e-12
    report = {"ok": ok, "spread": sweep["spread"], "unitary_max_ratio": unit["max_ratio"]}
    art.add_json("strichartz.json", report)
    return report


def suite_partition(art: ArtifactDir, samples: int = 0, seed: int = 0) -> dict:
    mesh = np.linspace(0.0, 1.0, 10_000)
    defect = float(np.max(np.abs(time_partition(8, 1.0, mesh)["sum"] - 1.0)))

    class _T:  # minimal uniform trajectory for the modulation partition check
        pass

    _T.grid = build_grid(2 * np.pi, 2 * np.pi, 16, 16)
    _T.times = np.arange(64) * 0.01
    X, Y = _T.grid.mesh()
    _T.fields = np.array([np.cos(2 * X + 3 * Y - 27.5 * t) for t in _T.times])
    mod = modulation_besov(_T(), delta=-1)
    ok = defect < 1e-10 and mod["partition_defect"] < 1e-10 and mod["mass_defect"] < 1e-10
    report = {
        "ok": ok,
        "eta_partition_defect": defect,
        "modulation_partition_defect": mod["partition_defect"],
        "modulation_mass_defect": mod["mass_defect"],
    }
    art.add_json("partition.json", report)
    return report


def reference_run_config(delta: int = -1) -> dict:
    """The desk-scale reference run used by conservation/energy acceptance."""
    return {
        "delta": delta,
        "grid": {"Lx": 2 * np.pi, "Ly": 2 * np.pi, "nx": 128, "ny": 128},
        "dt": 1e-3,
        "T": 1.0,
        "init": {"kind": "gaussian-band", "seed": 1, "amplitude": 1e-4, "band": 16.0},
        "record_stride": 1,
    }


def conservation_rows(traj) -> list[dict]:
    m = traj.diagnostics["mass"]
    e = traj.diagnostics["energy"]
    rows = []
    for i, t in enumerate(traj.times):
        rows.append(
            {
                "t": float(t),
                "mass": float(m[i]),
                "energy": float(e[i]),
                "mass_rel_drift": float(abs(m[i] - m[0]) / max(abs(m[0]), 1e-300)),
                "energy_rel_drift": float(abs(e[i] - e[0]) / max(abs(e[0]), 1e-300)),
            }
        )
    return rows


def suite_energy_identity(art: ArtifactDir, samples: int = 0, seed: int = 0) -> dict:
    cfg = reference_run_config()
    if seed:
        cfg["init"]["seed"] = seed
    grid, u0, params = build_from_config(validate_config(cfg))
    traj = evolve(u0, params)
    rows = conservation_rows(traj)
    art.add_csv(
        "conservation.csv",
        ["t", "mass", "energy", "mass_rel_drift", "energy_rel_drift"],
        rows[:: max(1, len(rows) // 101)],
    )
    shells = ShellSystem(grid, params.dealias).shells()
    shell_rows = [{"N": N, "residual": shell_energy_identity(traj, N)} for N in shells]
    art.add_csv("shell_energy.csv", ["N", "residual"], shell_rows)
    mass_drift = max(r["mass_rel_drift"] for r in rows)
    energy_drift = max(r["energy_rel_drift"] for r in rows)
    ok = (
        mass_drift < 1e-8
        and energy_drift < 1e-6
        and all(r["residual"] < 1e-3 for r in shell_rows)
    )
    report = {
        "ok": ok,
        "mass_drift": mass_drift,
        "energy_drift": energy_drift,
        "worst_shell_residual": max(r["residual"] for r in shell_rows),
    }
    art.add_json("energy_identity.json", report)
    return report


SUITE_FUNCS = {
    "resonance": suite_resonance,
    "commutator": suite_commutator,
    "acceptability": suite_acceptability,
    "decay": suite_decay,
    "strichartz": suite_strichartz,
    "partition": suite_partition,
    "energy_identity": suite_energy_identity,
}


def run_verification_suite(which: str, out: str, samples=None, seed: int = 0) -> int:
    """Exit-code semantics: 0 pass, 1 assertion failure, 2 configuration error."""
    if which not in SUITE_FUNCS:
        return 2
    art = ArtifactDir(out, seed, {"suite": which, "samples": samples, "seed": seed})
    kwargs = {"seed": seed}
    if samples is not None:
        kwargs["samples"] = samples
    try:
        report = SUITE_FUNCS[which](art, **kwargs)
    except KP5Error as exc:
        art.add_json("error.json", {"error": type(exc).__name__, "message": str(exc)})
        art.finish(which, False)
        return 1
    art.finish(which, report["ok"])
    return 0 if report["ok"] else 1


def run_simulate(cfg: dict, out: str) -> int:
    grid, u0, params = build_from_config(cfg)
    art = ArtifactDir(out, cfg["init"]["seed"], cfg)
    try:
        traj = evolve(u0, params)
    except KP5Error as exc:
        art.add_json("error.json", {"error": type(exc).__name__, "message": str(exc)})
        art.finish("simulate", False)
        return 1
    art.add_csv(
        "conservation.csv",
        ["t", "mass", "energy", "mass_rel_drift", "energy_rel_drift"],
        conservation_rows(traj),
    )
    shells = ShellSystem(grid, params.dealias).shells()
    art.add_csv(
        "shell_energy.csv",
        ["N", "residual"],
        [{"N": N, "residual": shell_energy_identity(traj, N)} for N in shells],
    )
    from kp5lab.grid import save_field

    save_field(traj.field(0), art.path("state_initial.kp5"))
    art.entries.append({"name": "state_initial.kp5", "kind": "field"})
    save_field(traj.field(len(traj) - 1), art.path("state_final.kp5"))
    art.entries.append({"name": "state_final.kp5", "kind": "field"})
    art.finish("simulate", True)
    return 0


def run_uniqueness(cfg: dict, out: str) -> int:
    grid, u0, params = build_from_config(cfg)
    art = ArtifactDir(out, cfg["init"]["seed"], cfg)
    try:
        rep = uniqueness_experiment(u0, params)
    except KP5Error as exc:
        art.add_json("error.json", {"error": type(exc).__name__, "message": str(exc)})
        art.finish("uniqueness", False)
        return 1
    n = len(rep["w_norms"][0.0])
    times = np.arange(n) * params.dt * params.record_stride
    art.add_csv(
        "uniqueness.csv",
        ["t", "w_l2", "w_h025", "w_h05"],
        [
            {
                "t": float(times[i]),
                "w_l2": float(rep["w_norms"][0.0][i]),
                "w_h025": float(rep["w_norms"][0.25][i]),
                "w_h05": float(rep["w_norms"][0.5][i]),
            }
            for i in range(n)
        ],
    )
    ok = (
        not rep["diverged"]
        and 16.0 * 0.7 <= rep["refinement_ratio"] <= 16.0 * 1.3
        and rep["w_residual"] < 1e-4
    )
    art.add_json(
        "uniqueness.json",
        {
            "ok": ok,
            "refinement_ratio": rep["refinement_ratio"],
            "max_w_l2_coarse": rep["max_w_l2_coarse"],
            "max_w_l2_fine": rep["max_w_l2_fine"],
            "w_residual": rep["w_residual"],
            "z_residual": rep["z_residual"],
            "diverged": rep["diverged"],
        },
    )
    art.finish("uniqueness", ok)
    return 0 if ok else 1


def run_scaling_test(cfg: dict, out: str) -> int:
    art = ArtifactDir(out, cfg.get("seed", 0), cfg)
    eps_list = cfg.get("eps", [0.25, 0.1, 0.01])
    norms = cfg.get("norms", [0.0])
    T = cfg.get("T", 1.0)
    rows, ok = [], True
    prev = None
    for eps in sorted(eps_list, reverse=True):
        rep = scaling_bookkeeping(norms, eps, T)
        rows.append({"eps": float(eps), **rep})
        if prev is not None and rep["T_eps"] <= prev:
            ok = False
        prev = rep["T_eps"]
        if eps < T**0.4 and rep["T_eps"] <= 1.0:
            ok = False
    art.add_csv("scaling.csv", ["eps", "lambda_eps", "T_eps"], rows)
    art.add_json("scaling.json", {"ok": ok, "T": T, "norms": list(map(float, norms))})
    art.finish("scaling-test", ok)
    return 0 if ok else 1
