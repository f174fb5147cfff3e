"""Deterministic file I/O for the pipeline.

Every writer goes through atomic_write_text (write to a sibling temp
file, then rename) and formats floats at 9 significant digits, so
re-running any command with identical inputs produces byte-identical
files.  CSV headers are part of the stable interface and never change.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - python < 3.11
    import tomli as tomllib

from .errors import ConfigError, GeometryError
from .geometry import LpdaGeometry

S11_HEADER = "freq_mhz,re_s11,im_s11,mag_db"
PATTERN_HEADER = "theta_deg,phi_deg,re_etheta,im_etheta,re_ephi,im_ephi"
METRICS_HEADER = "freq_mhz,directivity_dbi,realized_gain_dbi,hpbw_e_deg,hpbw_h_deg,ftb_db,xpol_db"
HISTORY_HEADER = "generation,best_et,mean_et,best_ratio,best_n"
PLACEMENT_HEADER = "alpha_deg,height_mm,spread_mm,plf_linear,plf_db"
COVERAGE_HEADER = "azimuth_deg,best_gain_dbi,best_pole"
POLE_MAP_HEADER = "arc_start_deg,arc_end_deg,pole"

OUTPUT_DIR_ENV = "LPMIMO_OUTPUT_DIR"


def format_value(value) -> str:
    """Locale-independent cell formatting; floats at 9 significant digits."""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".9g")
    return str(value)


def atomic_write_text(path, text: str) -> Path:
    """Write text to a temp file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
    return path


def write_csv(path, header: str, rows) -> Path:
    lines = [header]
    lines.extend(",".join(format_value(cell) for cell in row) for row in rows)
    return atomic_write_text(path, "\n".join(lines) + "\n")


def join_out(out_dir, name: str) -> Path:
    return Path(out_dir) / name


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


# ---------------------------------------------------------------------------
# geometry JSON

def save_geometry(path, geometry: LpdaGeometry) -> Path:
    payload = json.dumps(geometry.to_dict(), indent=2, sort_keys=True) + "\n"
    return atomic_write_text(path, payload)


def load_geometry(path) -> LpdaGeometry:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read geometry file: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            str(path), f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    try:
        return LpdaGeometry.from_dict(data)
    except GeometryError as exc:
        raise ConfigError(str(path), str(exc)) from exc


# ---------------------------------------------------------------------------
# CSV writers for the pipeline artifacts

def write_s11_csv(path, rows) -> Path:
    """rows: iterable of (freq_mhz, complex reflection, mag_db)."""
    return write_csv(
        path,
        S11_HEADER,
        ((f, g.real, g.imag, db) for f, g, db in rows),
    )


def write_pattern_csv(path, pattern) -> Path:
    def cells():
        for i, theta in enumerate(pattern.theta_deg):
            for j, phi in enumerate(pattern.phi_deg):
                et = pattern.e_theta[i, j]
                ep = pattern.e_phi[i, j]
                yield (float(theta), float(phi), et.real, et.imag, ep.real, ep.imag)

    return write_csv(path, PATTERN_HEADER, cells())


def write_metrics_csv(path, rows) -> Path:
    """rows: iterable of (freq_mhz, PatternMetrics)."""
    return write_csv(
        path,
        METRICS_HEADER,
        (
            (
                f,
                m.directivity_dbi,
                m.realized_gain_dbi,
                m.hpbw_e_deg,
                m.hpbw_h_deg,
                m.front_to_back_db,
                m.cross_pol_db,
            )
            for f, m in rows
        ),
    )


def write_history_csv(path, history) -> Path:
    """history: iterable with generation/best_et/mean_et/best genome info."""
    return write_csv(
        path,
        HISTORY_HEADER,
        (
            (h.generation, h.best_et, h.mean_et, h.best_ratio, h.best_n)
            for h in history
        ),
    )


def write_placement_csv(path, rows) -> Path:
    """rows: iterable of SlantPlacement."""
    return write_csv(
        path,
        PLACEMENT_HEADER,
        (
            (r.incline_angle_deg, r.height_mm, r.spread_mm, r.plf_linear, r.plf_db)
            for r in rows
        ),
    )


def write_coverage_csv(path, profile) -> Path:
    return write_csv(
        path,
        COVERAGE_HEADER,
        (
            (float(a), float(g), int(p))
            for a, g, p in zip(profile.azimuth_deg, profile.best_gain_dbi, profile.best_pole)
        ),
    )


def write_pole_map_csv(path, arcs) -> Path:
    return write_csv(path, POLE_MAP_HEADER, ((s, e, p) for s, e, p in arcs))


# ---------------------------------------------------------------------------
# TOML configuration

_MISSING = object()


def load_config(path) -> dict:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config file: {exc}") from exc
    try:
        return tomllib.loads(raw.decode("utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(str(path), f"invalid TOML: {exc}") from exc


def require_section(config: dict, name: str) -> dict:
    section = config.get(name, _MISSING)
    if section is _MISSING:
        raise ConfigError(f"[{name}]", "missing required section")
    if not isinstance(section, dict):
        raise ConfigError(f"[{name}]", "section must be a table")
    return section


def get_value(section: dict, section_name: str, key: str, kind, default=_MISSING):
    """Typed lookup with [section].key paths in every error message."""
    value = section.get(key, _MISSING)
    if value is _MISSING:
        if default is _MISSING:
            raise ConfigError(f"[{section_name}].{key}", "missing required key")
        return default
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ConfigError(
            f"[{section_name}].{key}",
            f"expected {getattr(kind, '__name__', kind)}, got {type(value).__name__}",
        )
    return value
