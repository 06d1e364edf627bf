"""Flat key = value configuration with namespaced keys.

One assignment per line, `#` starts a comment, values are parsed as int,
float, bool or string.  Unset keys fall back to the canonical defaults
below, which describe the desk-scale verification setup (unit interval,
quarter-circle unit sector, unit disk, constant coefficients).
"""

from __future__ import annotations

import math

__all__ = ["ConfigError", "DEFAULTS", "parse_config_text", "load_config", "alpha_list"]


class ConfigError(Exception):
    """Malformed configuration file or unusable option value."""


DEFAULTS = {
    # geometry
    "domain.interval.length": 1.0,
    "domain.sector.radius": 1.0,
    "domain.sector.angle": math.pi / 2.0,
    "domain.disk.radius": 1.0,
    # grid resolutions (finest level)
    "grid.n_1d": 512,
    "grid.n_radial": 128,
    "grid.n_dirs": 32,
    # fractional orders
    "frac.alpha": 0.5,
    "frac.alpha_grid": "0.25,0.5,0.75",
    "kernels.alpha_grid": "0.1,0.25,0.5,0.75,0.9",
    "kernels.cutoff": 100.0,
    # the truncation error of the inversion check scales like h^(1-alpha),
    # so the dyadic-contraction gate needs alpha below ~0.4
    "inversion.alpha": 0.25,
    "representability.alpha": 0.5,
    # elliptic coefficients (radial presets)
    "coeff.a.preset": "constant",
    "coeff.a.value": 1.0,
    "coeff.a.slope": 0.0,
    "coeff.a.amp": 0.0,
    "coeff.a.freq": 1,
    "coeff.rho.preset": "constant",
    "coeff.rho.value": 1.0,
    "coeff.rho.slope": 0.0,
    "coeff.rho.amp": 0.0,
    "coeff.rho.freq": 1,
    # spectral checks
    "spectral.alpha": 0.5,
    "spectral.n_1d": 256,
    "spectral.n_angles": 64,
    "eigen.n_1d": 512,
    # comparator constants; "auto" derives them from the coefficient field
    "eigen.l0.a": "auto",
    "eigen.l0.rho": "auto",
    "eigen.l1.a": "auto",
    "eigen.l1.rho": "auto",
    # abstract sector constants (carried parametrically, never derived)
    "sector_consts.K": 1.0,
    "sector_consts.delta": 0.5,
    "sector_consts.eps_young": 1.0,
    "sector_consts.C2": 1.0,
    "sector_consts.C3": 1.0,
    "nu.p": 2.0,
    "nu.q": 4.0,
    "nu.l": 1.0,
    "nu.beta": 0.01,
    # reporting
    "report.svg": True,
}


def _parse_value(raw: str):
    token = raw.strip()
    low = token.lower()
    if low == "true":
        return True
    if low == "false":
        return False
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        pass
    return token


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = body.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        out[key] = _parse_value(raw)
    return out


def load_config(path: str | None) -> dict:
    """Defaults overlaid with the file at path (if given)."""
    cfg = dict(DEFAULTS)
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        cfg.update(parse_config_text(text))
    return cfg


def alpha_list(cfg: dict, key: str) -> list:
    """Comma-separated float list option."""
    raw = cfg[key]
    if isinstance(raw, (int, float)):
        return [float(raw)]
    try:
        return [float(tok) for tok in str(raw).split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"option {key} must be a comma-separated float list") from exc
