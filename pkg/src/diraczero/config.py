"""Run configuration: an INI document with sections [omega], [params], [grid], [options].

Example::

    [omega]
    family = cosh_power
    alpha = 1.0
    n = 2

    [params]
    M = 1.5
    k_v = 2.5
    k_y = 0.0
    L = 6.283185307179586
    sigma = 1

    [grid]
    x_min = -5.0
    x_max = 5.0
    n_points = 1001

    [options]
    k = 6
    bc = dirichlet
    seed = 12345

Keys are case-sensitive.  ``family`` is one of ``polynomial_even``
(keys omega, c, n), ``cosh_power`` (alpha, n) or ``tabulated`` (x, values
as comma-separated numbers).  Only ``omega.family``, ``params.M`` and
``params.k_v`` are required; [grid] and [options] are optional.
"""
from __future__ import annotations

import configparser
import io
import math
import re
from dataclasses import dataclass, field
from typing import Optional

from .conformal import ConformalFactor, CoshPower, PolynomialEven, Tabulated
from .discrete import Grid
from .errors import ConfigError, DomainError
from .zeromode import PhysicalParams

__all__ = ["Options", "RunConfig", "parse_config", "serialize_config", "load_config", "DEFAULT_CONFIG"]

_FAMILY_KEYS = {
    "polynomial_even": {"omega": float, "c": float, "n": int},
    "cosh_power": {"alpha": float, "n": int},
    "tabulated": {"x": "floats", "values": "floats"},
}
_PARAM_KEYS = {"M": float, "k_v": float, "k_y": float, "L": float, "sigma": int}
_GRID_KEYS = {"x_min": float, "x_max": float, "n_points": int}
_OPTION_KEYS = {"k": int, "bc": str, "seed": int, "samples": int, "draws": int, "tol": float}


@dataclass(frozen=True)
class Options:
    k: int = 6
    bc: str = "dirichlet"
    seed: int = 20240521
    samples: int = 21
    draws: int = 20
    tol: Optional[float] = None

    def __post_init__(self):
        if self.bc not in ("dirichlet", "periodic"):
            raise ConfigError(f"options.bc must be 'dirichlet' or 'periodic', got {self.bc!r}")
        if self.k < 1 or self.samples < 1 or self.draws < 0:
            raise ConfigError("options.k and options.samples must be >= 1, options.draws >= 0")
        if self.tol is not None and not (math.isfinite(self.tol) and self.tol >= 0):
            raise ConfigError(f"options.tol must be a finite number >= 0, got {self.tol}")


@dataclass(frozen=True)
class RunConfig:
    omega: ConformalFactor
    params: PhysicalParams
    grid: Optional[Grid] = None
    options: Options = field(default_factory=Options)


DEFAULT_CONFIG = RunConfig(
    omega=PolynomialEven(omega=1.0, c=1.0, n=1),
    params=PhysicalParams(M=1.5, k_v=2.5, k_y=0.0, L=2 * math.pi, sigma=1),
    grid=Grid(-5.0, 5.0, 1001),
)


def _line_of(text: str, section: str, key: Optional[str] = None) -> Optional[int]:
    current = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        m = re.match(r"^\[(.+)\]$", line)
        if m:
            current = m.group(1).strip()
            if key is None and current == section:
                return no
            continue
        if current == section and key is not None and re.match(rf"^{re.escape(key)}\s*[=:]", line):
            return no
    return None


def _convert(text: str, section: str, key: str, raw: str, kind):
    where = _line_of(text, section, key)
    loc = f"line {where}: " if where else ""
    try:
        if kind == "floats":
            vals = tuple(float(v) for v in raw.replace("\n", ",").split(",") if v.strip())
            if not all(math.isfinite(v) for v in vals):
                raise ValueError("non-finite entry")
            return vals
        if kind is int:
            f = float(raw)
            if not f.is_integer():
                raise ValueError("not an integer")
            return int(f)
        if kind is float:
            v = float(raw)
            if not math.isfinite(v):
                raise ValueError("not finite")
            return v
        return raw.strip()
    except ValueError as exc:
        raise ConfigError(f"{loc}field '{section}.{key}': cannot parse {raw!r} ({exc})") from None


def _read_section(text: str, cp: configparser.ConfigParser, section: str, schema: dict, required=()) -> dict:
    if not cp.has_section(section):
        if required:
            raise ConfigError(f"missing field '{section}.{required[0]}' (no [{section}] section)")
        return {}
    items = dict(cp.items(section))
    for key in items:
        if key not in schema:
            where = _line_of(text, section, key)
            loc = f"line {where}: " if where else ""
            raise ConfigError(f"{loc}unknown field '{section}.{key}' (allowed: {', '.join(schema)})")
    for key in required:
        if key not in items:
            raise ConfigError(f"missing field '{section}.{key}'")
    return {k: _convert(text, section, k, v, schema[k]) for k, v in items.items()}


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None

    for section in cp.sections():
        if section not in ("omega", "params", "grid", "options"):
            raise ConfigError(f"line {_line_of(text, section)}: unknown section [{section}]")

    if not cp.has_section("omega") or "family" not in cp["omega"]:
        raise ConfigError("missing field 'omega.family'")
    family = cp["omega"]["family"].strip()
    if family not in _FAMILY_KEYS:
        raise ConfigError(
            f"line {_line_of(text, 'omega', 'family')}: field 'omega.family': unknown family {family!r} "
            f"(expected one of {', '.join(_FAMILY_KEYS)})"
        )
    schema = {"family": str, **_FAMILY_KEYS[family]}
    required = ("family", "x", "values") if family == "tabulated" else ("family",)
    om = _read_section(text, cp, "omega", schema, required)
    om.pop("family")
    try:
        if family == "polynomial_even":
            omega = PolynomialEven(**om)
        elif family == "cosh_power":
            omega = CoshPower(**om)
        else:
            omega = Tabulated(om["x"], om["values"])
    except DomainError as exc:
        raise ConfigError(f"[omega]: {exc}") from None

    pr = _read_section(text, cp, "params", _PARAM_KEYS, ("M", "k_v"))
    try:
        params = PhysicalParams(**pr)
    except ValueError as exc:
        raise ConfigError(f"[params]: {exc}") from None

    grid = None
    if cp.has_section("grid"):
        gr = _read_section(text, cp, "grid", _GRID_KEYS, tuple(_GRID_KEYS))
        try:
            grid = Grid(**gr)
        except ValueError as exc:
            raise ConfigError(f"[grid]: {exc}") from None

    opts = Options(**_read_section(text, cp, "options", _OPTION_KEYS))
    return RunConfig(omega=omega, params=params, grid=grid, options=opts)


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def _fmt(v) -> str:
    if isinstance(v, tuple) or isinstance(v, list):
        return ", ".join(repr(float(t)) for t in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def serialize_config(cfg: RunConfig) -> str:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp["omega"] = {k: _fmt(v) for k, v in cfg.omega.to_dict().items()}
    p = cfg.params
    cp["params"] = {"M": _fmt(float(p.M)), "k_v": _fmt(float(p.k_v)), "k_y": _fmt(float(p.k_y)),
                    "L": _fmt(float(p.L)), "sigma": str(p.sigma)}
    if cfg.grid is not None:
        g = cfg.grid
        cp["grid"] = {"x_min": _fmt(float(g.x_min)), "x_max": _fmt(float(g.x_max)), "n_points": str(g.n_points)}
    o = cfg.options
    opts = {"k": str(o.k), "bc": o.bc, "seed": str(o.seed), "samples": str(o.samples), "draws": str(o.draws)}
    if o.tol is not None:
        opts["tol"] = _fmt(float(o.tol))
    cp["options"] = opts
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()
