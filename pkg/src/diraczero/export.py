"""Deterministic CSV/JSON output with atomic writes."""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .zeromode import ZeroMode, degeneracy, ky_range

PROFILE_COLUMNS = ("x", "re_psi1", "im_psi1", "re_psi2", "im_psi2", "P")


def profile_table(mode: ZeroMode, x) -> np.ndarray:
    """Rows (x, Re Psi_1, Im Psi_1, Re Psi_2, Im Psi_2, P) with Psi evaluated at y = 0."""
    x = np.asarray(x, dtype=float)
    psi = mode.wavefunction(x)
    return np.column_stack([x, psi[:, 0].real, psi[:, 0].imag, psi[:, 1].real, psi[:, 1].imag, mode.density(x)])


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_csv(table: np.ndarray, columns=PROFILE_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for row in table:
        writer.writerow(["%.17g" % v for v in row])
    return buf.getvalue()


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _c(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def mode_summary(mode: ZeroMode, reciprocal_integral: float) -> dict:
    p = mode.params
    lo, hi = ky_range(p)
    return {
        "omega": mode.omega.to_dict(),
        "params": {"M": p.M, "k_v": p.k_v, "k_y": p.k_y, "L": p.L, "sigma": p.sigma},
        "lambda": _c(mode.lam),
        "chi": [_c(c) for c in mode.chi],
        "N": float(mode.norm_constant),
        "degeneracy": degeneracy(p),
        "ky_range": [lo, hi],
        "reciprocal_integral": float(reciprocal_integral),
    }
