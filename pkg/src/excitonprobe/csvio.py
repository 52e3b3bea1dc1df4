"""Spectrum CSV serialization.

Format: `#`-prefixed metadata lines, then the header
`E_cm1,T,R,A_total,A_sink,A_dephasing,A_ohmic`, one row per grid point.
Values carry 12 decimal digits in scientific notation, UTF-8, LF endings.
Writes are deterministic: identical inputs give byte-identical files.
"""

from __future__ import annotations

import os

import numpy as np

from .model import ProbeGrid
from .scattering import Spectrum

CSV_HEADER = "E_cm1,T,R,A_total,A_sink,A_dephasing,A_ohmic"

# Metadata keys written in this fixed order when present.
_META_ORDER = ("solver", "network_hash", "v_g", "reference_energy_cm1",
               "g1", "g6", "g1_over_g6", "ports", "port_widths")

FANO_CSV_HEADER = "label,q,e_res,gamma_w,t_bg,residual,converged"


def _fmt_meta(value):
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ";".join(f"{s}:{g!r}" for s, g in value)
    if isinstance(value, dict):
        return ";".join(f"{k}:{v!r}" for k, v in sorted(value.items()))
    return str(value)


def write_spectrum_csv(path, spec: Spectrum):
    lines = []
    for key in _META_ORDER:
        if key in spec.metadata:
            lines.append(f"# {key} = {_fmt_meta(spec.metadata[key])}")
    lines.append(CSV_HEADER)
    energies = spec.energies
    sink = spec.A_channels["sink"]
    deph = spec.A_channels["dephasing"]
    ohm = spec.A_channels["ohmic"]
    for i in range(spec.grid.n_points):
        lines.append(
            f"{energies[i]:.12e},{spec.T[i]:.12e},{spec.R[i]:.12e},"
            f"{spec.A_total[i]:.12e},{sink[i]:.12e},{deph[i]:.12e},{ohm[i]:.12e}"
        )
    payload = "\n".join(lines) + "\n"
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(payload)


def _parse_meta_value(raw: str):
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        return raw


def read_spectrum_csv(path) -> Spectrum:
    """Rebuild a Spectrum from a file written by write_spectrum_csv.

    The energy column must form a uniform grid; metadata lines come back as
    a dict with numeric values parsed where possible.
    """
    metadata = {}
    rows = []
    header_seen = False
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, raw = body.partition("=")
                    metadata[key.strip()] = _parse_meta_value(raw.strip())
                continue
            if not header_seen:
                if line != CSV_HEADER:
                    raise ValueError(
                        f"{path}:{lineno}: expected header {CSV_HEADER!r}, got {line!r}"
                    )
                header_seen = True
                continue
            parts = line.split(",")
            if len(parts) != 7:
                raise ValueError(f"{path}:{lineno}: expected 7 columns, got {len(parts)}")
            try:
                rows.append([float(p) for p in parts])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-numeric value ({exc})") from None
    if not header_seen:
        raise ValueError(f"{path}: missing header line {CSV_HEADER!r}")
    if len(rows) < 2:
        raise ValueError(f"{path}: needs at least 2 data rows, got {len(rows)}")

    data = np.array(rows)
    energies = data[:, 0]
    spacing = np.diff(energies)
    if spacing.min() <= 0 or (spacing.max() - spacing.min()) > 1e-6 * abs(spacing.mean()):
        raise ValueError(f"{path}: energy column is not a uniform increasing grid")
    grid = ProbeGrid(e_min=float(energies[0]), e_max=float(energies[-1]),
                     n_points=len(rows))

    cols = {name: np.ascontiguousarray(data[:, i])
            for i, name in enumerate(["E", "T", "R", "A_total", "sink",
                                      "dephasing", "ohmic"])}
    channels = {name: cols[name] for name in ("dephasing", "ohmic", "sink")}
    for arr in (cols["T"], cols["R"], cols["A_total"], *channels.values()):
        arr.flags.writeable = False
    return Spectrum(grid=grid, T=cols["T"], R=cols["R"], A_total=cols["A_total"],
                    A_channels=channels, metadata=metadata)


def write_fano_csv(path, rows):
    """Rows are (label, FanoFit) pairs; one CSV line each."""
    lines = [FANO_CSV_HEADER]
    for label, fit in rows:
        lines.append(
            f"{label},{fit.q:.12e},{fit.e_res:.12e},{fit.gamma_w:.12e},"
            f"{fit.t_bg:.12e},{fit.residual:.12e},{str(fit.converged).lower()}"
        )
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
