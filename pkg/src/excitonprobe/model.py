"""Exciton site network data model, validation, and the built-in FMO preset.

Energies and rates are in cm^-1 throughout. Site energies are offsets from a
declared reference energy so that only differences enter the physics; the
reference is carried as metadata. Site numbers in the public API are 1-based
(matching the "site 1" ... "site N" labels); the underlying arrays are 0-based.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

# Named loss channels, in the order they appear in spectrum CSV columns.
LOSS_CHANNELS = ("dephasing", "ohmic", "sink")

PRESET_DATA_FILE = "fmo_hamiltonian.json"

# Fraction of each port's induced width lost to Ohmic heating of the wire.
OHMIC_FRACTION_DEFAULT = 1.0 / 20.0


class PresetDataError(RuntimeError):
    """Raised when the bundled preset data file is missing or malformed."""


def induced_width(g, v_g=1.0):
    """Waveguide-induced decay width of a port site: Gamma = 2 g^2 / v_g."""
    return 2.0 * g * g / v_g


def _frozen_array(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class LossBreakdown:
    """Per-site non-negative loss rates split by named channel (cm^-1)."""

    dephasing: np.ndarray
    ohmic: np.ndarray
    sink: np.ndarray

    def __post_init__(self):
        for name in LOSS_CHANNELS:
            object.__setattr__(self, name, _frozen_array(getattr(self, name)))

    def total(self) -> np.ndarray:
        return self.dephasing + self.ohmic + self.sink

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in LOSS_CHANNELS}

    @classmethod
    def zeros(cls, n: int) -> "LossBreakdown":
        return cls(np.zeros(n), np.zeros(n), np.zeros(n))


@dataclass(frozen=True)
class SiteNetwork:
    """An N-site excitonic network with per-site loss rates.

    epsilon[n] is the site energy offset from `reference_energy`, coupling is
    the real symmetric inter-site coupling matrix with zero diagonal, and
    loss[n] is the total non-Hermitian width of site n, which must equal the
    sum of its loss_breakdown channels.
    """

    n_sites: int
    epsilon: np.ndarray
    coupling: np.ndarray
    loss: np.ndarray
    loss_breakdown: LossBreakdown
    labels: tuple[str, ...] = ()
    reference_energy: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "epsilon", _frozen_array(self.epsilon))
        object.__setattr__(self, "coupling", _frozen_array(self.coupling))
        object.__setattr__(self, "loss", _frozen_array(self.loss))
        if not self.labels:
            object.__setattr__(
                self, "labels", tuple(f"site {n}" for n in range(1, self.n_sites + 1))
            )
        else:
            object.__setattr__(self, "labels", tuple(self.labels))

    def site_index(self, site: int) -> int:
        """0-based array index for a 1-based site number."""
        if not 1 <= site <= self.n_sites:
            raise IndexError(f"site {site} out of range 1..{self.n_sites}")
        return site - 1


@dataclass(frozen=True)
class WaveguideCoupling:
    """Which sites couple to the waveguide and with what amplitude.

    Each port is a (site, g) pair with a 1-based site number and a coupling
    amplitude g >= 0 in units such that the induced width is 2 g^2 / v_g.
    Both ports sit at the same position (separation d = 0), so a photon sees
    a single combined scatterer.
    """

    ports: tuple[tuple[int, float], ...]
    v_g: float = 1.0
    d: float = 0.0

    def __post_init__(self):
        object.__setattr__(
            self, "ports", tuple((int(s), float(g)) for s, g in self.ports)
        )
        sites = [s for s, _ in self.ports]
        if len(set(sites)) != len(sites):
            raise ValueError(f"duplicate port sites: {sites}")
        for s, g in self.ports:
            if s < 1:
                raise ValueError(f"port site {s} is not a valid 1-based site number")
            if g < 0:
                raise ValueError(f"negative port amplitude g={g} at site {s}")
        if self.v_g <= 0:
            raise ValueError(f"group velocity must be positive, got {self.v_g}")
        if self.d != 0:
            raise ValueError("finite port separation is not supported (d must be 0)")

    def amplitude_vector(self, n_sites: int) -> np.ndarray:
        """Coupling amplitudes as a length-N vector (zero off-port)."""
        w = np.zeros(n_sites)
        for s, g in self.ports:
            w[s - 1] = g
        return w

    def port_widths(self) -> dict[int, float]:
        """Induced width per port site, {site: 2 g^2 / v_g}."""
        return {s: induced_width(g, self.v_g) for s, g in self.ports}


@dataclass(frozen=True)
class ProbeGrid:
    """Uniform probe-energy grid (cm^-1, same reference as the network)."""

    e_min: float
    e_max: float
    n_points: int = 2001

    def __post_init__(self):
        if self.n_points < 2:
            raise ValueError(f"grid needs at least 2 points, got {self.n_points}")
        if not self.e_min < self.e_max:
            raise ValueError(f"empty grid range [{self.e_min}, {self.e_max}]")

    @property
    def spacing(self) -> float:
        return (self.e_max - self.e_min) / (self.n_points - 1)

    def energies(self) -> np.ndarray:
        return np.linspace(self.e_min, self.e_max, self.n_points)


def validate_network(net: SiteNetwork) -> list[str]:
    """Check all SiteNetwork invariants; returns one message per violation.

    An empty list means the network is well formed. Messages use 1-based
    site numbers.
    """
    violations = []
    n = net.n_sites
    if n < 1:
        violations.append(f"n_sites must be >= 1, got {n}")
        return violations

    if net.epsilon.shape != (n,):
        violations.append(f"epsilon shape {net.epsilon.shape} inconsistent with n_sites {n}")
    if net.coupling.shape != (n, n):
        violations.append(f"coupling shape {net.coupling.shape} inconsistent with n_sites {n}")
    if net.loss.shape != (n,):
        violations.append(f"loss shape {net.loss.shape} inconsistent with n_sites {n}")
    for name, arr in net.loss_breakdown.as_dict().items():
        if arr.shape != (n,):
            violations.append(
                f"loss_breakdown[{name}] shape {arr.shape} inconsistent with n_sites {n}"
            )
    if len(net.labels) != n:
        violations.append(f"{len(net.labels)} labels for {n} sites")
    if violations:
        return violations

    for arr, name in ((net.epsilon, "epsilon"), (net.coupling, "coupling"), (net.loss, "loss")):
        if not np.all(np.isfinite(arr)):
            violations.append(f"non-finite values in {name}")

    J = net.coupling
    for i in range(n):
        if J[i, i] != 0.0:
            violations.append(f"nonzero coupling diagonal at site {i + 1}")
        for j in range(i + 1, n):
            if J[i, j] != J[j, i]:
                violations.append(f"asymmetric coupling ({i + 1},{j + 1})")

    for name, arr in net.loss_breakdown.as_dict().items():
        for i in range(n):
            if arr[i] < 0:
                violations.append(f"negative {name} loss at site {i + 1}")
    total = net.loss_breakdown.total()
    for i in range(n):
        if net.loss[i] < 0:
            violations.append(f"negative loss at site {i + 1}")
        if not np.isclose(net.loss[i], total[i], rtol=0.0, atol=1e-12):
            violations.append(f"loss_breakdown mismatch at site {i + 1}")

    return violations


def network_fingerprint(net: SiteNetwork) -> str:
    """Deterministic short hash of the network's physical content."""
    h = hashlib.sha256()
    h.update(np.int64(net.n_sites).tobytes())
    h.update(np.float64(net.reference_energy).tobytes())
    for arr in (net.epsilon, net.coupling, net.loss):
        h.update(np.ascontiguousarray(arr, dtype=np.float64).tobytes())
    for name in LOSS_CHANNELS:
        h.update(np.ascontiguousarray(getattr(net.loss_breakdown, name), dtype=np.float64).tobytes())
    return h.hexdigest()[:16]


def _load_preset_data() -> dict:
    try:
        path = resources.files("excitonprobe.data").joinpath(PRESET_DATA_FILE)
        raw = path.read_text(encoding="utf-8")
    except (FileNotFoundError, ModuleNotFoundError) as exc:
        raise PresetDataError(f"preset data file {PRESET_DATA_FILE!r} not found: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise PresetDataError(f"preset data file {PRESET_DATA_FILE!r} is malformed: {exc}") from exc
    for key in ("epsilon_cm1", "coupling_upper_triangle_cm1", "reference_energy_cm1", "labels"):
        if key not in data:
            raise PresetDataError(f"preset data file {PRESET_DATA_FILE!r} lacks key {key!r}")
    return data


def fmo_preset(
    g1: float = 10.0,
    g6: float = 10.0,
    gamma_dp: float = 77.0,
    gamma_s: float = 5.3,
    ohmic_fraction: float = OHMIC_FRACTION_DEFAULT,
    v_g: float = 1.0,
) -> tuple[SiteNetwork, WaveguideCoupling]:
    """Seven-site FMO network probed through sites 1 and 6.

    Dephasing broadening gamma_dp sits on the two port sites, the sink rate
    gamma_s on site 3 (transfer to the reaction center), and each port
    carries an Ohmic loss of ohmic_fraction times its induced width
    2 g^2 / v_g. All other sites are lossless.
    """
    data = _load_preset_data()
    eps = np.asarray(data["epsilon_cm1"], dtype=float)
    n = eps.size
    J = np.zeros((n, n))
    for s, m, value in data["coupling_upper_triangle_cm1"]:
        J[s - 1, m - 1] = value
        J[m - 1, s - 1] = value

    ports = ((1, float(g1)), (6, float(g6)))
    wg = WaveguideCoupling(ports=ports, v_g=v_g)

    dephasing = np.zeros(n)
    ohmic = np.zeros(n)
    sink = np.zeros(n)
    for site, g in ports:
        dephasing[site - 1] = gamma_dp
        ohmic[site - 1] = ohmic_fraction * induced_width(g, v_g)
    sink[3 - 1] = gamma_s

    breakdown = LossBreakdown(dephasing=dephasing, ohmic=ohmic, sink=sink)
    net = SiteNetwork(
        n_sites=n,
        epsilon=eps,
        coupling=J,
        loss=breakdown.total(),
        loss_breakdown=breakdown,
        labels=tuple(data["labels"]),
        reference_energy=float(data["reference_energy_cm1"]),
    )
    return net, wg


def rebuild_port_losses(
    net: SiteNetwork, old_wg: WaveguideCoupling, new_wg: WaveguideCoupling,
    ohmic_fraction: float = OHMIC_FRACTION_DEFAULT,
) -> SiteNetwork:
    """Recompute per-port Ohmic losses after the port amplitudes change.

    The Ohmic channel follows the waveguide-induced width of each port, so
    retuning g must retune it as well; dephasing and sink channels are left
    untouched. Old port sites that are no longer ports lose their Ohmic term.
    """
    ohmic = np.array(net.loss_breakdown.ohmic)
    for site, _ in old_wg.ports:
        ohmic[site - 1] = 0.0
    for site, g in new_wg.ports:
        ohmic[site - 1] = ohmic_fraction * induced_width(g, new_wg.v_g)
    breakdown = LossBreakdown(
        dephasing=np.array(net.loss_breakdown.dephasing),
        ohmic=ohmic,
        sink=np.array(net.loss_breakdown.sink),
    )
    return SiteNetwork(
        n_sites=net.n_sites,
        epsilon=np.array(net.epsilon),
        coupling=np.array(net.coupling),
        loss=breakdown.total(),
        loss_breakdown=breakdown,
        labels=net.labels,
        reference_energy=net.reference_energy,
    )
