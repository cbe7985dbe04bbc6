"""Symmetrized output noise spectra, amplifier added noise, and effective
output occupancies.

All spectra are symmetrized and quoted in quanta, so a vacuum-limited
channel reads exactly 1/2.  The spectrum of an output row is the sum of
|s|^2 over every doubled input column weighted by (n_c + 1/2) of the
underlying channel; the same rule applies verbatim in the quadrature
basis.  Added noise refers the total output noise back to the input:

    n_add = (S_out(signal channel at vacuum) - gain/2) / gain .

For the impedance-matched phase-preserving amplifier this evaluates to
(1/2 + n_2)(1 + 1/G) at resonance, independent of the engineered
reservoir's occupation; that reservoir occupation instead shows up
one-for-one in the signal-port output spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, UnstableNetwork, ZeroGain
from .langevin import DriftSystem, ScatteringResult, drift_matrix, scattering_matrix, stability
from .network import LinearNetwork

_GAIN_FLOOR = 1e-30


@dataclass(frozen=True)
class NoiseReport:
    """One frequency row of a noise sweep (CLI payload)."""

    omega: float
    output_spectra: dict[str, float]
    added_noise: float | None
    output_occupancy: dict[str, float]


def _require_stable(drift: DriftSystem):
    rep = stability(drift)
    if not rep.stable:
        raise UnstableNetwork(
            f"network is not stable (margin {rep.margin:+.3e}); spectra are "
            "undefined")


def _drift(network) -> DriftSystem:
    return network if isinstance(network, DriftSystem) else drift_matrix(network)


def _row_spectrum(result: ScatteringResult, row: int,
                  occupations: np.ndarray) -> float:
    if result.basis == "doubled":
        weights = np.concatenate([occupations, occupations]) + 0.5
    else:
        weights = np.repeat(occupations, 2) + 0.5
    return float(np.sum(np.abs(result.matrix[row, :]) ** 2 * weights))


def output_spectrum(network: LinearNetwork | DriftSystem, omega: float,
                    channel, quadrature: str | None = None) -> float:
    """Symmetrized spectral density of one output channel, in quanta.

    Without a quadrature this is the spectrum of the annihilation output
    of the channel; with ``quadrature`` ('x' or 'p') the corresponding
    quadrature spectrum.
    """
    drift = _drift(network)
    _require_stable(drift)
    basis = "quadrature" if quadrature is not None else "doubled"
    res = scattering_matrix(drift, omega, basis=basis)
    pos = res._channel_pos(channel)
    if quadrature is None:
        row = pos
    else:
        row = 2 * pos + {"x": 0, "p": 1}[quadrature.lower()]
    return _row_spectrum(res, row, drift.occupations())


def added_noise(network: LinearNetwork | DriftSystem, omega: float,
                signal_port, output_port,
                mode: str = "phase_preserving",
                in_quad: str = "p", out_quad: str = "p") -> float:
    """Input-referred added noise of the route signal_port -> output_port.

    mode "phase_preserving" uses the photon-number gain of the doubled
    basis; "phase_sensitive" uses |s|^2 of the (out_quad <- in_quad)
    quadrature element.  The signal channel contributes only its vacuum
    half-quantum, which is subtracted after the gain referral.
    """
    drift = _drift(network)
    _require_stable(drift)
    occ = drift.occupations()
    if mode == "phase_preserving":
        res = scattering_matrix(drift, omega, basis="doubled")
        sig = res._channel_pos(signal_port)
        out = res._channel_pos(output_port)
        gain = res.photon_gain(out, sig)
        row = out
    elif mode == "phase_sensitive":
        res = scattering_matrix(drift, omega, basis="quadrature")
        sig = res._channel_pos(signal_port)
        out = res._channel_pos(output_port)
        gain = abs(res.quad_element(out, out_quad, sig, in_quad)) ** 2
        row = 2 * out + {"x": 0, "p": 1}[out_quad.lower()]
    else:
        raise IndexOutOfRange(f"unknown added-noise mode {mode!r}")
    if gain <= _GAIN_FLOOR:
        raise ZeroGain(
            f"no forward gain from channel {signal_port!r} to {output_port!r} "
            f"at omega={omega}")
    occ_vac_signal = occ.copy()
    occ_vac_signal[sig] = 0.0
    total = _row_spectrum(res, row, occ_vac_signal)
    return float((total - gain / 2) / gain)


def output_occupancy(network: LinearNetwork | DriftSystem, omega: float,
                     port, quadrature: str | None = None) -> float:
    """Effective thermal quanta of an output channel: spectrum minus the
    vacuum half-quantum."""
    return output_spectrum(network, omega, port, quadrature) - 0.5


def noise_report(network: LinearNetwork | DriftSystem, omega: float,
                 signal_port=None, output_port=None,
                 mode: str = "phase_preserving",
                 in_quad: str = "p", out_quad: str = "p") -> NoiseReport:
    """Aggregate spectra/occupancies for every port plus the added noise of
    one route (when given)."""
    drift = _drift(network)
    spectra = {}
    occupancy = {}
    for c in drift.channels:
        if c.kind != "port":
            continue
        s = output_spectrum(drift, omega, c.label)
        spectra[c.label] = s
        occupancy[c.label] = s - 0.5
    n_add = None
    if signal_port is not None and output_port is not None:
        n_add = added_noise(drift, omega, signal_port, output_port,
                            mode=mode, in_quad=in_quad, out_quad=out_quad)
    return NoiseReport(omega=float(omega), output_spectra=spectra,
                       added_noise=n_add, output_occupancy=occupancy)
