"""Constructors for the stock nonreciprocal devices and their closed-form
reference curves.

Every constructor returns a plain LinearNetwork; ``matched=True`` applies
the directionality balance (and, where the device has a free internal
angle or asymmetry, the impedance/no-reflection tuning) before building.
Explicit user rates are never overridden: an isolator built with
gamma != kappa is directional but deliberately mismatched.

The waveguide pair is special: its exact physics carries a propagation
delay that no LinearNetwork can hold, so ``waveguide_scattering`` solves
the delay-equation directly and ``make_device`` returns the Markovian
(zero-delay) network with the induced coherent hopping included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import IndexOutOfRange, InfeasibleCooperativity, SingularAtFrequency
from .langevin import ChannelInfo, ScatteringResult
from .matching import impedance_conditions
from .network import (
    CoherentCoupling,
    CollectiveDissipator,
    LinearNetwork,
    Port,
    build_network,
)

SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# parameter bundles


@dataclass(frozen=True)
class IsolatorReduced:
    """Two cavities, hopping dissipator z = d1 + d2 at ``gamma``, ports at
    ``kappa``.  ``j_hop`` is used only when unmatched (parameter sweeps);
    matched construction sets J = i gamma/2."""

    gamma: float
    kappa: float
    j_hop: complex = 0.0
    n1: float = 0.0
    n2: float = 0.0


@dataclass(frozen=True)
class IsolatorThreeMode:
    """Two cavities plus a damped auxiliary mode c with hopping couplings
    j_prime; the mediated dissipative rate is gamma = 4 j_prime^2/kappa_prime."""

    j_prime: float
    kappa: float
    kappa_prime: float
    n1: float = 0.0
    n2: float = 0.0
    nc: float = 0.0

    @property
    def gamma(self) -> float:
        return 4 * self.j_prime ** 2 / self.kappa_prime


@dataclass(frozen=True)
class NdpaReduced:
    """Phase-preserving amplifier: squeezing dissipator
    z = sqrt(2)(cos(theta) d1 + sin(theta) d2^dag) at ``gamma`` plus the
    balancing two-mode squeezing interaction.  ``theta=None`` with matched
    construction picks the impedance angle cos^2 theta = 1/(2C)."""

    gamma: float
    kappa: float
    theta: float | None = None
    n1: float = 0.0
    n2: float = 0.0

    @property
    def cooperativity(self) -> float:
        return self.gamma / self.kappa


@dataclass(frozen=True)
class NdpaThreeMode:
    """Amplifier with the reservoir kept explicit: auxiliary mode c coupled
    as sqrt(2) lam_prime c^dag (cos(theta) d1 + sin(theta) d2^dag) + h.c.;
    mediated rate gamma = 4 lam_prime^2/kappa_prime."""

    lam_prime: float
    kappa: float
    kappa_prime: float
    theta: float | None = None
    n1: float = 0.0
    n2: float = 0.0
    nc: float = 0.0

    @property
    def gamma(self) -> float:
        return 4 * self.lam_prime ** 2 / self.kappa_prime

    @property
    def cooperativity(self) -> float:
        return self.gamma / self.kappa


@dataclass(frozen=True)
class DpaReduced:
    """Phase-sensitive amplifier in QND form: H = lambda_qnd P1 X2 with the
    quadrature dissipator z = X2 + i P1.  ``gamma=None`` with matched
    construction applies the balance gamma = lambda_qnd."""

    lambda_qnd: float
    kappa: float
    gamma: float | None = None
    n1: float = 0.0
    n2: float = 0.0


@dataclass(frozen=True)
class DpaAux:
    """Impedance-matched phase-sensitive amplifier with explicit reservoir
    mode.  cbar = 4 Lam_U Lam_V/(kappa kappa_prime), alpha = (Lam_V/Lam_U)^2;
    matched construction derives theta from sin(2 theta) = 1/cbar and the
    noise-nulling alpha = 1/G_phi."""

    cbar: float
    kappa: float
    kappa_prime: float
    alpha: float | None = None
    theta: float | None = None
    n1: float = 0.0
    n2: float = 0.0
    nc: float = 0.0


@dataclass(frozen=True)
class WaveguidePair:
    """Two cavities coupled through a two-directional waveguide: coupling
    rate gamma per cavity, accumulated propagation phase k0_l on resonance,
    delay tau between the cavities."""

    gamma: float
    k0_l: float
    kappa: float
    tau: float
    n1: float = 0.0
    n2: float = 0.0


DeviceParams = (IsolatorReduced | IsolatorThreeMode | NdpaReduced |
                NdpaThreeMode | DpaReduced | DpaAux | WaveguidePair)


@dataclass(frozen=True)
class ReferenceCurves:
    """Closed-form curves of a matched device, each omega -> value (omega
    in the same rate units as the device parameters).  Entries are None
    where the device has no such quantity."""

    forward_gain: Callable[[float], float] | None = None
    reverse_gain: Callable[[float], float] | None = None
    quad_forward_gain: Callable[[float], float] | None = None
    quad_reverse_gain: Callable[[float], float] | None = None
    added_noise: Callable[[float], float] | None = None


# ---------------------------------------------------------------------------
# constructors


def _check_positive(**rates):
    for name, val in rates.items():
        if val <= 0:
            raise IndexOutOfRange(f"{name} must be positive, got {val}")


def _ndpa_theta(params) -> float:
    if params.theta is not None:
        th = params.theta
    else:
        th = impedance_conditions("ndpa", params.cooperativity)["theta"]
    if not (0 <= th <= math.pi / 2):
        raise IndexOutOfRange(f"theta={th} outside [0, pi/2]")
    return th


def make_device(params: DeviceParams, matched: bool = True) -> LinearNetwork:
    if isinstance(params, IsolatorReduced):
        _check_positive(gamma=params.gamma, kappa=params.kappa)
        j = 1j * params.gamma / 2 if matched else complex(params.j_hop)
        coupling = CoherentCoupling.from_entries(2, beam_splitter={(0, 1): j})
        diss = [CollectiveDissipator(rate=params.gamma, u=[1, 1], v=[0, 0])]
        ports = [Port(0, params.kappa, params.n1), Port(1, params.kappa, params.n2)]
        return build_network(["d1", "d2"], coupling, diss, ports)

    if isinstance(params, IsolatorThreeMode):
        _check_positive(j_prime=params.j_prime, kappa=params.kappa,
                        kappa_prime=params.kappa_prime)
        j = 1j * params.gamma / 2 if matched else 0.0
        coupling = CoherentCoupling.from_entries(
            3, beam_splitter={(0, 1): j, (2, 0): params.j_prime,
                              (2, 1): params.j_prime})
        ports = [Port(0, params.kappa, params.n1),
                 Port(1, params.kappa, params.n2),
                 Port(2, params.kappa_prime, params.nc)]
        return build_network(["d1", "d2", "c"], coupling, [], ports)

    if isinstance(params, NdpaReduced):
        _check_positive(gamma=params.gamma, kappa=params.kappa)
        th = _ndpa_theta(params)
        lam = 1j * params.gamma * math.sin(2 * th) / 2 if matched else 0.0
        coupling = CoherentCoupling.from_entries(2, squeezing={(0, 1): lam})
        diss = [CollectiveDissipator(
            rate=params.gamma,
            u=[SQRT2 * math.cos(th), 0], v=[0, SQRT2 * math.sin(th)])]
        ports = [Port(0, params.kappa, params.n1), Port(1, params.kappa, params.n2)]
        return build_network(["d1", "d2"], coupling, diss, ports)

    if isinstance(params, NdpaThreeMode):
        _check_positive(lam_prime=params.lam_prime, kappa=params.kappa,
                        kappa_prime=params.kappa_prime)
        th = _ndpa_theta(params)
        lam = 1j * params.gamma * math.sin(2 * th) / 2 if matched else 0.0
        coupling = CoherentCoupling.from_entries(
            3,
            beam_splitter={(2, 0): SQRT2 * params.lam_prime * math.cos(th)},
            squeezing={(0, 1): lam,
                       (2, 1): SQRT2 * params.lam_prime * math.sin(th)})
        ports = [Port(0, params.kappa, params.n1),
                 Port(1, params.kappa, params.n2),
                 Port(2, params.kappa_prime, params.nc)]
        return build_network(["d1", "d2", "c"], coupling, [], ports)

    if isinstance(params, DpaReduced):
        _check_positive(lambda_qnd=params.lambda_qnd, kappa=params.kappa)
        if matched:
            gamma = params.lambda_qnd
        else:
            gamma = params.gamma if params.gamma is not None else 0.0
        half = 1j * params.lambda_qnd / 2
        coupling = CoherentCoupling.from_entries(
            2, beam_splitter={(0, 1): half}, squeezing={(0, 1): half})
        s = 1 / SQRT2
        diss = ([CollectiveDissipator(rate=gamma, u=[s, s], v=[-s, s])]
                if gamma > 0 else [])
        ports = [Port(0, params.kappa, params.n1), Port(1, params.kappa, params.n2)]
        return build_network(["d1", "d2"], coupling, diss, ports)

    if isinstance(params, DpaAux):
        _check_positive(cbar=params.cbar, kappa=params.kappa,
                        kappa_prime=params.kappa_prime)
        if matched:
            cond = impedance_conditions("dpa", params.cbar)
            th = cond["theta"] if params.theta is None else params.theta
            alpha = cond["alpha"] if params.alpha is None else params.alpha
        else:
            if params.theta is None or params.alpha is None:
                raise IndexOutOfRange(
                    "unmatched dpa-aux needs explicit theta and alpha")
            th, alpha = params.theta, params.alpha
        if alpha <= 0:
            raise IndexOutOfRange(f"alpha must be positive, got {alpha}")
        k, kp, cbar = params.kappa, params.kappa_prime, params.cbar
        lam_u = math.sqrt(k * kp * cbar / 4) * alpha ** -0.25
        lam_v = math.sqrt(k * kp * cbar / 4) * alpha ** 0.25
        st, ct = math.sin(th), math.cos(th)
        l1 = k * cbar * ct ** 2
        l2 = -k * cbar * st ** 2
        coupling = CoherentCoupling.from_entries(
            3,
            beam_splitter={(0, 1): 1j * (l1 - l2) / 2 if matched else 0.0,
                           (2, 0): (lam_u * st + lam_v * ct) / SQRT2,
                           (2, 1): (lam_u * ct + lam_v * st) / SQRT2},
            squeezing={(0, 1): 1j * (l1 + l2) / 2 if matched else 0.0,
                       (2, 0): (lam_u * st - lam_v * ct) / SQRT2,
                       (2, 1): (lam_u * ct - lam_v * st) / SQRT2})
        ports = [Port(0, k, params.n1), Port(1, k, params.n2),
                 Port(2, kp, params.nc)]
        return build_network(["d1", "d2", "c"], coupling, [], ports)

    if isinstance(params, WaveguidePair):
        _check_positive(kappa=params.kappa)
        if params.gamma < 0 or params.tau < 0:
            raise IndexOutOfRange("gamma and tau must be nonnegative")
        j_ind, _ = induced_couplings(params)
        coupling = CoherentCoupling.from_entries(
            2, beam_splitter={(0, 1): j_ind})
        phase = np.exp(1j * params.k0_l)
        diss = []
        if params.gamma > 0:
            diss = [CollectiveDissipator(rate=params.gamma / 2,
                                         u=[1, phase], v=[0, 0]),
                    CollectiveDissipator(rate=params.gamma / 2,
                                         u=[phase, 1], v=[0, 0])]
        ports = [Port(0, params.kappa, params.n1), Port(1, params.kappa, params.n2)]
        return build_network(["d1", "d2"], coupling, diss, ports)

    raise IndexOutOfRange(f"unknown device parameters {type(params).__name__}")


# ---------------------------------------------------------------------------
# reference curves


def dpa_zero_frequency_amplitude_gain(cbar: float) -> float:
    """sqrt(G_phi) of the impedance-matched phase-sensitive amplifier.

    Follows from the directionality and no-reflection conditions:
    2 cbar cos^2(theta) with sin(2 theta) = 1/cbar, i.e.
    cbar (1 + sqrt(1 - 1/cbar^2)).
    """
    if cbar < 1:
        raise InfeasibleCooperativity(f"cbar={cbar} < 1")
    return cbar * (1 + math.sqrt(1 - 1 / cbar ** 2))


def reference_curves(params: DeviceParams, matched: bool = True) -> ReferenceCurves:
    """Closed-form gain and added-noise curves of a matched device."""
    if not matched:
        raise IndexOutOfRange("reference curves are defined for matched devices")

    if isinstance(params, IsolatorReduced):
        g, k = params.gamma, params.kappa

        def fwd(w: float) -> float:
            return k ** 2 * g ** 2 / (((k + g) / 2) ** 2 + w ** 2) ** 2

        return ReferenceCurves(forward_gain=fwd, reverse_gain=lambda w: 0.0)

    if isinstance(params, IsolatorThreeMode):
        g, k, kp = params.gamma, params.kappa, params.kappa_prime
        if abs(g - k) > 1e-12 * k:
            raise IndexOutOfRange(
                "three-mode isolator curves hold at the impedance point "
                f"gamma = kappa; got gamma={g}, kappa={k}")

        def denom(w: float) -> float:
            return ((w ** 2 / kp ** 2) * (1 + 4 * w ** 4 / k ** 4)
                    - 4 * w ** 4 / (k ** 3 * kp) + (1 + w ** 2 / k ** 2) ** 2)

        return ReferenceCurves(
            forward_gain=lambda w: (1 + w ** 2 / kp ** 2) / denom(w),
            reverse_gain=lambda w: (w ** 2 / kp ** 2) / denom(w))

    if isinstance(params, (NdpaReduced, NdpaThreeMode)):
        c = params.cooperativity
        if c <= 0.5:
            raise InfeasibleCooperativity(f"C={c} <= 1/2 cannot be matched")
        k = params.kappa
        n2 = params.n2

        def fwd(w: float) -> float:
            x2 = (w / k) ** 2
            return (2 * c - 1) / ((x2 + 1) * ((c - 1) ** 2 + x2))

        if isinstance(params, NdpaThreeMode):
            kp = params.kappa_prime
            rev = lambda w: fwd(w) * w ** 2 / kp ** 2
        else:
            rev = lambda w: 0.0

        def n_add(w: float) -> float:
            return (0.5 + n2) * (1 + 1 / fwd(w))

        return ReferenceCurves(forward_gain=fwd, reverse_gain=rev,
                               added_noise=n_add)

    if isinstance(params, DpaReduced):
        k = params.kappa
        g0 = (8 * params.lambda_qnd / k) ** 2

        def fwd(w: float) -> float:
            return g0 / (1 + 4 * w ** 2 / k ** 2) ** 2

        return ReferenceCurves(quad_forward_gain=fwd,
                               quad_reverse_gain=lambda w: 0.0)

    if isinstance(params, DpaAux):
        k, kp, cbar = params.kappa, params.kappa_prime, params.cbar
        g0 = dpa_zero_frequency_amplitude_gain(cbar) ** 2
        alpha = params.alpha if params.alpha is not None else 1 / g0
        n2, nc = params.n2, params.nc

        def denom(w: float) -> float:
            return ((1 + w ** 2 / k ** 2) ** 2
                    + (w ** 2 / kp ** 2) * (1 + 4 * w ** 4 / k ** 4)
                    - 4 * w ** 4 / (k ** 3 * kp))

        def n_add(w: float) -> float:
            # Markovian-reservoir form; carries O(omega/kappa_prime)
            # corrections for the explicit three-mode device
            x2 = (w / k) ** 2
            return x2 * ((nc + 0.5) / math.sqrt(g0 * alpha)
                         + (1 + x2) * (n2 + 0.5) / g0)

        return ReferenceCurves(
            quad_forward_gain=lambda w: g0 * (1 + w ** 2 / kp ** 2) / denom(w),
            quad_reverse_gain=lambda w: g0 * (w ** 2 / kp ** 2) / denom(w),
            added_noise=n_add)

    if isinstance(params, WaveguidePair):
        raise IndexOutOfRange(
            "the waveguide pair has no closed-form gain curves; use "
            "waveguide_scattering and induced_couplings")

    raise IndexOutOfRange(f"unknown device parameters {type(params).__name__}")


# ---------------------------------------------------------------------------
# waveguide reservoir, exact in the delay


def induced_couplings(params: WaveguidePair) -> tuple[float, float]:
    """Markovian-limit couplings the waveguide induces between the cavities:
    coherent hopping j_ind = gamma sin(k0 l)/2 and dissipative strength
    gamma_ind = gamma cos(k0 l)."""
    return (params.gamma * math.sin(params.k0_l) / 2,
            params.gamma * math.cos(params.k0_l))


def waveguide_scattering(params: WaveguidePair, omega: float) -> ScatteringResult:
    """Exact frequency-domain scattering of the waveguide-coupled pair.

    Channels: the two cavity ports, then the right- and left-moving
    waveguide inputs (referenced at the first and second cavity).  The
    propagation phase e^{i k[omega] l} with k[omega] l = k0_l + omega tau
    is kept exactly; no Markov approximation.
    """
    if params.tau < 0:
        raise IndexOutOfRange("tau must be nonnegative")
    g, kap = params.gamma, params.kappa
    kl = params.k0_l + omega * params.tau
    e = np.exp(1j * kl)
    core = np.array([[-1j * omega + (g + kap) / 2, e * g / 2],
                     [e * g / 2, -1j * omega + (g + kap) / 2]], dtype=complex)
    eta = 1j * math.sqrt(g / 2)
    rt = math.sqrt(kap)
    k_in = np.array([[-rt, 0, eta, eta * e],
                     [0, -rt, eta * e, eta]], dtype=complex)
    k_out = np.array([[rt, 0], [0, rt],
                      [eta * e, eta], [eta, eta * e]], dtype=complex)
    try:
        d = np.linalg.solve(core, k_in)
    except np.linalg.LinAlgError as exc:
        raise SingularAtFrequency(f"waveguide system singular at omega={omega}") from exc
    s4 = np.diag([1, 1, e, e]).astype(complex) + k_out @ d
    s = np.zeros((8, 8), dtype=complex)
    s[:4, :4] = s4
    s[4:, 4:] = s4.conj()
    s.flags.writeable = False
    channels = (
        ChannelInfo(kind="port", index=0, label="d1",
                    occupation=params.n1, mode_index=0),
        ChannelInfo(kind="port", index=1, label="d2",
                    occupation=params.n2, mode_index=1),
        ChannelInfo(kind="waveguide", index=0, label="right", occupation=0.0),
        ChannelInfo(kind="waveguide", index=1, label="left", occupation=0.0),
    )
    return ScatteringResult(omega=float(omega), matrix=s, basis="doubled",
                            channels=channels)


def fit_induced_couplings(params: WaveguidePair,
                          omegas=None) -> tuple[float, float]:
    """Extract (j_ind, gamma_ind) from the exact waveguide scattering by
    inverting the port block to an effective two-mode drift at small
    frequencies, averaging over the probe grid."""
    if omegas is None:
        omegas = np.linspace(0.01, 0.05, 5) * params.kappa
    js, gs = [], []
    for w in np.atleast_1d(omegas):
        s = waveguide_scattering(params, float(w)).port_block()
        a_eff = -1j * w * np.eye(2) - params.kappa * np.linalg.inv(np.eye(2) - s)
        js.append(-a_eff[0, 1].imag)
        gs.append(-2 * a_eff[0, 1].real)
    return float(np.mean(js)), float(np.mean(gs))
