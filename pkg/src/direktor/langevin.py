"""Compile a network to its doubled-basis Langevin representation.

The drift acts on the vector a = (d_1 .. d_N, d_1^dag .. d_N^dag).  For
mode row m it carries

* coherent terms  -i J[m,k] on d_k and -i Lam[m,k] on d_k^dag,
* per dissipator (rate G, vectors u, v)
      (G/2)(v_m v_k^* - u_m^* u_k)  on d_k,
      (G/2)(v_m u_k^* - u_m^* v_k)  on d_k^dag,
* -kappa_m/2 on the diagonal for a port,

with the creation rows fixed by particle-hole symmetry.  Inputs enter as
da/dt = A a + K_in b_in with K_in = -sqrt(kappa) on port channels and the
(u, v)-structured block on dissipator channels; outputs obey
b_out = b_in + K_out a.  Frequency domain uses d/dt -> -i omega, so

    s[omega] = I + K_out (-i omega I - A)^{-1} K_in .

Channels are ordered all ports first, then all dissipators, and doubled
(channel operators, then their daggers) to mirror the mode basis.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .errors import (
    EliminationNotSupported,
    IndexOutOfRange,
    NoPortOnMode,
    SingularAtFrequency,
    WeakDampingWarning,
)
from .network import (
    CoherentCoupling,
    CollectiveDissipator,
    LinearNetwork,
    Mode,
    Port,
    build_network,
)

_POLE_TOL = 1e-8


@dataclass(frozen=True)
class ChannelInfo:
    kind: str              # "port" or "dissipator"
    index: int             # ordinal among its kind
    label: str
    occupation: float
    mode_index: int | None = None


@dataclass(frozen=True)
class DriftSystem:
    """Doubled-basis drift plus input/output couplings of one network."""

    dimension: int                      # 2N
    basis_order: tuple[str, ...]        # (d_0.., then daggers)
    drift: np.ndarray                   # (2N, 2N)
    input_coupling: np.ndarray          # (2N, 2M)
    output_coupling: np.ndarray         # (2M, 2N)
    channels: tuple[ChannelInfo, ...]   # length M
    eigenvalues: np.ndarray             # of drift, length 2N

    @property
    def n_modes(self) -> int:
        return self.dimension // 2

    @property
    def n_channels(self) -> int:
        return len(self.channels)

    def occupations(self) -> np.ndarray:
        return np.array([c.occupation for c in self.channels], dtype=float)


@dataclass(frozen=True)
class StabilityReport:
    eigenvalues: np.ndarray
    stable: bool
    margin: float          # max real part; stable iff margin < -tolerance


@dataclass(frozen=True)
class ReducedCouplings:
    """Local damping rates and the pair coupling constants of one dissipator.

    For modes (a, b) with jump vectors (u, v):
        gamma_local[n] = rate * (|u_n|^2 - |v_n|^2)
        mu = v_a v_b^* - u_b u_a^*
        nu = v_a u_b^* - v_b u_a^*
    Balancing the coherent interaction against the dissipative one means
    J[a,b] = -i mu rate/2 and Lam[a,b] = -i nu rate/2; those targets
    cancel every mode-b term in the mode-a equation of motion.
    """

    gamma_local: tuple[float, ...]
    mu: complex
    nu: complex
    rate: float

    @property
    def beam_splitter_target(self) -> complex:
        return -1j * self.mu * self.rate / 2

    @property
    def squeezing_target(self) -> complex:
        return -1j * self.nu * self.rate / 2


@dataclass(frozen=True)
class ScatteringResult:
    """Frequency-domain scattering over all channels of a network.

    ``basis`` is "doubled" (channel operators then daggers) or
    "quadrature" (X_1, P_1, X_2, P_2, ... per channel).
    """

    omega: float
    matrix: np.ndarray
    basis: str
    channels: tuple[ChannelInfo, ...]

    @property
    def n_channels(self) -> int:
        return len(self.channels)

    def _channel_pos(self, channel) -> int:
        if isinstance(channel, (int, np.integer)):
            if not (0 <= channel < self.n_channels):
                raise IndexOutOfRange(
                    f"channel {channel} out of range (have {self.n_channels})")
            return int(channel)
        for i, c in enumerate(self.channels):
            if c.label == channel:
                return i
        raise IndexOutOfRange(f"no channel labelled {channel!r}")

    def element(self, out_channel, in_channel,
                out_conj: bool = False, in_conj: bool = False) -> complex:
        """Doubled-basis element; conj flags select the daggered copy."""
        if self.basis != "doubled":
            raise IndexOutOfRange("element() requires the doubled basis")
        m = self.n_channels
        r = self._channel_pos(out_channel) + (m if out_conj else 0)
        c = self._channel_pos(in_channel) + (m if in_conj else 0)
        return complex(self.matrix[r, c])

    def quad_element(self, out_channel, out_quad: str,
                     in_channel, in_quad: str) -> complex:
        """Quadrature-basis element; quads are 'x' or 'p'."""
        if self.basis != "quadrature":
            raise IndexOutOfRange("quad_element() requires the quadrature basis")
        qi = {"x": 0, "p": 1}
        r = 2 * self._channel_pos(out_channel) + qi[out_quad.lower()]
        c = 2 * self._channel_pos(in_channel) + qi[in_quad.lower()]
        return complex(self.matrix[r, c])

    def port_block(self) -> np.ndarray:
        """Annihilation-sector port rows/cols (doubled basis only)."""
        if self.basis != "doubled":
            raise IndexOutOfRange("port_block() requires the doubled basis")
        idx = [i for i, c in enumerate(self.channels) if c.kind == "port"]
        return self.matrix[np.ix_(idx, idx)].copy()

    def photon_gain(self, out_channel, in_channel) -> float:
        """|s|^2 from both doubled copies of the input channel into the
        annihilation output: the photon-number gain of that route."""
        m = self.n_channels
        r = self._channel_pos(out_channel)
        c = self._channel_pos(in_channel)
        return float(abs(self.matrix[r, c]) ** 2 + abs(self.matrix[r, c + m]) ** 2)


def drift_matrix(network: LinearNetwork) -> DriftSystem:
    n = network.n_modes
    J = network.coupling.beam_splitter
    L = network.coupling.squeezing

    a_minus = -1j * J.astype(complex).copy()
    a_plus = -1j * L.astype(complex).copy()
    for d in network.dissipators:
        u, v, g = d.u, d.v, d.rate
        a_minus += (g / 2) * (np.outer(v, v.conj()) - np.outer(u.conj(), u))
        a_plus += (g / 2) * (np.outer(v, u.conj()) - np.outer(u.conj(), v))
    for p in network.ports:
        a_minus[p.mode_index, p.mode_index] += -p.kappa / 2
    A = np.block([[a_minus, a_plus], [a_plus.conj(), a_minus.conj()]])

    ports = network.ports
    diss = network.dissipators
    m = len(ports) + len(diss)
    k_in = np.zeros((2 * n, 2 * m), dtype=complex)
    k_out = np.zeros((2 * m, 2 * n), dtype=complex)
    channels = []
    for i, p in enumerate(ports):
        rt = np.sqrt(p.kappa)
        k_in[p.mode_index, i] = -rt
        k_in[n + p.mode_index, m + i] = -rt
        k_out[i, p.mode_index] = rt
        k_out[m + i, n + p.mode_index] = rt
        channels.append(ChannelInfo(kind="port", index=i,
                                    label=network.modes[p.mode_index].label,
                                    occupation=p.occupation,
                                    mode_index=p.mode_index))
    for j, d in enumerate(diss):
        ch = len(ports) + j
        rt = np.sqrt(d.rate)
        for q in range(n):
            k_in[q, ch] += -rt * np.conj(d.u[q])
            k_in[q, m + ch] += rt * d.v[q]
            k_in[n + q, m + ch] += -rt * d.u[q]
            k_in[n + q, ch] += rt * np.conj(d.v[q])
            k_out[ch, q] += rt * d.u[q]
            k_out[ch, n + q] += rt * d.v[q]
            k_out[m + ch, n + q] += rt * np.conj(d.u[q])
            k_out[m + ch, q] += rt * np.conj(d.v[q])
        channels.append(ChannelInfo(kind="dissipator", index=j,
                                    label=f"z{j}", occupation=d.occupation,
                                    mode_index=None))

    basis = tuple(network.labels) + tuple(l + "^dag" for l in network.labels)
    A.flags.writeable = False
    k_in.flags.writeable = False
    k_out.flags.writeable = False
    return DriftSystem(dimension=2 * n, basis_order=basis, drift=A,
                       input_coupling=k_in, output_coupling=k_out,
                       channels=tuple(channels),
                       eigenvalues=np.linalg.eigvals(A))


def _rate_scale(drift: DriftSystem) -> float:
    return max(1.0, float(np.abs(np.diag(drift.drift)).max(initial=0.0)))


def quadrature_map(m: int) -> np.ndarray:
    """Unitary from the doubled basis (b_1..b_m, daggers) to interleaved
    quadratures (X_1, P_1, ..., X_m, P_m)."""
    q = np.zeros((2 * m, 2 * m), dtype=complex)
    s = 1 / np.sqrt(2)
    for j in range(m):
        q[2 * j, j] = s
        q[2 * j, m + j] = s
        q[2 * j + 1, j] = -1j * s
        q[2 * j + 1, m + j] = 1j * s
    return q


def scattering_matrix(network: LinearNetwork | DriftSystem, omega: float,
                      basis: str = "doubled") -> ScatteringResult:
    """Evaluate s[omega] over all channels.

    Raises SingularAtFrequency when -i*omega sits on a drift eigenvalue
    with vanishing real part (a marginally stable pole).
    """
    drift = network if isinstance(network, DriftSystem) else drift_matrix(network)
    if basis not in ("doubled", "quadrature"):
        raise IndexOutOfRange(f"unknown basis {basis!r}")
    scale = _rate_scale(drift)
    lam = drift.eigenvalues
    near_pole = (np.abs(lam.real) < _POLE_TOL * scale) & \
                (np.abs(lam.imag + omega) < _POLE_TOL * scale)
    if np.any(near_pole):
        raise SingularAtFrequency(
            f"omega={omega} lies on a marginally stable pole "
            f"(eigenvalue {lam[near_pole][0]})")
    a = drift.drift
    m2 = drift.output_coupling.shape[0]
    core = (-1j * omega) * np.eye(drift.dimension) - a
    try:
        x = np.linalg.solve(core, drift.input_coupling)
    except np.linalg.LinAlgError as exc:
        raise SingularAtFrequency(f"drift singular at omega={omega}") from exc
    s = np.eye(m2, dtype=complex) + drift.output_coupling @ x
    if basis == "quadrature":
        q = quadrature_map(drift.n_channels)
        s = q @ s @ q.conj().T
    s.flags.writeable = False
    return ScatteringResult(omega=float(omega), matrix=s, basis=basis,
                            channels=drift.channels)


def stability(network: LinearNetwork | DriftSystem,
              tolerance: float = 1e-10) -> StabilityReport:
    """Drift spectrum; stable iff every real part is below -tolerance
    (tolerance in the network's rate units)."""
    drift = network if isinstance(network, DriftSystem) else drift_matrix(network)
    margin = float(drift.eigenvalues.real.max()) if drift.dimension else -np.inf
    return StabilityReport(eigenvalues=drift.eigenvalues,
                           stable=bool(margin < -tolerance), margin=margin)


def reduced_coupling_constants(network: LinearNetwork, mode_a: int, mode_b: int,
                               dissipator_index: int) -> ReducedCouplings:
    n = network.n_modes
    if not (0 <= mode_a < n and 0 <= mode_b < n):
        raise IndexOutOfRange(f"mode indices ({mode_a}, {mode_b}) out of range")
    if mode_a == mode_b:
        raise IndexOutOfRange("need two distinct modes")
    if not (0 <= dissipator_index < len(network.dissipators)):
        raise IndexOutOfRange(
            f"dissipator {dissipator_index} out of range "
            f"(have {len(network.dissipators)})")
    d = network.dissipators[dissipator_index]
    u, v = d.u, d.v
    gamma_local = tuple(float(d.rate * (abs(u[k]) ** 2 - abs(v[k]) ** 2))
                        for k in range(n))
    mu = v[mode_a] * np.conj(v[mode_b]) - u[mode_b] * np.conj(u[mode_a])
    nu = v[mode_a] * np.conj(u[mode_b]) - v[mode_b] * np.conj(u[mode_a])
    return ReducedCouplings(gamma_local=gamma_local, mu=complex(mu),
                            nu=complex(nu), rate=d.rate)


def _canonical_phase(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rotate the joint global phase so the first significant entry of
    (u, v) is real positive.  A global phase of a jump operator is
    unobservable in the master equation; fixing it keeps constructions
    reproducible."""
    w = np.concatenate([u, v])
    nz = np.flatnonzero(np.abs(w) > 1e-14 * max(np.abs(w).max(), 1e-300))
    if nz.size == 0:
        return u, v
    ph = np.exp(-1j * np.angle(w[nz[0]]))
    return u * ph, v * ph


def adiabatic_eliminate(network: LinearNetwork, mode_index: int,
                        ratio_warn: float = 10.0) -> LinearNetwork:
    """Replace a strongly damped mode by the collective dissipator it
    mediates.

    The eliminated mode must carry a port (rate kprime) and couple to the
    rest only coherently; the reduced network gains a dissipator with

        rate = (2/kprime) * sum_k (|J[c,k]|^2 + |Lam[c,k]|^2)
        u_k ~ J[c,k],   v_k ~ Lam[c,k]

    normalized so sum(|u|^2 + |v|^2) = 2.  The reduced drift equals the
    zero-frequency Schur complement of the full drift at the eliminated
    rows/columns, so port scattering at omega = 0 is preserved exactly.
    """
    n = network.n_modes
    if not (0 <= mode_index < n):
        raise IndexOutOfRange(f"mode index {mode_index} out of range")
    port = network.port_for_mode(mode_index)
    if port is None:
        raise NoPortOnMode(
            f"mode {network.modes[mode_index].label!r} has no port to act "
            "as the reservoir damping")
    for i, d in enumerate(network.dissipators):
        if abs(d.u[mode_index]) > 0 or abs(d.v[mode_index]) > 0:
            raise EliminationNotSupported(
                f"mode {mode_index} appears in dissipator {i}")
    J = network.coupling.beam_splitter
    L = network.coupling.squeezing
    if abs(J[mode_index, mode_index]) > 0 or abs(L[mode_index, mode_index]) > 0:
        raise EliminationNotSupported(
            "eliminated mode must have no detuning or self-squeezing")

    kprime = port.kappa
    others = [k for k in range(n) if k != mode_index]
    other_rates = [abs(J[j, k]) for j in others for k in others] + \
                  [abs(L[j, k]) for j in others for k in others] + \
                  [abs(J[mode_index, k]) for k in others] + \
                  [abs(L[mode_index, k]) for k in others] + \
                  [p.kappa for p in network.ports if p.mode_index != mode_index] + \
                  [d.rate for d in network.dissipators]
    fastest_other = max(other_rates, default=0.0)
    if fastest_other > 0 and kprime < ratio_warn * fastest_other:
        warnings.warn(
            f"eliminated-mode damping {kprime} is below {ratio_warn}x the "
            f"fastest remaining rate {fastest_other}; Markovian reduction "
            "is marginal", WeakDampingWarning, stacklevel=2)

    j_row = J[mode_index, others]
    l_row = L[mode_index, others]
    weight = float(np.sum(np.abs(j_row) ** 2 + np.abs(l_row) ** 2))
    rate = 2 * weight / kprime

    new_modes = tuple(Mode(label=network.modes[k].label, index=i)
                      for i, k in enumerate(others))
    new_coupling = CoherentCoupling(J[np.ix_(others, others)],
                                    L[np.ix_(others, others)])
    new_diss = [CollectiveDissipator(
        rate=d.rate, u=d.u[others], v=d.v[others], occupation=d.occupation)
        for d in network.dissipators]
    if rate > 0:
        norm = np.sqrt(kprime * rate)
        u = 2 * j_row / norm
        v = 2 * l_row / norm
        u, v = _canonical_phase(u, v)
        new_diss.append(CollectiveDissipator(rate=rate, u=u, v=v,
                                             occupation=port.occupation))
    new_ports = []
    for p in network.ports:
        if p.mode_index == mode_index:
            continue
        new_index = p.mode_index - (1 if p.mode_index > mode_index else 0)
        new_ports.append(Port(mode_index=new_index, kappa=p.kappa,
                              occupation=p.occupation))
    return build_network(new_modes, new_coupling, new_diss, new_ports)


# ---------------------------------------------------------------------------
# Gaussian moment dynamics (used by the Fock oracle cross-checks)


def diffusion_matrix(drift: DriftSystem) -> np.ndarray:
    """Ito diffusion D in d<a_i a_j>/dt = (A M + M A^T + D)_{ij} for the
    doubled moment matrix M, with thermal channel inputs."""
    m = drift.n_channels
    occ = drift.occupations()
    cb = np.zeros((2 * m, 2 * m), dtype=complex)
    for i in range(m):
        cb[i, m + i] = occ[i] + 1.0   # <b b^dag>
        cb[m + i, i] = occ[i]         # <b^dag b>
    return drift.input_coupling @ cb @ drift.input_coupling.T


def first_moments(drift: DriftSystem, m0: np.ndarray,
                  times: np.ndarray) -> np.ndarray:
    """<a>(t) = e^{A t} <a>(0) for each requested time."""
    m0 = np.asarray(m0, dtype=complex)
    return np.stack([scipy.linalg.expm(drift.drift * t) @ m0 for t in times])


def second_moments(drift: DriftSystem, m2_0: np.ndarray,
                   times: np.ndarray) -> np.ndarray:
    """M(t) for M_{ij} = <a_i a_j>, requiring a stable drift.

    Solves A M_ss + M_ss A^T + D = 0, then propagates the deviation with
    the drift flow on both sides.
    """
    a = drift.drift
    d = diffusion_matrix(drift)
    m_ss = scipy.linalg.solve_sylvester(a, a.T, -d)
    dev0 = np.asarray(m2_0, dtype=complex) - m_ss
    out = []
    for t in times:
        e = scipy.linalg.expm(a * t)
        out.append(m_ss + e @ dev0 @ e.T)
    return np.stack(out)
