"""Declarative model of a linear photonic network.

A network is a set of bosonic modes tied together by three kinds of
structure:

* a coherent quadratic Hamiltonian
      H = sum_jk J[j,k] d_j^dag d_k
        + (1/2) sum_jk (Lam[j,k] d_j^dag d_k^dag + h.c.),
  with J Hermitian (beam-splitter block) and Lam symmetric (squeezing
  block), all coefficients in units of a reference rate;
* engineered collective dissipators, each a zero-temperature Lindblad
  term rate*L[z] with jump operator z = sum_j (u_j d_j + v_j d_j^dag);
* input/output ports, one per mode at most, coupling the mode to a
  bosonic channel at rate kappa with thermal occupation n_T.

Networks are immutable values: every operation that "modifies" one
returns a new instance, so they are safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AsymmetricSqueezing,
    DanglingIndex,
    DuplicatePort,
    NonHermitianCoupling,
)

_HERMITICITY_RTOL = 1e-12


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Mode:
    """A single bosonic mode; ``index`` is its ordinal in the network."""

    label: str
    index: int


@dataclass(frozen=True)
class CoherentCoupling:
    """Quadratic Hamiltonian blocks.

    ``beam_splitter[j, k]`` is the coefficient of d_j^dag d_k (Hermitian);
    ``squeezing[j, k]`` the merged coefficient of d_j^dag d_k^dag
    (symmetric, since the two orderings are the same operator).  With the
    1/2 prefactor convention above, an off-diagonal pair entry lam means
    the term lam d_j^dag d_k^dag + h.c. appears once in H.
    """

    beam_splitter: np.ndarray
    squeezing: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "beam_splitter",
                           _freeze(np.asarray(self.beam_splitter, dtype=complex)))
        object.__setattr__(self, "squeezing",
                           _freeze(np.asarray(self.squeezing, dtype=complex)))

    @property
    def n_modes(self) -> int:
        return self.beam_splitter.shape[0]

    @staticmethod
    def empty(n: int) -> "CoherentCoupling":
        z = np.zeros((n, n), dtype=complex)
        return CoherentCoupling(z, z.copy())

    @staticmethod
    def from_entries(n: int,
                     beam_splitter: dict[tuple[int, int], complex] | None = None,
                     squeezing: dict[tuple[int, int], complex] | None = None,
                     ) -> "CoherentCoupling":
        """Build matrices from sparse pair entries, filling in the Hermitian
        or symmetric partner entry automatically."""
        J = np.zeros((n, n), dtype=complex)
        L = np.zeros((n, n), dtype=complex)
        for (j, k), val in (beam_splitter or {}).items():
            J[j, k] = val
            J[k, j] = np.conj(val)
        for (j, k), val in (squeezing or {}).items():
            L[j, k] = val
            L[k, j] = val
        return CoherentCoupling(J, L)


@dataclass(frozen=True)
class CollectiveDissipator:
    """Engineered Lindblad term rate*L[z], z = sum_j (u_j d_j + v_j d_j^dag).

    The jump operator is zero temperature; ``occupation`` is the thermal
    occupation of the reservoir channel seen in the scattering picture
    (nonzero only for reservoirs produced by eliminating a thermally
    occupied auxiliary mode).
    """

    rate: float
    u: np.ndarray
    v: np.ndarray
    occupation: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "u", _freeze(np.asarray(self.u, dtype=complex)))
        object.__setattr__(self, "v", _freeze(np.asarray(self.v, dtype=complex)))

    @property
    def n_modes(self) -> int:
        return self.u.shape[0]


@dataclass(frozen=True)
class Port:
    """Input/output coupling of one mode to a bosonic channel."""

    mode_index: int
    kappa: float
    occupation: float = 0.0


@dataclass(frozen=True)
class LinearNetwork:
    modes: tuple[Mode, ...]
    coupling: CoherentCoupling
    dissipators: tuple[CollectiveDissipator, ...]
    ports: tuple[Port, ...]

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(m.label for m in self.modes)

    def mode_index(self, label: str) -> int:
        for m in self.modes:
            if m.label == label:
                return m.index
        raise DanglingIndex(f"no mode labelled {label!r}; have {self.labels}")

    def port_for_mode(self, mode_index: int) -> Port | None:
        for p in self.ports:
            if p.mode_index == mode_index:
                return p
        return None

    def equals(self, other: "LinearNetwork", tol: float = 0.0) -> bool:
        """Structural equality up to ``tol`` on all numeric entries."""
        if self.labels != other.labels:
            return False
        if len(self.dissipators) != len(other.dissipators):
            return False
        if len(self.ports) != len(other.ports):
            return False
        close = lambda a, b: bool(np.all(np.abs(np.asarray(a) - np.asarray(b)) <= tol))
        if not close(self.coupling.beam_splitter, other.coupling.beam_splitter):
            return False
        if not close(self.coupling.squeezing, other.coupling.squeezing):
            return False
        for da, db in zip(self.dissipators, other.dissipators):
            if not (close(da.rate, db.rate) and close(da.u, db.u)
                    and close(da.v, db.v) and close(da.occupation, db.occupation)):
                return False
        for pa, pb in zip(self.ports, other.ports):
            if pa.mode_index != pb.mode_index:
                return False
            if not (close(pa.kappa, pb.kappa) and close(pa.occupation, pb.occupation)):
                return False
        return True


def _check_square(name: str, m: np.ndarray, n: int):
    if m.shape != (n, n):
        raise DanglingIndex(
            f"{name} has shape {m.shape}, expected ({n}, {n}) for {n} modes")


def build_network(modes: Sequence[Mode] | Sequence[str],
                  coupling: CoherentCoupling | None,
                  dissipators: Iterable[CollectiveDissipator] = (),
                  ports: Iterable[Port] = ()) -> LinearNetwork:
    """Validate the pieces and assemble an immutable network.

    ``modes`` may be given as labels, in which case indices are assigned in
    order.  A ``None`` coupling means no coherent interaction.
    """
    mode_list = []
    for i, m in enumerate(modes):
        if isinstance(m, str):
            mode_list.append(Mode(label=m, index=i))
        else:
            mode_list.append(m)
    n = len(mode_list)
    labels = [m.label for m in mode_list]
    if len(set(labels)) != n:
        raise DanglingIndex(f"duplicate mode labels in {labels}")
    indices = [m.index for m in mode_list]
    if sorted(indices) != list(range(n)):
        raise DanglingIndex(
            f"mode indices {indices} are not contiguous from 0")

    if coupling is None:
        coupling = CoherentCoupling.empty(n)
    J = coupling.beam_splitter
    L = coupling.squeezing
    _check_square("beam_splitter", J, n)
    _check_square("squeezing", L, n)
    scale = max(np.abs(J).max(initial=0.0), 1.0)
    bad = np.argwhere(np.abs(J - J.conj().T) > _HERMITICITY_RTOL * scale)
    if bad.size:
        j, k = bad[0]
        raise NonHermitianCoupling(
            f"beam_splitter[{j},{k}]={J[j, k]} is not the conjugate of "
            f"beam_splitter[{k},{j}]={J[k, j]}")
    scale = max(np.abs(L).max(initial=0.0), 1.0)
    bad = np.argwhere(np.abs(L - L.T) > _HERMITICITY_RTOL * scale)
    if bad.size:
        j, k = bad[0]
        raise AsymmetricSqueezing(
            f"squeezing[{j},{k}]={L[j, k]} differs from squeezing[{k},{j}]="
            f"{L[k, j]}; the two orderings are the same operator")

    diss = tuple(dissipators)
    for i, d in enumerate(diss):
        if d.u.shape != (n,) or d.v.shape != (n,):
            raise DanglingIndex(
                f"dissipator {i}: u/v have lengths {d.u.shape[0]}/{d.v.shape[0]},"
                f" expected {n}")
        if d.rate < 0:
            raise DanglingIndex(f"dissipator {i}: rate {d.rate} is negative")
        if d.occupation < 0:
            raise DanglingIndex(
                f"dissipator {i}: occupation {d.occupation} is negative")
        if not (np.any(d.u) or np.any(d.v)):
            raise DanglingIndex(
                f"dissipator {i}: both u and v vanish; drop it instead")

    port_list = tuple(ports)
    seen = set()
    for p in port_list:
        if not (0 <= p.mode_index < n):
            raise DanglingIndex(
                f"port on mode index {p.mode_index}, but network has {n} modes")
        if p.mode_index in seen:
            raise DuplicatePort(
                f"two ports on mode {labels[p.mode_index]!r} (index {p.mode_index})")
        seen.add(p.mode_index)
        if p.kappa <= 0:
            raise DanglingIndex(
                f"port on mode {labels[p.mode_index]!r}: kappa={p.kappa} must be > 0")
        if p.occupation < 0:
            raise DanglingIndex(
                f"port on mode {labels[p.mode_index]!r}: occupation "
                f"{p.occupation} is negative")

    return LinearNetwork(modes=tuple(mode_list), coupling=coupling,
                         dissipators=diss, ports=port_list)


def gauge_transform(network: LinearNetwork,
                    phases: Sequence[float]) -> LinearNetwork:
    """Apply the local phase redefinition d_j -> e^{i phi_j} d_j.

    Coupling matrices and dissipator vectors transform covariantly; all
    scattering magnitudes and drift eigenvalues are unchanged.
    """
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (network.n_modes,):
        raise DanglingIndex(
            f"need {network.n_modes} phases, got {phases.shape}")
    if not np.all(np.isfinite(phases)):
        raise DanglingIndex("phases must be finite")
    ph = np.exp(1j * phases)
    J = network.coupling.beam_splitter * np.outer(ph.conj(), ph)
    L = network.coupling.squeezing * np.outer(ph.conj(), ph.conj())
    # re-symmetrize to keep validation exact under float rounding
    J = (J + J.conj().T) / 2
    L = (L + L.T) / 2
    diss = tuple(
        CollectiveDissipator(rate=d.rate, u=d.u * ph, v=d.v * ph.conj(),
                             occupation=d.occupation)
        for d in network.dissipators)
    return replace(network, coupling=CoherentCoupling(J, L), dissipators=diss)
