"""Truncated-Fock-space Lindblad integrator: the brute-force oracle.

Everything here is deliberately independent of the frequency-domain
engine: operators are dense matrices on a truncated multimode Fock space,
the master equation is integrated with an adaptive Runge-Kutta scheme,
and expectation values come straight from Tr(op rho).  The linear engine
is validated against this module, never the other way around.

Operators are held symbolically as normal-ordered polynomials in the mode
ladder operators (class OperatorExpr), so nonlinear jump operators and
Hamiltonians are first-class citizens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NotFactorizable,
    StepSizeUnderflow,
    TruncationLeak,
)
from .network import LinearNetwork

_DEFAULT_DIM_CAP = 4096


@dataclass(frozen=True)
class HilbertSpec:
    """Per-mode Fock-space dimensions (levels 0..cutoff-1)."""

    mode_cutoffs: tuple[int, ...]
    dimension_cap: int = _DEFAULT_DIM_CAP

    def __post_init__(self):
        object.__setattr__(self, "mode_cutoffs", tuple(int(c) for c in self.mode_cutoffs))
        if any(c < 2 for c in self.mode_cutoffs):
            raise IndexOutOfRange(
                f"every cutoff must be >= 2, got {self.mode_cutoffs}")
        if self.dimension > self.dimension_cap:
            raise IndexOutOfRange(
                f"total dimension {self.dimension} exceeds the cap "
                f"{self.dimension_cap}")

    @property
    def n_modes(self) -> int:
        return len(self.mode_cutoffs)

    @property
    def dimension(self) -> int:
        return int(np.prod(self.mode_cutoffs))


# one term: coefficient * prod_j  (d_j^dag)^{p_j} (d_j)^{q_j}, normal ordered
_Key = tuple[tuple[int, int], ...]


class OperatorExpr:
    """Normal-ordered polynomial in multimode ladder operators.

    Supports +, -, scalar *, operator *, dagger(); the canonical form
    (normal order per mode, merged like terms) is unique, so equality and
    hashing of the term dictionary are well defined.
    """

    __slots__ = ("n_modes", "terms")

    def __init__(self, n_modes: int, terms: dict[_Key, complex] | None = None):
        self.n_modes = n_modes
        self.terms: dict[_Key, complex] = {}
        for key, coeff in (terms or {}).items():
            if coeff != 0:
                self.terms[key] = self.terms.get(key, 0) + coeff

    # ---- constructors

    @staticmethod
    def identity(n_modes: int, coeff: complex = 1.0) -> "OperatorExpr":
        key = tuple((0, 0) for _ in range(n_modes))
        return OperatorExpr(n_modes, {key: coeff})

    @staticmethod
    def destroy(n_modes: int, mode: int) -> "OperatorExpr":
        key = tuple((0, 1) if j == mode else (0, 0) for j in range(n_modes))
        return OperatorExpr(n_modes, {key: 1.0})

    @staticmethod
    def create(n_modes: int, mode: int) -> "OperatorExpr":
        key = tuple((1, 0) if j == mode else (0, 0) for j in range(n_modes))
        return OperatorExpr(n_modes, {key: 1.0})

    # ---- algebra

    def _require_same(self, other: "OperatorExpr"):
        if self.n_modes != other.n_modes:
            raise DimensionMismatch(
                f"operators act on {self.n_modes} vs {other.n_modes} modes")

    def __add__(self, other):
        if np.isscalar(other):
            other = OperatorExpr.identity(self.n_modes, complex(other))
        self._require_same(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return OperatorExpr(self.n_modes, out)

    __radd__ = __add__

    def __neg__(self):
        return OperatorExpr(self.n_modes,
                            {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, OperatorExpr)
                       else OperatorExpr.identity(self.n_modes, -complex(other)))

    def __rmul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return OperatorExpr(self.n_modes,
                            {k: complex(scalar) * c for k, c in self.terms.items()})

    def __mul__(self, other):
        if np.isscalar(other):
            return self.__rmul__(other)
        self._require_same(other)
        out: dict[_Key, complex] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                for key, factor in _merge_keys(k1, k2):
                    coeff = c1 * c2 * factor
                    out[key] = out.get(key, 0) + coeff
        return OperatorExpr(self.n_modes, out)

    def dagger(self) -> "OperatorExpr":
        out: dict[_Key, complex] = {}
        for key, c in self.terms.items():
            dkey = tuple((q, p) for (p, q) in key)
            # (d^dag^p d^q)^dag = d^dag^q d^p, already normal ordered
            out[dkey] = out.get(dkey, 0) + np.conj(c)
        return OperatorExpr(self.n_modes, out)

    def acts_only_on(self, modes: set[int]) -> bool:
        for key, c in self.terms.items():
            if c == 0:
                continue
            for j, (p, q) in enumerate(key):
                if (p or q) and j not in modes:
                    return False
        return True

    # ---- realization

    def matrix(self, spec: HilbertSpec) -> np.ndarray:
        if spec.n_modes != self.n_modes:
            raise DimensionMismatch(
                f"spec has {spec.n_modes} modes, operator {self.n_modes}")
        dim = spec.dimension
        out = np.zeros((dim, dim), dtype=complex)
        for key, coeff in self.terms.items():
            factor = np.array([[coeff]], dtype=complex)
            for j, (p, q) in enumerate(key):
                factor = np.kron(factor, _ladder_power(spec.mode_cutoffs[j], p, q))
            out += factor
        return out


def _merge_keys(k1: _Key, k2: _Key):
    """Normal-order the product of two normal-ordered keys.

    Per mode:  d^q1 d^dag^p2 = sum_k k! C(q1,k) C(p2,k) d^dag^{p2-k} d^{q1-k};
    modes are independent, so the result is a product over modes.
    """
    per_mode = []
    for (p1, q1), (p2, q2) in zip(k1, k2):
        opts = []
        for k in range(min(q1, p2) + 1):
            factor = (math.factorial(k) * math.comb(q1, k) * math.comb(p2, k))
            opts.append(((p1 + p2 - k, q1 + q2 - k), float(factor)))
        per_mode.append(opts)
    results = [((), 1.0)]
    for opts in per_mode:
        results = [(key + (pq,), f * f2) for key, f in results for pq, f2 in opts]
    return results


def _ladder_power(cutoff: int, p: int, q: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, cutoff)), 1).astype(complex)
    out = np.eye(cutoff, dtype=complex)
    for _ in range(p):
        out = out @ a.conj().T
    for _ in range(q):
        out = out @ a
    return out


# ---------------------------------------------------------------------------
# states


def validate_density_matrix(rho: np.ndarray, trace_tol: float = 1e-9,
                            psd_tol: float = 1e-9) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"density matrix shape {rho.shape} not square")
    if np.abs(rho - rho.conj().T).max() > 1e-10 * max(1.0, np.abs(rho).max()):
        raise DimensionMismatch("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1) > trace_tol or abs(np.trace(rho).imag) > trace_tol:
        raise DimensionMismatch(f"trace {np.trace(rho)} differs from 1")
    if np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() < -psd_tol:
        raise DimensionMismatch("density matrix has a significantly negative "
                                "eigenvalue")
    return rho


def fock_state(spec: HilbertSpec, occupations) -> np.ndarray:
    """Density matrix |n_1..n_k><..| on the truncated space."""
    occupations = tuple(int(n) for n in occupations)
    if len(occupations) != spec.n_modes:
        raise DimensionMismatch("one occupation per mode required")
    vec = np.array([[1.0]], dtype=complex)
    for n, cut in zip(occupations, spec.mode_cutoffs):
        if n >= cut:
            raise IndexOutOfRange(f"occupation {n} >= cutoff {cut}")
        e = np.zeros((cut, 1), dtype=complex)
        e[n, 0] = 1.0
        vec = np.kron(vec, e)
    return vec @ vec.conj().T


def coherent_state(spec: HilbertSpec, alphas) -> np.ndarray:
    """Truncated (renormalized) multimode coherent state |alpha_1,...>."""
    alphas = tuple(complex(a) for a in alphas)
    if len(alphas) != spec.n_modes:
        raise DimensionMismatch("one amplitude per mode required")
    vec = np.array([[1.0]], dtype=complex)
    for a, cut in zip(alphas, spec.mode_cutoffs):
        n = np.arange(cut)
        amps = np.exp(-abs(a) ** 2 / 2) * np.array(
            [a ** m / math.sqrt(math.factorial(m)) for m in n], dtype=complex)
        amps = amps / np.linalg.norm(amps)
        vec = np.kron(vec, amps.reshape(-1, 1))
    return vec @ vec.conj().T


# ---------------------------------------------------------------------------
# dynamics


def lindblad_rhs(hamiltonian: OperatorExpr | np.ndarray,
                 jumps, rho: np.ndarray,
                 spec: HilbertSpec | None = None) -> np.ndarray:
    """drho/dt = -i[H, rho] + sum_k rate_k (z rho z^dag - {z^dag z, rho}/2).

    ``jumps`` is a list of (rate, OperatorExpr-or-matrix).  Matrices are
    accepted so precompiled callers avoid rebuilding them.
    """
    h = hamiltonian.matrix(spec) if isinstance(hamiltonian, OperatorExpr) else hamiltonian
    rho = np.asarray(rho, dtype=complex)
    if h.shape != rho.shape:
        raise DimensionMismatch(
            f"H shape {h.shape} does not match rho shape {rho.shape}")
    out = -1j * (h @ rho - rho @ h)
    for rate, op in jumps:
        z = op.matrix(spec) if isinstance(op, OperatorExpr) else op
        if z.shape != rho.shape:
            raise DimensionMismatch(
                f"jump shape {z.shape} does not match rho shape {rho.shape}")
        zdz = z.conj().T @ z
        out += rate * (z @ rho @ z.conj().T - 0.5 * (zdz @ rho + rho @ zdz))
    return out


@dataclass(frozen=True)
class FockTrajectory:
    spec: HilbertSpec
    times: np.ndarray
    states: np.ndarray           # (n_times, dim, dim)
    trace_drift: float           # max |tr(rho) - 1| along the way
    min_eigenvalue: float        # most negative eigenvalue encountered

    def expectations(self, op: OperatorExpr | np.ndarray) -> np.ndarray:
        m = op.matrix(self.spec) if isinstance(op, OperatorExpr) else op
        return np.array([np.trace(m @ rho) for rho in self.states])


def _top_level_populations(rho: np.ndarray, spec: HilbertSpec) -> list[float]:
    dims = spec.mode_cutoffs
    pops = []
    diag = np.real(np.diag(rho))
    idx = np.arange(spec.dimension)
    for j, cut in enumerate(dims):
        stride = int(np.prod(dims[j + 1:]))
        level = (idx // stride) % cut
        pops.append(float(diag[level == cut - 1].sum()))
    return pops


def evolve(hamiltonian: OperatorExpr, jumps, rho0: np.ndarray,
           t_end: float, spec: HilbertSpec,
           n_samples: int = 25, rtol: float = 1e-9, atol: float = 1e-11,
           leak_tol: float = 1e-6) -> FockTrajectory:
    """Integrate the master equation with adaptive explicit Runge-Kutta.

    The trace is NOT renormalized along the way; its drift is reported as
    a diagnostic.  Raises TruncationLeak when any mode's top Fock level
    accumulates more than ``leak_tol`` population at a sample point, and
    StepSizeUnderflow when the integrator gives up.
    """
    rho0 = validate_density_matrix(rho0)
    dim = spec.dimension
    if rho0.shape != (dim, dim):
        raise DimensionMismatch(
            f"rho0 shape {rho0.shape} does not match spec dimension {dim}")
    h = hamiltonian.matrix(spec)
    mats = [(rate, (op.matrix(spec) if isinstance(op, OperatorExpr) else op))
            for rate, op in jumps]

    def rhs(_t, y):
        rho = y.reshape(dim, dim)
        return lindblad_rhs(h, mats, rho).ravel()

    times = np.linspace(0.0, float(t_end), n_samples)
    sol = solve_ivp(rhs, (0.0, float(t_end)), rho0.ravel(), t_eval=times,
                    method="RK45", rtol=rtol, atol=atol)
    if not sol.success:
        raise StepSizeUnderflow(f"integrator failed: {sol.message}")
    states = sol.y.T.reshape(-1, dim, dim)
    trace_drift = float(max(abs(np.trace(r) - 1) for r in states))
    min_eig = float(min(np.linalg.eigvalsh((r + r.conj().T) / 2).min()
                        for r in states))
    for t, r in zip(sol.t, states):
        pops = _top_level_populations(r, spec)
        if max(pops) > leak_tol:
            raise TruncationLeak(
                f"top-level population {max(pops):.2e} at t={t:.3g} exceeds "
                f"{leak_tol:.1e}; raise the cutoffs")
    return FockTrajectory(spec=spec, times=sol.t, states=states,
                          trace_drift=trace_drift, min_eigenvalue=min_eig)


def expectation(op: OperatorExpr | np.ndarray, rho: np.ndarray,
                spec: HilbertSpec | None = None) -> complex:
    m = op.matrix(spec) if isinstance(op, OperatorExpr) else op
    if m.shape != rho.shape:
        raise DimensionMismatch(
            f"operator shape {m.shape} does not match rho shape {rho.shape}")
    return complex(np.trace(m @ rho))


# ---------------------------------------------------------------------------
# bridging a LinearNetwork into the Fock picture


def network_operators(network: LinearNetwork):
    """(H, jumps) of a linear network as Fock-space expressions.

    Thermal ports are expanded into the standard pair of Lindblad terms
    kappa(n+1) L[d] + kappa n L[d^dag].
    """
    n = network.n_modes
    d = [OperatorExpr.destroy(n, j) for j in range(n)]
    dd = [OperatorExpr.create(n, j) for j in range(n)]
    h = OperatorExpr(n)
    J = network.coupling.beam_splitter
    L = network.coupling.squeezing
    for j in range(n):
        for k in range(n):
            if J[j, k] != 0:
                h = h + J[j, k] * (dd[j] * d[k])
            if L[j, k] != 0:
                h = h + 0.5 * L[j, k] * (dd[j] * dd[k]) \
                      + 0.5 * np.conj(L[j, k]) * (d[j] * d[k])
    jumps = []
    for dis in network.dissipators:
        z = OperatorExpr(n)
        for j in range(n):
            if dis.u[j] != 0:
                z = z + dis.u[j] * d[j]
            if dis.v[j] != 0:
                z = z + dis.v[j] * dd[j]
        jumps.append((dis.rate, z))
    for p in network.ports:
        jumps.append((p.kappa * (p.occupation + 1), d[p.mode_index]))
        if p.occupation > 0:
            jumps.append((p.kappa * p.occupation, dd[p.mode_index]))
    return h, jumps


def doubled_basis_operators(n: int) -> list[OperatorExpr]:
    """(d_1..d_n, d_1^dag..d_n^dag) matching the engine's basis order."""
    return [OperatorExpr.destroy(n, j) for j in range(n)] + \
           [OperatorExpr.create(n, j) for j in range(n)]


# ---------------------------------------------------------------------------
# general factorizable-interaction directionality check


@dataclass(frozen=True)
class DirectionalityReport:
    """Outcome of the brute-force one-way-influence check."""

    downstream_deviation: float   # max change of protected-side observables
    upstream_deviation: float     # max change of driven-side observables
    decoupled: bool
    tolerance: float


def appendix_directionality_check(o1: OperatorExpr, o2: OperatorExpr,
                                  coupling: float, rate: float, phi: float,
                                  spec: HilbertSpec,
                                  subsystem_1: set[int], subsystem_2: set[int],
                                  probes_1, probes_2,
                                  observables_1, observables_2,
                                  t_end: float = 0.15,
                                  tolerance: float = 1e-8,
                                  n_samples: int = 12) -> DirectionalityReport:
    """Brute-force test that balancing a factorizable interaction against
    its dissipative counterpart makes it one-way.

    Builds H = (coupling/2)(o1 o2 + h.c.) and the jump z = o1 + e^{i phi}
    o2^dag at ``rate``, evolves initial states differing only on
    subsystem 1, and reports the worst-case spread of subsystem-2
    observable trajectories (and vice versa for upstream influence).
    With rate = coupling and phi = +pi/2, subsystem-2 observables are
    untouched by subsystem-1 preparation; phi = -pi/2 flips the roles.
    """
    if phi not in (math.pi / 2, -math.pi / 2):
        raise IndexOutOfRange("phi must be +pi/2 or -pi/2")
    if not o1.acts_only_on(subsystem_1):
        raise NotFactorizable("o1 touches modes outside subsystem 1")
    if not o2.acts_only_on(subsystem_2):
        raise NotFactorizable("o2 touches modes outside subsystem 2")
    n = o1.n_modes
    comm = o1 * o2 - o2 * o1
    if any(abs(c) > 1e-12 for c in comm.terms.values()):
        raise NotFactorizable("o1 and o2 do not commute")

    if phi == -math.pi / 2:
        # direction flips: subsystem 1 becomes the protected side
        protected_obs, probe_states = observables_1, probes_2
        spread_obs, spread_states = observables_2, probes_1
    else:
        protected_obs, probe_states = observables_2, probes_1
        spread_obs, spread_states = observables_1, probes_2

    h = (coupling / 2) * (o1 * o2) + (coupling / 2) * (o1 * o2).dagger()
    z = o1 + np.exp(1j * phi) * o2.dagger()
    jumps = [(rate, z)]

    def trajectories(states, obs):
        runs = []
        for rho0 in states:
            traj = evolve(h, jumps, rho0, t_end, spec, n_samples=n_samples,
                          rtol=1e-10, atol=1e-12)
            runs.append(np.stack([traj.expectations(o) for o in obs]))
        return runs

    down_runs = trajectories(probe_states, protected_obs)
    down_dev = 0.0
    for r in down_runs[1:]:
        down_dev = max(down_dev, float(np.abs(r - down_runs[0]).max()))

    up_runs = trajectories(spread_states, spread_obs)
    up_dev = 0.0
    for r in up_runs[1:]:
        up_dev = max(up_dev, float(np.abs(r - up_runs[0]).max()))

    return DirectionalityReport(downstream_deviation=down_dev,
                                upstream_deviation=up_dev,
                                decoupled=bool(down_dev <= tolerance),
                                tolerance=tolerance)
