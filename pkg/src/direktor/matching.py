"""Directionality analysis and matching.

The analytic route: a collective dissipator with vectors (u, v) mediates a
nonlocal damping force between a mode pair; choosing the coherent pair
couplings

    J[a,b] = -i mu rate/2,     Lam[a,b] = -i nu rate/2

cancels every mode-b term in mode a's equation of motion, making the
interaction one-way (a drives b... more precisely, mode a becomes deaf to
mode b while still driving it).  The numeric route tunes arbitrary free
coupling entries against |s|^2 targets with a local least-squares search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.optimize

from .errors import (
    IndexOutOfRange,
    InfeasibleCooperativity,
    NotConverged,
    NullDissipator,
    UnstableDuringSearch,
)
from .langevin import (
    drift_matrix,
    reduced_coupling_constants,
    scattering_matrix,
    stability,
)
from .network import CoherentCoupling, CollectiveDissipator, LinearNetwork, build_network


@dataclass(frozen=True)
class IsolationMetrics:
    """Transmission magnitudes between two ports at one frequency.

    In the doubled basis forward/reverse are photon-number gains summed
    over both doubled copies of the source channel; in the quadrature
    basis they are maxima over the four quadrature routes, so 'reverse = 0'
    certifies that no quadrature leaks backwards.
    """

    omega: float
    forward: float
    reverse: float
    reflect_a: float
    reflect_b: float

    @property
    def isolation_db(self) -> float:
        if self.reverse == 0.0:
            return math.inf
        return 10 * math.log10(self.forward / self.reverse)


@dataclass(frozen=True)
class MatchSolution:
    parameter_values: dict[str, complex]
    residual: float
    converged: bool
    iterations: int = 0


@dataclass(frozen=True)
class ObjectiveTerm:
    """One |s|^2 target: drive channel ``in_channel``, observe
    ``out_channel`` at ``omega``.  Doubled basis uses the conj flags to
    pick daggered copies; quadrature basis uses in_quad/out_quad."""

    omega: float
    out_channel: object
    in_channel: object
    target: float
    weight: float = 1.0
    basis: str = "doubled"
    out_quad: str | None = None
    in_quad: str | None = None
    out_conj: bool = False
    in_conj: bool = False


def isolation(network: LinearNetwork, omega: float, port_a, port_b,
              basis: str = "doubled") -> IsolationMetrics:
    """Forward |s_ba|^2, reverse |s_ab|^2 and the two reflections."""
    res = scattering_matrix(network, omega, basis=basis)
    a = res._channel_pos(port_a)
    b = res._channel_pos(port_b)
    if res.channels[a].kind != "port" or res.channels[b].kind != "port":
        raise IndexOutOfRange("isolation() expects port channels")
    if basis == "doubled":
        fwd = res.photon_gain(b, a)
        rev = res.photon_gain(a, b)
        ra = res.photon_gain(a, a)
        rb = res.photon_gain(b, b)
    else:
        def block(out, inn):
            rows = [2 * out, 2 * out + 1]
            cols = [2 * inn, 2 * inn + 1]
            return float(np.max(np.abs(res.matrix[np.ix_(rows, cols)]) ** 2))
        fwd, rev = block(b, a), block(a, b)
        ra, rb = block(a, a), block(b, b)
    return IsolationMetrics(omega=float(omega), forward=fwd, reverse=rev,
                            reflect_a=ra, reflect_b=rb)


def analytic_match(dissipator: CollectiveDissipator, mode_a: int,
                   mode_b: int) -> CoherentCoupling:
    """Coherent coupling targets that balance one collective dissipator.

    Returns an N x N CoherentCoupling whose only nonzero entries are the
    (mode_a, mode_b) pair targets J = -i mu rate/2, Lam = -i nu rate/2.
    """
    n = dissipator.n_modes
    if not (0 <= mode_a < n and 0 <= mode_b < n) or mode_a == mode_b:
        raise IndexOutOfRange(f"bad mode pair ({mode_a}, {mode_b}) for n={n}")
    weight_a = abs(dissipator.u[mode_a]) + abs(dissipator.v[mode_a])
    weight_b = abs(dissipator.u[mode_b]) + abs(dissipator.v[mode_b])
    if dissipator.rate == 0 or weight_a == 0 or weight_b == 0:
        raise NullDissipator(
            "dissipator does not couple both modes; nothing to balance")
    # reuse the engine formulas via a throwaway two-entry network
    scratch = build_network([f"m{i}" for i in range(n)], None, [dissipator], [])
    rc = reduced_coupling_constants(scratch, mode_a, mode_b, 0)
    return CoherentCoupling.from_entries(
        n,
        beam_splitter={(mode_a, mode_b): rc.beam_splitter_target},
        squeezing={(mode_a, mode_b): rc.squeezing_target})


def impedance_conditions(device: str,
                         cooperativity: float | None = None) -> dict[str, float]:
    """Closed-form no-reflection constraints for the stock devices.

    isolator: dissipative rate equal to the port rate.
    ndpa:     cos^2 theta = 1/(2 C), feasible only for C > 1/2.
    dpa:      sin 2theta = 1/Cbar (Cbar >= 1) plus the noise-nulling
              asymmetry alpha = 1/G_phi with
              sqrt(G_phi) = Cbar (1 + sqrt(1 - 1/Cbar^2)).
    """
    device = device.lower()
    if device == "isolator":
        return {"gamma_over_kappa": 1.0}
    if device == "ndpa":
        if cooperativity is None:
            raise IndexOutOfRange("ndpa impedance condition needs C")
        c = float(cooperativity)
        if c <= 0.5:
            raise InfeasibleCooperativity(
                f"C={c} <= 1/2: no angle removes the input reflection")
        cos2 = 1.0 / (2 * c)
        return {"cos_theta_sq": cos2, "theta": math.acos(math.sqrt(cos2))}
    if device == "dpa":
        if cooperativity is None:
            raise IndexOutOfRange("dpa impedance condition needs Cbar")
        cbar = float(cooperativity)
        if cbar < 1.0:
            raise InfeasibleCooperativity(
                f"Cbar={cbar} < 1: sin 2theta = 1/Cbar has no solution")
        sqrt_gain = cbar * (1 + math.sqrt(1 - 1 / cbar ** 2))
        return {"sin_two_theta": 1.0 / cbar,
                "theta": 0.5 * math.asin(1.0 / cbar),
                "sqrt_gain": sqrt_gain,
                "alpha": 1.0 / sqrt_gain ** 2}
    raise IndexOutOfRange(f"unknown device {device!r}; "
                          "expected isolator, ndpa or dpa")


# ---------------------------------------------------------------------------
# numeric matcher


def _parse_param_name(name: str, n: int) -> tuple[str, int, int]:
    kind = None
    if name.startswith("J[") and name.endswith("]"):
        kind = "J"
    elif name.startswith("Lambda[") and name.endswith("]"):
        kind = "Lambda"
    else:
        raise IndexOutOfRange(
            f"unknown free parameter {name!r}; use 'J[a,b]' or 'Lambda[a,b]' "
            "with mode indices")
    body = name[name.index("[") + 1:-1]
    try:
        a, b = (int(x) for x in body.split(","))
    except ValueError as exc:
        raise IndexOutOfRange(f"cannot parse indices in {name!r}") from exc
    if not (0 <= a < n and 0 <= b < n):
        raise IndexOutOfRange(f"{name!r}: indices out of range for n={n}")
    return kind, a, b


def _set_entry(network: LinearNetwork, kind: str, a: int, b: int,
               value: complex) -> LinearNetwork:
    J = network.coupling.beam_splitter.copy()
    L = network.coupling.squeezing.copy()
    if kind == "J":
        if a == b:
            J[a, a] = value.real
        else:
            J[a, b] = value
            J[b, a] = np.conj(value)
    else:
        L[a, b] = value
        L[b, a] = value
    return replace(network, coupling=CoherentCoupling(J, L))


def _objective_elements(network: LinearNetwork,
                        objective: tuple[ObjectiveTerm, ...]) -> np.ndarray:
    """Complex s-elements, one per objective term, grouping terms by
    (omega, basis) so each scattering solve is done once."""
    out = np.empty(len(objective), dtype=complex)
    cache: dict[tuple[float, str], object] = {}
    for i, t in enumerate(objective):
        key = (t.omega, t.basis)
        if key not in cache:
            cache[key] = scattering_matrix(network, t.omega, basis=t.basis)
        res = cache[key]
        if t.basis == "doubled":
            out[i] = res.element(t.out_channel, t.in_channel,
                                 out_conj=t.out_conj, in_conj=t.in_conj)
        else:
            out[i] = res.quad_element(t.out_channel, t.out_quad or "x",
                                      t.in_channel, t.in_quad or "x")
    return out


def numeric_match(network: LinearNetwork, free_params: list[str],
                  objective: list[ObjectiveTerm],
                  start: dict[str, complex] | None = None,
                  tolerance: float = 1e-10,
                  max_iterations: int = 500) -> MatchSolution:
    """Tune free coupling entries to meet |s|^2 targets.

    Local least-squares from ``start`` (falling back to the network's
    current entries).  Zero targets are driven through the complex
    amplitudes themselves, which conditions the search well enough to hit
    analytic optima to ~1e-12; the reported residual is always the spec
    objective sum_i [w_i (|s_i|^2 - target_i)]^2.
    """
    if not free_params:
        raise IndexOutOfRange("need at least one free parameter")
    if not objective:
        raise IndexOutOfRange("need at least one objective term")
    n = network.n_modes
    parsed = [_parse_param_name(name, n) for name in free_params]
    objective = tuple(objective)

    x0 = []
    for name, (kind, a, b) in zip(free_params, parsed):
        if start is not None and name in start:
            val = complex(start[name])
        else:
            mat = (network.coupling.beam_splitter if kind == "J"
                   else network.coupling.squeezing)
            val = complex(mat[a, b])
        x0.extend([val.real, val.imag])
    x0 = np.asarray(x0, dtype=float)

    def apply(x: np.ndarray) -> LinearNetwork:
        net = network
        for i, (kind, a, b) in enumerate(parsed):
            net = _set_entry(net, kind, a, b, complex(x[2 * i], x[2 * i + 1]))
        return net

    eval_count = [0]

    def residuals(x: np.ndarray) -> np.ndarray:
        eval_count[0] += 1
        net = apply(x)
        if not stability(net).stable:
            raise UnstableDuringSearch(
                "network became unstable during the parameter search")
        s = _objective_elements(net, objective)
        out = []
        for si, t in zip(s, objective):
            if t.target == 0.0:
                # same minimizer as |s|^2 -> 0, but quadratic not quartic
                out.extend([t.weight * si.real, t.weight * si.imag])
            else:
                out.append(t.weight * (abs(si) ** 2 - t.target))
        return np.asarray(out, dtype=float)

    def spec_residual(x: np.ndarray) -> float:
        s = _objective_elements(apply(x), objective)
        return float(sum((t.weight * (abs(si) ** 2 - t.target)) ** 2
                         for si, t in zip(s, objective)))

    sol = scipy.optimize.least_squares(
        residuals, x0, method="trf", xtol=3e-16, ftol=3e-16, gtol=3e-16,
        max_nfev=max_iterations * max(1, len(x0)))
    values = {name: complex(sol.x[2 * i], sol.x[2 * i + 1])
              for i, name in enumerate(free_params)}
    res = spec_residual(sol.x)
    result = MatchSolution(parameter_values=values, residual=res,
                           converged=bool(res <= tolerance),
                           iterations=eval_count[0])
    if not result.converged:
        raise NotConverged(
            f"residual {res:.3e} above tolerance {tolerance:.1e} after "
            f"{eval_count[0]} evaluations", solution=result)
    return result
