"""Command-line front end.

Subcommands: sweep (scattering elements over a frequency grid), noise
(added noise, spectra, occupancies), match (numeric parameter matching),
stability (drift spectrum report), oracle (truncated-Fock cross-check of
the linear engine).  Networks come from a YAML config (--config) or a
named preset (--preset, tweaked with repeatable --param NAME=VALUE).

Frequencies and rates are always in units of the reference rate.  Output
is CSV (default) or JSON, deterministic byte-for-byte for fixed inputs.
DIREKTOR_THREADS caps the sweep worker count.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import devices as dev
from .config import parse_config
from .errors import DirektorError, IndexOutOfRange, SingularAtFrequency
from .fock import (
    HilbertSpec,
    coherent_state,
    doubled_basis_operators,
    evolve,
    expectation,
    network_operators,
)
from .langevin import (
    drift_matrix,
    first_moments,
    scattering_matrix,
    second_moments,
    stability,
)
from .matching import ObjectiveTerm, numeric_match
from .network import LinearNetwork
from .noise import added_noise, output_occupancy, output_spectrum

try:
    from importlib.metadata import version as _pkg_version
    VERSION = _pkg_version("direktor")
except Exception:  # pragma: no cover - not installed
    VERSION = "0.1.0"

_FMT = "%.12g"


def _fnum(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return _FMT % x


# ---------------------------------------------------------------------------
# presets


_PRESET_NAMES = ("isolator", "isolator-3mode", "ndpa", "ndpa-3mode",
                 "dpa", "dpa-aux", "waveguide")


def _build_preset(name: str, params: dict[str, complex], matched: bool):
    """Returns (device_params, network_or_None).  The waveguide keeps its
    exact delay description, so its network is built lazily per use."""
    p = dict(params)

    def take(key, default=None):
        val = p.pop(key, default)
        return val

    def real(key, default=None):
        val = take(key, default)
        return None if val is None else float(np.real(val))

    kappa = real("kappa", 1.0)
    if name == "isolator":
        d = dev.IsolatorReduced(gamma=real("gamma", 1.0), kappa=kappa,
                                j_hop=complex(take("j", 0.0)),
                                n1=real("n1", 0.0), n2=real("n2", 0.0))
    elif name == "isolator-3mode":
        kprime = real("kprime", 100.0)
        gamma = real("gamma", None)
        jprime = real("jprime", None)
        if jprime is None:
            jprime = math.sqrt((gamma if gamma is not None else 1.0) * kprime) / 2
        d = dev.IsolatorThreeMode(j_prime=jprime, kappa=kappa, kappa_prime=kprime,
                                  n1=real("n1", 0.0), n2=real("n2", 0.0),
                                  nc=real("nc", 0.0))
    elif name == "ndpa":
        gamma = real("gamma", None)
        c = real("C", None)
        if gamma is None:
            gamma = (c if c is not None else 0.95) * kappa
        d = dev.NdpaReduced(gamma=gamma, kappa=kappa, theta=real("theta", None),
                            n1=real("n1", 0.0), n2=real("n2", 0.0))
    elif name == "ndpa-3mode":
        kprime = real("kprime", 100.0)
        lamp = real("lamprime", None)
        if lamp is None:
            c = real("C", 0.95)
            lamp = math.sqrt(c * kappa * kprime) / 2
        d = dev.NdpaThreeMode(lam_prime=lamp, kappa=kappa, kappa_prime=kprime,
                              theta=real("theta", None), n1=real("n1", 0.0),
                              n2=real("n2", 0.0), nc=real("nc", 0.0))
    elif name == "dpa":
        d = dev.DpaReduced(lambda_qnd=real("lambda_qnd", 0.5), kappa=kappa,
                           gamma=real("gamma", None),
                           n1=real("n1", 0.0), n2=real("n2", 0.0))
    elif name == "dpa-aux":
        d = dev.DpaAux(cbar=real("cbar", 2.0), kappa=kappa,
                       kappa_prime=real("kprime", 100.0),
                       alpha=real("alpha", None), theta=real("theta", None),
                       n1=real("n1", 0.0), n2=real("n2", 0.0),
                       nc=real("nc", 0.0))
    elif name == "waveguide":
        d = dev.WaveguidePair(gamma=real("gamma", 1.0),
                              k0_l=real("k0l", 2 * math.pi), kappa=kappa,
                              tau=real("tau", 1e-4),
                              n1=real("n1", 0.0), n2=real("n2", 0.0))
    else:
        raise IndexOutOfRange(
            f"unknown preset {name!r}; available: {', '.join(_PRESET_NAMES)}")
    if p:
        raise IndexOutOfRange(
            f"preset {name!r}: unknown parameters {sorted(p)}")
    network = None
    if not isinstance(d, dev.WaveguidePair):
        network = dev.make_device(d, matched=matched)
    return d, network


def _parse_params(pairs: list[str]) -> dict[str, complex]:
    out: dict[str, complex] = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise IndexOutOfRange(f"--param needs NAME=VALUE, got {pair!r}")
        name, _, raw = pair.partition("=")
        try:
            out[name.strip()] = complex(raw)
        except ValueError as exc:
            raise IndexOutOfRange(f"cannot parse value in {pair!r}") from exc
    return out


@dataclass(frozen=True)
class SourceNetwork:
    network: LinearNetwork | None
    device: object | None       # device params when from a preset
    preset: str | None
    matched: bool
    meta: dict

    @property
    def is_waveguide(self) -> bool:
        return isinstance(self.device, dev.WaveguidePair)


def _load_source(args) -> SourceNetwork:
    if bool(args.config) == bool(args.preset):
        raise IndexOutOfRange("give exactly one of --config or --preset")
    matched = not getattr(args, "unmatched", False)
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise IndexOutOfRange(f"cannot read config {args.config}: {exc}")
        cfg = parse_config(text)
        return SourceNetwork(network=cfg.network, device=None, preset=None,
                             matched=matched,
                             meta={"config": args.config,
                                   "reference_rate": cfg.reference_rate_name})
    params = _parse_params(args.param)
    device, network = _build_preset(args.preset, params, matched)
    meta = {"preset": args.preset, "matched": matched,
            "device": {k: (v if not isinstance(v, complex) else
                           [v.real, v.imag])
                       for k, v in asdict(device).items()}}
    return SourceNetwork(network=network, device=device, preset=args.preset,
                         matched=matched, meta=meta)


# ---------------------------------------------------------------------------
# selectors


@dataclass(frozen=True)
class Selector:
    out_channel: str
    in_channel: str
    out_conj: bool = False
    in_conj: bool = False
    out_quad: str | None = None
    in_quad: str | None = None

    @property
    def label(self) -> str:
        def side(ch, conj, quad):
            txt = ch + ("*" if conj else "")
            return f"{quad}:{txt}" if quad else txt
        return f"{side(self.out_channel, self.out_conj, self.out_quad)}<-" \
               f"{side(self.in_channel, self.in_conj, self.in_quad)}"


def _parse_selector(text: str, basis: str) -> Selector:
    parts = text.split(",")
    if len(parts) != 2:
        raise IndexOutOfRange(
            f"selector {text!r} must be 'OUT,IN' (out first)")

    def side(tok):
        tok = tok.strip()
        quad = None
        if ":" in tok:
            quad, _, tok = tok.partition(":")
            quad = quad.strip().lower()
            if quad not in ("x", "p"):
                raise IndexOutOfRange(f"quadrature must be x or p in {text!r}")
        conj = tok.endswith("*")
        if conj:
            tok = tok[:-1]
        return tok, conj, quad

    out_ch, out_conj, out_quad = side(parts[0])
    in_ch, in_conj, in_quad = side(parts[1])
    if basis == "quadrature":
        out_quad = out_quad or "x"
        in_quad = in_quad or "x"
        if out_conj or in_conj:
            raise IndexOutOfRange("conjugate marker has no meaning for "
                                  "quadrature selectors")
    elif out_quad or in_quad:
        raise IndexOutOfRange(
            f"selector {text!r} uses quadratures; pass --basis quadrature")
    return Selector(out_channel=out_ch, in_channel=in_ch, out_conj=out_conj,
                    in_conj=in_conj, out_quad=out_quad, in_quad=in_quad)


def _default_selectors(channels, basis: str) -> list[Selector]:
    ports = [c.label for c in channels if c.kind == "port"]
    out = []
    for po in ports:
        for pi in ports:
            if basis == "quadrature":
                out.append(Selector(po, pi, out_quad="x", in_quad="x"))
                out.append(Selector(po, pi, out_quad="p", in_quad="p"))
            else:
                out.append(Selector(po, pi))
    return out


def _grid(args) -> np.ndarray:
    if args.points < 2:
        raise IndexOutOfRange("--points must be >= 2")
    if args.points > 10 ** 7:
        raise IndexOutOfRange("--points must be <= 1e7")
    if not (args.wmin < args.wmax):
        raise IndexOutOfRange("--wmin must be below --wmax")
    if args.log:
        if args.wmin <= 0:
            raise IndexOutOfRange("--log needs strictly positive --wmin")
        return np.geomspace(args.wmin, args.wmax, args.points)
    return np.linspace(args.wmin, args.wmax, args.points)


def _workers() -> int:
    env = os.environ.get("DIREKTOR_THREADS", "")
    if env.strip():
        try:
            cap = int(env)
        except ValueError:
            raise IndexOutOfRange(f"DIREKTOR_THREADS={env!r} is not an integer")
        return max(1, cap)
    return min(8, os.cpu_count() or 1)


def _emit(args, meta: dict, columns: list[str], rows: list[list],
          out_stream) -> None:
    if args.format == "json":
        doc = {"tool": "direktor", "version": VERSION, **meta,
               "columns": columns, "rows": rows}
        out_stream.write(json.dumps(doc, indent=1, sort_keys=True,
                                    default=str) + "\n")
        return
    for key, val in sorted(meta.items()):
        out_stream.write(f"# {key}: {json.dumps(val, sort_keys=True, default=str)}\n")
    out_stream.write(f"# columns: {','.join(columns)}\n")
    out_stream.write(",".join(columns) + "\n")
    for row in rows:
        out_stream.write(",".join(
            _fnum(v) if isinstance(v, float) else str(v) for v in row) + "\n")


def _open_out(args):
    if args.out and args.out != "-":
        return open(args.out, "w", encoding="utf-8"), True
    return sys.stdout, False


# ---------------------------------------------------------------------------
# sweep


def cmd_sweep(args) -> int:
    src = _load_source(args)
    basis = args.basis
    if src.is_waveguide:
        probe = dev.waveguide_scattering(src.device, 0.0)
        channels = probe.channels
        if basis != "doubled":
            raise IndexOutOfRange("waveguide sweep supports the doubled basis")
        stable = True
    else:
        drift = drift_matrix(src.network)
        channels = drift.channels
        stable = stability(drift).stable
    sel = ([_parse_selector(s, basis) for s in args.select]
           if args.select else _default_selectors(channels, basis))

    curves = None
    if src.preset and src.matched and not src.is_waveguide:
        try:
            curves = dev.reference_curves(src.device, matched=True)
        except DirektorError:
            curves = None
    curve_cols = []
    if curves:
        for name in ("forward_gain", "reverse_gain", "quad_forward_gain",
                     "quad_reverse_gain", "added_noise"):
            if getattr(curves, name) is not None:
                curve_cols.append(name)

    grid = _grid(args)

    def one(w: float):
        note = "" if stable else "unstable"
        try:
            if src.is_waveguide:
                res = dev.waveguide_scattering(src.device, float(w))
            else:
                res = scattering_matrix(drift, float(w), basis=basis)
            vals = []
            for s in sel:
                if basis == "quadrature":
                    el = res.quad_element(s.out_channel, s.out_quad,
                                          s.in_channel, s.in_quad)
                else:
                    el = res.element(s.out_channel, s.in_channel,
                                     out_conj=s.out_conj, in_conj=s.in_conj)
                vals.extend([abs(el) ** 2, math.atan2(el.imag, el.real)])
        except SingularAtFrequency:
            vals = [math.nan] * (2 * len(sel))
            note = "singular"
        row = [float(w), *vals]
        for name in curve_cols:
            row.append(float(getattr(curves, name)(float(w))))
        row.append(note)
        return row

    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        rows = list(pool.map(one, grid))

    columns = ["omega"]
    for s in sel:
        columns.extend([f"abs2[{s.label}]", f"phase[{s.label}]"])
    columns.extend(f"ref_{name}" for name in curve_cols)
    columns.append("note")
    meta = {"command": "sweep", "basis": basis, **src.meta}
    stream, close = _open_out(args)
    try:
        _emit(args, meta, columns, rows, stream)
    finally:
        if close:
            stream.close()
    return 0


# ---------------------------------------------------------------------------
# noise


def cmd_noise(args) -> int:
    src = _load_source(args)
    if src.is_waveguide:
        raise IndexOutOfRange("noise reports are not defined for the "
                              "exact-delay waveguide; use the markovian "
                              "network via a config instead")
    drift = drift_matrix(src.network)
    ports = [c.label for c in drift.channels if c.kind == "port"]
    signal = args.signal or (ports[0] if ports else None)
    output = args.output or (ports[1] if len(ports) > 1 else None)
    if signal is None or output is None:
        raise IndexOutOfRange("need --signal and --output port labels")
    mode = ("phase_sensitive" if args.mode == "sensitive"
            else "phase_preserving")
    grid = _grid(args)

    def one(w: float):
        n_add = added_noise(drift, float(w), signal, output, mode=mode,
                            in_quad=args.in_quad, out_quad=args.out_quad)
        row = [float(w), n_add]
        for p in ports:
            row.append(output_spectrum(drift, float(w), p))
        for p in ports:
            row.append(output_occupancy(drift, float(w), p))
        row.append("")
        return row

    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        rows = list(pool.map(one, grid))
    columns = (["omega", "n_add"]
               + [f"spectrum[{p}]" for p in ports]
               + [f"occupancy[{p}]" for p in ports] + ["note"])
    meta = {"command": "noise", "signal": signal, "output": output,
            "mode": mode, **src.meta}
    stream, close = _open_out(args)
    try:
        _emit(args, meta, columns, rows, stream)
    finally:
        if close:
            stream.close()
    return 0


# ---------------------------------------------------------------------------
# match


def _objective_from_text(text: str, network: LinearNetwork) -> ObjectiveTerm:
    """SPEC:  OUT,IN@OMEGA=TARGET[:WEIGHT]  with the selector syntax of
    sweep --select (quadrature prefixes imply the quadrature basis)."""
    head, _, tail = text.partition("@")
    if not tail:
        raise IndexOutOfRange(f"objective {text!r} needs '@OMEGA=TARGET'")
    omega_txt, _, rest = tail.partition("=")
    if not rest:
        raise IndexOutOfRange(f"objective {text!r} needs '=TARGET'")
    weight = 1.0
    target_txt, _, weight_txt = rest.partition(":")
    if weight_txt:
        weight = float(weight_txt)
    quad = ":" in head
    sel = _parse_selector(head, "quadrature" if quad else "doubled")
    return ObjectiveTerm(
        omega=float(omega_txt), out_channel=sel.out_channel,
        in_channel=sel.in_channel, target=float(target_txt), weight=weight,
        basis="quadrature" if quad else "doubled",
        out_quad=sel.out_quad, in_quad=sel.in_quad,
        out_conj=sel.out_conj, in_conj=sel.in_conj)


_ANALYTIC_NOTES = {
    "isolator": "analytic: J[0,1] = 0.5j*gamma",
    "isolator-3mode": "analytic: J[0,1] = 0.5j*gamma, gamma = 4 jprime^2/kprime",
    "ndpa": "analytic: Lambda[0,1] = 0.5j*gamma*sin(2 theta)",
    "ndpa-3mode": "analytic: Lambda[0,1] = 0.5j*gamma*sin(2 theta)",
    "dpa": "analytic: dissipative rate = lambda_qnd",
    "dpa-aux": "analytic: lambda1 = kappa*cbar*cos(theta)^2, "
               "lambda2 = -kappa*cbar*sin(theta)^2",
}


def cmd_match(args) -> int:
    src = _load_source(args)
    if src.network is None:
        raise IndexOutOfRange("matching needs a LinearNetwork source")
    network = src.network
    names = list(args.free or [])
    if not names:
        raise IndexOutOfRange("give at least one --free parameter")

    lambda_adapter = set(names) <= {"lambda1", "lambda2"} and len(names) > 0
    if lambda_adapter and not set(names) == {"lambda1", "lambda2"}:
        raise IndexOutOfRange("lambda1/lambda2 must be freed together")
    free = ["J[0,1]", "Lambda[0,1]"] if lambda_adapter else names

    objective = [_objective_from_text(t, network) for t in (args.objective or [])]
    if not objective:
        raise IndexOutOfRange(
            "give at least one --objective 'OUT,IN@OMEGA=TARGET'")

    start = None
    if args.start:
        start = {}
        for pair in args.start:
            name, _, raw = pair.partition("=")
            start[name.strip()] = complex(raw)

    sol = numeric_match(network, free, objective, start=start,
                        tolerance=args.tolerance)
    lines = []
    values = dict(sol.parameter_values)
    if lambda_adapter:
        j = values.pop("J[0,1]")
        lam = values.pop("Lambda[0,1]")
        values["lambda1"] = complex(lam.imag + j.imag)
        values["lambda2"] = complex(lam.imag - j.imag)
    for name, val in values.items():
        lines.append(f"{name} = {val.real:.12g}{val.imag:+.12g}j")
    lines.append(f"residual = {sol.residual:.3e}")
    lines.append(f"converged = {sol.converged}")
    if src.preset in _ANALYTIC_NOTES:
        lines.append(_ANALYTIC_NOTES[src.preset])
    stream, close = _open_out(args)
    try:
        if args.format == "json":
            doc = {"tool": "direktor", "version": VERSION, "command": "match",
                   **src.meta,
                   "parameters": {k: [v.real, v.imag] for k, v in values.items()},
                   "residual": sol.residual, "converged": sol.converged}
            stream.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        else:
            stream.write("\n".join(lines) + "\n")
    finally:
        if close:
            stream.close()
    return 0


# ---------------------------------------------------------------------------
# stability


def cmd_stability(args) -> int:
    src = _load_source(args)
    if src.network is None:
        raise IndexOutOfRange("stability needs a LinearNetwork source "
                              "(waveguide delays have no finite spectrum)")
    rep = stability(src.network)
    stream, close = _open_out(args)
    try:
        if args.format == "json":
            doc = {"tool": "direktor", "version": VERSION,
                   "command": "stability", **src.meta,
                   "eigenvalues": [[ev.real, ev.imag] for ev in rep.eigenvalues],
                   "stable": rep.stable, "margin": rep.margin}
            stream.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        else:
            for ev in sorted(rep.eigenvalues, key=lambda z: (z.real, z.imag)):
                stream.write(f"eigenvalue: {_fnum(ev.real)}{ev.imag:+.12g}j\n")
            stream.write(f"stable: {rep.stable}\n")
            stream.write(f"margin: {_fnum(rep.margin)}\n")
    finally:
        if close:
            stream.close()
    return 0


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(args) -> int:
    src = _load_source(args)
    if src.network is None:
        raise IndexOutOfRange("the oracle needs a LinearNetwork source")
    network = src.network
    n = network.n_modes
    amps = [complex(x) for x in args.displacement.split(",")] if args.displacement \
        else [0.3 + 0.0j] * n
    if len(amps) != n:
        raise IndexOutOfRange(f"need {n} displacement amplitudes")
    spec = HilbertSpec(tuple([args.cutoff] * n))
    h, jumps = network_operators(network)
    rho0 = coherent_state(spec, amps)
    traj = evolve(h, jumps, rho0, args.tend, spec, n_samples=args.samples)

    ops = doubled_basis_operators(n)
    mats = [op.matrix(spec) for op in ops]
    m1_fock = np.stack([[expectation(m, rho) for m in mats]
                        for rho in traj.states])
    prod_mats = [[mats[i] @ mats[j] for j in range(2 * n)] for i in range(2 * n)]
    m2_fock = np.stack([[[expectation(prod_mats[i][j], rho)
                          for j in range(2 * n)] for i in range(2 * n)]
                        for rho in traj.states])

    drift = drift_matrix(network)
    m1_lin = first_moments(drift, m1_fock[0], traj.times)
    m2_lin = second_moments(drift, m2_fock[0], traj.times)

    rows = []
    for i, t in enumerate(traj.times):
        rows.append([float(t),
                     float(np.abs(m1_fock[i] - m1_lin[i]).max()),
                     float(np.abs(m2_fock[i] - m2_lin[i]).max()), ""])
    columns = ["time", "first_moment_dev", "second_moment_dev", "note"]
    meta = {"command": "oracle", "cutoff": args.cutoff,
            "trace_drift": traj.trace_drift,
            "min_eigenvalue": traj.min_eigenvalue, **src.meta}
    stream, close = _open_out(args)
    try:
        _emit(args, meta, columns, rows, stream)
    finally:
        if close:
            stream.close()
    return 0


# ---------------------------------------------------------------------------
# argument wiring


def _add_source_args(p: argparse.ArgumentParser):
    p.add_argument("--config", help="YAML network description")
    p.add_argument("--preset", choices=_PRESET_NAMES,
                   help="stock device instead of a config")
    p.add_argument("--param", action="append", default=[],
                   metavar="NAME=VALUE", help="preset parameter override")
    p.add_argument("--unmatched", action="store_true",
                   help="skip the directionality/impedance tuning")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-", help="output file (default stdout)")


def _add_grid_args(p: argparse.ArgumentParser):
    p.add_argument("--wmin", type=float, default=-2.0)
    p.add_argument("--wmax", type=float, default=2.0)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--log", action="store_true",
                   help="logarithmic frequency grid")
    p.add_argument("--basis", choices=("doubled", "quadrature"),
                   default="doubled")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="direktor",
        description="Frequency-domain design tool for nonreciprocal "
                    "linear photonic networks")
    ap.add_argument("--version", action="version", version=VERSION)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="scattering elements over a grid")
    _add_source_args(p)
    _add_grid_args(p)
    p.add_argument("--select", action="append", default=[],
                   metavar="OUT,IN", help="element selector, e.g. 'd2,d1' "
                   "or 'p:d2,p:d1' (repeatable; default: all port pairs)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("noise", help="added noise and output spectra")
    _add_source_args(p)
    _add_grid_args(p)
    p.add_argument("--signal", help="signal port label (default first port)")
    p.add_argument("--output", help="output port label (default second port)")
    p.add_argument("--mode", choices=("preserving", "sensitive"),
                   default="preserving")
    p.add_argument("--in-quad", choices=("x", "p"), default="p")
    p.add_argument("--out-quad", choices=("x", "p"), default="p")
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("match", help="tune free couplings against |s|^2 targets")
    _add_source_args(p)
    p.add_argument("--free", action="append", default=[],
                   metavar="NAME", help="'J[a,b]', 'Lambda[a,b]' or "
                   "lambda1/lambda2 for dpa-aux (repeatable)")
    p.add_argument("--objective", action="append", default=[],
                   metavar="OUT,IN@OMEGA=TARGET[:WEIGHT]",
                   help="|s|^2 target (repeatable)")
    p.add_argument("--start", action="append", default=[],
                   metavar="NAME=VALUE", help="starting value override")
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("stability", help="drift eigenvalue report")
    _add_source_args(p)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("oracle", help="truncated-Fock cross-check of the "
                                      "linear engine")
    _add_source_args(p)
    p.add_argument("--cutoff", type=int, default=6)
    p.add_argument("--displacement", default="",
                   help="comma-separated complex amplitudes, one per mode")
    p.add_argument("--tend", type=float, default=3.0)
    p.add_argument("--samples", type=int, default=9)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DirektorError as exc:
        print(f"direktor: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
