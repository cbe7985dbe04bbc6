"""Config document <-> LinearNetwork.

The document is YAML with this schema (all rates in units of the
reference rate):

    units:
      reference_rate_name: kappa
    modes: [d1, d2]
    couplings:
      - {from: d1, to: d2, kind: beamsplitter, re: 0.0, im: 0.5}
      - {from: d1, to: d2, kind: squeezing,    re: 0.0, im: 0.0}
    dissipators:
      - rate: 1.0
        u: [[1.0, 0.0], [1.0, 0.0]]   # one [re, im] pair per mode
        v: [[0.0, 0.0], [0.0, 0.0]]
        occupation: 0.0
    ports:
      - {mode: d1, kappa: 1.0, occupation: 0.0}

Parsing and serialization round-trip losslessly: floats are emitted with
full repr precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import yaml

from .errors import ConfigError, NetworkValidationError
from .network import (
    CoherentCoupling,
    CollectiveDissipator,
    LinearNetwork,
    Port,
    build_network,
)

_KINDS = ("beamsplitter", "squeezing")


@dataclass(frozen=True)
class NetworkConfig:
    network: LinearNetwork
    reference_rate_name: str = "kappa"


def _fail(path: str, msg: str):
    raise ConfigError(f"config {path}: {msg}")


def _as_float(val, path: str) -> float:
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        _fail(path, f"expected a number, got {val!r}")
    return float(val)


def _complex_pair(val, path: str) -> complex:
    if (not isinstance(val, (list, tuple))) or len(val) != 2:
        _fail(path, f"expected [re, im], got {val!r}")
    return complex(_as_float(val[0], path + "[0]"), _as_float(val[1], path + "[1]"))


def parse_config(text: str) -> NetworkConfig:
    """Parse a config document; errors carry the YAML line/column when the
    document itself is malformed, or the offending entry path otherwise."""
    try:
        doc = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        loc = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ConfigError(f"config parse error{loc}: {exc.problem}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config parse error: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a mapping at the top level")

    unknown = set(doc) - {"units", "modes", "couplings", "dissipators", "ports"}
    if unknown:
        raise ConfigError(f"config: unknown sections {sorted(unknown)}")

    labels = doc.get("modes")
    if not isinstance(labels, list) or not labels or \
            not all(isinstance(l, str) for l in labels):
        raise ConfigError("config modes: need a nonempty list of labels")
    n = len(labels)
    index = {l: i for i, l in enumerate(labels)}
    if len(index) != n:
        raise ConfigError(f"config modes: duplicate labels in {labels}")

    def mode_of(val, path):
        if val not in index:
            _fail(path, f"unknown mode {val!r}; have {labels}")
        return index[val]

    bs: dict[tuple[int, int], complex] = {}
    sq: dict[tuple[int, int], complex] = {}
    for i, entry in enumerate(doc.get("couplings") or []):
        path = f"couplings[{i}]"
        if not isinstance(entry, dict):
            _fail(path, "expected a mapping")
        kind = entry.get("kind")
        if kind not in _KINDS:
            _fail(path, f"kind must be one of {_KINDS}, got {kind!r}")
        j = mode_of(entry.get("from"), path + ".from")
        k = mode_of(entry.get("to"), path + ".to")
        val = complex(_as_float(entry.get("re", 0.0), path + ".re"),
                      _as_float(entry.get("im", 0.0), path + ".im"))
        target = bs if kind == "beamsplitter" else sq
        if (j, k) in target or (k, j) in target:
            _fail(path, f"duplicate {kind} entry for pair ({labels[j]}, {labels[k]})")
        target[(j, k)] = val
    coupling = CoherentCoupling.from_entries(n, beam_splitter=bs, squeezing=sq)

    dissipators = []
    for i, entry in enumerate(doc.get("dissipators") or []):
        path = f"dissipators[{i}]"
        if not isinstance(entry, dict):
            _fail(path, "expected a mapping")
        rate = _as_float(entry.get("rate"), path + ".rate")
        uraw = entry.get("u") or [[0.0, 0.0]] * n
        vraw = entry.get("v") or [[0.0, 0.0]] * n
        if len(uraw) != n or len(vraw) != n:
            _fail(path, f"u and v need one [re, im] pair per mode ({n})")
        u = [_complex_pair(x, f"{path}.u[{m}]") for m, x in enumerate(uraw)]
        v = [_complex_pair(x, f"{path}.v[{m}]") for m, x in enumerate(vraw)]
        occ = _as_float(entry.get("occupation", 0.0), path + ".occupation")
        dissipators.append(CollectiveDissipator(rate=rate, u=u, v=v,
                                                occupation=occ))

    ports = []
    for i, entry in enumerate(doc.get("ports") or []):
        path = f"ports[{i}]"
        if not isinstance(entry, dict):
            _fail(path, "expected a mapping")
        m = mode_of(entry.get("mode"), path + ".mode")
        kappa = _as_float(entry.get("kappa"), path + ".kappa")
        occ = _as_float(entry.get("occupation", 0.0), path + ".occupation")
        ports.append(Port(mode_index=m, kappa=kappa, occupation=occ))

    units = doc.get("units") or {}
    if not isinstance(units, dict):
        raise ConfigError("config units: expected a mapping")
    ref = units.get("reference_rate_name", "kappa")

    try:
        network = build_network(labels, coupling, dissipators, ports)
    except NetworkValidationError as exc:
        raise ConfigError(f"config: {exc}") from exc
    return NetworkConfig(network=network, reference_rate_name=str(ref))


def serialize_config(network: LinearNetwork,
                     reference_rate_name: str = "kappa") -> str:
    labels = list(network.labels)
    doc: dict = {
        "units": {"reference_rate_name": reference_rate_name},
        "modes": labels,
    }
    couplings = []
    J = network.coupling.beam_splitter
    L = network.coupling.squeezing
    n = network.n_modes
    for j in range(n):
        for k in range(n):
            if k < j:
                continue
            if J[j, k] != 0:
                couplings.append({"from": labels[j], "to": labels[k],
                                  "kind": "beamsplitter",
                                  "re": float(J[j, k].real),
                                  "im": float(J[j, k].imag)})
            if L[j, k] != 0:
                couplings.append({"from": labels[j], "to": labels[k],
                                  "kind": "squeezing",
                                  "re": float(L[j, k].real),
                                  "im": float(L[j, k].imag)})
    if couplings:
        doc["couplings"] = couplings
    dissipators = []
    for d in network.dissipators:
        entry = {"rate": float(d.rate),
                 "u": [[float(x.real), float(x.imag)] for x in d.u],
                 "v": [[float(x.real), float(x.imag)] for x in d.v]}
        if d.occupation:
            entry["occupation"] = float(d.occupation)
        dissipators.append(entry)
    if dissipators:
        doc["dissipators"] = dissipators
    ports = []
    for p in network.ports:
        entry = {"mode": labels[p.mode_index], "kappa": float(p.kappa)}
        if p.occupation:
            entry["occupation"] = float(p.occupation)
        ports.append(entry)
    if ports:
        doc["ports"] = ports
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)
