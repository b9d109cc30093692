"""JSON channel specifications and machine-readable reports.

A channel spec is a JSON object with a ``kind`` key:

``{"kind": "kraus", "kraus": [M, ...]}``
``{"kind": "unitary", "matrix": M}``
``{"kind": "mixed_unitary", "probs": [p, ...], "unitaries": [M, ...]}``
``{"kind": "povm", "effects": [M, ...]}``
``{"kind": "sic", "d": 2, "permutation": "(1 2)(3 4)"}``

A matrix ``M`` is a list of rows; an entry is a number or an ``[re, im]`` pair.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .channels import QuantumChannel, mixed_unitary_channel, unitary_channel
from .errors import CertichanError, SpecParseError
from .oracle import SimulationReport
from .povm import Permutation, Povm, povm_to_channel, sic_povm

KINDS = ("kraus", "unitary", "mixed_unitary", "povm", "sic")


def _entry(value, where) -> complex:
    if isinstance(value, bool):
        raise SpecParseError("expected a number or [re, im] pair, got a boolean", where)
    if isinstance(value, (int, float)):
        z = complex(value)
    elif isinstance(value, list) and len(value) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
        z = complex(value[0], value[1])
    else:
        raise SpecParseError(f"expected a number or [re, im] pair, got {value!r}", where)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise SpecParseError("matrix entries must be finite", where)
    return z


def parse_matrix(data, where: str = "matrix") -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise SpecParseError("expected a nonempty list of rows", where)
    rows = []
    for r, row in enumerate(data):
        if not isinstance(row, list) or not row:
            raise SpecParseError("expected a nonempty list of entries", f"{where}[{r}]")
        rows.append([_entry(v, f"{where}[{r}][{c}]") for c, v in enumerate(row)])
    if len({len(row) for row in rows}) != 1:
        raise SpecParseError("rows have different lengths", where)
    return np.array(rows, dtype=complex)


def _matrix_list(data, where: str) -> list:
    if not isinstance(data, list) or not data:
        raise SpecParseError("expected a nonempty list of matrices", where)
    return [parse_matrix(m, f"{where}[{i}]") for i, m in enumerate(data)]


def _field(spec: dict, key: str, source: str):
    if key not in spec:
        raise SpecParseError(f"missing field {key!r}", source)
    return spec[key]


@dataclass
class ChannelSpec:
    kind: str
    channel: QuantumChannel
    povm: Povm | None = None
    d: int | None = None
    permutation: Permutation | None = None


def parse_spec(spec, source: str = "<spec>") -> ChannelSpec:
    """Validate a decoded JSON object and build its channel."""
    if not isinstance(spec, dict):
        raise SpecParseError("top level must be a JSON object", source)
    kind = _field(spec, "kind", source)
    if kind not in KINDS:
        raise SpecParseError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}",
                             f"{source}: kind")
    try:
        if kind == "kraus":
            ops = _matrix_list(_field(spec, "kraus", source), f"{source}: kraus")
            return ChannelSpec(kind, QuantumChannel(tuple(ops)))
        if kind == "unitary":
            u = parse_matrix(_field(spec, "matrix", source), f"{source}: matrix")
            return ChannelSpec(kind, unitary_channel(u))
        if kind == "mixed_unitary":
            probs = _field(spec, "probs", source)
            if not isinstance(probs, list) or not all(
                    isinstance(p, (int, float)) and not isinstance(p, bool) for p in probs):
                raise SpecParseError("expected a list of numbers", f"{source}: probs")
            us = _matrix_list(_field(spec, "unitaries", source), f"{source}: unitaries")
            return ChannelSpec(kind, mixed_unitary_channel(probs, us))
        if kind == "povm":
            p = Povm(tuple(_matrix_list(_field(spec, "effects", source), f"{source}: effects")))
            return ChannelSpec(kind, povm_to_channel(p), povm=p, d=p.dim)
        d = _field(spec, "d", source)
        if not isinstance(d, int) or isinstance(d, bool):
            raise SpecParseError("expected an integer", f"{source}: d")
        sic = sic_povm(d)
        pi = Permutation.parse(str(spec.get("permutation", "()")), d * d)
        p = sic.povm(pi)
        return ChannelSpec(kind, povm_to_channel(p), povm=p, d=d, permutation=pi)
    except SpecParseError:
        raise
    except CertichanError as exc:
        raise SpecParseError(f"invalid {kind} specification: {exc}", source) from exc


def load_spec(path) -> ChannelSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise FileNotFoundError(f"{path}: no such channel specification file") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"malformed JSON: {exc.msg}",
                             f"{path}:{exc.lineno}:{exc.colno}") from exc
    return parse_spec(data, str(path))


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


@dataclass
class Report:
    """Outcome of one CLI analysis. Every number is reproducible from the
    input files, the seed and epsilon."""

    command: str
    verdict: str
    p1_single: float | None = None
    epsilon: float | None = None
    n_epsilon: int | None = None
    p1_parallel_table: list = field(default_factory=list)
    bound_table: list = field(default_factory=list)
    simulation: SimulationReport | None = None
    details: dict = field(default_factory=dict)

    VERDICTS = ("certifiable", "not certifiable")

    def validate(self):
        if self.verdict not in self.VERDICTS:
            raise SpecParseError(f"unknown verdict {self.verdict!r}", "report")
        if self.p1_single is not None and not 0 <= self.p1_single <= 1:
            raise SpecParseError("p1_single outside [0, 1]", "report")
        if self.n_epsilon is not None and self.n_epsilon < 1:
            raise SpecParseError("n_epsilon must be positive", "report")
        for row in self.p1_parallel_table:
            if len(row) != 2 or row[0] < 1 or not 0 <= row[1] <= 1:
                raise SpecParseError(f"bad p1_parallel_table row {row!r}", "report")
        for row in self.bound_table:
            if len(row) != 2 or row[0] < 1 or not 0 <= row[1] <= 1:
                raise SpecParseError(f"bad bound_table row {row!r}", "report")
        if self.simulation is not None:
            self.simulation.validate()
        return self

    def to_dict(self) -> dict:
        data = asdict(self)
        data["p1_parallel_table"] = [list(r) for r in self.p1_parallel_table]
        data["bound_table"] = [list(r) for r in self.bound_table]
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        data = dict(data)
        sim = data.get("simulation")
        if sim is not None:
            data["simulation"] = SimulationReport.from_dict(sim)
        data["p1_parallel_table"] = [tuple(r) for r in data.get("p1_parallel_table", [])]
        data["bound_table"] = [tuple(r) for r in data.get("bound_table", [])]
        return cls(**data).validate()

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        """``N, p1, bound`` rows for plotting; missing values are left empty."""
        p1 = dict(self.p1_parallel_table)
        bound = dict(self.bound_table)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["N", "p1", "bound"])
        for n in sorted(set(p1) | set(bound)):
            writer.writerow([n, _fmt(p1.get(n)), _fmt(bound.get(n))])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"verdict: {self.verdict}"]
        if self.p1_single is not None:
            lines.append(f"p1_single: {self.p1_single:.12g}")
        if self.n_epsilon is not None:
            lines.append(f"n_epsilon (epsilon={self.epsilon:g}): {self.n_epsilon}")
        if self.p1_parallel_table:
            lines.append("p1 parallel:")
            lines += [f"  N={n}: {v:.12g}" for n, v in self.p1_parallel_table]
        if self.bound_table:
            lines.append("closed-form bound:")
            lines += [f"  N={n}: {v:.12g}" for n, v in self.bound_table]
        for key, value in sorted(self.details.items()):
            lines.append(f"{key}: {value}")
        if self.simulation is not None:
            s = self.simulation
            lines += [
                f"simulation: truth={s.truth} trials={s.trials} seed={s.seed}",
                f"  empirical_fp_rate: {s.empirical_fp_rate:.6g} (std error {s.fp_std_error:.3g})",
                f"  empirical_fn_rate: {s.empirical_fn_rate:.6g}",
                f"  analytic_p1: {s.analytic_p1:.12g}",
            ]
        return "\n".join(lines) + "\n"


def _fmt(v):
    return "" if v is None else repr(float(v))
