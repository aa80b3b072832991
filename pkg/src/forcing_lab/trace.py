"""Audit traces and their JSON persistence.

Every construction returns a trace: the complete record of stage lengths,
coding points, chosen conditions and payload bits, enough to replay and
re-verify the run without re-running the construction. Traces serialize to
a single JSON envelope with the fields {kind, family, seed, payload_source,
stages, streams, boundaries, conditions}; serialization is deterministic
(sorted keys, stable node ids), so identical runs give identical bytes.

Bitstrings are stored as ASCII '0'/'1' when small; conditions from wide
runs can be astronomically long, and are stored as run lists whose lengths
live in a shared table of lazy-natural nodes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .bits import BitString, stream_from_json
from .errors import UsageError
from .plane import GenericPlane, PlaneCondition
from .towers import NatTable, nat_resolve

_ASCII_LIMIT = 4096


def encode_bitstring(s: BitString, table: Optional[NatTable] = None):
    if s.is_concrete and (isinstance(s.length, int) and s.length <= _ASCII_LIMIT):
        return s.to01()
    if table is None:
        raise UsageError("huge bitstring needs a nat table to serialize")
    return {"runs": [[b, table.encode(l)] for b, l in s.runs]}


def decode_bitstring(obj, built=None) -> BitString:
    if isinstance(obj, str):
        return BitString.from01(obj)
    return BitString((b, nat_resolve(l, built or [])) for b, l in obj["runs"])


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_trace(path, trace) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(_dump(trace.to_json()))


def load_trace(path):
    try:
        with open(path, "r", encoding="utf-8") as f:
            obj = json.load(f)
    except OSError as exc:
        raise UsageError(f"cannot read trace {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"trace {path} is not valid JSON: {exc}") from exc
    return trace_from_json(obj)


def trace_from_json(obj):
    kind = obj.get("kind")
    cls = _TRACE_KINDS.get(kind)
    if cls is None:
        raise UsageError(f"unknown trace kind {kind!r}")
    return cls.from_json(obj)


@dataclass
class PairTrace:
    kind = "pair"
    family: dict
    seed: object
    payload_source: dict
    payload_bits: List[int]
    boundaries: List[int]
    stages: List[dict]
    conditions: List[dict]
    streams: List[dict]

    def to_json(self):
        return {"kind": self.kind, "family": self.family, "seed": self.seed,
                "payload_source": self.payload_source,
                "payload_bits": self.payload_bits,
                "boundaries": self.boundaries, "stages": self.stages,
                "conditions": self.conditions, "streams": self.streams}

    @classmethod
    def from_json(cls, obj):
        return cls(family=obj["family"], seed=obj.get("seed"),
                   payload_source=obj.get("payload_source"),
                   payload_bits=obj["payload_bits"],
                   boundaries=obj["boundaries"], stages=obj["stages"],
                   conditions=obj["conditions"], streams=obj["streams"])


@dataclass
class ManyTrace:
    kind = "many"
    k: int
    family: dict
    seed: object
    payload_source: dict
    payload_bits: List[int]
    boundaries: List[int]
    stages: List[dict]
    conditions: List[dict]
    streams: List[dict]

    def to_json(self):
        return {"kind": self.kind, "k": self.k, "family": self.family,
                "seed": self.seed, "payload_source": self.payload_source,
                "payload_bits": self.payload_bits,
                "boundaries": self.boundaries, "stages": self.stages,
                "conditions": self.conditions, "streams": self.streams}

    @classmethod
    def from_json(cls, obj):
        return cls(k=obj["k"], family=obj["family"], seed=obj.get("seed"),
                   payload_source=obj.get("payload_source"),
                   payload_bits=obj["payload_bits"],
                   boundaries=obj["boundaries"], stages=obj["stages"],
                   conditions=obj["conditions"], streams=obj["streams"])


@dataclass
class WideTrace:
    kind = "wide"
    poset: str
    witness: str
    family: dict
    seed: object
    payload_source: dict
    payload_bits: List[int]
    stages: List[dict]          # per step: z plus nat refs for alpha, j, beta
    g_chain: List[BitString]
    h_chain: List[BitString]

    def to_json(self):
        table = NatTable()
        stages = []
        for rec in self.stages:
            stages.append({"step": rec["step"], "z": rec["z"],
                           "alpha": table.encode(rec["alpha"]),
                           "j": table.encode(rec["j"]),
                           "beta": table.encode(rec["beta"])})
        conditions = {
            "g": [encode_bitstring(s, table) for s in self.g_chain],
            "h": [encode_bitstring(s, table) for s in self.h_chain]}
        return {"kind": self.kind, "poset": self.poset, "witness": self.witness,
                "family": self.family, "seed": self.seed,
                "payload_source": self.payload_source,
                "payload_bits": self.payload_bits,
                "boundaries": [], "stages": stages,
                "conditions": conditions, "streams": [],
                "nats": table.to_list()}

    @classmethod
    def from_json(cls, obj):
        built = NatTable.decode_all(obj.get("nats", []))
        stages = []
        for rec in obj["stages"]:
            stages.append({"step": rec["step"], "z": rec["z"],
                           "alpha": nat_resolve(rec["alpha"], built),
                           "j": nat_resolve(rec["j"], built),
                           "beta": nat_resolve(rec["beta"], built)})
        conds = obj["conditions"]
        return cls(poset=obj["poset"], witness=obj["witness"],
                   family=obj["family"], seed=obj.get("seed"),
                   payload_source=obj.get("payload_source"),
                   payload_bits=obj["payload_bits"], stages=stages,
                   g_chain=[decode_bitstring(s, built) for s in conds["g"]],
                   h_chain=[decode_bitstring(s, built) for s in conds["h"]])


@dataclass
class ChainBoundTrace:
    kind = "chain-bound"
    family: dict
    seed: object                 # fill seed
    rows: int                    # m = number of base streams
    stages: List[dict]
    commitments: List[PlaneCondition]
    patches: Dict[int, Dict[int, int]]
    base_streams: List[dict]     # serialized b_k
    d_streams: List[dict]        # serialized patched rows, k < m
    plane: dict                  # serialized GenericPlane

    def to_json(self):
        return {"kind": self.kind, "family": self.family, "seed": self.seed,
                "payload_source": None, "payload_bits": [],
                "boundaries": [], "rows": self.rows, "stages": self.stages,
                "conditions": [p.to_json() for p in self.commitments],
                "patches": {str(r): {str(c): b for c, b in sorted(cols.items())}
                            for r, cols in sorted(self.patches.items())},
                "streams": [{"name": f"b{i}", **s} for i, s in enumerate(self.base_streams)]
                           + [{"name": f"d{i}", **s} for i, s in enumerate(self.d_streams)],
                "plane": self.plane}

    @classmethod
    def from_json(cls, obj):
        base, dpatched = [], []
        for s in obj["streams"]:
            s = dict(s)
            name = s.pop("name")
            (base if name.startswith("b") else dpatched).append(s)
        return cls(family=obj["family"], seed=obj.get("seed"),
                   rows=obj["rows"], stages=obj["stages"],
                   commitments=[PlaneCondition.from_json(p) for p in obj["conditions"]],
                   patches={int(r): {int(c): b for c, b in cols.items()}
                            for r, cols in obj["patches"].items()},
                   base_streams=base, d_streams=dpatched, plane=obj["plane"])

    def rebuild_plane(self) -> GenericPlane:
        return GenericPlane.from_json(self.plane)

    def rebuild_bases(self):
        return [stream_from_json(s) for s in self.base_streams]


@dataclass
class GenericsTrace:
    kind = "generic-plane"
    family: dict
    seed: object
    rows: int
    horizon: int
    commitments: PlaneCondition
    streams: List[dict] = field(default_factory=list)

    def to_json(self):
        return {"kind": self.kind, "family": self.family, "seed": self.seed,
                "payload_source": None, "payload_bits": [], "boundaries": [],
                "rows": self.rows, "horizon": self.horizon, "stages": [],
                "conditions": [self.commitments.to_json()],
                "streams": self.streams}

    @classmethod
    def from_json(cls, obj):
        return cls(family=obj["family"], seed=obj.get("seed"),
                   rows=obj["rows"], horizon=obj["horizon"],
                   commitments=PlaneCondition.from_json(obj["conditions"][0]),
                   streams=obj["streams"])


_TRACE_KINDS = {"pair": PairTrace, "many": ManyTrace, "wide": WideTrace,
                "chain-bound": ChainBoundTrace, "generic-plane": GenericsTrace}
