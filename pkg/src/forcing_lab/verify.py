"""Re-verification of persisted traces.

Every construction's trace can be re-read and checked from scratch: the
decoders are re-run against the recorded streams/chains, genericity is
re-checked with the family's member predicates, and recorded invariants
(marker spacing, frontier lengths, chain descent) are recomputed. The
result is an itemized report; nothing here mutates or re-runs the
construction itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

from .bits import BitString, stream_from_json
from .closure import verify_bound
from .dense import family_from_spec
from .entangle import decode_many, decode_pair
from .errors import CheckFailure, UsageError
from .generic import meets_family, mutual_genericity_check
from .posets import POSET_REGISTRY, WITNESS_REGISTRY
from .towers import nat_equal
from .trace import (ChainBoundTrace, GenericsTrace, ManyTrace, PairTrace,
                    WideTrace)
from .wide import decode_wide


@dataclass
class VerifyReport:
    items: List[Tuple[str, bool, str]] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(ok for _, ok, _ in self.items)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.items.append((name, ok, detail))

    def check(self, name: str, fn):
        try:
            out = fn()
            ok, detail = out if isinstance(out, tuple) else (bool(out), "")
        except CheckFailure as exc:
            ok, detail = False, str(exc)
        except Exception as exc:  # noqa: BLE001 - reports must not throw
            ok, detail = False, f"exception: {exc!r}"
        self.add(name, ok, detail)

    def summary(self) -> str:
        lines = []
        for name, ok, detail in self.items:
            mark = "ok  " if ok else "FAIL"
            lines.append(f"{mark} {name}" + (f": {detail}" if detail else ""))
        verdict = "PASS" if self.all_passed else "FAIL"
        lines.append(f"{verdict}: {sum(ok for _, ok, _ in self.items)}"
                     f"/{len(self.items)} checks passed")
        return "\n".join(lines)


def _scan_budget_for(boundaries, default: int = 4096) -> int:
    return max([default] + [b + 8 for b in boundaries])


def verify_trace(trace) -> VerifyReport:
    if isinstance(trace, PairTrace):
        return _verify_pair(trace)
    if isinstance(trace, ManyTrace):
        return _verify_many(trace)
    if isinstance(trace, WideTrace):
        return _verify_wide(trace)
    if isinstance(trace, ChainBoundTrace):
        return _verify_chain(trace)
    if isinstance(trace, GenericsTrace):
        return _verify_generics(trace)
    raise UsageError(f"cannot verify trace of type {type(trace).__name__}")


def _verify_pair(trace: PairTrace) -> VerifyReport:
    report = VerifyReport()
    family = family_from_spec(trace.family)
    streams = {s["name"]: stream_from_json(s) for s in trace.streams}
    c, d = streams["c"], streams["d"]
    horizon = len(trace.stages)

    def decode_matches():
        bits, bounds = decode_pair(c, d, len(trace.payload_bits),
                                   _scan_budget_for(trace.boundaries))
        if bits != trace.payload_bits:
            return False, f"payload mismatch: {bits} != {trace.payload_bits}"
        if bounds != trace.boundaries:
            return False, f"boundary mismatch: {bounds} != {trace.boundaries}"
        return True, f"{len(bits)} bits, boundaries {bounds[:6]}..."

    def marker_spacing():
        bad = [i for i in range(len(trace.boundaries) - 1)
               if trace.boundaries[i + 1] < trace.boundaries[i] + 2]
        return not bad, f"markers too close at {bad}" if bad else ""

    def stage_conditions():
        for n, rec in enumerate(trace.conditions):
            for name, stream in (("c", c), ("d", d)):
                cond = BitString.from01(rec[name])
                if stream.take(len(rec[name])) != cond:
                    return False, f"stage {n} {name} not a stream prefix"
                if not family[n].member(cond):
                    return False, f"stage {n} {name} not in D_{n}"
        return True, f"{len(trace.conditions)} stages"

    report.check("pair-decode-roundtrip", decode_matches)
    report.check("pair-marker-spacing", marker_spacing)
    report.check("pair-stage-conditions", stage_conditions)
    report.check("pair-c-generic",
                 lambda: _meets(c, family, horizon))
    report.check("pair-d-generic",
                 lambda: _meets(d, family, horizon))
    return report


def _meets(filt, family, horizon):
    rep = meets_family(filt, family, horizon)
    return rep.all_met, rep.summary()


def _verify_many(trace: ManyTrace) -> VerifyReport:
    report = VerifyReport()
    family = family_from_spec(trace.family)
    streams = [None] * trace.k
    for s in trace.streams:
        streams[int(s["name"])] = stream_from_json(s)
    horizon = len(trace.conditions)

    def decode_matches():
        bits, markers = decode_many(streams, trace.k, len(trace.payload_bits),
                                    _scan_budget_for(trace.boundaries))
        if bits != trace.payload_bits:
            return False, "payload mismatch"
        if markers != trace.boundaries:
            return False, "marker mismatch"
        return True, f"{len(bits)} bits recovered"

    def frontier_invariant():
        for rec in trace.stages:
            lengths = rec["lengths"]
            i = rec["excluded"]
            want = rec["marker"] + 2
            if lengths[i] != want:
                return False, f"stage {rec['stage']} round {i}: excluded length"
            # every stream is padded to the marker before it grows again
            if any(lengths[j] < rec["marker"] for j in range(trace.k) if j != i):
                return False, f"stage {rec['stage']} round {i}: lagging stream"
        spaced = all(b >= a + 2 for a, b in zip(trace.boundaries,
                                                trace.boundaries[1:]))
        if not spaced:
            return False, "markers closer than 2 apart"
        return True, f"{len(trace.stages)} sub-rounds"

    def subtuples_generic():
        for i in range(trace.k):
            others = [streams[j] for j in range(trace.k) if j != i]
            rep = mutual_genericity_check(others, family, horizon)
            if not rep.all_met:
                return False, f"subtuple omitting {i}: {rep.summary()}"
        return True, f"all {trace.k} subtuples generic to horizon {horizon}"

    report.check("many-decode-roundtrip", decode_matches)
    report.check("many-frontier-invariant", frontier_invariant)
    report.check("many-subtuples-generic", subtuples_generic)
    return report


def _verify_wide(trace: WideTrace) -> VerifyReport:
    report = VerifyReport()
    family = family_from_spec(trace.family)
    poset_factory = POSET_REGISTRY.get(trace.poset)
    witness_factory = WITNESS_REGISTRY.get(trace.witness)
    if poset_factory is None or witness_factory is None:
        report.add("wide-registry", False,
                   f"unknown poset/witness {trace.poset!r}/{trace.witness!r}")
        return report
    poset = poset_factory()
    witness = witness_factory()
    g, h = trace.g_chain, trace.h_chain
    count = len(trace.payload_bits)

    def chains_descend():
        for name, chain in (("g", g), ("h", h)):
            for i in range(len(chain) - 1):
                if not chain[i + 1].proper_end_extends(chain[i]):
                    return False, f"{name} chain not strictly descending at {i}"
        return True, f"both chains strictly descend ({len(g)} conditions)"

    def chain_members():
        for name, chain in (("g", g), ("h", h)):
            for n, cond in enumerate(chain):
                if n < len(family) and not family[n].member(cond):
                    return False, f"{name}[{n}] not in D_{n}"
        return True, "every chain condition lies in its dense set"

    def decode_matches():
        triples = decode_wide(g, h, poset, witness, family, count)
        for n, (p, q, z) in enumerate(triples):
            if z != trace.payload_bits[n]:
                return False, f"z({n}) mismatch"
            if p != g[n] or q != h[n]:
                return False, f"conditions mismatch at step {n}"
            rec = trace.stages[n]
            if not (nat_equal(rec["alpha"], poset.encode(q))):
                return False, f"alpha mismatch at step {n}"
        return True, f"{count} triples reproduced"

    report.check("wide-chains-descending", chains_descend)
    report.check("wide-chain-membership", chain_members)
    report.check("wide-decode-roundtrip", decode_matches)
    return report


def _verify_chain(trace: ChainBoundTrace) -> VerifyReport:
    report = VerifyReport()
    family = family_from_spec(trace.family)
    plane = trace.rebuild_plane()
    bases = trace.rebuild_bases()
    bound = verify_bound(plane, bases, trace, family)
    for name, ok, detail in bound.items:
        report.add(f"chain-{name}", ok, detail)
    return report


def _verify_generics(trace: GenericsTrace) -> VerifyReport:
    report = VerifyReport()
    family = family_from_spec(trace.family)
    from .plane import GenericPlane
    plane = GenericPlane(commitments=trace.commitments, fill_seed=trace.seed)

    report.check("generics-plane-meets-family",
                 lambda: _meets(plane, family, trace.horizon))

    def rows_are_slices():
        for s in trace.streams:
            r = int(s["name"])
            rebuilt = stream_from_json({k: v for k, v in s.items()
                                        if k != "name"})
            width = len(rebuilt.prefix_string.to01()) + 8
            for col in range(width):
                if rebuilt.bit(col) != plane.cell(r, col):
                    return False, f"row {r} differs from plane at col {col}"
        return True, f"{len(trace.streams)} row streams match the plane"

    report.check("generics-rows-are-slices", rows_are_slices)
    return report
