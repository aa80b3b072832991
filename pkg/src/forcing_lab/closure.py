"""Bounding a chain of Cohen extensions by one generic plane.

Given finitely mutually generic row streams b_0, ..., b_{m-1}, the bound
construction walks the plane family stage by stage, committing a finite
plane condition p_n in every D_n that is compatible with all rows already
finalized. Finding p_n is the reveal-and-retry search: reveal a growing
rectangle of finalized bits, merge it into the previous commitment,
densify, and accept once the candidate agrees with the actual rows. Row n
is then finalized as b_n patched at the committed row-n cells (rows beyond
the input get the fill rule as their base), so the final plane extends
every commitment and each b_n differs from its row only at the recorded
patch.

The existence of a compatible extension is a genericity fact about the
inputs, not of this code: with non-generic rows the search can stall, and
that surfaces honestly as RetryBudgetExceeded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .bits import BitStream, PatchedStream, derive_seed
from .dense import CARRIER_PLANE, DenseFamily, checked_densify
from .errors import (FamilyTooSmall, IncompatibleCommitment,
                     IncompatibleConditions, RetryBudgetExceeded, UsageError)
from .generic import meets_family
from .plane import GenericPlane, PlaneCondition, merge_conditions
from .trace import ChainBoundTrace, GenericsTrace


def _plane_leq(a: PlaneCondition, b: PlaneCondition) -> bool:
    return a.leq(b)


def build_mutually_generic_sequence(family: DenseFamily, rows: int,
                                    horizon: int, seed=None
                                    ) -> List[BitStream]:
    """Fold the family's densifiers into one plane and slice out row streams.

    Any finite subtuple of the result passes mutual_genericity_check
    against the family's row restrictions up to the horizon.
    """
    streams, _, _ = build_generics_run(family, rows, horizon, seed)
    return streams


def build_generics_run(family: DenseFamily, rows: int, horizon: int,
                       seed=None) -> Tuple[List[BitStream], GenericPlane,
                                           GenericsTrace]:
    if family.carrier != CARRIER_PLANE:
        raise UsageError("generic planes need a plane-carrier family")
    if horizon > len(family):
        raise FamilyTooSmall(
            f"horizon {horizon} exceeds family size {len(family)}")
    if rows < 0:
        raise UsageError("rows must be >= 0")
    cond = PlaneCondition.empty()
    for n in range(horizon):
        cond = checked_densify(family[n], cond, _plane_leq)
    plane = GenericPlane(commitments=cond, fill_seed=seed)
    streams = [plane.row_stream(r) for r in range(rows)]
    trace = GenericsTrace(
        family=family.describe(), seed=seed, rows=rows, horizon=horizon,
        commitments=cond,
        streams=[{"name": str(r), **streams[r].to_json()}
                 for r in range(rows)])
    return streams, plane, trace


@dataclass
class BoundChainResult:
    d_rows: List[BitStream]          # patched versions of the inputs
    plane: GenericPlane              # the bounding generic plane
    commitments: List[PlaneCondition]
    patches: Dict[int, Dict[int, int]]


def _row_base(n: int, b: Sequence[BitStream], fill_seed) -> BitStream:
    if n < len(b):
        return b[n]
    if fill_seed is None:
        return BitStream.constant(0)
    return BitStream.seeded(derive_seed(fill_seed, "plane-fill", n))


def bound_chain(b: Sequence[BitStream], family: DenseFamily,
                retry_budget: int = 8, fill_seed=None
                ) -> Tuple[BoundChainResult, ChainBoundTrace]:
    """Bound the rows b_0..b_{m-1} by a plane generic for the family.

    Runs one stage per family set. Stage n finds p_n <= p_{n-1} inside D_n
    agreeing with all finalized rows, then finalizes row n (b_n patched at
    the committed row-n cells; fill-rule base beyond the inputs).
    """
    if family.carrier != CARRIER_PLANE:
        raise UsageError("bound_chain needs a plane-carrier family")
    if retry_budget < 1:
        raise UsageError("retry budget must be >= 1")
    m = len(b)
    stages = len(family)
    if stages < m:
        raise FamilyTooSmall(
            f"{m} rows need a family of at least {m} sets, got {stages}")

    finalized: Dict[int, BitStream] = {}
    chain: List[PlaneCondition] = []
    patches: Dict[int, Dict[int, int]] = {}
    stage_records: List[dict] = []
    prev = PlaneCondition.empty()
    for n in range(stages):
        reveal_to = 0
        retries = 0
        transcript: List[dict] = []
        while True:
            revealed = PlaneCondition(
                {(k, col): finalized[k].bit(col)
                 for k in range(n) for col in range(reveal_to)})
            try:
                merged = merge_conditions(prev, revealed)
            except IncompatibleConditions as exc:
                raise IncompatibleCommitment(n, str(exc)) from exc
            cand = checked_densify(family[n], merged, _plane_leq)
            clashes = [(k, col) for (k, col), bit in cand.cells.items()
                       if k < n and finalized[k].bit(col) != bit]
            if not clashes:
                commit = cand
                break
            retries += 1
            transcript.append({"reveal_to": reveal_to,
                               "clashes": sorted(clashes)})
            if retries > retry_budget:
                raise RetryBudgetExceeded(
                    n, f"{len(clashes)} cells still disagree "
                       f"(inputs not generic for this family?)")
            reveal_to = max(reveal_to + 1,
                            max(col for _, col in clashes) + 1)
        chain.append(commit)
        prev = commit
        row_patch = commit.row_cells(n)
        if n < m:
            patches[n] = row_patch
        finalized[n] = PatchedStream(_row_base(n, b, fill_seed), row_patch)
        stage_records.append({"stage": n, "retries": retries,
                              "revealed_cols": reveal_to,
                              "committed_cells": len(commit),
                              "attempts": transcript})

    top = chain[-1] if chain else PlaneCondition.empty()
    plane = GenericPlane(commitments=top, rows=finalized, fill_seed=fill_seed)
    result = BoundChainResult(
        d_rows=[finalized[k] for k in range(m)], plane=plane,
        commitments=chain, patches=patches)
    trace = ChainBoundTrace(
        family=family.describe(), seed=fill_seed, rows=m,
        stages=stage_records, commitments=chain, patches=patches,
        base_streams=[s.to_json() for s in b],
        d_streams=[result.d_rows[k].to_json() for k in range(m)],
        plane=plane.to_json())
    return result, trace


@dataclass
class BoundReport:
    items: List[Tuple[str, bool, str]] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(ok for _, ok, _ in self.items)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.items.append((name, ok, detail))

    def summary(self) -> str:
        lines = []
        for name, ok, detail in self.items:
            mark = "ok  " if ok else "FAIL"
            lines.append(f"{mark} {name}" + (f": {detail}" if detail else ""))
        return "\n".join(lines)


def verify_bound(plane: GenericPlane, b: Sequence[BitStream],
                 trace: ChainBoundTrace, family: DenseFamily,
                 horizon: Optional[int] = None,
                 col_window: Optional[int] = None) -> BoundReport:
    """Independently re-check a chain-bound run; reports, never raises.

    Checks: commitments in their sets, the commitment chain descending,
    commitments contained in the plane, rows preserved outside the patches
    (and equal to them on the patches, over a finite column window), and
    the plane meeting the family.
    """
    report = BoundReport()
    chain = trace.commitments
    if horizon is None:
        horizon = len(family)

    def run(name, fn):
        try:
            ok, detail = fn()
        except Exception as exc:  # noqa: BLE001 - verification must not throw
            ok, detail = False, f"exception: {exc}"
        report.add(name, ok, detail)

    def members():
        bad = [n for n in range(min(len(chain), len(family)))
               if not family[n].member(chain[n])]
        return not bad, f"commitments outside their sets: {bad}" if bad else ""

    def descending():
        bad = [n + 1 for n in range(len(chain) - 1)
               if not chain[n + 1].leq(chain[n])]
        return not bad, f"chain breaks at: {bad}" if bad else ""

    def contained():
        bad = [n for n, p in enumerate(chain) if not plane.contains(p)]
        return not bad, f"commitments not in the plane: {bad}" if bad else ""

    def rows_preserved():
        window = col_window
        if window is None:
            window = max([horizon + 16]
                         + [c + 1 for cols in trace.patches.values()
                            for c in cols])
        bad = []
        for k in range(trace.rows):
            patch = trace.patches.get(k, {})
            for col in range(window):
                actual = plane.cell(k, col)
                want = patch[col] if col in patch else b[k].bit(col)
                if actual != want:
                    bad.append((k, col))
        return (not bad,
                f"row/patch mismatches (window {window}): {bad[:6]}" if bad
                else f"window {window}")

    def meets():
        rep = meets_family(plane, family, horizon)
        return rep.all_met, rep.summary()

    run("commitments-in-sets", members)
    run("chain-descending", descending)
    run("commitments-in-plane", contained)
    run("rows-preserved-off-patches", rows_preserved)
    run("plane-meets-family", meets)
    return report
