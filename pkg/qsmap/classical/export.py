"""Tabular and JSON views of manifolds and homoclinic records."""

from __future__ import annotations

from collections.abc import Iterable
from typing import Any

import polars as pl

from qsmap.classical.homoclinic import HomoclinicRecord
from qsmap.classical.manifolds import ManifoldCurve, manifold_rows

MANIFOLD_SCHEMA = {
    "branch": pl.Utf8,
    "sheet": pl.Utf8,
    "arc_param": pl.Float64,
    "q": pl.Float64,
    "p": pl.Float64,
}


def manifold_frame(curves: Iterable[ManifoldCurve]) -> pl.DataFrame:
    """Stack manifold polylines into one frame (branch, sheet, arc_param, q, p)."""
    frames = [pl.DataFrame(manifold_rows(curve), schema=MANIFOLD_SCHEMA) for curve in curves]
    if not frames:
        return pl.DataFrame(schema=MANIFOLD_SCHEMA)
    return pl.concat(frames, how="vertical")


def homoclinic_orbit_frame(record: HomoclinicRecord) -> pl.DataFrame:
    """Lifted orbit points of one record with their step index relative to the seed."""
    n = len(record.orbit)
    return pl.DataFrame(
        {
            "index": [record.index] * n,
            "step": [i - record.orbit.start_index for i in range(n)],
            "q": record.orbit.q.tolist(),
            "p": record.orbit.p.tolist(),
        }
    )


def homoclinic_payload(
    records: Iterable[HomoclinicRecord], k: float, provenance: str = "computed"
) -> dict[str, Any]:
    """JSON document with every record's invariants and where they came from."""
    records = list(records)
    payload: dict[str, Any] = {
        "k": k,
        "provenance": provenance,
        "records": [record.to_dict() for record in records],
    }
    if len(records) == 2:
        first, second = records
        payload["S_mean"] = 0.5 * (first.S + second.S)
        payload["delta_S"] = second.S - first.S
        if first.A is not None and second.A is not None:
            payload["A_mean"] = 0.5 * (first.A + second.A)
            payload["delta_A"] = second.A - first.A
    return payload
