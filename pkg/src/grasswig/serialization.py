"""JSON encodings for matrices, projections, oracle tables and results.

Complex matrices are ``{"rows": r, "cols": c, "entries": [[re, im], ...]}``
in row-major order; projections add ``"rank"``. Oracle files carry the
table under ``"entries"`` and the generator's ground truth under
``"truth"``, which reconstruction never reads.
"""

import json

import numpy as np

from .errors import GrasswigError
from .extend import ExtendedMap, TabulatedOracle
from .projections import validate_projection

__all__ = [
    "ORACLE_FORMAT",
    "classification_to_json",
    "dump",
    "extended_map_from_json",
    "extended_map_to_json",
    "matrix_from_json",
    "matrix_to_json",
    "oracle_file_to_table",
    "projection_from_json",
    "projection_to_json",
    "table_from_json",
    "table_to_json",
]

ORACLE_FORMAT = "grasswig.oracle/1"


def dump(obj, fp=None):
    """Deterministic JSON text (stable under load/dump round trips)."""
    text = json.dumps(obj, indent=1) + "\n"
    if fp is not None:
        fp.write(text)
    return text


def matrix_to_json(m):
    m = np.asarray(m, dtype=complex)
    rows, cols = m.shape
    return {
        "rows": rows,
        "cols": cols,
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def matrix_from_json(obj):
    rows, cols = int(obj["rows"]), int(obj["cols"])
    if rows < 1 or cols < 1:
        raise GrasswigError("matrix needs rows, cols >= 1")
    entries = np.asarray(obj["entries"], dtype=float)
    if entries.shape != (rows * cols, 2):
        raise GrasswigError(f"expected {rows * cols} [re, im] entries, got shape {entries.shape}")
    return (entries[:, 0] + 1j * entries[:, 1]).reshape(rows, cols)


def projection_to_json(P):
    out = matrix_to_json(P.matrix)
    out["rank"] = P.rank
    return out


def projection_from_json(obj, tol=None):
    """Decode and validate; the stored matrix is kept bit-for-bit."""
    P = validate_projection(matrix_from_json(obj), tol, symmetrize=False)
    if "rank" in obj and int(obj["rank"]) != P.rank:
        raise GrasswigError(f"declared rank {obj['rank']} but matrix has rank {P.rank}")
    return P


def table_to_json(table):
    return [
        {"input": projection_to_json(P), "output": projection_to_json(Q), "role": r}
        for P, Q, r in zip(table.inputs, table.outputs, table.roles)
    ]


def table_from_json(entries, tol=None):
    inputs = [projection_from_json(e["input"], tol) for e in entries]
    outputs = [projection_from_json(e["output"], tol) for e in entries]
    roles = [e.get("role", "sample") for e in entries]
    return TabulatedOracle(inputs, outputs, roles)


def oracle_file_to_table(doc, tol=None):
    """Decode an oracle file document into ``(table, d, n)``."""
    if doc.get("format") != ORACLE_FORMAT:
        raise GrasswigError(f"unknown oracle format {doc.get('format')!r}")
    table = table_from_json(doc["entries"], tol)
    return table, int(doc["d"]), int(doc["n"])


def extended_map_to_json(Phi):
    return {"d": Phi.d, "n": Phi.n, "matrix": Phi.matrix.tolist()}


def extended_map_from_json(obj):
    return ExtendedMap(np.asarray(obj["matrix"], dtype=float), int(obj["d"]), int(obj["n"]))


def classification_to_json(c):
    return {
        "form": c.form.value,
        "linearity": c.linearity.value,
        "V": matrix_to_json(c.V),
        "residual": float(c.residual),
        "verified_pairs": int(c.verified_pairs),
    }
