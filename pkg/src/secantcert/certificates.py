"""Certificate records: build, serialize, read back and re-validate.

Certificates contain integers and strings only. Keys are written in a fixed
order so that identical runs give byte-identical files apart from
``wall_time_ms``.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from . import __version__
from .schemes import SchemeDescriptor
from .terracini import Config, SecantResult

CSV_FIELDS = (
    "z", "n_sections", "rows", "rank", "h0", "h1", "expected_h0",
    "secant_dim", "expected_dim", "defect", "verdict",
)


def secant_certificate(fmt, bundle, result: SecantResult, config: Config, wall_time_ms: int = 0) -> dict:
    c = result.cohomology
    return {
        "tool_version": __version__,
        "format": fmt.to_json(),
        "bundle": bundle.to_json(),
        "scheme": SchemeDescriptor.double_points(result.z).to_json(),
        "z": result.z,
        "primes": list(config.primes),
        "master_seed": config.seed,
        "trials": config.trials,
        "trials_used": c.trials_used,
        "prime": c.prime,
        "matrix_shape": list(c.matrix_shape),
        "rank": c.rank,
        "h0": c.h0,
        "h1": c.h1,
        "expected_h0": c.expected_h0,
        "secant_dim": result.dim,
        "expected_dim": result.expected,
        "defect": result.defect,
        "verdict": c.verdict.value,
        "wall_time_ms": int(wall_time_ms),
    }


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_json(path: Path, obj: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))


def read_certificate(path) -> dict:
    return json.loads(Path(path).read_text())


def strip_timing(obj):
    """Copy of a certificate/trace with every ``wall_time_ms`` removed."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k != "wall_time_ms"}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def validate_certificate(cert: dict) -> list[str]:
    """Internal consistency problems of a secant certificate (empty list if none)."""
    problems = []
    rows, cols = cert["matrix_shape"]
    rank = cert["rank"]
    if not 0 <= rank <= min(rows, cols):
        problems.append("rank outside [0, min(rows, cols)]")
    if cert["h0"] != cols - rank:
        problems.append("h0 != N - rank")
    if cert["h1"] != rows - rank:
        problems.append("h1 != degree - rank")
    if cert["expected_h0"] != max(0, cols - rows):
        problems.append("expected_h0 != max(0, N - degree)")
    if cert["h0"] < cert["expected_h0"]:
        problems.append("h0 below the analytic minimum")
    verdict = "CertifiedExpected" if cert["h0"] == cert["expected_h0"] else "ExceedsExpected"
    if cert["verdict"] != verdict:
        problems.append("verdict inconsistent with h0")
    if "secant_dim" in cert:
        if cert["secant_dim"] != cols - 1 - cert["h0"]:
            problems.append("secant_dim != N - 1 - h0")
        if cert["defect"] != cert["expected_dim"] - cert["secant_dim"]:
            problems.append("defect != expected_dim - secant_dim")
    return problems


def csv_summary(certs: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for c in certs:
        rows, cols = c["matrix_shape"]
        w.writerow([
            c["z"], cols, rows, c["rank"], c["h0"], c["h1"], c["expected_h0"],
            c["secant_dim"], c["expected_dim"], c["defect"], c["verdict"],
        ])
    return buf.getvalue()
