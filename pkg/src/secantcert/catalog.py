"""Regression catalog of known defective and non-defective secant orders."""

from __future__ import annotations

from dataclasses import dataclass

from .terracini import Config, admissible_z, secant_dimension
from .variety import BundleDegree, MultiProjectiveFormat, basis_size

_DOUBLE_CURVE = "classical: P1xP1 with O(2a,2) is defective exactly at z=2a+1"
_PRODUCT_LINES = "theorem minus: P^n1 x P^n2 x (P1)^k, d_i >= 2, d1, d2 >= 3 is non-defective"
_RATIONAL_ORACLE = "derived: Bareiss rank over Q of the Terracini matrix at integer points"


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    format: MultiProjectiveFormat
    bundle: BundleDegree
    z: int
    expected_defect: int
    provenance: str

    def __post_init__(self):
        if self.expected_defect < 0:
            raise ValueError("expected_defect must be >= 0")


def _entry(name, dims, degs, z, defect, provenance):
    return CatalogEntry(name, MultiProjectiveFormat(dims), BundleDegree(degs), z, defect, provenance)


def default_catalog() -> list[CatalogEntry]:
    entries = []
    for a in (1, 2, 3):
        fmt, bundle = MultiProjectiveFormat((1, 1)), BundleDegree((2 * a, 2))
        for z in admissible_z(basis_size(fmt, bundle), fmt.ambient_dim):
            entries.append(CatalogEntry(
                f"P1xP1 O({2 * a},2) z={z}", fmt, bundle, z,
                1 if z == 2 * a + 1 else 0, _DOUBLE_CURVE,
            ))
    entries += [
        _entry("P2 conics z=1", (2,), (2,), 1, 0, _RATIONAL_ORACLE),
        _entry("P2 conics z=2", (2,), (2,), 2, 1, _RATIONAL_ORACLE),
        _entry("P2 quartics z=5", (2,), (4,), 5, 1, _RATIONAL_ORACLE),
        _entry("P3 quartics z=9", (3,), (4,), 9, 1, _RATIONAL_ORACLE),
        _entry("(P1)^3 O(2,2,2) z=7", (1, 1, 1), (2, 2, 2), 7, 1, _RATIONAL_ORACLE),
        _entry("(P1)^3 O(3,3,2) z=12", (1, 1, 1), (3, 3, 2), 12, 0, _PRODUCT_LINES),
        _entry("P2xP1xP1 O(3,3,2) z=24", (2, 1, 1), (3, 3, 2), 24, 0, _PRODUCT_LINES),
        _entry("(P1)^4 O(3,3,2,2) z=28", (1, 1, 1, 1), (3, 3, 2, 2), 28, 0, _PRODUCT_LINES),
        _entry("(P1)^4 O(3,3,2,2) z=29", (1, 1, 1, 1), (3, 3, 2, 2), 29, 0, _PRODUCT_LINES),
    ]
    return entries


@dataclass(frozen=True)
class CatalogOutcome:
    entry: CatalogEntry
    observed_defect: int

    @property
    def passed(self) -> bool:
        return self.observed_defect == self.entry.expected_defect

    def to_json(self) -> dict:
        e = self.entry
        return {
            "name": e.name,
            "format": e.format.to_json(),
            "bundle": e.bundle.to_json(),
            "z": e.z,
            "expected_defect": e.expected_defect,
            "observed_defect": self.observed_defect,
            "passed": self.passed,
            "provenance": e.provenance,
        }


def run_catalog(config: Config = Config(), entries: list[CatalogEntry] | None = None) -> list[CatalogOutcome]:
    entries = default_catalog() if entries is None else entries
    return [
        CatalogOutcome(e, secant_dimension(e.format, e.bundle, e.z, config).defect)
        for e in entries
    ]
