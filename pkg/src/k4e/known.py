"""Published designs and relabeling certificates shipped with the package.

``data/certificates.json`` holds, per order, named designs, a list of
certificates ``(s, t, permutation in cycle notation, source, target)``,
the pairs of the admissible envelope known to be unattainable
(``excluded``) and the pairs whose certificate starts from the second
design rather than the first (``second_source``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .core import Design, validate_design, Permutation
from .spectrum import Certificate


@dataclass(frozen=True)
class CertificateSet:
    order: int
    designs: dict[str, Design]
    certificates: list[Certificate]
    excluded: frozenset[tuple[int, int]]
    second_source: frozenset[tuple[int, int]]


def _parse(v: int, rec: dict) -> CertificateSet:
    designs = {name: validate_design(v, blocks) for name, blocks in rec["designs"].items()}
    certs = [
        Certificate(int(c["s"]), int(c["t"]), Permutation.from_cycles(c["perm"], v),
                    c["source"], c["target"])
        for c in rec["certificates"]
    ]
    return CertificateSet(
        v, designs, certs,
        frozenset(tuple(p) for p in rec.get("excluded", [])),
        frozenset(tuple(p) for p in rec.get("second_source", [])),
    )


def load_certificates(path: str | Path | None = None) -> dict[int, CertificateSet]:
    if path is None:
        text = resources.files("k4e").joinpath("data/certificates.json").read_text()
    else:
        text = Path(path).read_text()
    raw = json.loads(text)
    return {int(v): _parse(int(v), rec) for v, rec in raw["orders"].items()}


def known_designs(v: int) -> dict[str, Design]:
    sets = load_certificates()
    return dict(sets[v].designs) if v in sets else {}
