"""Loading and verifying admissible integer tuples stored as JSON arrays.

The package ships ``data/engelsma_105.json``, an admissible 105-tuple of
diameter 600.  Verification is pure: it re-runs the admissibility check on
every prime up to k and recomputes the diameter.
"""

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .rings import RingDescriptor
from .tuples import Tuple, diameter, is_admissible

SHIPPED_NAME = "engelsma_105.json"
SHIPPED_DIAMETER = 600


class TupleFileError(ValueError):
    """The file is not a strictly increasing JSON array of integers."""


@dataclass(frozen=True)
class TupleRecord:
    source: str
    elements: tuple
    verified: bool
    diameter: int
    witness: int = None

    @property
    def k(self):
        return len(self.elements)

    def to_json(self):
        out = {"source": self.source, "k": self.k, "verified": self.verified, "diameter": self.diameter}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def parse_tuple_file(text, source="<string>"):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TupleFileError(f"{source}: not valid JSON ({exc.msg})") from None
    if not isinstance(data, list) or not data:
        raise TupleFileError(f"{source}: expected a nonempty JSON array")
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in data):
        raise TupleFileError(f"{source}: every entry must be an integer")
    if any(b <= a for a, b in zip(data, data[1:])):
        raise TupleFileError(f"{source}: entries must be strictly increasing")
    return tuple(data)


def verify_elements(elements, source, expected_diameter=None):
    t = Tuple(RingDescriptor.integers(), elements)
    rep = is_admissible(t)
    diam = diameter(t)
    ok = rep.admissible and (expected_diameter is None or diam == expected_diameter)
    return TupleRecord(source, tuple(elements), ok, diam, None if rep.admissible else rep.witness)


def load_and_verify(path, expected_diameter=None):
    """Parse a tuple file and check admissibility (and the diameter, when one is expected)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise TupleFileError(f"{path}: {exc.strerror}") from None
    return verify_elements(parse_tuple_file(text, str(path)), str(path), expected_diameter)


def shipped_path():
    """Path of the bundled 105-tuple, or None when the data file is missing."""
    p = resources.files("mtsieve") / "data" / SHIPPED_NAME
    return Path(str(p)) if p.is_file() else None


def verify_shipped():
    path = shipped_path()
    if path is None:
        return None
    rec = load_and_verify(path, SHIPPED_DIAMETER)
    return TupleRecord(f"data/{SHIPPED_NAME}", rec.elements, rec.verified, rec.diameter, rec.witness)
