"""Text formats for Lie algebras and the bundled catalog of examples."""
from __future__ import annotations

from fractions import Fraction
from importlib import resources
from typing import Sequence


def _lines(text: str):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def parse_lie_text(text: str, names: Sequence[str] | None = None):
    """Parse ``dim n`` / optional ``names a b c`` / ``i j k c`` rows (1-based).

    Only rows with i < j are needed; the antisymmetric partner is filled in.
    Explicit rows for both orders must agree.
    """
    from .hopf import LieAlgebra

    dim = None
    file_names = None
    entries: dict[tuple[int, int, int], Fraction] = {}
    for line in _lines(text):
        parts = line.split()
        if parts[0] == "dim":
            dim = int(parts[1])
            continue
        if parts[0] == "names":
            file_names = parts[1:]
            continue
        if dim is None:
            raise ValueError("missing 'dim' line")
        if len(parts) != 4:
            raise ValueError(f"bad structure-constant row: {line!r}")
        i, j, k = (int(p) - 1 for p in parts[:3])
        c = Fraction(parts[3])
        for idx in (i, j, k):
            if not 0 <= idx < dim:
                raise ValueError(f"index out of range in row {line!r}")
        for key, val in (((i, j, k), c), ((j, i, k), -c)):
            if key in entries and entries[key] != val:
                raise ValueError(f"inconsistent antisymmetric rows at {key}")
            entries[key] = val
    if dim is None:
        raise ValueError("missing 'dim' line")
    names = list(names or file_names or [f"p{i + 1}" for i in range(dim)])
    if len(names) != dim:
        raise ValueError("number of names does not match dim")
    g = LieAlgebra.from_table(names, [(i, j, k, c) for (i, j, k), c in entries.items()])
    g.validate()
    return g


def read_data(name: str) -> str:
    return resources.files("udfq").joinpath("data", name).read_text()


def load_lie(name: str, names: Sequence[str] | None = None):
    if not name.endswith(".lie"):
        name += ".lie"
    return parse_lie_text(read_data(name), names)


def available(suffix: str = "") -> list[str]:
    d = resources.files("udfq").joinpath("data")
    return sorted(p.name for p in d.iterdir() if p.name.endswith(suffix))


def load_group(name: str):
    from .udf import GroupDescriptor

    if not name.endswith(".grp"):
        name += ".grp"
    return GroupDescriptor.parse(read_data(name))


def load_triple(name: str):
    from .structure import triple_from_text

    if not name.endswith(".tri"):
        name += ".tri"
    return triple_from_text(read_data(name), name[:-4])


def parse_sla_text(text: str) -> dict:
    """Split symplectic Lie algebra d ⋊ a: ``d n``, one ``rho`` row-major matrix
    per basis element of a, and ``eta`` (the certificate omega = delta eta on d)."""
    d, rho, eta, name = None, [], None, "s"
    for line in _lines(text):
        head, *rest = line.split()
        if head == "d":
            d = int(rest[0])
        elif head == "name":
            name = " ".join(rest)
        elif head == "rho":
            vals = [Fraction(x) for x in rest]
            if d is None or len(vals) != d * d:
                raise ValueError("rho rows need d*d entries after the 'd' line")
            rho.append([vals[i * d:(i + 1) * d] for i in range(d)])
        elif head == "eta":
            eta = [Fraction(x) for x in rest]
        else:
            raise ValueError(f"unknown line {line!r}")
    if d is None or not rho or eta is None or len(eta) != d:
        raise ValueError("need 'd', at least one 'rho' and an 'eta' of length d")
    return {"d": d, "rho": rho, "eta": eta, "name": name}


def load_sla(name: str) -> dict:
    if not name.endswith(".sla"):
        name += ".sla"
    return parse_sla_text(read_data(name))


def load_json(name: str) -> dict:
    import json

    if not name.endswith(".json"):
        name += ".json"
    return json.loads(read_data(name))
