"""JSON certificates: a set, its claimed cap, and how it was made.

``verified`` in a loaded certificate is never trusted from the file; it is
recomputed by an exact profile pass.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from .errors import CertificateError
from .groups import GroupKind, GroupSpec
from .repfn import Flavor, SidonSet

SCHEMA_VERSION = 1

_BUILDERS = {
    GroupKind.INTERVAL: GroupSpec.interval,
    GroupKind.CYCLIC: GroupSpec.cyclic,
    GroupKind.PRODUCT: GroupSpec.product,
}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


def to_dict(A: SidonSet) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "group": A.group.describe(),
        "elements": [list(x) if isinstance(x, tuple) else int(x) for x in A.elements],
        "claimed_g": A.claimed_g,
        "flavor": A.flavor.value,
        "provenance": _jsonable(A.provenance),
        "verified": bool(A.verified),
        "achieved_g": A.achieved_g,
    }


def dumps(A: SidonSet) -> str:
    return json.dumps(to_dict(A), sort_keys=True)


def write_certificate(A: SidonSet, path) -> None:
    Path(path).write_text(dumps(A) + "\n")


def from_dict(data: dict) -> SidonSet:
    """Rebuild and freshly verify a certificate."""
    try:
        if data["schema_version"] != SCHEMA_VERSION:
            raise CertificateError(f"unsupported schema_version {data['schema_version']}")
        group = _BUILDERS[GroupKind(data["group"]["kind"])](int(data["group"]["param"]))
        elems = [tuple(x) if isinstance(x, list) else x for x in data["elements"]]
        A = SidonSet.build(
            group,
            elems,
            claimed_g=data.get("claimed_g"),
            flavor=Flavor(data.get("flavor", "ordered")),
            provenance=data.get("provenance") or {},
        )
    except CertificateError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateError(f"malformed certificate: {exc!r}") from exc
    return A.verify()


def read_certificate(path) -> SidonSet:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CertificateError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise CertificateError("certificate must be a JSON object")
    return from_dict(data)


def density(A: SidonSet, g: int | None = None) -> float:
    """|A| / sqrt(g * size of the ambient set); intervals {0..n} count as length n."""
    g = A.claimed_g if g is None else g
    size = A.group.param if A.group.kind is GroupKind.INTERVAL else A.group.order
    if not g or not size:
        return 0.0
    return len(A) / math.sqrt(g * size)
