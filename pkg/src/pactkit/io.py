"""Instance file ingestion and persistence.

Documents are JSON with a fixed canonical layout (stable key order, sorted
arrays, two-space indent, trailing newline), so saving a loaded canonical
file reproduces it byte for byte.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .core import StructuralError
from .action import PartialAction, build_partial_action, validate_partial_action
from .envelope import EnvelopingAction
from .groupoid import Groupoid, build_groupoid, validate_groupoid
from .topology import FiniteTopology, build_topology

FIXTURES_ENV = "PACT_FIXTURES"


@dataclass(frozen=True)
class InstanceFile:
    kind: str
    name: str
    description: str
    payload: object
    groupoid_topology: FiniteTopology | None
    carrier_topology: FiniteTopology | None


def fixtures_dir() -> Path:
    override = os.environ.get(FIXTURES_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("pactkit") / "fixtures"))


def resolve_instance_path(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    for candidate in (fixtures_dir() / name, fixtures_dir() / f"{name}.json"):
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"no such instance file or fixture: {name}")


# ---------------------------------------------------------------------------
# parsing


def _parse_topology(block: dict) -> FiniteTopology:
    if set(block) != {"carrier", "min_open"}:
        raise StructuralError("topology block must have exactly carrier and min_open")
    return build_topology(block["carrier"], {x: set(s) for x, s in block["min_open"]})


def _groupoid_payload_to_tables(payload: dict) -> dict:
    keys = set(payload)
    if not keys <= {"elements", "mul", "inv", "src", "rng"}:
        raise StructuralError(f"unknown keys in groupoid payload: {sorted(keys - {'elements','mul','inv','src','rng'})}")
    return {
        "elements": payload.get("elements", []),
        "mul": [tuple(t) for t in payload.get("mul", [])],
        "inv": [tuple(t) for t in payload.get("inv", [])],
        "src": [tuple(t) for t in payload.get("src", [])],
        "rng": [tuple(t) for t in payload.get("rng", [])],
    }


def _resolve_groupoid(ref) -> Groupoid:
    if isinstance(ref, dict):
        return build_groupoid(_groupoid_payload_to_tables(ref))
    if isinstance(ref, str):
        doc = load(str(resolve_instance_path(ref)))
        if doc.kind != "groupoid":
            raise StructuralError(f"groupoid reference {ref!r} points at a {doc.kind} instance")
        return doc.payload
    raise StructuralError("groupoid must be inline or a fixture/path reference")


def _action_tables(payload: dict) -> tuple[Groupoid, dict]:
    allowed = {"groupoid", "carrier", "anchor", "domains", "maps", "topology"}
    unknown = set(payload) - allowed
    if unknown:
        raise StructuralError(f"unknown keys in action payload: {sorted(unknown)}")
    for key in ("groupoid", "carrier", "anchor", "domains", "maps"):
        if key not in payload:
            raise StructuralError(f"action payload is missing {key!r}")
    G = _resolve_groupoid(payload["groupoid"])
    parts = {
        "carrier": payload["carrier"],
        "anchor": {x: e for x, e in payload["anchor"]},
        "domains": {g: frozenset(s) for g, s in payload["domains"]},
        "maps": {g: {x: y for x, y in t} for g, t in payload["maps"]},
    }
    return G, parts


def load(path: str, bypass: bool = False) -> InstanceFile:
    """Parse and validate an instance document; invalid payloads raise.

    With ``bypass`` the semantic action checks are skipped and the loaded
    value is tainted; structural defects still raise.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"{path}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(doc, dict):
        raise StructuralError(f"{path}: document must be a JSON object")
    allowed = {"kind", "meta", "payload", "topology", "classes", "embedding"}
    unknown = set(doc) - allowed
    if unknown:
        raise StructuralError(f"{path}: unknown document keys: {sorted(unknown)}")
    kind = doc.get("kind")
    meta = doc.get("meta", {})
    name = meta.get("name", Path(path).stem)
    description = meta.get("description", "")
    payload = doc.get("payload")
    if payload is None:
        raise StructuralError(f"{path}: missing payload")

    if kind == "groupoid":
        tables = _groupoid_payload_to_tables(payload)
        report = validate_groupoid(tables)
        report.raise_if_failed(f"{path}: groupoid payload")
        G = build_groupoid(tables)
        T = _parse_topology(doc["topology"]) if "topology" in doc else None
        if T is not None and set(T.carrier) != set(G.elements):
            raise StructuralError(f"{path}: topology carrier does not match the elements")
        return InstanceFile(kind, name, description, G, T, None)

    if kind == "action":
        G, parts = _action_tables(payload)
        report = validate_partial_action(
            G, parts["carrier"], parts["anchor"], parts["domains"], parts["maps"]
        )
        if not bypass:
            report.raise_if_failed(f"{path}: action payload")
        A = build_partial_action(
            G, parts["carrier"], parts["anchor"], parts["domains"], parts["maps"], bypass=bypass
        )
        T_G = T_M = None
        topo_block = payload.get("topology", doc.get("topology"))
        if topo_block is not None:
            unknown_t = set(topo_block) - {"groupoid", "carrier"}
            if unknown_t:
                raise StructuralError(f"{path}: unknown topology keys: {sorted(unknown_t)}")
            if "groupoid" in topo_block:
                T_G = _parse_topology(topo_block["groupoid"])
                if set(T_G.carrier) != set(G.elements):
                    raise StructuralError(f"{path}: groupoid topology carrier mismatch")
            if "carrier" in topo_block:
                T_M = _parse_topology(topo_block["carrier"])
                if set(T_M.carrier) != set(A.carrier):
                    raise StructuralError(f"{path}: carrier topology mismatch")
        return InstanceFile(kind, name, description, A, T_G, T_M)

    raise StructuralError(f"{path}: unknown instance kind {kind!r}")


def load_envelope(path: str, base: PartialAction) -> EnvelopingAction:
    """Rebuild an enveloping action from a saved envelope document.

    The document's action payload, classes block, and embedding block are
    reassembled over the supplied base; coherence is the caller's concern
    (run verify_globalization before trusting the result).
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"{path}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if doc.get("kind") != "action" or "classes" not in doc or "embedding" not in doc:
        raise StructuralError(f"{path}: not an envelope document")
    G, parts = _action_tables(doc["payload"])
    if G != base.groupoid:
        raise StructuralError(f"{path}: envelope groupoid differs from the base groupoid")
    action = build_partial_action(
        G, parts["carrier"], parts["anchor"], parts["domains"], parts["maps"]
    )
    classes = []
    class_of = {}
    for token, members in doc["classes"]:
        block = frozenset((g, x) for g, x in members)
        classes.append(block)
        for p in block:
            class_of[p] = token
    embedding = {x: t for x, t in doc["embedding"]}
    pairs = tuple(sorted(class_of))
    if set(embedding) != set(base.carrier):
        raise StructuralError(f"{path}: embedding does not cover the base carrier")
    if {t for t in embedding.values()} - set(action.carrier):
        raise StructuralError(f"{path}: embedding leaves the envelope carrier")
    return EnvelopingAction(
        base=base,
        pairs=pairs,
        classes=tuple(sorted(classes, key=min)),
        class_of=class_of,
        action=action,
        embedding=embedding,
    )


def inspect(path: str):
    """Parse a document and return (kind, report) without raising on violations."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"{path}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(doc, dict) or "kind" not in doc or "payload" not in doc:
        raise StructuralError(f"{path}: document must be an object with kind and payload")
    kind = doc["kind"]
    if kind == "groupoid":
        return kind, validate_groupoid(_groupoid_payload_to_tables(doc["payload"]))
    if kind == "action":
        G, parts = _action_tables(doc["payload"])
        return kind, validate_partial_action(
            G, parts["carrier"], parts["anchor"], parts["domains"], parts["maps"]
        )
    raise StructuralError(f"{path}: unknown instance kind {kind!r}")


# ---------------------------------------------------------------------------
# canonical serialization


def topology_block(T: FiniteTopology) -> dict:
    return {
        "carrier": sorted(T.carrier),
        "min_open": [[x, sorted(T.min_open[x])] for x in sorted(T.carrier)],
    }


def groupoid_payload(G: Groupoid) -> dict:
    return {
        "elements": sorted(G.elements),
        "mul": sorted([g, h, k] for (g, h), k in G.mul.items()),
        "inv": sorted([g, v] for g, v in G.inv.items()),
        "src": sorted([g, v] for g, v in G.src.items()),
        "rng": sorted([g, v] for g, v in G.rng.items()),
    }


def action_payload(
    A: PartialAction,
    T_G: FiniteTopology | None = None,
    T_M: FiniteTopology | None = None,
) -> dict:
    payload = {
        "groupoid": groupoid_payload(A.groupoid),
        "carrier": sorted(A.carrier),
        "anchor": sorted([x, e] for x, e in A.anchor.items()),
        "domains": [[g, sorted(A.domains[g])] for g in sorted(A.domains)],
        "maps": [[g, sorted([x, y] for x, y in A.maps[g].items())] for g in sorted(A.maps)],
    }
    if T_G is not None or T_M is not None:
        block = {}
        if T_G is not None:
            block["groupoid"] = topology_block(T_G)
        if T_M is not None:
            block["carrier"] = topology_block(T_M)
        payload["topology"] = block
    return payload


def groupoid_document(
    G: Groupoid, name: str, description: str = "", T: FiniteTopology | None = None
) -> dict:
    doc = {"kind": "groupoid", "meta": {"name": name, "description": description}}
    doc["payload"] = groupoid_payload(G)
    if T is not None:
        doc["topology"] = topology_block(T)
    return doc


def action_document(
    A: PartialAction,
    name: str,
    description: str = "",
    T_G: FiniteTopology | None = None,
    T_M: FiniteTopology | None = None,
) -> dict:
    return {
        "kind": "action",
        "meta": {"name": name, "description": description},
        "payload": action_payload(A, T_G, T_M),
    }


def envelope_document(E: EnvelopingAction, name: str, description: str = "") -> dict:
    doc = action_document(E.action, name, description)
    doc["classes"] = [
        [E.class_of[min(block)], sorted([g, x] for g, x in block)]
        for block in sorted(E.classes, key=lambda b: E.class_of[min(b)])
    ]
    doc["embedding"] = sorted([x, t] for x, t in E.embedding.items())
    return doc


def _render(value, indent: int) -> str:
    pad = " " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f'{pad}  "{key}": {_render(val, indent + 2)}' for key, val in value.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        inline = json.dumps(list(value), ensure_ascii=False)
        if "{" not in inline and len(inline) <= 72:
            return inline
        items = [f"{pad}  {_render(v, indent + 2)}" for v in value]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    return json.dumps(value, ensure_ascii=False)


def canonical_json(doc: dict) -> str:
    return _render(doc, 0) + "\n"


def save(path: str, doc: dict) -> None:
    Path(path).write_text(canonical_json(doc), encoding="utf-8")
