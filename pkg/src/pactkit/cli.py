"""Command-line surface tying the modules together.

Exit codes: 0 when the command succeeds and every checked property holds,
1 when a property does not hold or no witness exists, 2 on input errors.
Output is a pure function of the input files.
"""

from __future__ import annotations

import argparse
import json
import sys

from .core import (
    CapExceededError,
    FalsificationError,
    PreconditionError,
    StructuralError,
    ValidationFailed,
)
from . import io as instancefiles
from .action import action_graphs, classify, is_global, orbit_relation
from .coset import build_coset_action, coset_envelope_isomorphism
from .envelope import envelope_topology, globalize, verify_globalization
from .morphisms import find_isomorphism
from .topology import discrete


def _bool(b) -> str:
    return "true" if b else "false"


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _load_action(args, path):
    doc = instancefiles.load(
        str(instancefiles.resolve_instance_path(path)),
        bypass=getattr(args, "bypass_validation", False),
    )
    if doc.kind != "action":
        raise StructuralError(f"{path}: expected an action instance, found {doc.kind}")
    return doc


def cmd_validate(args) -> int:
    path = str(instancefiles.resolve_instance_path(args.instance))
    kind, report = instancefiles.inspect(path)
    payload = {
        "command": "validate",
        "kind": kind,
        "ok": report.ok,
        "violations": [
            {"condition": v.condition, "witness": list(v.witness), "detail": v.detail}
            for v in report.violations
        ],
        "notes": list(report.notes),
    }
    lines = ["ok" if report.ok else "invalid"]
    lines += [str(v) for v in report.violations]
    lines += [f"note: {n}" for n in report.notes]
    _emit(args, payload, lines)
    return 0 if report.ok else 1


def cmd_info(args) -> int:
    doc = _load_action_or_groupoid(args)
    if doc.kind == "groupoid":
        G = doc.payload
        payload = {
            "command": "info",
            "kind": "groupoid",
            "name": doc.name,
            "description": doc.description,
            "elements": len(G.elements),
            "identities": len(G.identities),
            "composable_pairs": len(G.mul),
        }
        lines = [
            "kind: groupoid",
            f"name: {doc.name}",
            f"elements: {len(G.elements)}",
            f"identities: {len(G.identities)}",
            f"composable_pairs: {len(G.mul)}",
        ]
    else:
        A = doc.payload
        rel = orbit_relation(A)
        cls = classify(A)
        payload = {
            "command": "info",
            "kind": "action",
            "name": doc.name,
            "description": doc.description,
            "carrier": len(A.carrier),
            "groupoid_elements": len(A.groupoid.elements),
            "orbits": len(rel.classes),
            "global": is_global(A),
            "transitive": cls.transitive,
            "free": cls.free,
            "tainted": A.tainted,
        }
        lines = [
            "kind: action",
            f"name: {doc.name}",
            f"carrier: {len(A.carrier)}",
            f"groupoid_elements: {len(A.groupoid.elements)}",
            f"orbits: {len(rel.classes)}",
            f"global: {_bool(is_global(A))}",
            f"transitive: {_bool(cls.transitive)}, free: {_bool(cls.free)}",
        ]
        if A.tainted:
            lines.append("tainted: true")
    _emit(args, payload, lines)
    return 0


def _load_action_or_groupoid(args):
    return instancefiles.load(
        str(instancefiles.resolve_instance_path(args.instance)),
        bypass=getattr(args, "bypass_validation", False),
    )


def cmd_classify(args) -> int:
    doc = _load_action(args, args.instance)
    cls = classify(doc.payload)
    payload = {
        "command": "classify",
        "transitive": cls.transitive,
        "free": cls.free,
        "tainted": doc.payload.tainted,
    }
    lines = [f"transitive: {_bool(cls.transitive)}, free: {_bool(cls.free)}"]
    if doc.payload.tainted:
        lines.append("tainted: true")
    _emit(args, payload, lines)
    return 0


def cmd_orbits(args) -> int:
    doc = _load_action(args, args.instance)
    rel = orbit_relation(doc.payload)
    payload = {
        "command": "orbits",
        "orbits": [sorted(block) for block in rel.classes],
        "is_equivalence": rel.is_equivalence,
        "witness": list(rel.witness) if rel.witness else None,
        "tainted": rel.tainted,
    }
    lines = [f"{min(block)}: {' '.join(sorted(block))}" for block in rel.classes]
    if not rel.is_equivalence and rel.witness:
        x, z = rel.witness
        lines.append(f"non-transitive: {x} ~ {rel.via} ~ {z} but {x} !~ {z}")
    if rel.tainted:
        lines.append("tainted: true")
    _emit(args, payload, lines)
    return 0 if rel.is_equivalence else 1


def cmd_globalize(args) -> int:
    doc = _load_action(args, args.instance)
    E = globalize(doc.payload)
    report = verify_globalization(E)
    if not report.ok:
        raise FalsificationError("constructed envelope fails its defining conditions")
    document = instancefiles.envelope_document(
        E, name=f"{doc.name}-envelope", description=f"enveloping action of {doc.name}"
    )
    topo_payload = None
    if args.topology:
        T_G = doc.groupoid_topology or discrete(E.base.groupoid.elements)
        T_M = doc.carrier_topology or discrete(E.base.carrier)
        topo_payload = envelope_topology(E, T_G, T_M).booleans()
    payload = {
        "command": "globalize",
        "classes": len(E.classes),
        "document": document,
        "topology_report": topo_payload,
    }
    if args.output:
        instancefiles.save(args.output, document)
        lines = [f"classes: {len(E.classes)}", f"written: {args.output}"]
    else:
        lines = [instancefiles.canonical_json(document).rstrip("\n")]
    if topo_payload is not None and not args.output:
        lines += [f"{k}: {_bool(v)}" for k, v in sorted(topo_payload.items())]
    _emit(args, payload, lines)
    return 0


def cmd_isomorphic(args) -> int:
    doc_a = _load_action(args, args.first)
    doc_b = _load_action(args, args.second)
    witness = find_isomorphism(doc_a.payload, doc_b.payload)
    payload = {
        "command": "isomorphic",
        "isomorphic": witness is not None,
        "witness": dict(sorted(witness.table.items())) if witness else None,
    }
    if witness is None:
        _emit(args, payload, ["none"])
        return 1
    _emit(args, payload, [f"{x} -> {y}" for x, y in sorted(witness.table.items())])
    return 0


def cmd_coset_check(args) -> int:
    doc = _load_action(args, args.instance)
    A = doc.payload
    if args.at not in A.carrier:
        raise StructuralError(f"--at {args.at!r} is not a carrier point")
    if args.envelope:
        E = instancefiles.load_envelope(
            str(instancefiles.resolve_instance_path(args.envelope)), A
        )
        if not verify_globalization(E).ok:
            raise StructuralError(
                f"{args.envelope}: document is not a globalization of this base"
            )
    else:
        E = globalize(A)
    C = build_coset_action(A, args.at)
    try:
        witness = coset_envelope_isomorphism(C, E)
    except PreconditionError as exc:
        payload = {
            "command": "coset-check",
            "holds": False,
            "reason": str(exc),
            "witness": None,
            "classes": len(C.classes),
        }
        _emit(args, payload, [f"precondition failed: {exc}"])
        return 1
    payload = {
        "command": "coset-check",
        "holds": True,
        "reason": None,
        "witness": dict(sorted(witness.table.items())),
        "classes": len(C.classes),
    }
    _emit(args, payload, [f"{c} -> {t}" for c, t in sorted(witness.table.items())])
    return 0


def cmd_topology_report(args) -> int:
    doc = _load_action(args, args.instance)
    A = doc.payload
    T_G = doc.groupoid_topology or discrete(A.groupoid.elements)
    T_M = doc.carrier_topology or discrete(A.carrier)
    graphs = action_graphs(A, T_G, T_M)
    E = globalize(A)
    report = envelope_topology(E, T_G, T_M)
    booleans = report.booleans()
    booleans["graph_open"] = graphs.graph_open
    booleans["graph_closed"] = graphs.graph_closed
    payload = {"command": "topology-report", "skipped": report.skipped, **booleans}
    lines = []
    for key in (
        "graph_open",
        "graph_closed",
        "pi_open",
        "iota_open_embedding",
        "beta_continuous",
        "fiber_formula_holds",
        "MG_hausdorff",
        "relation_closed",
    ):
        value = booleans[key]
        lines.append(f"{key}: {_bool(value) if value is not None else 'skipped'}")
    _emit(args, payload, lines)
    checked = [v for v in booleans.values() if v is not None]
    return 0 if all(checked) and not report.skipped else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pactkit",
        description="Finite groupoid partial actions: validation, orbits, envelopes, cosets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, instances=("instance",)):
        for name in instances:
            p.add_argument(name)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument(
            "--bypass-validation",
            action="store_true",
            help="skip semantic validation; taints the result",
        )

    common(sub.add_parser("validate", help="check an instance file"))
    common(sub.add_parser("info", help="summarize an instance file"))
    common(sub.add_parser("classify", help="transitivity and freeness of an action"))
    common(sub.add_parser("orbits", help="orbit partition of an action"))

    p = sub.add_parser("globalize", help="construct the enveloping action")
    common(p)
    p.add_argument("-o", "--output", help="write the envelope document here")
    p.add_argument("--topology", action="store_true", help="include the topology report")

    p = sub.add_parser("isomorphic", help="search for an equivariant isomorphism")
    common(p, instances=("first", "second"))

    p = sub.add_parser("coset-check", help="compare the coset action with the envelope")
    common(p)
    p.add_argument("--at", required=True, help="basepoint in the carrier")
    p.add_argument("--envelope", help="use a saved envelope document instead of rebuilding")

    common(sub.add_parser("topology-report", help="graph and envelope topology booleans"))

    parser.set_defaults(func=None)
    for name, fn in (
        ("validate", cmd_validate),
        ("info", cmd_info),
        ("classify", cmd_classify),
        ("orbits", cmd_orbits),
        ("globalize", cmd_globalize),
        ("isomorphic", cmd_isomorphic),
        ("coset-check", cmd_coset_check),
        ("topology-report", cmd_topology_report),
    ):
        sub.choices[name].set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationFailed, StructuralError, CapExceededError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
