"""Report persistence and the independent certificate re-validator.

The validator works from raw multiplication tables and certificate records
only; it deliberately imports nothing from the search or voltage code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

SCHEMA_VERSION = 1
VOLATILE_KEYS = ("generated_at",)


class ReportError(ValueError):
    pass


# --------------------------------------------------------------------------
# independent re-validation


class _Group:
    """``Z_p ⋊_τ Ḡ`` (or the table group itself when ``p`` is None)."""

    def __init__(self, table: list[list[int]], p: Optional[int], twist: Optional[list[int]]) -> None:
        self.table = table
        self.k = len(table)
        self.p = p
        if p is None:
            self.order = self.k
            return
        if twist is None or len(twist) != self.k:
            raise ReportError("twist must have one entry per quotient element")
        for a in range(self.k):
            for b in range(self.k):
                if twist[table[a][b]] % p != twist[a] * twist[b] % p:
                    raise ReportError("twist is not a homomorphism")
        self.twist = twist
        self.order = self.k * p

    def mul(self, x: int, y: int) -> int:
        if self.p is None:
            return self.table[x][y]
        p = self.p
        g1, z1 = divmod(x, p)
        g2, z2 = divmod(y, p)
        return self.table[g1][g2] * p + (z1 + self.twist[g1] * z2) % p

    def inv(self, x: int) -> int:
        for y in range(self.order):
            if self.mul(x, y) == 0:
                return y
        raise ReportError("element without inverse")


def _check_table(table) -> None:
    n = len(table)
    if any(len(row) != n or sorted(row) != list(range(n)) for row in table):
        raise ReportError("table rows are not permutations")
    if list(table[0]) != list(range(n)) or [row[0] for row in table] != list(range(n)):
        raise ReportError("element 0 is not the identity")


def expand_vertices(cert: dict, G: _Group) -> list[int]:
    if cert["form"] == "vertices":
        return [int(v) for v in cert["vertices"]]
    if cert["form"] != "walk":
        raise ReportError(f"unknown certificate form {cert['form']!r}")
    gens = cert["generators"]
    steps = []
    for j, e in cert["walk"]:
        s = gens[j]
        steps.append(s if e > 0 else G.inv(s))
    steps = steps * int(cert["repeat"])
    verts, v = [], 0
    for s in steps:
        verts.append(v)
        v = G.mul(v, s)
    if v != 0:
        raise ReportError("walk does not close")
    return verts


def validate_record(cert: dict, groups: dict[str, dict]) -> Optional[str]:
    """``None`` when the certificate is valid, otherwise the reason."""
    try:
        gdata = groups.get(cert["group"])
        if gdata is None:
            return f"unknown group {cert['group']!r}"
        table = gdata["table"]
        _check_table(table)
        G = _Group(table, cert.get("p"), cert.get("twist"))
        conn = set()
        for s in cert["generators"]:
            if not 0 <= s < G.order:
                return "generator out of range"
            conn.add(s)
            conn.add(G.inv(s))
        verts = expand_vertices(cert, G)
        if sorted(verts) != list(range(G.order)):
            return "vertices are not a permutation of the group"
        pairs = list(zip(verts, verts[1:]))
        if cert["kind"] == "cycle":
            if G.order >= 3:
                pairs.append((verts[-1], verts[0]))
        elif cert["kind"] != "path":
            return f"unknown kind {cert['kind']!r}"
        for u, v in pairs:
            if G.mul(G.inv(u), v) not in conn:
                return f"{u} and {v} are not adjacent"
        ends = cert.get("endpoints")
        if ends is not None and [verts[0], verts[-1]] != list(ends):
            return "path endpoints differ from the claimed ones"
    except (KeyError, IndexError, TypeError, ReportError) as exc:
        return f"malformed certificate: {exc}"
    return None


@dataclass
class ValidationResult:
    checked: int = 0
    bad: list[tuple[str, str]] = field(default_factory=list)
    dangling: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.bad and not self.dangling


def validate_certificates(certs: list[dict], groups: dict[str, dict], cases: Optional[list[dict]] = None) -> ValidationResult:
    """Re-check every certificate; with ``cases``, also check that each
    referenced certificate exists."""
    res = ValidationResult()
    ids = set()
    for cert in certs:
        res.checked += 1
        ids.add(cert.get("id"))
        reason = validate_record(cert, groups)
        if reason is not None:
            res.bad.append((str(cert.get("id")), reason))
    for case in cases or ():
        for o in case.get("outcomes", ()):
            if o.get("cert") is not None and o["cert"] not in ids:
                res.dangling.append(f"{case['key']} -> {o['cert']}")
    return res


# --------------------------------------------------------------------------
# files


def certs_path_for(path: Path) -> Path:
    return path.with_name(path.stem + ".certs.jsonl")


def report_json(report, certs_name: Optional[str] = None, timestamp: bool = True) -> dict:
    data = {
        "schema_version": SCHEMA_VERSION,
        "config": report.config,
        "summary": report.summary,
        "unresolved": report.unresolved,
        "cases": [c.to_json() for c in report.cases],
        "certificates": certs_name,
    }
    if timestamp:
        data["generated_at"] = datetime.now(timezone.utc).isoformat()
    return data


def write_report(report, path) -> Path:
    """Report JSON at ``path`` plus a JSON-lines certificate file next to it."""
    path = Path(path)
    cpath = certs_path_for(path)
    with open(cpath, "w") as fh:
        for gid in sorted(report.store.groups):
            fh.write(json.dumps({"type": "group", "id": gid, **report.store.groups[gid]}, sort_keys=True) + "\n")
        for cert in report.store.certs:
            fh.write(json.dumps({"type": "cert", **cert}, sort_keys=True) + "\n")
    with open(path, "w") as fh:
        json.dump(report_json(report, cpath.name), fh, indent=1, sort_keys=True)
        fh.write("\n")
    return cpath


def load_certificates(path) -> tuple[dict[str, dict], list[dict]]:
    groups, certs = {}, []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            rec = json.loads(line)
            kind = rec.pop("type", None)
            if kind == "group":
                groups[rec.pop("id")] = rec
            elif kind == "cert":
                certs.append(rec)
            else:
                raise ReportError(f"{path}:{lineno}: unknown record type {kind!r}")
    return groups, certs


def load_report_json(path) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or data.get("schema_version") != SCHEMA_VERSION:
        raise ReportError(f"unsupported report schema: {data.get('schema_version') if isinstance(data, dict) else None!r}")
    for key in ("config", "summary", "unresolved", "cases"):
        if key not in data:
            raise ReportError(f"report lacks {key!r}")
    return data


def read_report(path):
    from .pipeline import CaseRecord, CertStore, VerificationReport

    path = Path(path)
    data = load_report_json(path)
    store = CertStore()
    if data.get("certificates"):
        store.groups, store.certs = load_certificates(path.with_name(data["certificates"]))
    report = VerificationReport(config=data["config"], cases=[CaseRecord.from_json(c) for c in data["cases"]], store=store)
    if report.summary != data["summary"] or report.unresolved != data["unresolved"]:
        raise ReportError("summary does not match the case list")
    return report


def strip_volatile(data: dict) -> dict:
    return {k: v for k, v in data.items() if k not in VOLATILE_KEYS}


def validate_report_file(path) -> ValidationResult:
    path = Path(path)
    data = load_report_json(path)
    if not data.get("certificates"):
        return ValidationResult()
    groups, certs = load_certificates(path.with_name(data["certificates"]))
    return validate_certificates(certs, groups, data["cases"])
