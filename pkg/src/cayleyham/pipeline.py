"""Desk-scale verification that Cayley graphs of order kp are hamiltonian.

The work is split into independent cases, each producing a
:class:`CaseRecord`.  A record is resolved only when every claim it makes
is backed by a certificate that has already been validated; certificates
are collected in a :class:`CertStore` and written alongside the report.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from .catalog import Catalog, default_catalog, is_prime, largest_prime_factor
from .certs import CycleCert, validate_cert, validate_group_walk
from .graphs import analyze, cayley_graph
from .groups import Character, FiniteGroup, abelian_characters, semidirect_zn, sylow_info
from .gensets import irredundant_gensets_up_to_equiv
from .hamilton import (
    SearchBudget,
    SearchUndecided,
    classify_conn_laceable,
    enumerate_ham_cycles,
    find_ham_cycle,
    ham_path,
    sample_ham_cycles,
    sample_ham_cycles_redundant,
)
from .specialcases import (
    CaseConstructionError,
    CaseMatch,
    all_special_cases,
    construct_case_cycle,
    discharge_record,
    double_edge_lift,
)
from .voltage import (
    Step,
    admissible_primes,
    concrete_row,
    count_normalized_lifts,
    find_nonzero_det,
    full_z_vector,
    genseq_from_cycle,
    normalized_lifts,
    partition_for_matrix,
    residual_primes,
    twist_for,
    voltage_matrix,
    voltage_row,
)

RESOLVED, UNRESOLVED = "resolved", "unresolved"
LARGE_K_PRESET = (24, 32, 36, 40, 42, 45)
KP_BOUND = 12  # anomalous orders k·p for k ≤ 12 are all catalogued


class PipelineError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    k_max: int = 12
    p_cap: int = 500
    sample_count: int = 20
    sample_primes: int = 2
    spot_prime_cap: int = 37
    enum_limit: int = 2000
    max_lifts: int = 200_000
    budget_ms: int = 60_000
    seed: int = 0
    workers: int = 1
    max_order: int = 16

    def budget(self) -> SearchBudget:
        return SearchBudget(time_limit_ms=self.budget_ms, rng_seed=self.seed)

    def to_json(self) -> dict:
        return asdict(self)


# --------------------------------------------------------------------------
# records and certificate storage


@dataclass
class CaseRecord:
    key: str
    k: int
    branch: str
    method: str
    status: str
    quotient: Optional[list[int]] = None
    genset: list[int] = field(default_factory=list)
    character: Optional[dict] = None
    norm: Optional[int] = None
    residual_primes: list[int] = field(default_factory=list)
    outcomes: list[dict] = field(default_factory=list)
    reductions: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def resolved(self) -> bool:
        return self.status == RESOLVED

    def to_json(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_json(data: dict) -> "CaseRecord":
        return CaseRecord(**data)


class CertStore:
    """Certificates as plain JSON records plus the group tables they refer to."""

    def __init__(self, prefix: str = "") -> None:
        self.prefix = prefix
        self.certs: list[dict] = []
        self.groups: dict[str, dict] = {}

    def group_id(self, G: FiniteGroup) -> str:
        if G.catalog_id is not None:
            gid = "g%d.%d" % tuple(G.catalog_id)
        else:
            gid = f"{self.prefix}/anon{len(self.groups)}"
        if gid not in self.groups:
            self.groups[gid] = {"order": G.order, "name": G.name, "table": [list(r) for r in G.table]}
        return gid

    def _add(self, rec: dict) -> str:
        rec["id"] = f"{self.prefix}#{len(self.certs)}"
        self.certs.append(rec)
        return rec["id"]

    def add_vertices(self, group: str, generators: Sequence[int], cert: CycleCert, p=None, twist=None, **extra) -> str:
        return self._add(
            {
                **extra,
                "kind": cert.kind,
                "form": "vertices",
                "group": group,
                "p": p,
                "twist": list(twist) if twist is not None else None,
                "generators": [int(s) for s in generators],
                "vertices": [int(v) for v in cert.vertices],
                "origin": cert.origin,
            }
        )

    def add_walk(self, group: str, generators, walk: Sequence[Step], repeat: int, p=None, twist=None, origin="fgl") -> str:
        return self._add(
            {
                "kind": "cycle",
                "form": "walk",
                "group": group,
                "p": p,
                "twist": list(twist) if twist is not None else None,
                "generators": [int(s) for s in generators],
                "walk": [[int(j), int(e)] for j, e in walk],
                "repeat": int(repeat),
                "origin": origin,
            }
        )

    def merge(self, other: "CertStore") -> None:
        self.certs.extend(other.certs)
        for gid, g in other.groups.items():
            self.groups.setdefault(gid, g)


@dataclass
class VerificationReport:
    config: dict
    cases: list[CaseRecord]
    store: CertStore = field(default_factory=CertStore)

    @property
    def unresolved(self) -> list[str]:
        return [c.key for c in self.cases if not c.resolved]

    @property
    def summary(self) -> dict:
        methods: dict[str, int] = {}
        for c in self.cases:
            methods[c.method] = methods.get(c.method, 0) + 1
        return {
            "cases": len(self.cases),
            "resolved": sum(c.resolved for c in self.cases),
            "unresolved": len(self.unresolved),
            "certificates": len(self.store.certs),
            "methods": dict(sorted(methods.items())),
        }

    @property
    def success(self) -> bool:
        return not self.unresolved


# --------------------------------------------------------------------------
# quotient data shared by all characters


def _tree_words(Gbar: FiniteGroup, Sbar: Sequence[int]) -> dict[int, list[Step]]:
    words: dict[int, list[Step]] = {0: []}
    queue = [0]
    for g in queue:
        for j, s in enumerate(Sbar):
            for sign, x in ((1, s), (-1, Gbar.inv(s))):
                h = Gbar.mul(g, x)
                if h not in words:
                    words[h] = words[g] + [(j, sign)]
                    queue.append(h)
    return words


def closed_walk_basis(Gbar: FiniteGroup, Sbar: Sequence[int]) -> list[list[Step]]:
    """Closed walks ``path(g)·s_j·path(g s_j)⁻¹``; their voltages span all voltages."""
    words = _tree_words(Gbar, Sbar)
    if len(words) != Gbar.order:
        raise PipelineError("quotient generating set does not generate")
    out = []
    for g in range(Gbar.order):
        for j, s in enumerate(Sbar):
            h = Gbar.mul(g, s)
            back = [(i, -e) for i, e in reversed(words[h])]
            walk = words[g] + [(j, 1)] + back
            if words[h] != words[g] + [(j, 1)]:
                out.append(walk)
    return out


class QuotientCase:
    """A quotient ``(Ḡ, S̄)`` with its sampled hamiltonian cycles."""

    def __init__(self, Gbar: FiniteGroup, Sbar: Sequence[int], cycles: list[list[Step]], enum_limit: int) -> None:
        self.Gbar = Gbar
        self.Sbar = tuple(Sbar)
        self.cycles = cycles
        self.basis = closed_walk_basis(Gbar, self.Sbar)
        self.enum_limit = enum_limit
        self._enumerated: Optional[list[list[Step]]] = None

    @staticmethod
    def irredundant(Gbar, Sbar, config: PipelineConfig) -> "QuotientCase":
        certs = sample_ham_cycles(Gbar, Sbar, config.sample_count, config.budget())
        cycles = [genseq_from_cycle(Gbar, Sbar, c.vertices) for c in certs]
        return QuotientCase(Gbar, Sbar, cycles, config.enum_limit)

    def enumerated(self) -> list[list[Step]]:
        if self._enumerated is None:
            if self.Gbar.order <= 2:
                self._enumerated = list(self.cycles)
            else:
                graph = cayley_graph(self.Gbar, self.Sbar)
                found = enumerate_ham_cycles(graph, limit=self.enum_limit)
                self._enumerated = [genseq_from_cycle(self.Gbar, self.Sbar, c.vertices) for c in found]
        return self._enumerated


def _rows_mod_p(qc: QuotientCase, twist, p: int, walks: Sequence[Sequence[Step]]) -> np.ndarray:
    if not walks:
        return np.zeros((0, len(qc.Sbar)), dtype=np.int64)
    return np.array([concrete_row(qc.Gbar, twist, p, qc.Sbar, w) for w in walks], dtype=np.int64)


def _lift_elements(G, Sbar, z) -> list[int]:
    return [G.index(int(zz), s) for zz, s in zip(z, Sbar)]


def _store_fgl(store: CertStore, gid: str, qc: QuotientCase, twist, p: int, z, walk: Sequence[Step]) -> str:
    G = semidirect_zn(p, qc.Gbar, twist)
    gens = _lift_elements(G, qc.Sbar, z)
    steps = [gens[j] if e > 0 else G.inv(gens[j]) for j, e in walk]
    verdict = validate_group_walk(G, gens, steps * p, closed=True)
    if not verdict:
        raise AssertionError(f"lifted cycle failed validation: {verdict.reason}")
    return store.add_walk(gid, gens, walk, p, p=p, twist=twist, origin="fgl")


def verify_prime_instance(k: int, p: int, G, S, budget: Optional[SearchBudget] = None) -> Optional[CycleCert]:
    """Direct search in ``Cay(G; S)``; ``None`` means no hamiltonian cycle exists.

    Raises :class:`SearchUndecided` when the budget runs out.
    """
    S = list(getattr(S, "elements", S))
    if G.order != k * p:
        raise PipelineError(f"group order {G.order} is not {k}·{p}")
    graph = cayley_graph(G, S)
    if not analyze(graph).connected:
        raise PipelineError("Cayley graph is not connected")
    cert = find_ham_cycle(graph, budget=budget)
    if cert is not None and not validate_cert(graph, cert):
        raise AssertionError("search returned an invalid cycle")
    return cert


def certify_lifts(
    qc: QuotientCase,
    ch: Character,
    p: int,
    lifts: Iterable[Sequence[int]],
    store: CertStore,
    config: PipelineConfig,
) -> list[dict]:
    """One outcome per generating lift: FGL over sampled, then enumerated,
    quotient cycles; direct search when every quotient cycle has voltage 0."""
    gid = store.group_id(qc.Gbar)
    twist = twist_for(ch, p)
    basis = _rows_mod_p(qc, twist, p, qc.basis)
    sampled = _rows_mod_p(qc, twist, p, qc.cycles)
    enum_rows = None
    out = []
    for z in lifts:
        zv = np.array(z, dtype=np.int64)
        if not (basis @ zv % p).any():
            continue  # the lift lies in a complement of Z_p
        outcome = {"p": p, "lift": [int(x) for x in z], "cert": None, "route": "unresolved"}
        hit = np.flatnonzero(sampled @ zv % p) if len(sampled) else []
        walk = qc.cycles[hit[0]] if len(hit) else None
        if walk is None:
            if enum_rows is None:
                enum_rows = _rows_mod_p(qc, twist, p, qc.enumerated())
            hit = np.flatnonzero(enum_rows @ zv % p) if len(enum_rows) else []
            walk = qc.enumerated()[hit[0]] if len(hit) else None
        if walk is not None:
            outcome["cert"] = _store_fgl(store, gid, qc, twist, p, z, walk)
            outcome["route"] = "fgl"
        else:
            G = semidirect_zn(p, qc.Gbar, twist)
            gens = _lift_elements(G, qc.Sbar, z)
            try:
                cert = verify_prime_instance(qc.Gbar.order, p, G, gens, config.budget())
            except SearchUndecided:
                cert = None
                outcome["route"] = "undecided"
            else:
                outcome["route"] = "direct" if cert is not None else "no_cycle"
            if cert is not None:
                outcome["cert"] = store.add_vertices(gid, gens, cert, p=p, twist=twist)
        out.append(outcome)
    return out


def _all_lifts(partition, size: int, p: int):
    for free in normalized_lifts(p, len(partition.b_list)):
        yield full_z_vector(partition, size, free)


# --------------------------------------------------------------------------
# reductions


def applicable_reductions(Gbar: FiniteGroup, Sbar: Sequence[int], character: Character) -> list[str]:
    """Standing-assumption filters this quotient case may invoke."""
    out = []
    if Gbar.is_abelian and character.is_trivial:
        out.append("abelian_direct_product")
    if any(Gbar.element_orders[s] == 2 and character.is_trivial_at(s) for s in Sbar):
        out.append("order_two_lift")
        out.append("double_edge")
    return out


def _char_json(ch: Character) -> dict:
    return {"m": ch.order_m, "exponent": list(ch.exponent)}


def _char_tag(ch: Character) -> str:
    return f"{ch.order_m}:" + ",".join(map(str, ch.exponent))


def _double_edge_outcomes(qc: QuotientCase, ch: Character, a_idx: Sequence[int], primes, store: CertStore, config) -> list[dict]:
    gid = store.group_id(qc.Gbar)
    out = []
    for p in primes:
        twist = twist_for(ch, p)
        G = semidirect_zn(p, qc.Gbar, twist)
        for j in a_idx:
            z = [0] * len(qc.Sbar)
            z[j] = 1
            gens = _lift_elements(G, qc.Sbar, z)
            s = gens[j]
            cert = double_edge_lift(G, gens, s, G.inv(s), config.budget())
            out.append(
                {"p": p, "lift": z, "cert": store.add_vertices(gid, gens, cert, p=p, twist=twist), "route": "double_edge"}
            )
    return out


# --------------------------------------------------------------------------
# irredundant quotient generating sets


def _try_construction(match: CaseMatch, primes, qc: QuotientCase, store: CertStore) -> tuple[list[dict], Optional[str]]:
    gid = store.group_id(qc.Gbar)
    out = []
    variants: list[tuple[CaseMatch, int]] = [(match, 0)]
    if match.case_id == "C2_A4":
        a, b = match.bindings["a"], match.bindings["b"]
        swapped = CaseMatch(match.case_id, match.quotient, match.gens, match.character, {"a": b, "b": a})
        variants = [(match, 0), (match, 1), (swapped, 0)]
    try:
        for p in primes:
            for m, other in variants:
                cc = construct_case_cycle(m, p, other_z=other)
                cid = store.add_vertices(gid, cc.generators, cc.cert, p=p, twist=cc.twist)
                out.append({"p": p, "lift": list(cc.z_parts), "cert": cid, "route": "construction"})
    except CaseConstructionError as exc:
        return out, str(exc)
    return out, None


def _irredundant_character(qc: QuotientCase, ch: Character, config: PipelineConfig, store: CertStore, key: str) -> list[CaseRecord]:
    Gbar, Sbar = qc.Gbar, qc.Sbar
    k, m = Gbar.order, ch.order_m
    base = dict(k=k, branch="irredundant", quotient=list(Gbar.catalog_id or ()), genset=list(Sbar), character=_char_json(ch))
    reds = applicable_reductions(Gbar, Sbar, ch)
    part = partition_for_matrix(Gbar, Sbar, ch)
    primes = admissible_primes(k, m, config.p_cap)
    sample = primes[: config.sample_primes]
    records = []
    if part.a_list:
        outs = _double_edge_outcomes(qc, ch, part.a_list, sample[:1], store, config)
        records.append(
            CaseRecord(
                key=f"{key}/double_edge",
                method="discharged(double_edge)",
                status=RESOLVED if all(o["cert"] for o in outs) else UNRESOLVED,
                outcomes=outs,
                reductions=reds,
                notes=["lifts with nonzero z on an order-2, character-trivial generator"],
                **base,
            )
        )
    if not part.b_list:
        records.append(
            CaseRecord(
                key=key,
                method="skipped(no_generating_lift)",
                status=RESOLVED,
                reductions=reds,
                notes=["after the forced and conjugated z-parts every lift lies in a complement of Z_p"],
                **base,
            )
        )
        return records

    matches = all_special_cases(Gbar, Sbar, ch)
    notes = []
    for match in (mt for mt in matches if mt.constructive):
        outs, failure = _try_construction(match, sample, qc, store)
        if failure is None:
            records.append(
                CaseRecord(key=key, method=f"special_case({match.case_id})", status=RESOLVED, outcomes=outs, reductions=reds, **base)
            )
            return records
        notes.append(f"{match.case_id} pattern does not apply: {failure}")

    n = len(part.b_list)
    sel = find_nonzero_det(voltage_matrix(ch, Sbar, qc.cycles, part), n, m)
    rows_from = qc.cycles
    if sel is None:
        rows_from = qc.enumerated()
        sel = find_nonzero_det(voltage_matrix(ch, Sbar, rows_from, part), n, m)
    lift_count = lambda p: count_normalized_lifts(p, n)  # noqa: E731

    if sel is None:
        discharges = [mt for mt in matches if not mt.constructive]
        if discharges:
            mt = discharges[0]
            spot = [p for p in primes if p <= config.spot_prime_cap]

            def certify(p):
                outs = certify_lifts(qc, ch, p, _all_lifts(part, len(Sbar), p), store, config)
                return [(o["lift"], o) for o in outs]

            rec = discharge_record(mt, certify, spot)
            outs = [o for _, _, o in rec.spot_checks]
            ok = all(o["cert"] for o in outs)
            records.append(
                CaseRecord(
                    key=key,
                    method=f"discharged({rec.reduction})",
                    status=RESOLVED if ok else UNRESOLVED,
                    outcomes=outs,
                    reductions=reds,
                    notes=notes + [f"voltage matrix singular for every sampled cycle; {mt.case_id} spot-checked"],
                    **base,
                )
            )
            return records
        outs = []
        for p in primes:
            if lift_count(p) > config.max_lifts:
                break
            outs.extend(certify_lifts(qc, ch, p, _all_lifts(part, len(Sbar), p), store, config))
        records.append(
            CaseRecord(
                key=key,
                method="direct_search",
                status=UNRESOLVED,
                outcomes=outs,
                reductions=reds,
                notes=notes + ["voltage matrix singular: primes above the cap stay open"],
                **base,
            )
        )
        return records

    res = residual_primes(sel.norm, m, k)
    outs = []
    residual = set(res)
    check = next((p for p in primes if p not in residual), None)
    if check is not None:
        z = full_z_vector(part, len(Sbar), [1] + [0] * (n - 1))
        got = certify_lifts(qc, ch, check, [z], store, config)
        if not got or got[0]["route"] != "fgl":
            raise AssertionError("non-residual prime without a nonzero voltage")
        outs.extend(got)
    open_primes = []
    for p in res:
        if p > config.p_cap or lift_count(p) > config.max_lifts:
            open_primes.append(p)
            continue
        outs.extend(certify_lifts(qc, ch, p, _all_lifts(part, len(Sbar), p), store, config))
    ok = not open_primes and all(o["cert"] for o in outs)
    if open_primes:
        notes.append(f"residual primes left open: {open_primes}")
    records.append(
        CaseRecord(
            key=key,
            method="voltage_matrix",
            status=RESOLVED if ok else UNRESOLVED,
            norm=int(sel.norm),
            residual_primes=res,
            outcomes=outs,
            reductions=reds,
            notes=notes + [f"cycles {list(sel.rows)} of {len(rows_from)}"],
            **base,
        )
    )
    return records


def verify_irredundant_branch(
    Gbar: FiniteGroup,
    Sbar: Sequence[int],
    config: Optional[PipelineConfig] = None,
    store: Optional[CertStore] = None,
) -> list[CaseRecord]:
    """One record per abelian character (plus double-edge records)."""
    config = config or PipelineConfig()
    store = store if store is not None else CertStore("irr")
    qc = QuotientCase.irredundant(Gbar, Sbar, config)
    gid = store.group_id(Gbar)
    out = []
    for ch in abelian_characters(Gbar):
        key = f"irr/{gid}/{','.join(map(str, Sbar))}/{_char_tag(ch)}"
        out.extend(_irredundant_character(qc, ch, config, store, key))
    return out


# --------------------------------------------------------------------------
# redundant quotient generating sets


def _redundant_voltage_record(qc, ch, a_idx, config, store, key, method, base) -> CaseRecord:
    Gbar = qc.Gbar
    k, m = Gbar.order, ch.order_m
    abar = qc.Sbar[a_idx]
    primes = admissible_primes(k, m, config.p_cap)
    z = [0] * len(qc.Sbar)
    z[a_idx] = 1
    if Gbar.element_orders[abar] == 2 and ch.is_trivial_at(abar):
        outs = _double_edge_outcomes(qc, ch, [a_idx], primes[:1], store, config)
        return CaseRecord(
            key=key,
            method="discharged(double_edge)",
            status=RESOLVED if all(o["cert"] for o in outs) else UNRESOLVED,
            outcomes=outs,
            reductions=["double_edge"],
            **base,
        )
    g, used = 0, qc.cycles
    for seq in used:
        g = math.gcd(g, abs(voltage_row(ch, qc.Sbar, seq)[a_idx].norm()))
    if g == 0:
        used = qc.enumerated()
        for seq in used:
            g = math.gcd(g, abs(voltage_row(ch, qc.Sbar, seq)[a_idx].norm()))
    outs, notes, open_primes = [], [], []
    if g == 0:
        for p in primes:
            outs.extend(certify_lifts(qc, ch, p, [z], store, config))
        open_primes = ["above cap"]
        notes.append("every sampled cycle has zero voltage")
        res = []
    else:
        res = residual_primes(g, m, k)
        residual = set(res)
        check = next((p for p in primes if p not in residual), None)
        if check is not None:
            got = certify_lifts(qc, ch, check, [z], store, config)
            if not got or got[0]["route"] != "fgl":
                raise AssertionError("non-residual prime without a nonzero voltage")
            outs.extend(got)
        for p in res:
            if p > config.p_cap:
                open_primes.append(p)
                continue
            outs.extend(certify_lifts(qc, ch, p, [z], store, config))
    ok = not open_primes and all(o["cert"] for o in outs)
    return CaseRecord(
        key=key,
        method=method,
        status=RESOLVED if ok else UNRESOLVED,
        norm=g if g else None,
        residual_primes=res,
        outcomes=outs,
        notes=notes + [f"gcd of voltage norms over {len(used)} cycles"],
        **base,
    )


def verify_redundant_branch(
    Gbar: FiniteGroup,
    config: Optional[PipelineConfig] = None,
    store: Optional[CertStore] = None,
) -> list[CaseRecord]:
    """Shapes ``({0}×S̄0) ∪ {(1, ā)}`` with ``S̄0`` irredundant."""
    config = config or PipelineConfig()
    store = store if store is not None else CertStore("red")
    gid = store.group_id(Gbar)
    k = Gbar.order
    chars = abelian_characters(Gbar)
    records = []
    for cls in irredundant_gensets_up_to_equiv(Gbar):
        S0 = list(cls.representative.elements)
        conn0 = set(S0) | {Gbar.inv(s) for s in S0}
        graph0 = cayley_graph(Gbar, S0)
        bip0 = analyze(graph0).bipartite
        for abar in range(1, k):
            if abar in conn0 or Gbar.inv(abar) < abar:
                continue
            S = S0 + [abar]
            a_idx = len(S0)
            bip1 = analyze(cayley_graph(Gbar, S)).bipartite
            key = f"red/{gid}/{','.join(map(str, S0))}+{abar}"
            base = dict(k=k, branch="redundant", quotient=list(Gbar.catalog_id or ()), genset=S)
            if len(conn0) >= 3 and (not bip0 or bip1):
                records.append(_hampath_record(Gbar, S0, abar, chars, config, store, key, base))
                continue
            method = "redundant_voltage" if len(conn0) >= 3 else "valence2_voltage"
            certs = sample_ham_cycles_redundant(Gbar, S0, abar, config.sample_count, config.budget())
            cycles = [genseq_from_cycle(Gbar, S, c.vertices) for c in certs]
            qc = QuotientCase(Gbar, S, cycles, config.enum_limit)
            for ch in chars:
                rkey = f"{key}/{_char_tag(ch)}"
                rec = _redundant_voltage_record(qc, ch, a_idx, config, store, rkey, method, dict(base, character=_char_json(ch)))
                records.append(rec)
    return records


def _hampath_record(Gbar, S0, abar, chars, config, store, key, base) -> CaseRecord:
    """Cycle ``(ā, path ē → ā⁻¹)``: its voltage is exactly the z-part 1 of ``ā``."""
    S = S0 + [abar]
    graph0 = cayley_graph(Gbar, S0)
    try:
        path = ham_path(graph0, 0, Gbar.inv(abar), config.budget())
    except SearchUndecided:
        path = None
    if path is None:
        return CaseRecord(key=key, method="redundant_direct", status=UNRESOLVED, notes=["no hamiltonian path found"], **base)
    verts = [Gbar.mul(abar, v) for v in path.vertices]
    walk = genseq_from_cycle(Gbar, S, [0] + verts[:-1])
    if walk[0] != (len(S0), 1):
        raise AssertionError("cycle must start with the ā-step")
    qc = QuotientCase(Gbar, S, [walk], config.enum_limit)
    outs = []
    z = [0] * len(S)
    z[-1] = 1
    for ch in chars:
        row = voltage_row(ch, S, walk)
        if row[-1] != 1:
            raise AssertionError("voltage of the ā-path cycle is not exactly 1")
        primes = admissible_primes(Gbar.order, ch.order_m, config.p_cap)[:1]
        for p in primes:
            got = certify_lifts(qc, ch, p, [z], store, config)
            if not got or got[0]["route"] != "fgl":
                raise AssertionError("voltage-1 cycle failed to lift")
            outs.extend(got)
    return CaseRecord(
        key=key,
        method="redundant_direct",
        status=RESOLVED,
        outcomes=outs,
        notes=["voltage 1 for every character"],
        **base,
    )


# --------------------------------------------------------------------------
# anomalous Sylow subgroups


def anomalous_primes(k: int) -> tuple[Optional[int], list[int]]:
    """The prime for a non-cyclic Sylow subgroup, and the primes allowing a
    non-normal one (some divisor ``d > 1`` of ``k`` with ``d ≡ 1 mod p``)."""
    if k < 2:
        return None, []
    lpf = largest_prime_factor(k)
    divs = [d for d in range(2, k + 1) if k % d == 0]
    second = [p for p in range(lpf + 1, k + 1) if is_prime(p) and any(d % p == 1 for d in divs)]
    return lpf, second


def _direct_group_records(G, key_prefix, k, p, branch_note, config, store) -> list[CaseRecord]:
    gid = store.group_id(G)
    out = []
    for cls in irredundant_gensets_up_to_equiv(G):
        S = list(cls.representative.elements)
        key = f"{key_prefix}/{gid}/{','.join(map(str, S))}"
        try:
            cert = verify_prime_instance(k, p, G, S, config.budget())
            route = "direct" if cert is not None else "no_cycle"
        except SearchUndecided:
            cert, route = None, "undecided"
        outcome = {"p": p, "lift": None, "cert": None, "route": route}
        if cert is not None:
            outcome["cert"] = store.add_vertices(gid, S, cert)
        out.append(
            CaseRecord(
                key=key,
                k=k,
                branch="anomalous",
                method="direct_search",
                status=RESOLVED if cert is not None else UNRESOLVED,
                quotient=list(G.catalog_id or ()),
                genset=S,
                outcomes=[outcome],
                notes=[branch_note],
            )
        )
    return out


def verify_anomalous(k: int, config: Optional[PipelineConfig] = None, store=None, catalog: Optional[Catalog] = None) -> list[CaseRecord]:
    config = config or PipelineConfig()
    store = store if store is not None else CertStore(f"anom{k}")
    catalog = catalog or default_catalog()
    lpf, second = anomalous_primes(k)
    records = []
    if lpf is None:
        return records
    for G in catalog.groups(k * lpf):
        records.extend(_direct_group_records(G, f"anom1/k{k}", k, lpf, "Sylow subgroup is not cyclic of prime order", config, store))
    for p in second:
        groups = [G for G in catalog.groups(k * p) if not sylow_info(G, p).is_normal]
        if not groups:
            records.append(
                CaseRecord(
                    key=f"anom2/k{k}/p{p}",
                    k=k,
                    branch="anomalous",
                    method="skipped(empty_scan)",
                    status=RESOLVED,
                    notes=[f"no group of order {k * p} has a non-normal Sylow {p}-subgroup"],
                )
            )
        for G in groups:
            records.extend(_direct_group_records(G, f"anom2/k{k}/p{p}", k, p, "Sylow subgroup is not normal", config, store))
    return records


# --------------------------------------------------------------------------
# the whole verification


def _k1_record(config: PipelineConfig, store: CertStore) -> CaseRecord:
    trivial = default_catalog().groups(1)[0]
    gid = store.group_id(trivial)
    outs = []
    for p in admissible_primes(1, 1, config.p_cap)[: config.sample_primes]:
        G = semidirect_zn(p, trivial, [1])
        cert = CycleCert("cycle", tuple(range(p)), "cyclic")
        if not validate_cert(cayley_graph(G, [1]), cert):
            raise AssertionError("cyclic cycle invalid")
        outs.append({"p": p, "lift": [1], "cert": store.add_vertices(gid, [1], cert, p=p, twist=[1]), "route": "construction"})
    return CaseRecord(
        key="k1",
        k=1,
        branch="trivial",
        method="skipped(k_gt_1)",
        status=RESOLVED,
        outcomes=outs,
        notes=["a group of prime order is cyclic"],
    )


def _run_task(task: tuple, config: PipelineConfig) -> tuple[list[CaseRecord], CertStore]:
    kind = task[0]
    catalog = default_catalog()
    if kind == "k1":
        store = CertStore("k1")
        return [_k1_record(config, store)], store
    if kind == "anomalous":
        k = task[1]
        store = CertStore(f"anom/k{k}")
        return verify_anomalous(k, config, store, catalog), store
    if kind == "quotient":
        _, k, i = task
        Gbar = catalog.get((k, i))
        store = CertStore(f"q/{k}.{i}")
        records = []
        for cls in irredundant_gensets_up_to_equiv(Gbar):
            records.extend(verify_irredundant_branch(Gbar, cls.representative.elements, config, store))
        records.extend(verify_redundant_branch(Gbar, config, store))
        return records, store
    raise PipelineError(f"unknown task {task!r}")


def _tasks_for(k_values: Iterable[int]) -> list[tuple]:
    cat = default_catalog()
    tasks = []
    for k in k_values:
        if k == 1:
            tasks.append(("k1",))
            continue
        tasks.append(("anomalous", k))
        for i in range(1, len(cat.groups(k)) + 1):
            tasks.append(("quotient", k, i))
    return tasks


def run_tasks(tasks: list[tuple], config: PipelineConfig) -> tuple[list[CaseRecord], CertStore]:
    store = CertStore()
    records: list[CaseRecord] = []
    if config.workers <= 1 or len(tasks) <= 1:
        results = [_run_task(t, config) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_task, tasks, [config] * len(tasks)))
    for recs, st in results:
        records.extend(recs)
        store.merge(st)
    return records, store


def verify_kp(
    k_max: Optional[int] = None,
    p_cap: Optional[int] = None,
    budget_ms: Optional[int] = None,
    *,
    config: Optional[PipelineConfig] = None,
    k_values: Optional[Sequence[int]] = None,
) -> VerificationReport:
    """All cases for ``k ≤ k_max`` (or exactly ``k_values``)."""
    config = config or PipelineConfig()
    overrides = {n: v for n, v in (("k_max", k_max), ("p_cap", p_cap), ("budget_ms", budget_ms)) if v is not None}
    config = replace(config, **overrides)
    ks = list(k_values) if k_values is not None else list(range(1, config.k_max + 1))
    if not ks or min(ks) < 1 or max(ks) > KP_BOUND:
        raise PipelineError(f"k must lie in 1..{KP_BOUND}: groups of order kp are not all in the catalog beyond that")
    records, store = run_tasks(_tasks_for(ks), config)
    return VerificationReport(config=dict(config.to_json(), k_values=ks), cases=records, store=store)


# --------------------------------------------------------------------------
# hamiltonian connected / laceable survey


def _connlace_record(G, S, res, key, store, note) -> CaseRecord:
    gid = store.group_id(G)
    outs = []
    for a in sorted(res.witnesses):
        outs.append({"p": None, "lift": None, "target": a, "cert": store.add_vertices(gid, S, res.witnesses[a], endpoints=[0, a]), "route": "path"})
    for a in res.missing:
        outs.append({"p": None, "lift": None, "target": a, "cert": None, "route": "no_path"})
    for a in res.undecided:
        outs.append({"p": None, "lift": None, "target": a, "cert": None, "route": "undecided"})
    ok = res.kind in ("hamiltonian_connected", "hamiltonian_laceable")
    return CaseRecord(
        key=key,
        k=G.order,
        branch="connlace",
        method="direct_search",
        status=RESOLVED if ok else UNRESOLVED,
        quotient=list(G.catalog_id or ()),
        genset=list(S),
        outcomes=outs,
        notes=[res.kind, note],
    )


def _connlace_group(G: FiniteGroup, config: PipelineConfig, store: CertStore) -> list[CaseRecord]:
    records = []
    gid = store.group_id(G)
    budget = config.budget()
    for cls in irredundant_gensets_up_to_equiv(G):
        S0 = list(cls.representative.elements)
        conn0 = set(S0) | {G.inv(s) for s in S0}
        graph0 = cayley_graph(G, S0)
        info0 = analyze(graph0)
        key0 = f"conn/{gid}/{','.join(map(str, S0))}"
        if len(conn0) >= 3:
            res = classify_conn_laceable(G, S0, budget, graph0)
            records.append(_connlace_record(G, S0, res, key0, store, "base"))
            if not info0.bipartite:
                continue
            # nonbipartite extensions: only endpoints on the identity's side are new
            same_side = [a for a in range(1, G.order) if info0.bipartition[a] == 0]
            for g in range(1, G.order):
                if g in conn0 or G.inv(g) < g:
                    continue
                S = S0 + [g]
                graph = cayley_graph(G, S)
                if analyze(graph).bipartite:
                    continue
                res = classify_conn_laceable(G, S, budget, graph, targets=same_side)
                records.append(_connlace_record(G, S, res, f"{key0}+{g}", store, "nonbipartite extension"))
        elif G.order > 2:
            for g in range(1, G.order):
                if g in conn0 or G.inv(g) < g:
                    continue
                S = S0 + [g]
                res = classify_conn_laceable(G, S, budget)
                records.append(_connlace_record(G, S, res, f"{key0}+{g}", store, "valence-2 extension"))
    return records


def _connlace_task(n: int, config: PipelineConfig) -> tuple[list[CaseRecord], CertStore]:
    store = CertStore(f"conn/{n}")
    records = []
    for G in default_catalog().groups(n):
        records.extend(_connlace_group(G, config, store))
    return records, store


def verify_prop13(max_order: int = 16, config: Optional[PipelineConfig] = None) -> VerificationReport:
    """Every connected Cayley graph of order below ``max_order`` and valence
    at least 3 is hamiltonian connected or laceable."""
    config = config or PipelineConfig(max_order=max_order)
    if max_order > 17:
        raise PipelineError("the survey is limited to orders below 17")
    orders = list(range(1, max_order))
    store = CertStore()
    records: list[CaseRecord] = []
    if config.workers <= 1:
        results = [_connlace_task(n, config) for n in orders]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_connlace_task, orders, [config] * len(orders)))
    for recs, st in results:
        records.extend(recs)
        store.merge(st)
    return VerificationReport(config=dict(config.to_json(), max_order=max_order), cases=records, store=store)


def default_workers() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1))
