"""Acceptance criteria, one test per criterion.

A summary line per criterion is printed at the end of the pytest run.
"""

from __future__ import annotations

import itertools
import random
import time

import pytest

from cayleyham.catalog import default_catalog
from cayleyham.certs import EdgeConstraint, validate_cert
from cayleyham.cyclotomic import CycInt, cyc_norm, euler_phi, norm_by_embeddings, reduce_mod_p
from cayleyham.gensets import irredundant_gensets_up_to_equiv, is_generating
from cayleyham.graphs import analyze, cayley_graph
from cayleyham.groups import abelian_characters, are_isomorphic, automorphisms, semidirect_zn, subgroup_generated
from cayleyham.hamilton import SearchBudget, enumerate_ham_cycles, find_ham_cycle, sample_ham_cycles
from cayleyham.pipeline import PipelineConfig, verify_kp, verify_prop13
from cayleyham.report import validate_certificates, validate_record, validate_report_file, write_report
from cayleyham.specialcases import CaseConstructionError, all_special_cases, construct_case_cycle
from cayleyham.voltage import (
    admissible_primes,
    concrete_lift,
    fgl_lift,
    genseq_from_cycle,
    lifted_steps,
    universal_lift,
    voltage,
    walk_voltage_direct,
)

# pinned parameters and tolerances
SEED = 20240601
EXPECTED_COUNTS = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14]
SURVEY_MAX_ORDER = 16  # orders < 16
KP_K_MAX, KP_P_CAP = 12, 500
FGL_INSTANCES = 100
PHI_INSTANCES, PHI_P_MAX = 100, 100
LINEARITY_INSTANCES = 100
NORM_PAIRS, NORM_M_MAX, EMBEDDING_REL_TOL = 1000, 12, 1e-6
DIHEDRAL_KP_MAX, S3_P_MAX, A4_P = 500, 97, 5
ORACLE_MAX_ORDER, ORACLE_CONSTRAINT_SETS = 12, 50
BUDGET = PipelineConfig(budget_ms=60_000)


def _oracle_groups(max_order):
    cat = default_catalog()
    return [G for n in range(1, max_order + 1) for G in cat.groups(n)]


def _random_instances(rng, max_order=12):
    """Yields (G, S, character, genseq) with S irredundant and a quotient hamiltonian cycle."""
    pool = []
    for G in _oracle_groups(max_order):
        if G.order < 3:
            continue
        for cls in irredundant_gensets_up_to_equiv(G):
            pool.append((G, list(cls.representative.elements)))
    cache = {}
    while True:
        G, S = rng.choice(pool)
        key = (G.catalog_id, tuple(S))
        if key not in cache:
            cache[key] = [genseq_from_cycle(G, S, c.vertices) for c in sample_ham_cycles(G, S, count=5)]
        if not cache[key]:
            continue
        yield G, S, rng.choice(abelian_characters(G)), rng.choice(cache[key])


@pytest.mark.acceptance(1, "catalog counts for orders 1..16, entries pairwise non-isomorphic")
def test_criterion_1_catalog():
    cat = default_catalog()
    counts = [len(cat.groups(n)) for n in range(1, 17)]
    assert counts == EXPECTED_COUNTS
    for n in range(1, 17):
        groups = cat.groups(n)
        assert all(G.order == n for G in groups)
        for G, H in itertools.combinations(groups, 2):
            assert not are_isomorphic(G, H), (G.name, H.name)


@pytest.mark.acceptance(2, "order < 16, valence >= 3: hamiltonian connected or laceable, zero undecided")
def test_criterion_2_connlace(tmp_path):
    start = time.monotonic()
    rep = verify_prop13(SURVEY_MAX_ORDER, BUDGET)
    assert time.monotonic() - start < 600
    assert rep.success, rep.unresolved
    assert all(c.notes[0] in ("hamiltonian_connected", "hamiltonian_laceable") for c in rep.cases)
    assert not [o for c in rep.cases for o in c.outcomes if o["route"] != "path"]
    assert max(c.k for c in rep.cases) == SURVEY_MAX_ORDER - 1
    path = tmp_path / "survey.json"
    write_report(rep, path)
    res = validate_report_file(path)
    assert res.ok and res.checked == len(rep.store.certs) > 0


@pytest.fixture(scope="module")
def kp_report():
    start = time.monotonic()
    rep = verify_kp(KP_K_MAX, KP_P_CAP, config=BUDGET)
    return rep, time.monotonic() - start


@pytest.mark.acceptance(3, "verify --k-max 12 --p-cap 500: zero unresolved, all certificates re-validate")
def test_criterion_3_kp(kp_report, tmp_path):
    rep, elapsed = kp_report
    assert elapsed < 3600
    assert rep.success and rep.summary["unresolved"] == 0
    path = tmp_path / "kp.json"
    write_report(rep, path)
    res = validate_report_file(path)
    assert res.ok and res.checked == len(rep.store.certs)
    for case in rep.cases:
        for p in case.residual_primes:
            got = [o for o in case.outcomes if o["p"] == p]
            assert got and all(o["cert"] for o in got), (case.key, p)
    for case in rep.cases:
        if case.resolved and case.method not in ("skipped(no_generating_lift)", "skipped(empty_scan)"):
            assert case.outcomes, case.key


def _independent_sylow_normal(G, p):
    # a Sylow subgroup of prime order is normal iff exactly p - 1 elements have order p
    return sum(1 for x in range(G.order) if G.element_orders[x] == p) == p - 1


@pytest.mark.acceptance(4, "anomalous Sylow branches for k <= 12 complete with validated certificates")
def test_criterion_4_anomalous(kp_report):
    rep, _ = kp_report
    cases = [c for c in rep.cases if c.branch == "anomalous"]
    assert cases and all(c.resolved for c in cases)
    groups = rep.store.groups
    cert_by_id = {c["id"]: c for c in rep.store.certs}
    for c in cases:
        for o in c.outcomes:
            assert validate_record(cert_by_id[o["cert"]], groups) is None
    cat = default_catalog()
    for c in cases:
        if c.method == "skipped(empty_scan)":
            k, p = (int(x[1:]) for x in c.key.split("/")[1:])
            assert all(_independent_sylow_normal(G, p) for G in cat.groups(k * p))
    keys = {c.key.split("/")[0] + "/" + c.key.split("/")[1] for c in cases}
    assert {"anom1/k4", "anom1/k12", "anom2/k4", "anom2/k12"} <= {"/".join(k.split("/")[:2]) for k in keys}


@pytest.mark.acceptance(5, "FGL soundness on 100 random nonzero-voltage instances")
def test_criterion_5_fgl():
    rng = random.Random(SEED)
    done = 0
    for G, S, ch, seq in _random_instances(rng):
        primes = admissible_primes(G.order, ch.order_m, 60)
        p = rng.choice(primes)
        lifts = concrete_lift(ch, p, S, [rng.randrange(p) for _ in S])
        if voltage(seq, lifts) % p == 0:
            continue
        cert = fgl_lift(p, lifts.twist, G, lifts, seq)
        H = lifts.group()
        assert validate_cert(cayley_graph(H, lifts.elements()), cert)
        groups = {"q": {"table": G.table}}
        record = {"group": "q", "p": p, "twist": list(lifts.twist), "generators": lifts.elements(), "kind": "cycle", "form": "vertices", "vertices": list(cert.vertices)}
        assert validate_record(record, groups) is None
        done += 1
        if done == FGL_INSTANCES:
            break
    assert done == FGL_INSTANCES


@pytest.mark.acceptance(6, "universal voltage reduces mod p to the concrete voltage, all admissible p <= 100")
def test_criterion_6_phi():
    rng = random.Random(SEED + 1)
    checks = 0
    for i, (G, S, ch, seq) in enumerate(_random_instances(rng)):
        if i == PHI_INSTANCES:
            break
        z = [rng.randint(-20, 20) for _ in S]
        u = voltage(seq, universal_lift(ch, S, z))
        for p in admissible_primes(G.order, ch.order_m, PHI_P_MAX):
            lifts = concrete_lift(ch, p, S, z)
            direct = walk_voltage_direct(lifts.group(), lifted_steps(lifts, seq))
            assert reduce_mod_p(u, p) == direct
            checks += 1
    assert checks > PHI_INSTANCES


@pytest.mark.acceptance(7, "voltage is linear in the z-vector")
def test_criterion_7_linearity():
    rng = random.Random(SEED + 2)
    for i, (G, S, ch, seq) in enumerate(_random_instances(rng)):
        if i == LINEARITY_INSTANCES:
            break
        m = ch.order_m
        z = [CycInt(m, [rng.randint(-9, 9) for _ in range(euler_phi(m))]) for _ in S]
        total = voltage(seq, universal_lift(ch, S, z))
        parts = CycInt.integer(m, 0)
        for j in range(len(S)):
            unit = [0] * len(S)
            unit[j] = 1
            parts = parts + z[j] * voltage(seq, universal_lift(ch, S, unit))
        assert total == parts


@pytest.mark.acceptance(8, "cyclotomic norms: multiplicative, match embeddings, N(c) = c^phi(m)")
def test_criterion_8_cyclotomic():
    rng = random.Random(SEED + 3)
    for _ in range(NORM_PAIRS):
        m = rng.randint(1, NORM_M_MAX)
        d = euler_phi(m)
        a = CycInt(m, [rng.randint(-6, 6) for _ in range(d)])
        b = CycInt(m, [rng.randint(-6, 6) for _ in range(d)])
        assert cyc_norm(a * b) == cyc_norm(a) * cyc_norm(b)
        for x in (a, b):
            emb = norm_by_embeddings(x)
            exact = cyc_norm(x)
            assert abs(emb.imag) <= EMBEDDING_REL_TOL * max(1.0, abs(exact))
            assert abs(emb.real - exact) <= EMBEDDING_REL_TOL * max(1.0, abs(exact))
        c = rng.randint(-50, 50)
        assert cyc_norm(CycInt.integer(m, c)) == c**d


def _construct_all(match, primes):
    out = []
    for p in primes:
        cc = construct_case_cycle(match, p)
        G = semidirect_zn(p, match.quotient, cc.twist)
        out.append(bool(validate_cert(cayley_graph(G, list(cc.generators)), cc.cert)))
    return out


@pytest.mark.acceptance(9, "closed-form families: dihedral for kp <= 500, S3 pattern for p <= 97, Z5 x A4")
def test_criterion_9_families():
    cat = default_catalog()
    failures = []
    # dihedral quotients
    checked = 0
    for G in _oracle_groups(16):
        if not G.name.startswith("D") or G.order <= 4:
            continue
        n = G.order // 2
        b = next(s for s in range(G.order) if G.element_orders[s] == n)
        for a in range(G.order):
            if G.element_orders[a] != 2 or not is_generating(G, [a, b]):
                continue
            for ch in abelian_characters(G):
                for m in all_special_cases(G, [a, b], ch):
                    if m.case_id != "C6_dihedral":
                        continue
                    primes = [p for p in admissible_primes(G.order, ch.order_m, DIHEDRAL_KP_MAX) if G.order * p <= DIHEDRAL_KP_MAX]
                    res = _construct_all(m, primes)
                    checked += len(res)
                    if not all(res):
                        failures.append(("C6", G.name))
            break
    assert checked > 0
    # the S3 quotient, every character satisfying the hypotheses
    S3 = next(G for G in cat.groups(6) if not G.is_abelian)
    a = next(s for s in range(6) if S3.element_orders[s] == 2)
    b = next(s for s in range(6) if S3.element_orders[s] == 3)
    for ch in abelian_characters(S3):
        for m in all_special_cases(S3, [a, b], ch):
            if m.case_id != "C1_23":
                continue
            primes = admissible_primes(6, ch.order_m, S3_P_MAX)
            try:
                if not all(_construct_all(m, primes)):
                    failures.append(("C1", f"S3 character {ch.exponent}"))
            except CaseConstructionError as exc:
                failures.append(("C1", f"S3 character {ch.exponent}: {exc}"))
    # Z5 x A4
    A4 = next(G for G in cat.groups(12) if G.name == "A4")
    threes = [s for s in range(12) if A4.element_orders[s] == 3]
    S = next([x, y] for x in threes for y in threes if is_generating(A4, [x, y]))
    triv = next(c for c in abelian_characters(A4) if c.is_trivial)
    m = next(m for m in all_special_cases(A4, S, triv) if m.case_id == "C2_A4")
    if not all(_construct_all(m, [A4_P])):
        failures.append(("C2", "Z5 x A4"))
    assert not failures, failures


def _connection_sets(G):
    """Inverse-closed generating subsets, one per automorphism class."""
    units = sorted({frozenset((a, G.inv(a))) for a in range(1, G.order)}, key=min)
    auts = [[h(x) for x in range(G.order)] for h in automorphisms(G)]
    seen = set()
    for r in range(1, len(units) + 1):
        for combo in itertools.combinations(units, r):
            C = frozenset().union(*combo)
            if len(subgroup_generated(G, C)) != G.order:
                continue
            key = min(tuple(sorted(aut[x] for x in C)) for aut in auts)
            if key not in seen:
                seen.add(key)
                yield sorted(C)


@pytest.mark.acceptance(10, "find_ham_cycle agrees with exhaustive enumeration, order <= 12, 50 constraint sets each")
def test_criterion_10_oracle():
    rng = random.Random(SEED + 4)
    graphs = disagreements = 0
    budget = SearchBudget(time_limit_ms=60_000)
    for G in _oracle_groups(ORACLE_MAX_ORDER):
        for C in _connection_sets(G):
            graph = cayley_graph(G, C)
            assert analyze(graph).connected
            graphs += 1
            edges = graph.edges()
            for _ in range(ORACLE_CONSTRAINT_SETS):
                req = []
                for u, v in rng.sample(edges, min(len(edges), rng.randint(1, 3))):
                    if rng.random() < 0.5:
                        u, v = v, u
                    req.append((u, v))
                    if rng.random() < 0.5:
                        req.append((v, u))
                cons = EdgeConstraint.make(required=req)
                found = find_ham_cycle(graph, cons, budget)
                oracle = enumerate_ham_cycles(graph, cons, limit=1)
                if (found is not None) != bool(oracle):
                    disagreements += 1
                if found is not None:
                    assert validate_cert(graph, found, cons)
    assert graphs > 0 and disagreements == 0
