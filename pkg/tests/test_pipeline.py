from __future__ import annotations

import pytest

from cayleyham.gensets import irredundant_gensets_up_to_equiv, is_generating
from cayleyham.groups import abelian_characters, semidirect_zn, sylow_info
from cayleyham.pipeline import (
    CertStore,
    PipelineConfig,
    PipelineError,
    anomalous_primes,
    applicable_reductions,
    closed_walk_basis,
    verify_anomalous,
    verify_irredundant_branch,
    verify_kp,
    verify_prime_instance,
    verify_prop13,
    verify_redundant_branch,
)
from cayleyham.report import validate_certificates
from cayleyham.voltage import walk_product

CFG = PipelineConfig(budget_ms=20_000)


def _valid(records, store):
    res = validate_certificates(store.certs, store.groups, [r.to_json() for r in records])
    return res.ok and res.checked == len(store.certs)


def _char(G, pred):
    return [c for c in abelian_characters(G) if pred(c)]


def test_reductions(group_by_name):
    Z6, D3 = group_by_name("Z6"), group_by_name("D3")
    triv = _char(Z6, lambda c: c.is_trivial)[0]
    assert "abelian_direct_product" in applicable_reductions(Z6, [1], triv)
    refl = [s for s in range(6) if D3.element_orders[s] == 2]
    sign = _char(D3, lambda c: not c.is_trivial)[0]
    assert applicable_reductions(D3, refl[:2], sign) == []
    triv3 = _char(D3, lambda c: c.is_trivial)[0]
    assert "double_edge" in applicable_reductions(D3, refl[:2], triv3)


def test_closed_walks_are_closed(group_by_name):
    G = group_by_name("A4")
    S = list(irredundant_gensets_up_to_equiv(G)[0].representative.elements)
    walks = closed_walk_basis(G, S)
    assert walks and all(walk_product(G, S, w) == 0 for w in walks)


@pytest.mark.parametrize("k,lpf,second", [(4, 2, [3]), (6, 3, [5]), (8, 2, [3, 7]), (9, 3, []), (12, 3, [5, 11])])
def test_anomalous_primes(k, lpf, second):
    assert anomalous_primes(k) == (lpf, second)


def test_anomalous_k4():
    store = CertStore("t")
    recs = verify_anomalous(4, CFG, store)
    names = {store.groups[f"g{r.quotient[0]}.{r.quotient[1]}"]["name"] for r in recs if r.quotient}
    assert {"D4", "Dic2"} <= names
    assert all(r.resolved for r in recs) and _valid(recs, store)


def test_anomalous_k6_records_empty_scan(catalog):
    recs = verify_anomalous(6, CFG, CertStore("t"))
    empty = [r for r in recs if r.method == "skipped(empty_scan)"]
    assert [r.key for r in empty] == ["anom2/k6/p5"]
    assert all(sylow_info(G, 5).is_normal for G in catalog.groups(30))


def test_cyclic_order_four_character_skipped(group_by_name):
    G = group_by_name("Z4")
    recs = verify_irredundant_branch(G, [1], CFG, CertStore("t"))
    by_m = {r.character["m"]: r for r in recs}
    assert by_m[4].method == "skipped(no_generating_lift)"
    assert by_m[1].resolved


def test_a4_uses_construction(group_by_name):
    G = group_by_name("A4")
    threes = [s for s in range(12) if G.element_orders[s] == 3]
    S = next([a, b] for a in threes for b in threes if is_generating(G, [a, b]))
    store = CertStore("t")
    recs = verify_irredundant_branch(G, S, CFG, store)
    triv = [r for r in recs if r.character["m"] == 1]
    assert triv[0].method.startswith("special_case(")
    assert all(r.resolved for r in recs) and _valid(recs, store)


def test_s3_trivial_falls_back_to_voltage(group_by_name):
    G = group_by_name("D3")
    a = [s for s in range(6) if G.element_orders[s] == 2][0]
    b = [s for s in range(6) if G.element_orders[s] == 3][0]
    store = CertStore("t")
    recs = verify_irredundant_branch(G, [a, b], CFG, store)
    triv = [r for r in recs if r.character["m"] == 1 and r.method != "discharged(double_edge)"][0]
    assert triv.method == "voltage_matrix" and triv.resolved
    assert any("C1_23" in n for n in triv.notes)
    assert _valid(recs, store)


def test_redundant_branches(group_by_name):
    store = CertStore("t")
    recs = verify_redundant_branch(group_by_name("Z6"), CFG, store)
    val2 = [r for r in recs if r.genset == [1, 2]]
    assert val2 and all(r.method in ("valence2_voltage", "discharged(double_edge)") for r in val2)
    assert all(r.resolved for r in recs) and _valid(recs, store)
    v4 = group_by_name("Z2xZ2")
    recs = verify_redundant_branch(v4, CFG, CertStore("t"))
    assert recs and all(r.resolved for r in recs)


def test_s3_redundant_record(group_by_name):
    G = group_by_name("D3")
    recs = verify_redundant_branch(G, CFG, CertStore("t"))
    refl = {s for s in range(6) if G.element_orders[s] == 2}
    two_refl = [r for r in recs if len(r.genset) == 3 and set(r.genset[:2]) <= refl]
    assert two_refl and all(r.resolved for r in recs)


def test_verify_prime_instance_order_30(group_by_name):
    D3 = group_by_name("D3")
    sign = _char(D3, lambda c: not c.is_trivial)[0]
    twist = [4 if e else 1 for e in sign.exponent]
    G = semidirect_zn(5, D3, twist)
    a = [s for s in range(6) if D3.element_orders[s] == 2][0]
    b = [s for s in range(6) if D3.element_orders[s] == 3][0]
    S = [G.index(0, a), G.index(1, b)]
    cert = verify_prime_instance(6, 5, G, S, CFG.budget())
    assert cert is not None and len(cert.vertices) == 30


def test_k_max_bound():
    with pytest.raises(PipelineError):
        verify_kp(k_max=20)


def test_small_run_is_resolved_and_deterministic():
    a = verify_kp(k_max=4, config=CFG)
    b = verify_kp(k_max=4, config=CFG)
    assert a.success and not a.unresolved
    assert [c.to_json() for c in a.cases] == [c.to_json() for c in b.cases]
    assert a.store.certs == b.store.certs
    assert _valid(a.cases, a.store)


def test_parallel_matches_sequential():
    seq = verify_kp(k_max=5, config=CFG)
    par = verify_kp(k_max=5, config=PipelineConfig(budget_ms=20_000, workers=2))
    assert [c.to_json() for c in seq.cases] == [c.to_json() for c in par.cases]


def test_connlace_survey_small():
    rep = verify_prop13(9, CFG)
    assert rep.success
    kinds = {c.notes[0] for c in rep.cases}
    assert kinds <= {"hamiltonian_connected", "hamiltonian_laceable"}
    cube = [c for c in rep.cases if c.quotient == [8, 1] and c.genset and len(c.genset) == 4]
    assert cube, "the cube gains nonbipartite extensions"
