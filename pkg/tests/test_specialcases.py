from __future__ import annotations

import pytest

from cayleyham.certs import validate_cert
from cayleyham.gensets import is_generating
from cayleyham.graphs import cayley_graph
from cayleyham.groups import abelian_characters, semidirect_zn
from cayleyham.specialcases import (
    CaseConstructionError,
    CaseError,
    all_special_cases,
    construct_case_cycle,
    discharge_record,
    double_edge_lift,
    match_special_case,
)
from cayleyham.voltage import admissible_primes, twist_for


def _char(G, pred):
    return [c for c in abelian_characters(G) if pred(c)][0]


def _valid(match, cc):
    G = semidirect_zn(cc.p, match.quotient, cc.twist)
    return bool(validate_cert(cayley_graph(G, list(cc.generators)), cc.cert))


@pytest.mark.parametrize("name", ["D3", "D4", "D5", "D6", "D7", "D8"])
def test_dihedral_construction(group_by_name, name):
    G = group_by_name(name)
    n = G.order // 2
    a = [s for s in range(G.order) if G.element_orders[s] == 2 and G.mul(s, 1) != G.mul(1, s)][0]
    b = [s for s in range(G.order) if G.element_orders[s] == n][0]
    ch = _char(G, lambda c: c.is_minus_one_at(a) and c.is_trivial_at(b))
    match = [m for m in all_special_cases(G, [a, b], ch) if m.case_id == "C6_dihedral"]
    assert match
    for p in admissible_primes(G.order, 2, 40):
        assert _valid(match[0], construct_case_cycle(match[0], p))


def test_a4_construction(group_by_name):
    G = group_by_name("A4")
    threes = [s for s in range(12) if G.element_orders[s] == 3]
    S = [threes[0], next(t for t in threes if t not in (threes[0], G.inv(threes[0])))]
    ch = _char(G, lambda c: c.is_trivial)
    match = match_special_case(G, S, ch)
    assert match.case_id in ("C1_23", "C2_A4")
    m2 = [m for m in all_special_cases(G, S, ch) if m.case_id == "C2_A4"][0]
    for p in (5, 7, 11):
        for other in (0, 1, 3):
            assert _valid(m2, construct_case_cycle(m2, p, other_z=other))


def test_c1_on_a4(group_by_name):
    G = group_by_name("A4")
    a = [s for s in range(12) if G.element_orders[s] == 2][0]
    b = [s for s in range(12) if G.element_orders[s] == 3][0]
    ch = _char(G, lambda c: c.is_trivial)
    m = [m for m in all_special_cases(G, [a, b], ch) if m.case_id == "C1_23"][0]
    for p in (5, 7, 13):
        assert _valid(m, construct_case_cycle(m, p))


def test_c1_pattern_fails_on_s3_with_trivial_twist(group_by_name):
    # a does not invert b in Z_p x S3, and no sign pattern closes up
    G = group_by_name("D3")
    a = [s for s in range(6) if G.element_orders[s] == 2][0]
    b = [s for s in range(6) if G.element_orders[s] == 3][0]
    ch = _char(G, lambda c: c.is_trivial)
    m = [m for m in all_special_cases(G, [a, b], ch) if m.case_id == "C1_23"][0]
    with pytest.raises(CaseConstructionError):
        construct_case_cycle(m, 5)


def test_c1_on_s3_with_sign_twist(group_by_name):
    G = group_by_name("D3")
    a = [s for s in range(6) if G.element_orders[s] == 2][0]
    b = [s for s in range(6) if G.element_orders[s] == 3][0]
    ch = _char(G, lambda c: not c.is_trivial)
    m = [m for m in all_special_cases(G, [a, b], ch) if m.case_id == "C1_23"][0]
    for p in (5, 7, 11, 13):
        assert _valid(m, construct_case_cycle(m, p))


def test_inadmissible_prime_rejected(group_by_name):
    G = group_by_name("D5")
    a = [s for s in range(10) if G.element_orders[s] == 2][0]
    b = [s for s in range(10) if G.element_orders[s] == 5][0]
    ch = _char(G, lambda c: not c.is_trivial)
    m = [m for m in all_special_cases(G, [a, b], ch) if m.case_id == "C6_dihedral"][0]
    with pytest.raises(CaseError):
        construct_case_cycle(m, 5)


def test_central_involution_is_discharged(group_by_name):
    G = group_by_name("Z2xZ6")
    from cayleyham.gensets import irredundant_gensets_up_to_equiv

    ch = _char(G, lambda c: c.is_trivial)
    found = set()
    for cls in irredundant_gensets_up_to_equiv(G):
        for m in all_special_cases(G, list(cls.representative.elements), ch):
            found.add(m.case_id)
            if not m.constructive:
                rec = discharge_record(m)
                assert rec.reduction in ("central_normal_generator", "double_edge") and rec.ok
    assert "C4_central_discharge" in found


def test_double_edge_lift(group_by_name):
    G = group_by_name("D4")
    b = [s for s in range(8) if G.element_orders[s] == 4][0]
    a = [s for s in range(8) if G.element_orders[s] == 2 and is_generating(G, [s, b])][0]
    ch = _char(G, lambda c: c.is_trivial)
    for p in (3, 5, 7):
        H = semidirect_zn(p, G, twist_for(ch, p))
        s = H.index(1, a)
        t = H.inv(s)
        S = [s, H.index(0, b)]
        cert = double_edge_lift(H, S, s, t)
        assert validate_cert(cayley_graph(H, S), cert)
