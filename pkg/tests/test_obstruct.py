"""Forcing certificates for the non-embeddability catalog."""

import json
from dataclasses import replace

import pytest

from semitop.core import canonical_classes
from semitop.errors import DomainError, LoadError
from semitop.obstruct import (
    CatalogInstance,
    EscapeTarget,
    NoObstruction,
    ObstructionCertificate,
    catalog,
    certificate_doc,
    certificate_from_doc,
    chain_finite_check,
    escape_certificate,
    forcing_closure,
    get_instance,
    instance_doc,
    instance_from_doc,
    right_simple_check,
    target_fired,
    verify_certificate,
)
from semitop.semigroups import (
    antichain_with_zero,
    chain_semilattice,
    cyclic_group,
    powerset_semilattice,
    right_zero,
)
from semitop.topo import points_of

FAMILIES = ["exB", "odd_chain", "right_simple_zero:Z2", "brandt", "luke"]


def test_catalog_lists_the_five_families():
    insts = catalog(4)
    assert [i.instance_id for i in insts] == FAMILIES
    for inst in insts:
        assert inst.presentation.window == 4
        assert inst.limit in inst.presentation.limit_points


def test_get_instance_variants_and_errors():
    assert get_instance("right_simple_zero:S3", 4).presentation.base.n == 25
    assert get_instance("exB-discrete", 5).instance_id == "exB-discrete"
    with pytest.raises(LoadError):
        get_instance("unknown_family", 4)
    with pytest.raises(DomainError):
        get_instance("exB", 3)


def test_branch_counts_grow_with_the_window():
    expected = {
        4: {"exB": 2, "odd_chain": 1, "right_simple_zero:Z2": 1, "brandt": 2, "luke": 2},
        6: {"exB": 4, "odd_chain": 2, "right_simple_zero:Z2": 1, "brandt": 4, "luke": 4},
    }
    for w, counts in expected.items():
        for inst in catalog(w):
            cert = escape_certificate(inst)
            assert isinstance(cert, ObstructionCertificate)
            assert len(cert.branches) == counts[inst.instance_id]
            assert len(cert.branches) == len(inst.admissible())


def test_certificates_verify_on_all_families():
    for w in (4, 5, 6):
        for inst in catalog(w):
            cert = escape_certificate(inst)
            assert verify_certificate(inst, cert) == (True, None)


def test_discrete_controls_survive():
    for fam in FAMILIES:
        inst = get_instance(fam + "-discrete", 4)
        res = escape_certificate(inst)
        assert isinstance(res, NoObstruction)
        assert res.surviving in inst.admissible()
        assert res.classes[inst.limit] == inst.limit  # limit class stays put


def test_forcing_closure_chain_is_sound():
    inst = get_instance("exB", 5)
    v = inst.admissible()[0]
    rho, chain = forcing_closure(inst.presentation, inst.limit, v)
    t = inst.presentation.base.table
    n = inst.presentation.base.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = sorted((find(x), find(y)))
        parent[ry] = rx

    for z in points_of(v):
        if z != inst.limit:
            union(inst.limit, z)
    for (a, b), m, (da, db) in chain:
        assert t[a][m] == da and t[b][m] == db
        union(da, db)
    assert canonical_classes(tuple(find(x) for x in range(n))) == rho.classes
    with pytest.raises(DomainError):
        forcing_closure(inst.presentation, inst.limit, 0b1)


def test_target_fired_witnesses():
    inst = get_instance("exB", 4)
    cert = escape_certificate(inst)
    for br in cert.branches:
        tgt = inst.targets[br.target_index]
        fired, wit = target_fired(
            tgt, forcing_closure(inst.presentation, inst.limit, br.neighborhood)[0],
            inst.limit)
        assert fired and wit == br.witness


def test_tampered_certificates_are_rejected():
    inst = get_instance("exB", 4)
    cert = escape_certificate(inst)

    def rebuild(branches):
        return ObstructionCertificate(
            instance_id=cert.instance_id, window=cert.window,
            guard=cert.guard, limit=cert.limit, branches=tuple(branches))

    dropped = rebuild(cert.branches[:-1])
    ok, why = verify_certificate(inst, dropped)
    assert not ok and "cover" in why

    br = cert.branches[0]
    (pair, m, derived) = br.chain[0]
    bad_step = (pair, (m + 1) % inst.presentation.base.n, derived)
    patched = replace(br, chain=(bad_step,) + br.chain[1:])
    ok, why = verify_certificate(inst, rebuild([patched] + list(cert.branches[1:])))
    assert not ok and "multiplier" in why

    other = get_instance("exB", 5)
    ok, why = verify_certificate(other, cert)
    assert not ok and "mismatch" in why

    renamed = ObstructionCertificate(
        instance_id="odd_chain", window=cert.window, guard=cert.guard,
        limit=cert.limit, branches=cert.branches)
    ok, why = verify_certificate(inst, renamed)
    assert not ok and "different instance" in why


def test_certificate_doc_round_trip():
    inst = get_instance("brandt", 5)
    cert = escape_certificate(inst)
    doc = json.loads(json.dumps(certificate_doc(cert)))
    again = certificate_from_doc(doc)
    assert again == cert
    assert verify_certificate(inst, again) == (True, None)
    no = escape_certificate(get_instance("brandt-discrete", 5))
    doc2 = json.loads(json.dumps(certificate_doc(no)))
    assert certificate_from_doc(doc2) == no
    with pytest.raises(LoadError):
        certificate_from_doc({"schema": 1})


def test_instance_doc_round_trip():
    inst = get_instance("luke", 4)
    doc = json.loads(json.dumps(instance_doc(inst)))
    again = instance_from_doc(doc)
    assert again.instance_id == inst.instance_id
    assert again.targets == inst.targets
    assert again.presentation.families == inst.presentation.families
    cert = escape_certificate(again)
    assert verify_certificate(inst, cert) == (True, None)


def test_escape_target_validation():
    with pytest.raises(DomainError):
        EscapeTarget(mode="sideways")
    with pytest.raises(DomainError):
        EscapeTarget(mode="class-escapes")
    with pytest.raises(DomainError):
        EscapeTarget(mode="isolated-collapses")
    inst = get_instance("exB", 4)
    with pytest.raises(DomainError):  # collapse target must be isolated
        CatalogInstance(
            instance_id="x", presentation=inst.presentation, limit=inst.limit,
            targets=(EscapeTarget(mode="isolated-collapses", point=inst.limit),))


def test_right_simple_check():
    assert right_simple_check(right_zero(3)) == (True, None)
    assert right_simple_check(cyclic_group(3)) == (True, None)
    ok, wit = right_simple_check(chain_semilattice(3))
    assert not ok and wit == 0


def test_chain_finite_check_values():
    assert chain_finite_check(antichain_with_zero(3)) == (True, (0, 3))
    assert chain_finite_check(powerset_semilattice(2)) == (True, (3, 1, 0))
    assert chain_finite_check(chain_semilattice(5)) == (True, (4, 3, 2, 1, 0))


def test_window_bounds():
    for fam in FAMILIES:
        with pytest.raises(DomainError):
            get_instance(fam, 3)
        inst = get_instance(fam, 12)
        cert = escape_certificate(inst)
        assert verify_certificate(inst, cert) == (True, None)
