import json
import random

import numpy as np
import pytest

from rlie.charcluster import Character, cluster, cluster_subset, fp_span
from rlie.gf import gf
from rlie.liealg import LieAlgebra, RestrictedLieAlgebra, Subalgebra, is_nilpotent, is_subnormal
from rlie.linalg import Subspace
from rlie.repmod import LModule, hom_module
from rlie.theorem import (CONFIRMED, HYPOTHESES, VACUOUS, Instance, char_zero_hom_submodule,
                          check_hypotheses, check_theorem_instance, evaluation_map, proof_pipeline,
                          random_instance, run_campaign, tensor_power_sum, tensor_power_sum_dim)

from conftest import mat, worked_instance


def abelian(F, n, images=None):
    imgs = np.zeros((n, n, F.m), dtype=np.int64) if images is None else images
    return RestrictedLieAlgebra.from_lie(LieAlgebra.abelian(F, n), imgs)


def test_hypothesis_examples():
    F = gf(3)
    L = abelian(F, 2)
    T = LModule.trivial(L, 1)
    inst = Instance(L, Subalgebra.whole(L), T, T)
    hyp = check_hypotheses(inst)
    assert all(hyp[h]["holds"] for h in HYPOTHESES)
    assert check_theorem_instance(inst).status == CONFIRMED

    L1 = abelian(F, 1, [[1]])
    T1 = LModule.trivial(L1, 1)
    hyp = check_hypotheses(Instance(L1, Subalgebra.whole(L1), T1, T1))
    assert not hyp["centre_kill"]["holds"]
    assert hyp["centre_kill"]["witness"]["z"] == [[1]]

    V = LModule.one_dim(L, [1, 0])
    hyp = check_hypotheses(Instance(L, Subalgebra.whole(L), V, T))
    assert not hyp["V_hypercentral"]["holds"]


def test_subnormality_and_formation_hypotheses():
    F = gf(3)
    L = RestrictedLieAlgebra.from_lie(LieAlgebra.from_brackets(F, 2, {(0, 1): {1: 1}}), [[1, 0], [0, 0]])
    T = LModule.trivial(L, 1)
    hyp = check_hypotheses(Instance(L, Subalgebra.spanned_by(L, [[1, 0]]), T, T))
    assert not hyp["S_subnormal"]["holds"] and hyp["S_in_formation"]["holds"]
    hyp = check_hypotheses(Instance(L, Subalgebra.whole(L), T, T))
    assert not hyp["S_in_formation"]["holds"]
    hyp = check_hypotheses(Instance(L, Subalgebra(L, Subspace.zero(F, 2)), T, T))
    assert not hyp["S_nonzero"]["holds"]


def test_worked_instance():
    inst = worked_instance()
    v = check_theorem_instance(inst)
    F = gf(3)
    assert v.status == CONFIRMED
    ci = v.hypotheses["cluster_inclusion"]
    assert ci["cl_V"] == [[[0], [1]]]
    assert ci["cl_W"] == [[[0], [2]]]
    c = Character(F, ((0,), (1,)), F)
    assert {x.values for x in fp_span(cluster(inst.V))} == {c.scale(k).values for k in range(3)}


def test_worked_instance_negative_variant():
    v = check_theorem_instance(worked_instance(w_prime=True))
    assert v.status == VACUOUS
    ci = v.hypotheses["cluster_inclusion"]
    assert not ci["holds"] and ci["witness"] == [[1], [0]]
    assert v.conclusion["holds"] is False


def test_tensor_power_sum_examples():
    F = gf(3)
    L = abelian(F, 1)
    X = tensor_power_sum(LModule.trivial(L, 1))
    assert X.dim == 2 and [c.is_zero() for c in cluster(X)] == [True]
    V = LModule.one_dim(L, [1])
    X = tensor_power_sum(V)
    assert X.dim == 2
    assert sorted(int(c.elems()[0]) for c in cluster(X)) == [1, 2]
    F2 = gf(2)
    V = LModule(abelian(F2, 1), [mat(F2, [[0, 0], [0, 1]])])
    X = tensor_power_sum(V)
    assert X.dim == 2 + 4
    span = fp_span(cluster(V))
    assert cluster_subset(cluster(X), span) and cluster_subset(span, cluster(X))
    assert tensor_power_sum_dim(2, 2, 3) == 2 + 4 + 8 + 16


def test_char_zero_hom_examples():
    F = gf(3)
    L = abelian(F, 1)
    T = LModule.trivial(L, 2)
    Hm, H = char_zero_hom_submodule(T, T)
    assert H.dim == 4
    V = LModule.one_dim(L, [1])
    Hm, H = char_zero_hom_submodule(V, V)
    assert H.dim == 1
    Hm, H = char_zero_hom_submodule(V, LModule.one_dim(L, [2]))
    assert H.dim == 0


def test_evaluation_map_examples():
    F = gf(3)
    L = abelian(F, 1)
    V = LModule(L, [mat(F, [[0, 1], [0, 0]])])
    Hm = hom_module(V, V)
    ident = F.zeros((1, 4))
    ident[0, 0, 0] = ident[0, 3, 0] = 1
    H = Subspace.span(F, 4, ident)
    ev = evaluation_map(V, Hm, H, V)
    assert ev.intertwines() and ev.image().dim == 2
    ev0 = evaluation_map(V, Hm, Subspace.zero(F, 4), V)
    assert ev0.image().dim == 0
    inst = worked_instance()
    Hm, H = char_zero_hom_submodule(inst.V, inst.V)
    assert evaluation_map(inst.V, Hm, H, inst.V).image().dim == 1


def test_pipeline_on_worked_instance():
    rep = proof_pipeline(worked_instance())
    assert rep["passed"] and rep["zero_gap"]
    names = [s["name"] for s in rep["steps"]]
    assert names[:2] == ["tensor_power_sum", "zero_gap_repair"]
    assert {s["step"] for s in rep["steps"]} == {1, 2, 3, 4, 5, 6}


def test_pipeline_trivial_and_refusal():
    F = gf(2)
    L = abelian(F, 2)
    T = LModule.trivial(L, 2)
    rep = proof_pipeline(Instance(L, Subalgebra.whole(L), T, T))
    assert rep["passed"] and not rep["zero_gap"]
    h = [s for s in rep["steps"] if s["name"] == "char_zero_hom"]
    assert h and all(s["dim_H_full"] == s["dim_hom"] for s in h)
    rep = proof_pipeline(worked_instance(w_prime=True))
    assert not rep["passed"] and rep["refused"]["failed_hypotheses"] == ["cluster_inclusion"]


def test_pipeline_over_an_extension_field_cluster():
    # V has an irreducible 2-dim factor over F_2 that splits over F_4
    F = gf(2)
    L = abelian(F, 2)
    comp = mat(F, [[0, 1], [1, 1]])
    V = LModule(L, [mat(F, [[0, 0], [0, 0]]), comp])
    inst = Instance(L, Subalgebra.spanned_by(L, [[1, 0]]), V, V)
    v = check_theorem_instance(inst)
    assert v.status == CONFIRMED
    assert v.hypotheses["cluster_inclusion"]["field"]["m"] == 2
    rep = proof_pipeline(inst)
    assert rep["passed"], rep.get("error")


def test_random_instances_are_deterministic_and_valid():
    for p in (2, 3, 5):
        for seed in range(6):
            a = random_instance(p, seed=seed)
            b = random_instance(p, seed=seed)
            assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)
            assert not a.problems()
            if a.meta["W"].startswith("unrelated"):
                continue
            cV, cW = cluster(a.V), cluster(a.W)
            assert cluster_subset(cW, fp_span(cV))


def test_generated_good_S_is_subnormal_and_nilpotent():
    n_good = 0
    for seed in range(30):
        inst = random_instance(3, seed=seed)
        hyp = check_hypotheses(inst)
        if hyp["S_subnormal"]["holds"] and hyp["S_in_formation"]["holds"]:
            assert is_subnormal(inst.S)[0] and is_nilpotent(inst.S)
            n_good += 1
    assert n_good >= 15


def test_instance_json_roundtrip():
    inst = random_instance(5, seed=3)
    again = Instance.from_json(json.loads(json.dumps(inst.to_json())))
    assert json.dumps(again.to_json(), sort_keys=True) == json.dumps(inst.to_json(), sort_keys=True)
    assert check_theorem_instance(again).to_json() == check_theorem_instance(inst).to_json()


def test_pipeline_agrees_with_verdicts():
    for p in (2, 3):
        for seed in range(15):
            inst = random_instance(p, seed=seed)
            v = check_theorem_instance(inst)
            rep = proof_pipeline(inst)
            if v.status == CONFIRMED:
                assert rep["passed"], rep.get("error")
            else:
                assert "refused" in rep


def test_small_campaign():
    s = run_campaign([2], 5, keep_records=False)
    assert s["ok"] and sum(s["per_prime"]["2"]["counts"].values()) == 5
    assert "records" not in s["per_prime"]["2"]
