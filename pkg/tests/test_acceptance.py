"""Exit criteria for the package, one test per criterion.

Each test prints a single PASS/FAIL line; the lines are repeated in the
pytest terminal summary.
"""

import functools
import io
import json
import random
import time

import pytest

import oracles
from acceptance_log import record
from helpers import diag_tuple
from simsim.annihilator import annihilator_basis, condition_c_check, is_annihilating
from simsim.cli import main
from simsim.exactnum import Matrix
from simsim.krylov import find_cyclic_tuple, is_cyclic
from simsim.norms import hardy_truncation_demo, inequality_sample_test, optimal_constant
from simsim.similarity import (
    VerdictKind, conjugate, decide_similarity, synthesize_from_pair, verify_similarity,
)
from simsim.tuples import (
    RECIPES, CommutingTuple, PolyVector, VectorTuple, evaluate, random_commuting_tuple,
    random_invertible_matrix, standard_basis,
)

EX_A = [["0", "1"], ["0", "0"]]
EX_B = [["-1", "1"], ["-1", "1"]]
EX_S = [["-1", "2"], ["-1", "1"]]


def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out=out, err=err)
    return code, out.getvalue()


def test_criterion_1_nilpotent_example(tmp_path):
    a, b, s = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "s.json"
    a.write_text(json.dumps({"n": 2, "m": 1, "matrices": [EX_A]}))
    b.write_text(json.dumps({"n": 2, "m": 1, "matrices": [EX_B]}))
    s.write_text(json.dumps({"S": EX_S}))
    t0 = time.perf_counter()

    code_c, out_c = _cli("condition-c", a, b, "--json")
    doc_c = json.loads(out_c)
    code_v, _ = _cli("verify", a, b, "--certificate", s)
    code_d, out_d = _cli("decide", a, b, "--json", "--seed", 7)
    doc_d = json.loads(out_d)

    A = CommutingTuple([Matrix.from_rows(EX_A)])
    B = CommutingTuple([Matrix.from_rows(EX_B)])
    E = standard_basis(2)
    cc = condition_c_check(A, E, B, E)
    witness = PolyVector([{(0,): 1}, {(1,): -1}], m=1)
    e1_minus_Ae2 = evaluate(A, E, witness)
    e1_minus_Be2 = evaluate(B, E, witness)
    S_dec = Matrix.from_rows(doc_d["certificate"]["S"])
    elapsed = time.perf_counter() - t0

    ok = (code_c == 1 and doc_c["holds"] is False and doc_c["witness"]["text"] == "(1, -z)"
          and not cc.holds and cc.witness == witness
          and not any(e1_minus_Ae2) and any(e1_minus_Be2)
          and code_v == 0 and verify_similarity(A, B, Matrix.from_rows(EX_S))
          and code_d == 0 and doc_d["result"] == "SIMILAR" and verify_similarity(A, B, S_dec)
          and elapsed < 1.0)
    record(1, "nilpotent 2x2 example: witness (1, -z), printed S verifies, decide SIMILAR", ok,
           f"{elapsed:.3f}s")
    assert ok


@functools.lru_cache(maxsize=None)
def _round_trip_instances():
    """The 100 round-trip instances (A, U, B, V), failing indices and elapsed time."""
    rng = random.Random(20240611)
    out = []
    failures = []
    t0 = time.perf_counter()
    for i in range(100):
        n, m = rng.randint(2, 6), rng.randint(1, 3)
        recipe = RECIPES[i % len(RECIPES)]
        A = random_commuting_tuple(n, m, seed=rng.randrange(2 ** 32), recipe=recipe)
        S = random_invertible_matrix(n, rng)
        B = conjugate(A, S)
        U = find_cyclic_tuple(A, "greedy")
        V = U.transformed(S)
        holds = condition_c_check(A, U, B, V).holds
        cert = synthesize_from_pair(A, U, B, V) if holds else None
        if not (holds and verify_similarity(A, B, cert.S)):
            failures.append(i)
        out.append((A, U, B, V))
    return tuple(out), failures, time.perf_counter() - t0


def test_criterion_2_round_trip():
    instances, failures, elapsed = _round_trip_instances()
    sizes = {A.n for A, *_ in instances}
    lengths = {A.m for A, *_ in instances}
    ok = (len(instances) == 100 and not failures and elapsed < 60.0
          and sizes == {2, 3, 4, 5, 6} and lengths == {1, 2, 3})
    record(2, "100 random conjugate pairs: condition (c) holds and S' verifies", ok,
           f"{100 - len(failures)}/100 exact, {elapsed:.1f}s")
    assert ok


def _joint_spectrum_pair(rng):
    n, m = rng.randint(1, 6), rng.randint(1, 3)
    joint = [tuple(rng.randint(-4, 4) for _ in range(m)) for _ in range(n)]
    other = list(joint)
    rng.shuffle(other)
    i = rng.randrange(n)
    bumped = list(other[i])
    bumped[rng.randrange(m)] += rng.choice([-1, 1]) * rng.randint(1, 3)
    other[i] = tuple(bumped)
    assert sorted(joint) != sorted(other)
    A = diag_tuple(*[[s[l] for s in joint] for l in range(m)])
    B = diag_tuple(*[[s[l] for s in other] for l in range(m)])
    return A, B


def test_criterion_3_non_similar_discrimination():
    rng = random.Random(31337)
    kinds = {k: 0 for k in VerdictKind}
    bad = []
    for t in range(50):
        A, B = _joint_spectrum_pair(rng)
        v = decide_similarity(A, B, trials=20, grid_size=10 ** 6, seed=t)
        kinds[v.kind] += 1
        if v.kind is VerdictKind.NOT_SIMILAR_EXACT:
            continue
        if v.kind is VerdictKind.NOT_SIMILAR_SAMPLED and \
                v.failure_probability_bound <= (A.n / 10 ** 6) ** 20:
            continue
        bad.append((t, v.kind))
    ok = not bad
    record(3, "50 diagonal pairs with distinct joint spectra: never SIMILAR", ok,
           f"exact={kinds[VerdictKind.NOT_SIMILAR_EXACT]}, "
           f"sampled={kinds[VerdictKind.NOT_SIMILAR_SAMPLED]}, wrong={len(bad)}")
    assert ok


def test_criterion_4_hardy_truncation():
    t0 = time.perf_counter()
    rows = hardy_truncation_demo(12)
    elapsed = time.perf_counter() - t0
    ok = (
        [r.n for r in rows] == list(range(2, 13))
        and all(r.condition_c_holds for r in rows)
        and all(abs(r.c_n - 2.0 ** (r.n - 1)) <= 1e-9 * 2.0 ** (r.n - 1) for r in rows)
        and all(a.c_n < b.c_n for a, b in zip(rows, rows[1:]))
        and elapsed < 5.0
    )
    record(4, "truncated Hardy shift: condition (c) holds, c_n = 2^(n-1), n = 2..12", ok,
           f"c_12 = {rows[-1].c_n:.9g}, {elapsed:.2f}s")
    assert ok


def test_criterion_5_annihilator_oracle():
    rng = random.Random(555)
    t0 = time.perf_counter()
    mismatches = []
    for t in range(50):
        n, k, m, D = rng.randint(1, 4), rng.randint(1, 2), rng.randint(1, 2), rng.randint(0, 4)
        T = random_commuting_tuple(n, m, seed=rng.randrange(2 ** 32), recipe=rng.choice(RECIPES))
        U = VectorTuple([[rng.randint(-3, 3) for _ in range(n)] for _ in range(k)], n=n)
        basis = annihilator_basis(T, U, D)
        terms, kernel = oracles.annihilator_space(T, U, D)
        ours = [oracles.as_coordinates(P, terms) for P in basis]
        annihilating = all(is_annihilating(T, U, P) for P in basis)
        if not (annihilating and oracles.same_span(ours, kernel, len(terms))):
            mismatches.append(t)
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 30.0
    record(5, "annihilator_basis spans the brute-force kernel on 50 instances", ok,
           f"{50 - len(mismatches)}/50 agree, {elapsed:.1f}s")
    assert ok


def test_criterion_6_inequality_sampling():
    instances, _, _ = _round_trip_instances()
    failed = []
    worst = 1.0
    for i, (A, U, B, V) in enumerate(instances):
        c = optimal_constant(A, U, B, V, samples=0).c
        res = inequality_sample_test(A, U, B, V, c, samples=1000, max_degree=6, seed=i)
        worst = max(worst, res.worst_ratio / c)
        if not res.passed or res.samples != 1000:
            failed.append(i)
    ok = not failed
    record(6, "two-sided inequality with c = max(||S||, ||S^-1||) on every accepted pair", ok,
           f"{len(instances) - len(failed)}/{len(instances)} pass 1000 samples, "
           f"max observed ratio/c = {worst:.6f}")
    assert ok


def test_criterion_7_degenerate_cases():
    zero = CommutingTuple([Matrix.zeros(1)])
    one = CommutingTuple([Matrix.identity(1)])
    v01 = decide_similarity(zero, one)
    A = random_commuting_tuple(3, 2, seed=7, recipe="conjugated")
    vAA = decide_similarity(A, A)
    U = find_cyclic_tuple(A)
    c = optimal_constant(A, U, A, U).c
    zero_tuples_not_cyclic = all(
        not is_cyclic(CommutingTuple([Matrix.identity(n)]), VectorTuple([[0] * n]))
        and not is_cyclic(CommutingTuple([Matrix.zeros(n)]), VectorTuple([[0] * n] * 2))
        for n in range(1, 5))
    ok = (v01.kind is VerdictKind.NOT_SIMILAR_EXACT
          and vAA.kind is VerdictKind.SIMILAR and verify_similarity(A, A, vAA.certificate.S)
          and c == pytest.approx(1.0, abs=1e-12)
          and zero_tuples_not_cyclic)
    record(7, "degenerate cases: (0) vs (1), A vs A, zero vector tuple", ok,
           f"(0)~(1): {v01.kind.value}, A~A: {vAA.kind.value}, c = {c:.12g}")
    assert ok
