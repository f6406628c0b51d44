"""Acceptance suite: one test per criterion, each leaving a PASS/FAIL line.

The lines are printed as the tests run and collected again in the terminal
summary (see ``conftest.py``).
"""
from __future__ import annotations

import itertools
import json
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction as F
from pathlib import Path

import trace_log
from corpus import corpus_2d, corpus_3d, random_polytope, random_rational, split_cut_intersection
from splitrank.certify import build_directions, certify_facet, verify_claim2
from splitrank.cli import main
from splitrank.closure import (
    bounded_directions,
    bounded_split_rank,
    chvatal_closure,
    d_set_closure,
    direction_closure,
)
from splitrank.errors import RankDeficient
from splitrank.hull import FacetInequality, facet_system, integer_hull, lattice_points
from splitrank.io import load_polyhedron, polyhedron_to_json
from splitrank.lp import in_cone
from splitrank.numerics import basis_in_cone, det, extend_to_lattice_basis, hnf, in_span_coordinates, matmul
from splitrank.polyhedron import Polyhedron, intersect_all, recession_cone

DATA = Path(__file__).parent / "data"
NAMED = ["t1", "box_three_halves", "unit_box", "strip", "interval", "half_slab", "rank_two"]

# seconds each 3-D instance may spend in the certify command before it is
# counted as not terminating within the test run
BUDGET_3D = 10


@contextmanager
def criterion(n):
    note = {"detail": ""}
    try:
        yield note
    except BaseException as exc:
        first = (str(exc).splitlines() or [""])[0]
        line = f"criterion {n}: FAIL ({type(exc).__name__}: {first[:400]})"
        trace_log.ACCEPTANCE[n] = line
        print(line)
        raise
    line = f"criterion {n}: PASS ({note['detail']})"
    trace_log.ACCEPTANCE[n] = line
    print(line)


def named(name):
    return load_polyhedron(DATA / f"{name}.json")[0]


def corpus():
    return [(2, Q) for Q in corpus_2d()] + [(3, Q) for Q in corpus_3d()]


def test_criterion_1_definition_equivalence():
    with criterion(1) as note:
        start = time.perf_counter()
        pairs = 0
        for dim, Q in corpus():
            for d in bounded_directions(dim, 2):
                assert direction_closure(Q, d) == split_cut_intersection(Q, d), (Q.vertices, d)
                pairs += 1
        elapsed = time.perf_counter() - start
        assert elapsed < 300, f"took {elapsed:.0f} s"
        note["detail"] = f"{pairs} polytope/direction pairs over 200 2-D and 50 3-D polytopes, {elapsed:.0f} s"


def _same_lattice_points_subset(rng, Q):
    """``conv`` of the lattice points of ``Q`` and two random points of ``Q``."""
    verts = list(Q.vertices)
    extra = []
    for _ in range(2):
        weights = [F(rng.randint(0, 4)) for _ in verts]
        if not any(weights):
            weights[0] = F(1)
        total = sum(weights)
        extra.append(tuple(sum(w * v[i] for w, v in zip(weights, verts)) / total for i in range(Q.dim)))
    return Polyhedron.from_generators(Q.dim, list(lattice_points(Q)) + extra)


def test_criterion_2_sandwich_and_monotonicity():
    with criterion(2) as note:
        rng = random.Random(2)
        pairs = 0
        for idx, (dim, Q) in enumerate(corpus()):
            D = bounded_directions(dim, 2)
            P = integer_hull(Q)
            S1 = d_set_closure(Q, D)
            assert P.is_subset(S1) and S1.is_subset(Q)
            S2 = d_set_closure(S1, D)
            assert P.is_subset(S2) and S2.is_subset(S1)
            assert S1.is_subset(chvatal_closure(Q, D))
            if idx % 4 == 0:
                R = _same_lattice_points_subset(rng, Q)
                assert R.is_subset(Q) and lattice_points(R) == lattice_points(Q)
                assert d_set_closure(R, D).is_subset(S1)
                pairs += 1
        assert pairs >= 50
        note["detail"] = f"250 polytopes with all directions of max-norm <= 2, {pairs} subset pairs"


def test_criterion_3_named_instances():
    with criterion(3) as note:
        expected = {
            "interval": (1, 1, Polyhedron.from_constraints(1, [((-1,), 10), ((1,), 0)])),
            "strip": (1, 1, Polyhedron.empty(2)),
            "t1": (1, 1, Polyhedron.from_generators(2, [(0, 0), (1, 0)])),
            "box_three_halves": (1, 1, Polyhedron.from_generators(2, [(0, 0), (1, 0), (0, 1), (1, 1)])),
            "unit_box": (1, 0, Polyhedron.from_generators(2, [(0, 0), (1, 0), (0, 1), (1, 1)])),
        }
        for name, (L, t, hull) in expected.items():
            Q = named(name)
            reached = bounded_split_rank(Q, L)
            assert reached.t == t, (name, reached.t)
            assert reached.iterates[-1] == hull == integer_hull(Q), name
            # cross-check every round against the slice-free oracle
            S = Q
            for _ in range(t):
                D = [d for d in bounded_directions(Q.dim, L)
                     if None not in S.bounds(d)]
                S = intersect_all([split_cut_intersection(S, d) for d in D], Q.dim)
            assert S == hull, name
        note["detail"] = "Q1', strip, T1, [0,3/2]^2 reach their hulls in 1 round, [0,1]^2 in 0"


def _certify_and_check(path, tmp, timeout=None):
    out = tmp / "cert.json"
    if out.exists():
        out.unlink()
    if timeout is None:
        code = main(["certify", str(path), "--out", str(out)])
    else:
        try:
            code = subprocess.run(
                [sys.executable, "-m", "splitrank.cli", "certify", str(path), "--out", str(out)],
                capture_output=True, timeout=timeout).returncode
        except subprocess.TimeoutExpired:
            return None
    assert code == 0, f"certify exit {code} on {path}"
    cert = json.loads(out.read_text())
    assert cert["verified"] is True and cert["T"] <= 50
    assert cert["T"] == max((f["t_star"] for f in cert["facets"]), default=0)
    assert main(["check", str(path), str(out)]) == 0, f"check failed on {path}"
    return cert


def _write(Q, tmp, name):
    path = tmp / f"{name}.json"
    data = polyhedron_to_json(Q, name)
    path.write_text(json.dumps({"dim": Q.dim, "name": name, "ineq": data["ineq"], "eq": data["eq"]}))
    return path


def test_criterion_4_certifier_soundness(tmp_path):
    with criterion(4) as note:
        Ts = []
        for name in NAMED:
            Ts.append(_certify_and_check(DATA / f"{name}.json", tmp_path)["T"])
        for i, Q in enumerate(corpus_2d()):
            Ts.append(_certify_and_check(_write(Q, tmp_path, f"c2_{i}"), tmp_path)["T"])
        done, over = 0, []
        for i, Q in enumerate(corpus_3d()):
            cert = _certify_and_check(_write(Q, tmp_path, f"c3_{i}"), tmp_path, timeout=BUDGET_3D)
            if cert is None:
                over.append(i)
            else:
                done += 1
                Ts.append(cert["T"])
        summary = (f"{len(NAMED)} named and 200 2-D instances certified and re-checked, max T = {max(Ts)}; "
                   f"3-D: {done}/50 within {BUDGET_3D} s each")
        assert not over, summary + f", still running after the budget: {over}"
        note["detail"] = summary


def test_criterion_5_two_step_decrease():
    with criterion(5) as note:
        # every trace built so far in this run went through the trace log;
        # top it up with the potential tables of the named instances
        for name in NAMED:
            Q = named(name)
            for f in facet_system(Q, integer_hull(Q)).rows():
                certify_facet(Q, f)
        log = trace_log.LOG
        assert log["traces"] > 0
        assert not log["claim2_failures"], log["claim2_failures"][:3]
        note["detail"] = f"{log['traces']} traces so far in this run, none violates it"


def test_criterion_6_face_inclusions():
    with criterion(6) as note:
        log = trace_log.LOG
        assert log["fixpoint_runs"] > 0
        assert not log["claim3_failures"], log["claim3_failures"][:3]
        note["detail"] = f"{log['fixpoint_runs']} facet runs reached a closure fixpoint, all inclusions hold"


def _random_unbounded(rng, dim):
    pts = [tuple(random_rational(rng) for _ in range(dim)) for _ in range(rng.randint(1, 3))]
    rays = [tuple(rng.randint(-2, 2) for _ in range(dim)) for _ in range(rng.randint(1, 2))]
    lin = [tuple(rng.randint(-1, 1) for _ in range(dim))] if rng.random() < 0.3 else []
    return Polyhedron.from_generators(dim, pts, rays, lin)


def test_criterion_7_recession_cone_preserved():
    with criterion(7) as note:
        rng = random.Random(7)
        instances = [Q for _, Q in corpus()] + [named("half_slab"), named("strip")]
        instances += [_random_unbounded(rng, rng.randint(2, 3)) for _ in range(60)]
        checked = 0
        for Q in instances:
            P = integer_hull(Q)
            if P.is_empty():
                continue
            assert recession_cone(P) == recession_cone(Q), Q
            checked += 1
        note["detail"] = (f"{checked} of {len(instances)} instances have a nonempty hull "
                          "(250 corpus polytopes, the slab, the strip and 60 random unbounded sets)")


def _lattice_free(ws):
    """No nonzero integral point in the half-open parallelepiped, by brute force."""
    n = len(ws[0])
    lo = [sum(min(0, w[i]) for w in ws) for i in range(n)]
    hi = [sum(max(0, w[i]) for w in ws) for i in range(n)]
    for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if not any(p):
            continue
        coords = in_span_coordinates(ws, p)
        if coords is not None and all(0 <= c < 1 for c in coords):
            return False
    return True


def test_criterion_8_lattice_routines():
    with criterion(8) as note:
        rng = random.Random(8)
        cones = 0
        while cones < 120:
            n = rng.randint(2, 3)
            k = rng.randint(1, n)
            gs = [tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(k)]
            try:
                H, U = hnf(gs)
            except RankDeficient:
                continue
            cones += 1
            assert matmul(U, gs) == tuple(tuple(r) for r in H) and abs(det(U)) == 1
            ws = basis_in_cone(gs, n)
            assert len(ws) == k
            assert all(in_cone(w, gs) for w in ws)
            assert _lattice_free(ws)
            B = extend_to_lattice_basis(ws, n)
            assert abs(det(B)) == 1 and [tuple(b) for b in B[:k]] == [tuple(w) for w in ws]
        note["detail"] = f"{cones} random cones in dims 2 and 3"


def test_criterion_9_worked_certificate_values():
    with criterion(9) as note:
        Q = named("t1")
        facet = FacetInequality((0, 1), 0)
        D = build_directions(Q, facet)
        assert D.d == ((0, 1), (1, 3), (3, 10))
        assert D.M == (1, 1)
        fc = certify_facet(Q, facet)
        assert fc.t_star == 1 and verify_claim2(fc.trace)
        note["detail"] = "T1: D = {(0,1),(1,3),(3,10)}, M = (1,1), t* = 1"


def test_criterion_10_rank_two_instance():
    with criterion(10) as note:
        found = None
        for seed in range(200):
            rng = random.Random(seed)
            Q = random_polytope(rng, 2, rng.randint(3, 5))
            r = bounded_split_rank(Q, 2, cap=6)
            if r.t >= 2:
                found = (seed, r.t, Q)
                break
        assert found is not None
        seed, t, Q = found
        pinned = named("rank_two")
        assert pinned == Q
        assert bounded_split_rank(pinned, 2).t == 2
        note["detail"] = f"seed {seed} gives Reached({t}) with L = 2; pinned as data/rank_two.json"
