"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (collected again in the
terminal summary) and then asserts the criterion at its stated tolerance.
"""

import io
import math
import random
import time
from fractions import Fraction as F

import mpmath
import pytest

from abshift import cli
from abshift.cantor import (
    IfsSpec,
    chain_bound,
    gap_lemma_test,
    interleaved,
    lambda_approx,
    laboratory_thickness,
    paper_thickness_formula,
    thickness,
)
from abshift.dynamics import Params, expansion_partial_sums, itinerary
from abshift.paramlab import dim_lower_bound, find_witness, r_spec, s_spec, verify_witness
from abshift.shiftspace import KVerdict, admissible, k_sets
from abshift.symbols import SymbolSeq

pytestmark = pytest.mark.acceptance

RESULTS: list[str] = []


def report(number: int, ok: bool, detail: str):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def random_params(rng: random.Random) -> Params:
    ell = rng.randint(3, 10)
    den = rng.randint(2, 200)
    beta = F(rng.randint((ell - 1) * den + 1, (ell + 1) * den - 1), den)
    lo, hi = max(F(0), ell - beta), min(F(1), ell + 1 - beta)
    g = rng.randint(1, 50) * den
    alpha = F(rng.randint(math.ceil(lo * g), math.ceil(hi * g) - 1), g)
    p = Params(alpha, beta)
    assert p.ell == ell
    return p


def random_unit(rng: random.Random) -> F:
    d = rng.randint(1, 10**6)
    return F(rng.randrange(d), d)


def naive_k(pattern, text, n_max, j_max):
    found = []
    for n in range(1, n_max + 1):
        for j in range(1, j_max + 1):
            ok = True
            for i in range(n):
                if pattern[i] != text[j + i]:
                    ok = False
                    break
            if ok:
                found.append((n, j))
                break
    return tuple(found)


def test_1_expansion_round_trip():
    rng = random.Random(1)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(1000):
        p, x = random_params(rng), random_unit(rng)
        sums = expansion_partial_sums(p, itinerary(p, x, 50))
        scale = F(1)
        for s in sums:
            scale /= p.beta
            if not 0 <= x - s < scale:
                bad += 1
    dt = time.perf_counter() - t0
    ok = report(1, bad == 0 and dt < 10, f"{bad} violations in 1000 cases x n=1..50, {dt:.2f}s")
    assert ok


def test_2_admissibility():
    rng = random.Random(2)
    t0 = time.perf_counter()
    rejected = 0
    for _ in range(1000):
        p, x = random_params(rng), random_unit(rng)
        w = itinerary(p, x, rng.randint(1, 100))
        rejected += admissible(p, w, 100) == "no"
    dt = time.perf_counter() - t0
    ok = report(2, rejected == 0 and dt < 10, f"{rejected} itineraries rejected of 1000 at depth 100, {dt:.2f}s")
    assert ok


def random_pair(rng: random.Random):
    def seq():
        k = rng.randint(2, 4)
        pre = tuple(rng.randrange(k) for _ in range(rng.randint(0, 6)))
        per = tuple(rng.randrange(k) for _ in range(rng.randint(1, 6)))
        return SymbolSeq(pre, per)

    u, v = seq(), seq()
    if rng.random() < 0.5:
        # let v start with a piece of u so the K-sets are not trivially empty
        cut = rng.randint(1, 8)
        v = u.shift(cut).prepend(tuple(rng.randrange(2) for _ in range(rng.randint(0, 2))))
    return u, v


def test_3_k_set_oracle():
    rng = random.Random(3)
    t0 = time.perf_counter()
    mismatches = nonempty = 0
    n_max = j_max = 100
    for _ in range(200):
        u, v = random_pair(rng)
        k_u, k_v = k_sets(u, v, n_max, j_max)
        pu, pv = u.prefix(n_max + j_max + 1), v.prefix(n_max + j_max + 1)
        mismatches += k_u.found != naive_k(pv, pu, n_max, j_max)
        mismatches += k_v.found != naive_k(pu, pv, n_max, j_max)
        nonempty += bool(k_u.found) + bool(k_v.found)
    dt = time.perf_counter() - t0
    ok = report(
        3,
        mismatches == 0 and dt < 30,
        f"{mismatches} mismatches over 200 pairs ({nonempty} nonempty K-sets), {dt:.2f}s",
    )
    assert ok


def test_4_witness_certification():
    t0 = time.perf_counter()
    beta = F(29, 10)
    r = verify_witness(F(10, 29), beta, SymbolSeq.parse("(1)"), None, 20)
    s = verify_witness(F(119, 290), beta, None, SymbolSeq.parse("(1)"), 20)
    claims = {
        "u(10/29)=0,(1)": r.u == SymbolSeq.parse("0,(1)"),
        "K(v)=0 certified at 10/29": r.k_v.exact_verdict is KVerdict.EMPTY_CERTIFIED,
        "v(119/290)=3,(1)": s.v == SymbolSeq.parse("3,(1)"),
        "K(u)=0 certified at 119/290": s.k_u.exact_verdict is KVerdict.EMPTY_CERTIFIED,
        "R identity": r.checks.r_identity == 0 and r.checks.r_orbit,
        "S identity": s.checks.s_identity == 0 and s.checks.s_orbit,
        "S floor": s.checks.s_floor,
        "alpha in S window": s.checks.s_identity == 0,
    }
    dt = time.perf_counter() - t0
    failed = [k for k, v in claims.items() if not v]
    detail = (
        f"{len(claims) - len(failed)}/{len(claims)} claims hold, {dt:.2f}s"
        + (f"; failing: {', '.join(failed)}" if failed else "")
        + f"; observed K(u)@10/29={r.k_u.exact_verdict.value}, K(v)@10/29={r.k_v.exact_verdict.value}"
        f" found n<={max(r.k_v.elements, default=0)}, K(v)@119/290={s.k_v.exact_verdict.value},"
        f" K(u)@119/290={s.k_u.exact_verdict.value}"
    )
    ok = report(4, not failed and dt < 1, detail)
    assert ok


def test_5_golden_mean():
    t0 = time.perf_counter()
    u, v = SymbolSeq.parse("(0)"), SymbolSeq.parse("(1,0)")
    k_u, k_v = k_sets(u, v, 1000)
    dt = time.perf_counter() - t0
    # classical criterion: K(v) is bounded by the longest run of zeros in v
    longest_zero_run = max(len(r) for r in "".join(map(str, v.prefix(2000))).split("1"))
    ok = k_v.elements == [1] == list(range(1, longest_zero_run + 1)) and k_u.elements == [] and dt < 1
    report(5, ok, f"K(v)={set(k_v.elements)}, K(u)={set(k_u.elements) or '{}'}, zero run {longest_zero_run}, {dt:.2f}s")
    assert ok


def naive_thickness(u):
    parts = u.parts
    g = [parts[i + 1].lo - parts[i].hi for i in range(len(parts) - 1)]
    best = None
    for i, gi in enumerate(g):
        k = i - 1
        while k >= 0 and g[k] < gi:
            k -= 1
        left = parts[i].hi - parts[k + 1].lo
        k = i + 1
        while k < len(g) and g[k] < gi:
            k += 1
        right = parts[k].hi - parts[i + 1].lo
        r = min(left, right) / gi
        best = r if best is None else min(best, r)
    return best


def test_6_thickness():
    t0 = time.perf_counter()
    problems = []
    cases = [F(29, 10), F(3), F(7, 2), F(5), F(99, 10)]
    for beta in cases:
        ell = math.ceil(beta)
        spec = IfsSpec.laboratory(beta, ell)
        expected = laboratory_thickness(beta, ell)
        for n in range(1, 7):
            u = lambda_approx(spec, n)
            tau = thickness(u, n).tau
            if tau != expected:
                problems.append(f"beta={beta} level {n}: {tau} != {expected}")
            if n <= 3 and naive_thickness(u) != tau:
                problems.append(f"beta={beta} level {n}: scan oracle disagrees")
        if expected < chain_bound(ell):
            problems.append(f"beta={beta}: {expected} < (ell-2)/2")
    discrepancy = laboratory_thickness(F(3), 3) == 1 and paper_thickness_formula(F(3)) == 2
    dt = time.perf_counter() - t0
    ok = not problems and discrepancy and dt < 30
    report(
        6,
        ok,
        f"levels 1-6 constant and equal to (l-2)/(beta+1-l) for {len(cases)} betas; "
        f"beta=3 computed 1 vs displayed formula 2 (logged finding); {dt:.2f}s"
        + (f"; problems: {problems}" if problems else ""),
    )
    assert ok


def test_7_dimension_pipeline():
    t0 = time.perf_counter()
    with mpmath.workdps(50):
        ref = 1 + mpmath.log(2) / mpmath.log(3)
        err10 = abs(mpmath.mpf(dim_lower_bound(10).numerator) / dim_lower_bound(10).denominator - ref)
    at_314 = dim_lower_bound(314)
    values = [dim_lower_bound(10**k) for k in range(1, 7)]
    monotone = all(a < b for a, b in zip(values, values[1:])) and values[-1] < 2
    dt = time.perf_counter() - t0
    checks = {
        "dim(10) within 1e-12": err10 < mpmath.mpf("1e-12"),
        "dim(314) >= 1.9": at_314 >= F(19, 10),
        "monotone toward 2": monotone,
        "runtime < 1s": dt < 1,
    }
    failed = [k for k, v in checks.items() if not v]
    report(
        7,
        not failed,
        f"dim(10) error {mpmath.nstr(err10, 3)}, dim(314) >= {float(at_314):.9f}, "
        f"dim(315) >= {float(dim_lower_bound(315)):.9f}, 10^k values {[round(float(v), 6) for v in values]}, {dt:.2f}s"
        + (f"; failing: {', '.join(failed)}" if failed else ""),
    )
    assert not failed


def test_8_intersection_nonempty():
    t0 = time.perf_counter()
    beta = F(29, 10)
    rep = find_witness(beta, 8)
    chain = rep.alpha if not rep.exact else []
    ra, sa = r_spec(beta), s_spec(beta)
    nested = len(chain) == 8 and all(a.contains_interval(b) for a, b in zip(chain, chain[1:]))
    # each enclosure is the meet of a depth-d R-cylinder and S-cylinder, whose
    # widths contract by exactly beta per depth
    cyl = [min(ra.cylinder_width(d), sa.cylinder_width(d)) for d in range(1, 9)]
    contracting = all(a / b == beta for a, b in zip(cyl, cyl[1:]))
    bounded = all(iv.length <= w for iv, w in zip(chain, cyl))
    gap = gap_lemma_test(F(10, 9), F(10, 9))
    inter = interleaved(lambda_approx(ra, 3), lambda_approx(sa, 3))
    dt = time.perf_counter() - t0
    ok = nested and contracting and bounded and gap and inter and dt < 10
    report(
        8,
        ok,
        f"nested chain of {len(chain)}, last width {float(chain[-1].length):.3g} <= "
        f"{float(cyl[-1]):.3g} = W*beta^-8, gap lemma {gap}, interleaved {inter}, {dt:.2f}s",
    )
    assert ok


def test_9_sweep_determinism(tmp_path):
    t0 = time.perf_counter()
    outputs = []
    for workers in (1, 4, 16):
        path = tmp_path / f"sweep_{workers}.csv"
        code = cli.main(
            ["sweep", "--ell", "10", "--start", "9", "--end", "11", "--steps", "1000",
             "--depth", "2", "--workers", str(workers), "--output", str(path)],
            io.StringIO(),
        )
        assert code == 0
        outputs.append(path.read_bytes())
    dt = time.perf_counter() - t0
    rows = outputs[0].count(b"\n") - 1
    same = outputs[0] == outputs[1] == outputs[2]
    ok = same and rows == 1000 and dt < 120
    report(9, ok, f"{rows} rows, byte-identical at workers 1/4/16: {same}, {dt:.1f}s")
    assert ok
