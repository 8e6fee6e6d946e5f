"""The fourteen acceptance criteria, each at its stated tolerance.

Every criterion records a PASS or FAIL line, printed together at the end
of the run.  The sparse Monte Carlo variants are expected to fail at
desk-scale N; they are strict xfails so an unexpected pass is reported.
"""

import itertools
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from tracewords.band import alpha_cycle, alpha_estimate, cycle_graph
from tracewords.expansion import (
    atom_free_expansion,
    genus_expansion,
    spherical_counts,
    spherical_rule_check,
)
from tracewords.laurent import LaurentPolynomial as LP
from tracewords.limits import (
    clt_params,
    fc_moment_of_word,
    fuss_catalan,
    mixed_moment_limit,
    word_mixed_moment_limit,
)
from tracewords.montecarlo import (
    EnsembleSpec,
    MCConfig,
    centered_trace_covariance,
    estimate,
    squared_singular_moments,
    trace_samples,
)
from tracewords.oracle import brute_force_wick_oracle
from tracewords.pairings import Layout, iter_raw
from tracewords.topology import glue, glue_raw
from tracewords.words import Ensemble, Letter, Word, coperiod, is_balanced, parse_word, star

from conftest import (
    balanced_letters,
    gg_configurations,
    random_star_free,
    record,
    split_faces,
)

pytestmark = pytest.mark.acceptance

# star-free words of length <= 3 up to renaming of indices
SHORT_WORDS = ["G1", "G1 G1", "G1 G2", "G1 G1 G1", "G1 G1 G2", "G1 G2 G1", "G1 G2 G2", "G1 G2 G3"]


def rising(k):
    # N^-k (N^2)(N^2 + 1)...(N^2 + k - 1), multiplied out
    p = LP.constant(1)
    for j in range(k):
        p = p * LP({2: 1, 0: j})
    return p * LP.monomial(-k)


def cycles(perm):
    seen, c = set(), 0
    for s in range(len(perm)):
        if s not in seen:
            c += 1
            while s not in seen:
                seen.add(s)
                s = perm[s]
    return c


# --- exact criteria -------------------------------------------------------------


def test_criterion_01_gamma_moments():
    t = time.perf_counter()
    bad = [k for k in range(1, 7) if genus_expansion(["G1 G1*"] * k) != rising(k)]
    elapsed = time.perf_counter() - t
    ok = not bad and elapsed < 1
    record(1, ok, f"E[Tr(GG*)^k] = N^-k prod(N^2+j) for k=1..6 (bad={bad}, {elapsed:.2f}s)")
    assert ok


def test_criterion_02_permutation_cycles():
    t = time.perf_counter()
    bad = []
    for k in range(1, 8):
        counts = {}
        for perm in itertools.permutations(range(k)):
            e = 2 * cycles(perm) - k
            counts[e] = counts.get(e, 0) + 1
        if genus_expansion(["G1 G1*"] * k) != LP(counts):
            bad.append(k)
    elapsed = time.perf_counter() - t
    ok = not bad and elapsed < 5
    record(2, ok, f"k faces GG* vs sum over S_k of N^(2c-k), k=1..7 (bad={bad}, {elapsed:.2f}s)")
    assert ok


def test_criterion_03_covariance_products():
    bad = []
    for m in range(1, 6):
        w = " ".join(f"G{i} G{i}*" for i in range(1, m + 1))
        got = tuple(spherical_counts(w).as_dict().values())
        if got != (1, 0, 2 ** m - 1, m * (m + 1) // 2):
            bad.append((m, got))
    record(3, not bad, f"(a,p,b,c) of G1G1*...GmGm* for m=1..5 (bad={bad})")
    assert not bad


def test_criterion_04_power_words():
    bad = []
    for a in range(1, 7):
        b = clt_params(f"G1^{a} G1*^{a}").b
        if b != a * (a + 1) * (2 * a + 1) // 6:
            bad.append(("power", a, b))
        g = parse_word(" ".join(f"G{i}" for i in range(1, a + 1)))
        b = clt_params(g * star(g)).b
        if b != a * (a + 1) // 2:
            bad.append(("product", a, b))
    record(4, not bad, f"b(G^a G*^a) and b(u u*) for a=1..6 (bad={bad})")
    assert not bad


def test_criterion_05_coperiod_law():
    rng = random.Random(5)
    bad = []
    for _ in range(200):
        w = random_star_free(rng, 10, max_index=rng.randint(1, 4))
        sc = spherical_counts(w)
        if (sc.a, sc.b, sc.c) != (0, coperiod(w), 0):
            bad.append(str(w))
    record(5, not bad, f"b = cop(w), a = c = 0 on 200 random star-free words (bad={bad[:3]})")
    assert not bad


def test_criterion_06_fuss_catalan_bridge():
    t = time.perf_counter()
    bad = []
    for w in SHORT_WORDS:
        n = len(parse_word(w))
        for k in range(1, 5):
            if fc_moment_of_word(w, k) != fuss_catalan(n + 1, k):
                bad.append((w, k))
    elapsed = time.perf_counter() - t
    ok = not bad and elapsed < 30
    record(6, ok, f"sphere count of (ww*)^k = FC_(|w|+1)(k), |w|<=3, k<=4 (bad={bad}, {elapsed:.2f}s)")
    assert ok


def _compositions(n):
    for k in range(1, n + 1):
        for cut in itertools.combinations(range(1, n), k - 1):
            b = (0,) + cut + (n,)
            yield tuple(b[i + 1] - b[i] for i in range(k))


def test_criterion_07_mixed_moment_substitution():
    idxs = []
    for sa, sb in itertools.product(range(1, 5), repeat=2):
        for ca, cb in itertools.product(_compositions(sa), _compositions(sb)):
            if len(ca) == len(cb):
                idxs.append(tuple(x for pair in zip(ca, cb) for x in pair))
    bad = []
    for w in SHORT_WORDS:
        n = len(parse_word(w))
        for idx in idxs:
            # word_mixed_moment_limit also checks this internally
            if word_mixed_moment_limit(w, idx) != mixed_moment_limit([n * x for x in idx]):
                bad.append((w, idx))
    record(7, not bad, f"{len(SHORT_WORDS)} words x {len(idxs)} index tuples (bad={bad[:3]})")
    assert not bad


def test_criterion_08_nonorientable_values():
    rp2 = genus_expansion(["G1 G2 G1~ G2~"])
    klein = genus_expansion(["G1 G2 G1* G2~"])
    ok = rp2 == LP.constant(1) and klein == LP.monomial(-1)
    record(8, ok, f"G1G2G1~G2~ -> {rp2}, G1G2G1*G2~ -> {klein}")
    assert ok


def _random_list(rng):
    if rng.random() < 0.1:
        # arbitrary letters, usually unbalanced
        letters = [
            Letter(rng.choice(list(Ensemble)), rng.randint(1, 2), rng.random() < 0.5, rng.random() < 0.5)
            for _ in range(rng.randint(1, 8))
        ]
    else:
        letters = balanced_letters(rng, rng.randint(1, 4))
    return split_faces(rng, letters)


def test_criterion_09_oracle_equivalence():
    rng = random.Random(9)
    t = time.perf_counter()
    bad = []
    for _ in range(100):
        words = _random_list(rng)
        poly = genus_expansion(words)
        for n in (1, 2, 3):
            if poly.evaluate(n) != brute_force_wick_oracle(words, n):
                bad.append(([str(w) for w in words], n))
    elapsed = time.perf_counter() - t
    ok = not bad and elapsed < 120
    record(9, ok, f"100 random lists at N=1,2,3 (bad={bad[:2]}, {elapsed:.1f}s)")
    assert ok


# --- Monte Carlo -------------------------------------------------------------------

CLT_WORD = "G1 G1* G2 G2* G3 G3*"
FC_WORD = "G1 G2 G3"


def _clt_check(ensemble, label):
    spec = EnsembleSpec.parse(ensemble, 128)
    est = centered_trace_covariance(CLT_WORD, spec, MCConfig(20000, seed=10))
    z = est.z_scores(np.diag([6.5, 0.5]))
    ok = bool(np.all(z <= 5))
    c = est.cov
    return ok, (
        f"{label} cov=[[{c[0, 0]:.3f}, {c[0, 1]:.3f}], [., {c[1, 1]:.3f}]] "
        f"vs diag(13/2, 1/2), max z={z.max():.2f} (tol 5)"
    )


def _fc_check(ensemble, tol, label):
    spec = EnsembleSpec.parse(ensemble, 256)
    ests = squared_singular_moments(FC_WORD, [1, 2, 3], spec, MCConfig(2000, seed=11))
    zs = {k: ests[k].z_score(fuss_catalan(4, k)) for k in ests}
    ok = all(z <= tol for z in zs.values())
    vals = ", ".join(f"k={k}: {ests[k].mean.real:.3f} (z={zs[k]:.1f})" for k in zs)
    return ok, f"{label} {vals} vs FC_4 = 1, 4, 22 (tol {tol})"


@pytest.mark.slow
def test_criterion_10_clt_covariance():
    ok, detail = _clt_check("ginibre", "gaussian N=128 20000 samples:")
    record(10, ok, detail)
    assert ok


@pytest.mark.slow
def test_criterion_11_fuss_catalan_dense():
    ok, detail = _fc_check("ginibre", 5, "dense:")
    record(11, ok, detail)
    assert ok


SPARSE_REASON = (
    "sparse entries with p = N^-1/2 shift the k >= 2 moments by O(1/(N p)) = O(N^-1/2), "
    "far more than 8 standard errors at N = 256 and 2000 samples"
)


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason=SPARSE_REASON)
def test_criterion_11_fuss_catalan_sparse():
    ok, detail = _fc_check("sparse:p=N^-0.5", 8, "sparse p=N^-1/2:")
    record(11, ok, detail)
    assert ok


@pytest.mark.slow
def test_criterion_12_fourth_matched_clt():
    ok, detail = _clt_check("fourth", "fourth-matched N=128 20000 samples:")
    record(12, ok, detail)
    assert ok


@pytest.mark.slow
def test_criterion_12_fourth_matched_fc_dense():
    ok, detail = _fc_check("fourth", 5, "fourth-matched dense:")
    record(12, ok, detail)
    assert ok


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason=SPARSE_REASON)
def test_criterion_12_fourth_matched_fc_sparse():
    ok, detail = _fc_check("sparse:p=N^-0.5,dist=fourth", 8, "fourth-matched sparse p=N^-1/2:")
    record(12, ok, detail)
    assert ok


# --- band -----------------------------------------------------------------------------


def test_criterion_13_alpha_values():
    targets = {1: 1.0, 2: 1.0, 3: 0.75}
    vals = {m: alpha_cycle(m) for m in range(1, 5)}
    ok = all(vals[m] == pytest.approx(t, abs=1e-12) for m, t in targets.items())
    ok = ok and abs(vals[4] - 2 / 3) <= 1e-3
    graph_ok = True
    parts = []
    for m in range(1, 5):
        est = alpha_estimate(cycle_graph(m), 0.0)
        rel = abs(est.value - vals[m]) / vals[m]
        graph_ok = graph_ok and rel <= 0.01
        parts.append(f"C{m}: {est.value:.5f}")
    ok = ok and graph_ok
    record(13, ok, "alpha_cycle(1..4) = " + ", ".join(f"{vals[m]:.6f}" for m in vals) + "; alpha(C_m, 0) " + ", ".join(parts))
    assert ok


@pytest.mark.slow
def test_criterion_13_band_monte_carlo():
    spec = EnsembleSpec.parse("band:b=64", 512)
    t = trace_samples([FC_WORD], spec, MCConfig(1000, seed=13))[:, 0]
    est = estimate((spec.l / spec.N) * np.abs(t) ** 2)
    z = est.z_score(0.75)
    ok = z <= 5
    record(13, ok, f"band N=512 b=64: (l/N) E|Tr|^2 = {est.mean.real:.4f} +- {est.stderr:.4f} vs 0.75, z={z:.2f} (tol 5)")
    assert ok


# --- property suites -------------------------------------------------------------------


def test_criterion_14_count_properties():
    rng = random.Random(14)
    bad = []
    for _ in range(100):
        n = rng.randint(1, 6)
        w = Word(tuple(
            Letter(rng.choice(list(Ensemble)), rng.randint(1, 2), rng.random() < 0.5, rng.random() < 0.5)
            for _ in range(n)
        ))
        sc = spherical_counts(w)
        if not (sc.b >= sc.c and sc.b >= 1 and spherical_counts(star(w)) == sc):
            bad.append(str(w))
    record(14, not bad, f"b >= c, b >= 1, star symmetry on 100 words (bad={bad[:3]})")
    assert not bad


def test_criterion_14_atom_free_bound():
    rng = random.Random(141)
    bad = []
    for _ in range(40):
        words = split_faces(rng, balanced_letters(rng, rng.randint(1, 4)), max_faces=4)
        layout = Layout(words)
        for ch in iter_raw(layout):
            s = glue_raw(layout, ch)
            atoms = any(c.F == 1 and (c.is_sphere or c.is_projective_plane) for c in s.components)
            if not atoms and s.topological_exponent > 0:
                bad.append([str(w) for w in words])
                break
        # compares direct enumeration with inclusion-exclusion
        atom_free_expansion(words, check=True)
    record(14, not bad, f"2c - k - 2g <= 0 for atom-free pairings of 40 random lists (bad={bad[:2]})")
    assert not bad


@pytest.mark.slow
def test_criterion_14_sphere_rules():
    n = mismatches = 0
    for m in range(2, 11, 2):
        for words, phi in gg_configurations(m):
            n += 1
            if spherical_rule_check(words, phi) != glue(words, phi).is_sphere:
                mismatches += 1
    record(14, mismatches == 0, f"rule check vs Euler characteristic on {n} configurations with m <= 10 (mismatches={mismatches})")
    assert mismatches == 0


def test_criterion_14_fc_recurrence():
    bad = []
    for s in range(2, 6):
        fc = [fuss_catalan(s, n) for n in range(9)]
        for n in range(8):
            conv = sum(
                math.prod(fc[i] for i in parts)
                for parts in itertools.product(range(n + 1), repeat=s)
                if sum(parts) == n
            )
            if conv != fc[n + 1]:
                bad.append((s, n))
    record(14, not bad, f"FC_s(n+1) = s-fold convolution, s=2..5, n<=7 (bad={bad})")
    assert not bad


def test_criterion_14_unbalanced_is_zero():
    rng = random.Random(142)
    checked, bad = 0, []
    while checked < 100:
        letters = [
            Letter(rng.choice(list(Ensemble)), rng.randint(1, 2), rng.random() < 0.5, rng.random() < 0.5)
            for _ in range(rng.randint(1, 8))
        ]
        words = split_faces(rng, letters)
        if Layout(words).balanced:
            continue
        checked += 1
        if not genus_expansion(words).is_zero():
            bad.append([str(w) for w in words])
    record(14, not bad, f"100 unbalanced lists give the zero polynomial (bad={bad[:2]})")
    assert not bad
