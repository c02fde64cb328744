"""Acceptance criteria, one test each. Every test prints a PASS/FAIL line."""

from __future__ import annotations

import math
import time

import numpy as np
import pytest
from conftest import FUZZ_COUNT, FUZZ_SEED, pairs_to_complex

from trinomial_ratios.classify import (
    all_ratios,
    collapse_clusters,
    count_distinct_real,
    distinct_values,
    trinomial_roots,
)
from trinomial_ratios.experiments import (
    TABLE1_SPEC,
    Tolerances,
    fuzz_trials,
    gamma_residual,
    run_table1,
    sequence_zero_items,
)
from trinomial_ratios.polyalg import expand_non_coprime, generate_sequence
from trinomial_ratios.rootfind import find_roots
from trinomial_ratios.trinomial import (
    TrinomialSpec,
    beta_value,
    g_critical_points,
    g_eval,
    g_prime,
    in_h_domain,
    normalized_q_discriminant,
    omega_expected,
    ratio_polynomial,
)


@pytest.fixture
def verdict(capsys):
    def emit(number: int, name: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} [{number:2d}] {name}: {detail}")
        assert ok, detail

    return emit


def printed_ratios(row) -> list[complex]:
    return [complex(x, s * y) for x, y in row["pm"] for s in (1, -1)] + [complex(r) for r in row["real"]]


def test_criterion_01_reference_table(verdict, golden):
    t0 = time.perf_counter()
    report = run_table1()
    elapsed = time.perf_counter() - t0
    records = {z.label: z for z in report.zeros}
    worst_z = worst_alpha = worst_ratio = 0.0
    ok = len(records) == len(golden["rows"]) == 4
    for row in golden["rows"]:
        rec = records[row["label"]]
        worst_z = max(worst_z, abs(rec.z0 - pairs_to_complex(row["z"])))
        worst_alpha = max(worst_alpha, abs(rec.alpha - row["alpha"]))
        computed = distinct_values([r.q for r in rec.ratios])
        printed = printed_ratios(row)
        ok &= len(computed) == len(printed)
        for p in printed:
            worst_ratio = max(worst_ratio, min(abs(c - p) for c in computed))
        for c in computed:
            worst_ratio = max(worst_ratio, min(abs(c - p) for p in printed))
    ok &= worst_z <= 5e-4 and worst_alpha <= 1e-4 and worst_ratio <= 5e-4 and elapsed < 60
    verdict(
        1, "reference table", ok,
        f"max |dz|={worst_z:.2e}, max |dalpha|={worst_alpha:.2e}, max |dq|={worst_ratio:.2e}, {elapsed:.1f}s",
    )


def test_criterion_02_binomial_row(verdict, table1_report):
    rec = next(z for z in table1_report.zeros if z.label == "z_{17,0}")
    roots_of_unity = [np.exp(2j * np.pi * j / 5) for j in range(1, 5)]
    counts = [0] * 4
    worst_mod = worst_pos = 0.0
    for r in rec.ratios:
        d = [abs(r.q - w) for w in roots_of_unity]
        j = int(np.argmin(d))
        counts[j] += 1
        worst_pos = max(worst_pos, d[j])
        worst_mod = max(worst_mod, abs(abs(r.q) - 1))
    ok = len(rec.ratios) == 20 and counts == [5, 5, 5, 5] and worst_mod <= 1e-10 and worst_pos <= 1e-10
    verdict(2, "binomial row", ok, f"multiplicities {counts}, max ||q|-1|={worst_mod:.1e}, max dist={worst_pos:.1e}")


def test_criterion_03_gamma_membership(verdict):
    seq = generate_sequence(TABLE1_SPEC, 60)
    tol = Tolerances()
    count = bad = 0
    worst = 0.0
    for n in range(1, 61):
        ok_items, _ = sequence_zero_items(TABLE1_SPEC, n, seq[n], tol)
        for z, resid, _ in ok_items:
            _, g = gamma_residual(TABLE1_SPEC, z)
            count += 1
            worst = max(worst, g)
            bad += g > max(1e-6, 100 * resid)
    verdict(3, "gamma membership", bad == 0 and count > 0, f"{count} zeros for n=1..60, max residual {worst:.1e}, {bad} violations")


def test_criterion_04_main_theorem_fuzz(verdict, fuzz_report):
    zeros = fuzz_report.zeros
    bad = []
    for z in zeros:
        v = z.verdicts["main"]
        witnessed = v.case == "repeated" or any(r.kind.on_locus for r in v.witnesses)
        if not (v.holds and witnessed):
            bad.append(z)
    elapsed = fuzz_report.timings["fuzz"]
    ok = not bad and len(fuzz_report.trials) == FUZZ_COUNT and elapsed < 300
    verdict(4, "main theorem fuzz", ok, f"{FUZZ_COUNT} trials (seed {FUZZ_SEED}), {len(zeros)} zeros, {len(bad)} violations, {elapsed:.1f}s")


def test_criterion_05_corollary_fuzz(verdict, fuzz_report):
    bad = [z for z in fuzz_report.zeros if not z.verdicts["corollary"].holds]
    cases = {}
    for z in fuzz_report.zeros:
        c = z.verdicts["corollary"].case
        cases[c] = cases.get(c, 0) + 1
    verdict(5, "corollary fuzz", not bad, f"{len(bad)} violations; cases {dict(sorted(cases.items()))}")


def test_criterion_06_q_discriminant(verdict, fuzz_report):
    rng = np.random.default_rng(FUZZ_SEED)
    checked = skipped = bad = 0
    worst = 0.0
    off_trials = off_min = 0
    off_min = math.inf
    for trial in fuzz_report.trials:
        probe = None
        for z in trial.zeros:
            v = z.verdicts["qdisc"]
            if v.case == "skipped":
                skipped += 1
                continue
            checked += 1
            worst = max(worst, float(v.notes[0].split("=")[1]))
            bad += not v.holds
            probe = probe or z
        if probe is None:
            continue
        # random points away from every ratio and from q = 1 must not look like ratios
        tri, qs = probe.trinomial, np.array([r.q for r in probe.ratios])
        off_trials += 1
        taken = 0
        while taken < 20:
            q = complex(*rng.uniform(-3, 3, 2))
            if abs(q - 1) < 0.1 or np.min(np.abs(qs - q)) < 0.1:
                continue
            off_min = min(off_min, float(abs(normalized_q_discriminant(tri, q))))
            taken += 1
    ok = bad == 0 and checked > 0 and off_min > 1e-8
    verdict(
        6, "q-discriminant", ok,
        f"{checked} zeros checked ({skipped} with b=0 skipped), max |q-disc|/scale {worst:.1e}; "
        f"min at 20 off-ratio points x {off_trials} trials {off_min:.2e}",
    )


def real_alpha_trinomial(rng, k, l):
    beta = beta_value(k, l)
    while True:
        alpha = rng.uniform(-3 * beta, 3 * beta)
        if abs(alpha - beta) > 0.05 * beta and abs(alpha) > 0.05 * beta:
            break
    b = complex(*rng.uniform(-3, 3, 2))
    a = ((-1) ** k * b**k / alpha) ** (1 / l) * np.exp(2j * np.pi * rng.integers(l) / l)
    return TrinomialSpec(complex(a), b, k, l)


def test_criterion_07_ratio_polynomial_oracle(verdict):
    rng = np.random.default_rng(11)
    kl = [(k, l) for k in range(2, 7) for l in range(1, k) if math.gcd(k, l) == 1]
    worst = 0.0
    degree_ok = True
    for _ in range(50):
        k, l = kl[rng.integers(len(kl))]
        tri = real_alpha_trinomial(rng, k, l)
        H = ratio_polynomial(tri.alpha.real, k, l)
        degree_ok &= H.degree == k * k - k
        h_roots = find_roots(H).as_array()
        q = np.array([r.q for r in all_ratios(trinomial_roots(tri))])
        degree_ok &= q.size == k * k - k
        d = np.abs(h_roots[:, None] - q[None, :])
        worst = max(worst, d.min(axis=0).max(), d.min(axis=1).max())
    verdict(7, "ratio polynomial oracle", degree_ok and worst <= 1e-6, f"50 trinomials, max Hausdorff distance {worst:.1e}, degrees k^2-k: {degree_ok}")


def derivative_grid(k, l, crit, num=100):
    xs = np.linspace(-2.5, 2.5, 4 * num + 1) + 0.0123
    keep = [
        float(x) for x in xs
        if in_h_domain(complex(x), k, l, 0.05) and abs(abs(x) - 1) > 0.05 and all(abs(x - c) > 0.02 for c in crit)
    ]
    return [keep[i] for i in np.linspace(0, len(keep) - 1, num).round().astype(int)]


def test_criterion_08_critical_values(verdict):
    worst_value = worst_deriv = 0.0
    pairs = [(k, l) for k in range(2, 10) for l in range(1, k) if math.gcd(k, l) == 1]
    n_points = 0
    h = 1e-6
    for k, l in pairs:
        beta = beta_value(k, l)
        crit = g_critical_points(k, l)
        n_points += len(crit)
        for x in crit:
            worst_value = max(worst_value, abs(g_eval(x, k, l) - beta) / beta)
        for x in derivative_grid(k, l, crit):
            fd = (g_eval(x + h, k, l) - g_eval(x - h, k, l)) / (2 * h)
            worst_deriv = max(worst_deriv, abs(fd - g_prime(x, k, l)) / abs(g_prime(x, k, l)))
    ok = worst_value <= 1e-9 and worst_deriv <= 1e-5
    verdict(8, "critical values", ok, f"{len(pairs)} (k,l) pairs, {n_points} critical points, max rel |g-g(1)| {worst_value:.1e}, max rel g' error {worst_deriv:.1e}")


def test_criterion_09_omega_counts(verdict, fuzz_report, table1_report):
    checked = bad = 0
    for z in fuzz_report.zeros:
        if not z.verdicts["gamma"].holds:
            continue
        k, l = z.trinomial.k, z.trinomial.l
        beta = beta_value(k, l)
        alpha = z.alpha.real
        if abs(alpha - beta) < 1e-6 * beta:
            continue
        checked += 1
        bad += omega_expected(complex(alpha), k, l) != count_distinct_real(z.ratios)
    table_counts = {z.label: count_distinct_real(z.ratios) for z in table1_report.zeros}
    table_ok = table_counts["z_{23,0}"] == 0 and table_counts["z_{56,0}"] == 0 and table_counts["z_{56,1}"] == 6
    table_ok &= all(omega_expected(complex(z.alpha.real), 5, 3) == table_counts[z.label] for z in table1_report.zeros)
    verdict(9, "omega counts", bad == 0 and checked > 0 and table_ok, f"{checked} fuzz zeros, {bad} mismatches; table rows {table_counts}")


def test_criterion_10_k3_limit(verdict):
    def tri_for(alpha):
        # a = 1, b real: alpha = -b^3
        return TrinomialSpec(1 + 0j, complex(-alpha ** (1 / 3)), 3, 1)

    rs = trinomial_roots(tri_for(27 / 4 + 1e-9))
    flagged = any(rs.multiplicity_flags)
    zeros, mult = collapse_clusters(rs)
    limit = [zeros[i] / zeros[j] for i in range(len(zeros)) for j in range(len(zeros)) if i != j]
    limit_values = sorted(q.real for q in distinct_values(limit, 1e-6))
    ok = flagged and sorted(mult) == [1, 2] and len(limit_values) == 2
    ok &= all(abs(q.imag) < 1e-9 for q in limit)
    ok &= abs(limit_values[0] + 2) < 1e-4 and abs(limit_values[1] + 0.5) < 1e-4
    # above the boundary all six ratios are real; the four away from 1 pair up around the two limiting values
    spreads = []
    for alpha in (7.0, 6.8, 6.76):
        q = sorted(r.q.real for r in all_ratios(trinomial_roots(tri_for(alpha))) if r.kind.is_real)
        ok &= len(q) == 6
        spreads.append(max(abs(q[1] - q[0]), abs(q[3] - q[2])))
        ok &= abs((q[0] + q[1]) / 2 + 2) < 0.3 and abs((q[2] + q[3]) / 2 + 0.5) < 0.1
    ok &= spreads[0] > spreads[1] > spreads[2]
    verdict(
        10, "k=3 limiting case", ok,
        f"cluster flag {flagged}, limiting ratios {[round(v, 6) for v in limit_values]}, pair spread at 7/6.8/6.76 = "
        + "/".join(f"{s:.3f}" for s in spreads),
    )


def test_criterion_11_non_coprime_collapse(verdict):
    specs = [TABLE1_SPEC] + [spec for spec, _ in fuzz_trials(4, 3)]
    ok = True
    checked = 0
    for spec in specs:
        seq = generate_sequence(spec, 10)
        for d in (2, 3):
            R = expand_non_coprime(spec, d, 10 * d)
            for m, r in enumerate(R):
                checked += 1
                if m % d:
                    ok &= r.is_zero
                else:
                    ok &= np.array_equal(r.coeffs, seq[m // d].coeffs)
    verdict(11, "non-coprime collapse", ok, f"{len(specs)} specs, d in (2, 3), {checked} terms compared exactly")
