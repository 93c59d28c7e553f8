"""Leakage accounting: exact MI, bound chain, row sums, converse probes."""

import itertools
import math
from collections import defaultdict
from fractions import Fraction

import numpy as np
import pytest

from typecipher.cipher import (
    CipherSystem,
    derandomize,
    draw_encoder,
    encrypt,
    make_encoder,
    pad_law_fraction,
)
from typecipher.code import build_codebook, encode, explicit_m_plan, make_rate_plan
from typecipher.fields import FieldError, FieldSpec, index_encode
from typecipher.leakage import (
    check_birkhoff,
    converse_diagnostics,
    exact_mutual_info,
    monte_carlo_mi,
    security_bound_curve,
    security_certificate,
    strong_converse_probe,
)
from typecipher.simplex import Distribution, entropy, uniform


def _mi_oracle(sys_, p_X, p_K):
    """Mutual information from the full joint table, built pair by pair.

    Independent of the library's shift-structure shortcut: every (key,
    plaintext) pair is pushed through encrypt() and accumulated.
    """
    q, n = sys_.spec.q, sys_.plan.n
    joint = defaultdict(float)
    for k in itertools.product(range(q), repeat=n):
        pk = math.prod(p_K[a] for a in k)
        if pk == 0.0:
            continue
        for x in itertools.product(range(q), repeat=n):
            px = math.prod(p_X[a] for a in x)
            if px == 0.0:
                continue
            joint[(x, encrypt(sys_, k, x))] += pk * px
    mx = defaultdict(float)
    mc = defaultdict(float)
    for (x, c), v in joint.items():
        mx[x] += v
        mc[c] += v
    return sum(v * math.log2(v / (mx[x] * mc[c])) for (x, c), v in joint.items())


def _canonical_system(n, R, seed=0):
    spec = FieldSpec(2)
    plan = make_rate_plan(n, R, spec)
    cb = build_codebook(plan)
    return CipherSystem(codebook=cb, key_encoder=derandomize(plan, base_seed=seed).encoder)


def _perfect_system():
    spec = FieldSpec(2)
    plan = explicit_m_plan(3, 2, spec)
    cb = build_codebook(plan)
    enc = make_encoder([[1, 0], [0, 1], [0, 0]], (0, 0), spec)
    return CipherSystem(codebook=cb, key_encoder=enc)


def test_exact_mi_matches_joint_table_oracle():
    rng = np.random.default_rng(40)
    for n, R in ((2, 0.6), (3, 0.9), (4, 0.9)):
        sys_ = _canonical_system(n, R, seed=int(rng.integers(100)))
        p_x = Distribution(rng.dirichlet(np.ones(2)))
        p_k = Distribution(rng.dirichlet(np.ones(2)))
        rep = exact_mutual_info(sys_, p_x, p_k)
        assert rep.mi_exact == pytest.approx(_mi_oracle(sys_, p_x, p_k), abs=1e-9)


def test_perfect_secrecy_zero_mi():
    sys_ = _perfect_system()
    rep = exact_mutual_info(sys_, Distribution([0.7, 0.3]), uniform(2))
    assert rep.mi_exact <= 1e-10
    assert rep.h_pad == pytest.approx(2.0, abs=1e-12)
    assert rep.pad_divergence == pytest.approx(0.0, abs=1e-12)


def test_point_mass_key_leaks_codeword_entropy():
    sys_ = _perfect_system()
    p_x = Distribution([0.7, 0.3])
    rep = exact_mutual_info(sys_, p_x, Distribution([1.0, 0.0]))
    law = defaultdict(float)
    for x in itertools.product(range(2), repeat=3):
        law[encode(sys_.codebook, x)] += math.prod(p_x[a] for a in x)
    h_codeword = -sum(v * math.log2(v) for v in law.values() if v > 0)
    assert rep.mi_exact == pytest.approx(h_codeword, abs=1e-10)


def test_report_chain_invariant_random_systems():
    rng = np.random.default_rng(41)
    for _ in range(8):
        n = int(rng.integers(2, 5))
        sys_ = _canonical_system(n, float(rng.uniform(0.4, 1.1)), seed=int(rng.integers(100)))
        p_x = Distribution(rng.dirichlet(np.ones(2)))
        p_k = Distribution(rng.dirichlet(np.ones(2)))
        rep = exact_mutual_info(sys_, p_x, p_k)
        assert 0.0 <= rep.mi_exact <= rep.pad_divergence + 1e-10
        assert rep.pad_divergence <= rep.typewise_bound + 1e-10
        assert rep.security_bound is not None
        assert rep.mi_exact <= rep.security_bound + 1e-9


def test_pad_divergence_identity():
    # m log2 q - H(pad) = D(pad || uniform), here via exact rationals
    spec = FieldSpec(2)
    plan = explicit_m_plan(3, 2, spec)
    cb = build_codebook(plan)
    enc = draw_encoder(plan, 19)
    sys_ = CipherSystem(codebook=cb, key_encoder=enc)
    p_k = Distribution([0.75, 0.25])
    rep = exact_mutual_info(sys_, Distribution([0.6, 0.4]), p_k)
    pad = pad_law_fraction(enc, [Fraction(3, 4), Fraction(1, 4)], spec)
    direct = sum(
        float(v) * math.log2(float(v) * 4) for v in pad if v > 0
    )
    assert rep.pad_divergence == pytest.approx(direct, abs=1e-10)


def test_security_certificate_canonical_passes():
    sys_ = _canonical_system(4, 0.9)
    cert = security_certificate(
        sys_, Distribution([0.9, 0.1]), uniform(2), derandomized=True
    )
    assert cert.passed
    names = [c.name for c in cert.checks]
    assert "theta_vs_padded_exponent" in names
    assert "mi_vs_security_bound" in names
    for c in cert.checks:
        assert c.holds, c.name


def test_security_certificate_explicit_m_skips_exponent_steps():
    sys_ = _perfect_system()
    cert = security_certificate(sys_, Distribution([0.7, 0.3]), uniform(2))
    assert cert.passed
    names = [c.name for c in cert.checks]
    assert "mi_vs_security_bound" not in names
    assert "theta_vs_padded_exponent" not in names
    assert cert.report.security_bound is None


def test_monte_carlo_known_zero():
    sys_ = _perfect_system()
    est = monte_carlo_mi(sys_, Distribution([0.7, 0.3]), uniform(2), samples=2000, seed=1)
    assert abs(est.estimate) <= 3 * est.std_error + 1e-12
    assert est.corrected and est.samples == 2000


def test_monte_carlo_tracks_exact_value():
    sys_ = _canonical_system(4, 0.9)
    p_x = Distribution([0.8, 0.2])
    p_k = Distribution([0.9, 0.1])
    exact = exact_mutual_info(sys_, p_x, p_k).mi_exact
    est = monte_carlo_mi(sys_, p_x, p_k, samples=6000, seed=2)
    assert abs(est.estimate - exact) <= 3 * est.std_error


def test_monte_carlo_se_scales_with_samples():
    sys_ = _canonical_system(3, 0.9)
    p_x = Distribution([0.8, 0.2])
    small = monte_carlo_mi(sys_, p_x, uniform(2), samples=1000, seed=3)
    large = monte_carlo_mi(sys_, p_x, uniform(2), samples=4000, seed=3)
    ratio = small.std_error / large.std_error
    assert 1.2 <= ratio <= 3.5  # ~2 expected; bootstrap noise allowed for


def test_monte_carlo_sample_floor():
    with pytest.raises(ValueError):
        monte_carlo_mi(_perfect_system(), uniform(2), uniform(2), samples=999, seed=0)


def test_birkhoff_point_mass_key():
    sys_ = _perfect_system()
    assert check_birkhoff(sys_, Distribution([1.0, 0.0])) == pytest.approx(1.0, abs=1e-12)


def test_birkhoff_uniform_key_flat_rows():
    # uniform pad over all of X^m: every row sum is |members| / q^m
    sys_ = _perfect_system()
    got = check_birkhoff(sys_, uniform(2))
    assert got == pytest.approx(len(sys_.codebook.members) / 4, abs=1e-12)


def test_birkhoff_random_configs_below_one():
    rng = np.random.default_rng(44)
    for _ in range(10):
        n = int(rng.integers(2, 5))
        sys_ = _canonical_system(n, float(rng.uniform(0.4, 1.2)), seed=int(rng.integers(100)))
        p_k = Distribution(rng.dirichlet(np.ones(2)))
        assert check_birkhoff(sys_, p_k) <= 1.0 + 1e-12


def test_birkhoff_exact_rational_oracle():
    # row sums recomputed in exact rationals never exceed 1
    spec = FieldSpec(2)
    plan = explicit_m_plan(3, 2, spec)
    cb = build_codebook(plan)
    enc = draw_encoder(plan, 50)
    p_frac = [Fraction(5, 8), Fraction(3, 8)]
    pad = pad_law_fraction(enc, p_frac, spec)
    words = [index_encode(encode(cb, x), spec) for x in cb.members]
    for c in range(4):
        row = Fraction(0)
        for w in words:
            diff = []
            cc, ww = c, w
            for _ in range(2):
                cc, cd = divmod(cc, 2)
                ww, wd = divmod(ww, 2)
                diff.append((cd - wd) % 2)
            idx = diff[1] * 2 + diff[0]
            row += pad[idx]
        assert row <= 1


def test_converse_gamma_above_entropy_keeps_everything():
    sys_ = _canonical_system(4, 0.9)
    p_x = Distribution([0.7, 0.3])
    d = converse_diagnostics(sys_, p_x, uniform(2), gamma=entropy(p_x) + 0.05)
    assert d.nu_n == pytest.approx(0.0, abs=1e-12)
    assert d.coverage == pytest.approx(1.0 - d.measured_eps, abs=1e-12)


def test_converse_inequalities_small_matrix():
    rng = np.random.default_rng(46)
    for n in (2, 3, 4):
        for gamma in (0.05, 0.1, 0.2):
            sys_ = _canonical_system(n, 0.9, seed=int(rng.integers(100)))
            p_x = Distribution(rng.dirichlet(np.ones(2)))
            p_k = Distribution(rng.dirichlet(np.ones(2)))
            d = converse_diagnostics(sys_, p_x, p_k, gamma=gamma)
            assert d.peak_ok
            assert d.entropy_floor_ok
            assert d.pad_entropy_cap_ok
            assert d.mi_amplification_ok
            assert d.coverage_ok
            assert d.key_rate_proof_holds


def test_converse_margin_formula():
    sys_ = _canonical_system(4, 0.9)
    p_x = Distribution([0.9, 0.1])
    d = converse_diagnostics(sys_, p_x, uniform(2), gamma=0.1)
    shrink = 1.0 - (d.nu_n + d.measured_eps)
    want = (d.measured_eps / shrink + math.log2(1.0 / shrink)) / 4
    assert d.leak_margin == pytest.approx(want, abs=1e-12)
    want_delta = (d.measured_delta / shrink + math.log2(1.0 / shrink)) / 4
    assert d.leak_margin_delta == pytest.approx(want_delta, abs=1e-12)


def test_converse_hypotheses_gate():
    # leakage above the budget cap means the admissibility hypotheses fail
    sys_ = _canonical_system(4, 0.9)
    d = converse_diagnostics(sys_, Distribution([0.9, 0.1]), uniform(2), gamma=0.1)
    assert d.measured_delta > 1.0
    assert not d.hypotheses_hold
    d2 = converse_diagnostics(
        sys_, Distribution([0.9, 0.1]), uniform(2), gamma=0.1, delta_cap=10.0
    )
    assert d2.hypotheses_hold


def test_converse_rejects_nonpositive_gamma():
    with pytest.raises(ValueError):
        converse_diagnostics(_perfect_system(), uniform(2), uniform(2), gamma=0.0)


def test_probe_matches_brute_force_topmass():
    p_x = Distribution([0.7, 0.3])
    for n in (4, 6, 8):
        rows = strong_converse_probe(p_x, 0.6, [n])
        budget = 2 ** rows[0]["log2_size"]
        probs = sorted(
            (
                math.prod(p_x[a] for a in x)
                for x in itertools.product(range(2), repeat=n)
            ),
            reverse=True,
        )
        want = 1.0 - sum(probs[:budget])
        assert rows[0]["error"] == pytest.approx(want, abs=1e-12)


def test_probe_uniform_closed_form():
    # uniform binary source at R=0.5: error = 1 - 2^(floor(n/2) - n)
    u = uniform(2)
    rows = strong_converse_probe(u, 0.5, [2, 4, 6, 8])
    for row in rows:
        n = row["n"]
        assert row["error"] == pytest.approx(1.0 - 2.0 ** (n // 2 - n), abs=1e-12)


def test_probe_rejects_rates_at_or_above_entropy():
    with pytest.raises(ValueError):
        strong_converse_probe(uniform(2), 1.0, [4])
    with pytest.raises(ValueError):
        strong_converse_probe(Distribution([0.7, 0.3]), 0.95, [4])


def test_security_bound_curve_per_symbol_decreases():
    rows = security_bound_curve(0.5, uniform(2), [4, 6, 8, 12, 16])
    per_symbol = [r["per_symbol"] for r in rows]
    assert all(b < a for a, b in zip(per_symbol, per_symbol[1:]))
    assert all(r["f_exponent"] == pytest.approx(0.5, abs=1e-6) for r in rows)


def test_exact_mi_scale_guard():
    spec = FieldSpec(2)
    plan = make_rate_plan(13, 0.5, spec)  # 2^26 pairs: past the guard
    cb = build_codebook(plan)
    enc = draw_encoder(plan, 0)
    sys_ = CipherSystem(codebook=cb, key_encoder=enc)
    with pytest.raises(FieldError):
        exact_mutual_info(sys_, uniform(2), uniform(2))
