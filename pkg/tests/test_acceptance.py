"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary
(see ``conftest.py``), whether or not the assertion inside it holds.
"""

import contextlib

import numpy as np
import pytest

from corrwit import detect, povm, states, witness
from corrwit.linalg import min_eigenvalue, orth_complement, partial_transpose, real_span_dim
from oracles import brute_force_cq_qubit

RESULTS = {}


@contextlib.contextmanager
def criterion(number, title):
    detail = {}
    try:
        yield detail
    except BaseException:
        RESULTS[number] = f"criterion {number} FAIL  {title}  {detail.get('msg', '')}".rstrip()
        raise
    RESULTS[number] = f"criterion {number} PASS  {title}  {detail.get('msg', '')}".rstrip()


def random_traceless(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = (g + g.conj().T) / 2
    return h - np.trace(h).real / d * np.eye(d)


def test_criterion_1_entangling_directions():
    with criterion(1, "entangling perturbation for every direction") as info:
        worst_psd, worst_npt, count = np.inf, -np.inf, 0
        for d in (2, 3):
            for seed in range(200):
                cert = witness.build_entangling_perturbation(states.random_direction(d, seed))
                worst_psd = min(worst_psd, min_eigenvalue(cert.kappa.op))
                worst_npt = max(worst_npt, min_eigenvalue(partial_transpose(cert.kappa.op, d)))
                count += cert.verify()
        info["msg"] = f"({count}/400, min eig(kappa) {worst_psd:.2e}, max min eig(kappa^tau) {worst_npt:.2e})"
        assert worst_psd >= -1e-10
        assert worst_npt <= -1e-8
        assert count == 400


def _edge_by_bisection(d):
    # largest lam' > 0 with min eig of the partial transpose still >= 0
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = (lo + hi) / 2
        if witness.flat_direction_min_pt_eig(d, mid)[0] >= -1e-14:
            lo = mid
        else:
            hi = mid
    return lo


def test_criterion_2_flat_direction():
    with criterion(2, "flat direction stays PPT up to 2/(d(d+1))") as info:
        rows = []
        for d in (2, 3, 4, 5):
            _, thr = witness.flat_direction_counterexample(d)
            assert thr == pytest.approx(2 / (d * (d + 1)), rel=1e-15)
            inside = witness.flat_direction_min_pt_eig(d, np.linspace(-thr, thr, 101)).min()
            outside = witness.flat_direction_min_pt_eig(d, [1.05 * thr, -1.05 * thr]).max()
            edge = _edge_by_bisection(d)
            rows.append(f"d={d}: grid min {inside:.1e}, outside {outside:.1e}")
            assert inside >= -1e-12
            assert outside < -1e-6
            assert edge == pytest.approx(thr, rel=1e-9)
        info["msg"] = "; ".join(rows)


def test_criterion_3_cq_invariant_subspace():
    with criterion(3, "local identity directions keep CQ, all others exit") as info:
        rng = np.random.default_rng(3)
        kept, crossed = 0, 0
        for d in (2, 3):
            for trial in range(100):
                _, _, ok = witness.cq_invariance_check(states.sample_cq(d, 1000 * d + trial), random_traceless(d, rng))
                kept += ok
            for seed in range(200):
                delta = states.random_direction(d, 5000 + seed)
                cert = witness.build_noncq_perturbation(delta)
                crossed += cert.verify() and not detect.cq_check(cert.kappa)[0] and detect.cq_check(cert.base)[0]
        info["msg"] = f"(invariant {kept}/200, crossings {crossed}/400)"
        assert kept == 200
        assert crossed == 400


def test_criterion_4_minimal_cq_povm():
    with criterion(4, "minimal CQ POVM: 13 / 73 outcomes") as info:
        parts = []
        for d, expected in ((2, 13), (3, 73)):
            p = povm.build_minimal_cq_povm(d)
            a = povm.analyze(p)
            assert povm.validate(p)[0]
            assert len(p) == expected
            assert a.dim_xe == d * d - 1
            assert a.decides_cq
            enlarged = 0
            for k in range(len(p)):
                rest = [e for j, e in enumerate(p.elements) if j != k]
                blind = orth_complement(rest)
                grew = len(blind) > d * d - 1 and not all(povm.in_local_identity_span(x, d) for x in blind)
                enlarged += grew and real_span_dim(rest) < expected
            parts.append(f"d={d}: {len(p)} outcomes, dim X_E {a.dim_xe}, removals enlarging {enlarged}/{len(p)}")
            assert enlarged == len(p)
        info["msg"] = "; ".join(parts)


def test_criterion_5_dimension_identity():
    with criterion(5, "dim E + dim X_E = D^2") as info:
        rng = np.random.default_rng(5)
        good = 0
        for D in (4, 9):
            for trial in range(100):
                k = int(rng.integers(1, D * D + 5))
                a = povm.analyze(povm.random_povm(D, k, [D, trial]))
                good += a.dim_e + a.dim_xe == D * D
        info["msg"] = f"({good}/200)"
        assert good == 200


def test_criterion_6_cc_and_cq_or_qc_crossings():
    with criterion(6, "CC and CQ-or-QC crossings") as info:
        noncc, nonclass = 0, 0
        for d in (2, 3):
            for seed in range(200):
                delta = states.random_direction(d, 9000 + seed)
                c = witness.build_noncc_perturbation(delta)
                noncc += detect.cc_check(c.base)[0] and not detect.cc_check(c.kappa)[0] and c.verify()
                c = witness.build_non_cq_or_qc_perturbation(delta)
                nonclass += (
                    detect.cq_check(c.base)[0]
                    and not detect.cq_check(c.kappa)[0]
                    and not detect.qc_check(c.kappa)[0]
                    and c.verify()
                )
        info["msg"] = f"(non-CC {noncc}/400, neither CQ nor QC {nonclass}/400)"
        assert noncc == 400
        assert nonclass == 400


def _mixed_family(i):
    kind = i % 6
    seed = 7000 + i
    if kind == 0:
        return states.sample_cq(2, seed).op
    if kind == 1:
        return states.sample_cc(2, seed).op
    if kind == 2:
        return states.sample_qc(2, seed).op
    if kind == 3:
        return states.random_density_full_rank(4, seed, d=2).op
    if kind == 4:
        return states.sample_product(2, seed).op
    return witness.build_noncq_perturbation(states.random_direction(2, seed)).kappa.op


def test_criterion_7_detector_matches_brute_force():
    with criterion(7, "CQ detector agrees with brute-force search at d=2") as info:
        agree, positives = 0, 0
        for i in range(500):
            rho = _mixed_family(i)
            fast = detect.cq_check(rho)[0]
            slow, _ = brute_force_cq_qubit(rho)
            agree += fast == slow
            positives += slow
        info["msg"] = f"({agree}/500 agree; {positives} CQ, {500 - positives} not CQ)"
        assert 0 < positives < 500
        assert agree == 500


def test_criterion_8_boundary_isotropic_state():
    with criterion(8, "boundary isotropic state has min eig(rho^tau) = 0") as info:
        worst = 0.0
        for d in (2, 3, 4, 5):
            vectors = [states.canonical_max_entangled(d)]
            for trial in range(20):
                u = states.random_unitary(d, [d, trial, 0])
                v = states.random_unitary(d, [d, trial, 1])
                vectors.append(states.max_entangled(u, v))
            for psi in vectors:
                rho = states.isotropic_boundary_state(psi, d)
                lo = min_eigenvalue(partial_transpose(rho.op, d))
                worst = max(worst, abs(lo))
                assert detect.ppt_check(rho)[0]
        info["msg"] = f"(max |min eig| {worst:.1e} over 84 states)"
        assert worst <= 1e-12
