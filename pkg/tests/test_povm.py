import numpy as np
import pytest

from corrwit import povm as pv
from corrwit import states, witness
from corrwit.linalg import hermitian_basis, hs_inner, min_eigenvalue, orth_complement, real_span_dim
from corrwit.povm import Povm, analyze, build_minimal_cq_povm, distinguishes, statistics, validate
from oracles import random_hermitian


def span_projection(elements, x):
    """Orthogonal projection of ``x`` onto the real span of ``elements`` via QR of real coordinates."""
    basis = hermitian_basis(x.shape[0])
    coords = np.array([[hs_inner(e, b) for b in basis] for e in elements]).T
    q, r = np.linalg.qr(coords)
    keep = np.abs(np.diag(r)) > 1e-10 * np.abs(r).max()
    q = q[:, keep]
    xc = np.array([hs_inner(x, b) for b in basis])
    return q @ (q.T @ xc)


def test_validate_examples():
    assert validate(Povm((np.eye(4),)))[0]
    assert validate(pv.basis_measurement(4))[0]
    ok, res = validate(Povm((0.6 * np.eye(2), 0.6 * np.eye(2))))
    assert not ok
    assert res["normalization_error"] == pytest.approx(0.2 * np.sqrt(2))
    ok, res = validate(Povm((np.diag([1.5, 1]), np.diag([-0.5, 0]))))
    assert not ok and res["min_element_eigenvalue"] == pytest.approx(-0.5)


def test_povm_rejects_bad_input():
    with pytest.raises(ValueError):
        Povm(())
    with pytest.raises(ValueError):
        Povm((np.eye(2), np.eye(3)))
    with pytest.raises(ValueError):
        Povm((np.array([[0, 1], [0, 0]]),))


@pytest.mark.parametrize("d", [2, 3])
def test_analyze_trivial_povm(d):
    D = d * d
    a = analyze(Povm((np.eye(D),), d))
    assert a.dim_e == 1 and a.dim_xe == D * D - 1
    assert not a.informationally_complete
    assert not a.decides_cq


@pytest.mark.parametrize("d", [2, 3])
def test_analyze_basis_measurement(d):
    D = d * d
    a = analyze(pv.basis_measurement(D, d))
    assert a.dim_e == D and a.dim_xe == D * D - D
    assert not a.informationally_complete


def test_analyze_ic_povm():
    # D^2 generic effects span everything
    a = analyze(pv.random_povm(4, 16, 0, d=2))
    assert a.dim_e == 16 and a.dim_xe == 0
    assert a.informationally_complete and a.decides_cq


@pytest.mark.parametrize("d,count", [(2, 13), (3, 73)])
def test_minimal_cq_povm(d, count):
    p = build_minimal_cq_povm(d)
    assert len(p) == count == pv.minimal_cq_outcomes(d)
    assert validate(p)[0]
    a = analyze(p)
    assert a.dim_xe == d * d - 1
    assert a.dim_e == count
    assert a.decides_cq and not a.informationally_complete
    for x in a.xe_basis:
        assert pv.in_local_identity_span(x, d)


@pytest.mark.parametrize("d", [2, 3])
def test_minimal_povm_removal_enlarges_blind_space(d):
    p = build_minimal_cq_povm(d)
    for k in range(len(p)):
        rest = [e for j, e in enumerate(p.elements) if j != k]
        assert real_span_dim(rest) < pv.minimal_cq_outcomes(d)
        blind = orth_complement(rest)
        assert len(blind) == d * d
        # the new blind direction is not of the form I (x) Xi for any Hermitian Xi
        assert not all(pv.in_local_identity_span(x, d) for x in blind)


def test_minimal_povm_small_epsilon_and_errors():
    p = build_minimal_cq_povm(2, epsilon=1e-3)
    assert validate(p)[0]
    with pytest.raises(ValueError):
        build_minimal_cq_povm(2, epsilon=0)


def test_local_identity_directions():
    dirs = pv.local_identity_directions(3)
    assert len(dirs) == 8
    gram = np.array([[hs_inner(x, y) for y in dirs] for x in dirs])
    np.testing.assert_allclose(gram, np.eye(8), atol=1e-14)
    for x in dirs:
        assert abs(np.trace(x)) < 1e-14
        assert pv.in_local_identity_span(x, 3)
    assert not pv.in_local_identity_span(np.kron(np.diag([1, -1, 0]), np.eye(3)), 3)


def test_statistics_examples():
    D = 4
    np.testing.assert_allclose(statistics(pv.basis_measurement(D), np.eye(D) / D), np.full(D, 1 / D))
    np.testing.assert_allclose(statistics(Povm((np.eye(D),)), states.random_density_full_rank(D, 3).op), [1.0])
    p = build_minimal_cq_povm(2)
    for seed in range(10):
        probs = statistics(p, states.random_density_full_rank(4, seed).op)
        assert probs.sum() == pytest.approx(1, abs=1e-10)
        assert probs.min() >= -1e-10


def test_distinguishes_examples(rng):
    rho = states.random_density_full_rank(4, 1).op
    assert not distinguishes(pv.basis_measurement(4), rho, rho)
    p = build_minimal_cq_povm(2)
    base = states.sample_cq(2, 4)
    lam, kappa, ok = witness.cq_invariance_check(base, random_hermitian(2, rng))
    assert ok and lam > 0
    assert not distinguishes(p, base.op, kappa.op)

    cert = witness.build_noncq_perturbation(states.random_direction(2, 11))
    diff = statistics(p, cert.base.op) - statistics(p, cert.kappa.op)
    assert np.abs(diff).max() >= 1e-10
    assert distinguishes(p, cert.base.op, cert.kappa.op)

    ic = pv.random_povm(4, 16, 2)
    assert distinguishes(ic, rho, states.random_density_full_rank(4, 2).op)


def test_distinguishes_matches_projection(rng):
    p = build_minimal_cq_povm(2)
    tol = 1e-10
    dirs = pv.local_identity_directions(2)
    for trial in range(40):
        r1 = states.random_density_full_rank(4, trial).op
        if trial % 2:
            xi = sum(rng.standard_normal() * x for x in dirs)
            r2 = r1 + 1e-3 * xi
        else:
            r2 = states.random_density_full_rank(4, 100 + trial).op
        proj = np.linalg.norm(span_projection(p.elements, r1 - r2))
        assert distinguishes(p, r1, r2, tol) == (proj > tol * 4)


@pytest.mark.parametrize("D", [4, 9])
def test_dimension_identity_random(D):
    rng = np.random.default_rng(D)
    for trial in range(100):
        k = int(rng.integers(1, D * D + 4))
        a = analyze(pv.random_povm(D, k, trial))
        assert a.dim_e + a.dim_xe == D * D
        assert a.dim_e == min(k, D * D)


def test_random_povm_is_valid():
    for seed in range(10):
        p = pv.random_povm(9, 5, seed, d=3)
        assert validate(p)[0]
        for e in p.elements:
            assert min_eigenvalue(e) >= -1e-12
