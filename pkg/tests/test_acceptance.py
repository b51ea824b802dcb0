"""Exit criteria. Each test records one PASS/FAIL line, printed at the end of the run."""

import time
from math import comb

import numpy as np
import pytest
import sympy

from freelevy import fock
from freelevy.checks import bell_numbers, random_symmetric_tuple
from freelevy.dualaffine import AffineIncrementFree, azema_convergence, azema_free, compose_free
from freelevy.levy import (
    GeneratorTuple,
    Kind,
    classify,
    compound_poisson_tuple,
    ito_levy_split,
    process_moments,
    tuple_cumulants,
)
from freelevy.mixedmoments import MarginalLaw, free_mixed_moment
from freelevy.moments import MomentSequence, bercovici_pata, cumulants_to_moments, is_homomorphism_check
from freelevy.partitions import (
    enumerate_interval_partitions,
    enumerate_noncrossing_partitions,
    enumerate_set_partitions,
)

pytestmark = pytest.mark.acceptance

RESULTS: list[str] = []


def record(name, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'} [{name}] {detail}"
    RESULTS.append(line)
    print(line)
    assert passed, line


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def test_1_four_point_freeness_formula(rng):
    start = time.perf_counter()
    # symbolic: the recursion yields the four-point formula exactly
    a1, b1, a2, b2 = sympy.symbols("a1 b1 a2 b2")
    laws = [MarginalLaw(1, {(0,): a1, (0, 0): b1}), MarginalLaw(2, {(0,): a2, (0, 0): b2})]
    symbolic = sympy.expand(free_mixed_moment([1, 2, 1, 2], laws))
    formula = b1 * a2**2 + a1**2 * b2 - a1**2 * a2**2
    symbolic_ok = sympy.simplify(symbolic - formula) == 0

    space, (i1, i2) = fock.free_embedding([1, 1], 4)
    worst_formula = worst_fock = 0.0
    for _ in range(100):
        c1, s1, g1, c2, s2, g2 = rng.uniform(-1, 1, 6)
        X1 = i1.creation([s1]) + i1.annihilation([s1]) + i1.conservation([[g1]]) + c1
        X2 = i2.creation([s2]) + i2.annihilation([s2]) + i2.conservation([[g2]]) + c2
        m = [MarginalLaw.from_operators(f, [X], 2) for f, X in ((1, X1), (2, X2))]
        p1, q1, p2, q2 = m[0]((0,)), m[0]((0, 0)), m[1]((0,)), m[1]((0, 0))
        value = free_mixed_moment([1, 2, 1, 2], m)
        worst_formula = max(worst_formula, abs(value - (q1 * p2**2 + p1**2 * q2 - p1**2 * p2**2)))
        worst_fock = max(worst_fock, abs(value - fock.vacuum_expectation([X1, X2, X1, X2])))
    elapsed = time.perf_counter() - start
    ok = symbolic_ok and worst_formula <= 1e-10 and worst_fock <= 1e-10 and elapsed < 5
    record("1 four-point formula", ok, f"symbolic={symbolic_ok} formula dev={worst_formula:.2e} fock dev={worst_fock:.2e} time={elapsed:.2f}s")


def test_2_realization_oracle_equivalence(rng):
    start = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        tup = random_symmetric_tuple(rng, d_max=3)
        for t in (0.5, 1.0, 2.0):
            oracle = process_moments(tup, t, 8).values
            closed = cumulants_to_moments(tuple_cumulants(tup, t, "free", 8)).values
            worst = max(worst, float(np.abs(oracle - closed).max()))
    elapsed = time.perf_counter() - start
    record("2 Fock realization vs cumulants", worst < 1e-9 and elapsed < 60, f"max dev={worst:.2e} time={elapsed:.2f}s")


def test_3_partition_counts():
    bells = bell_numbers(10)
    catalan = [comb(2 * n, n) // (n + 1) for n in range(13)]
    bad = []
    bad += [("bell", n) for n in range(1, 11) if len(enumerate_set_partitions(n)) != bells[n]]
    bad += [("catalan", n) for n in range(1, 13) if len(enumerate_noncrossing_partitions(n)) != catalan[n]]
    bad += [("interval", n) for n in range(1, 17) if len(enumerate_interval_partitions(n)) != 2 ** (n - 1)]
    record("3 partition counts", not bad, f"mismatches={bad}")


def _random_atoms(rng, order=8):
    k = int(rng.integers(1, 5))
    return MomentSequence.from_atoms(rng.uniform(-1, 1, k), rng.dirichlet(np.ones(k)), order)


def test_4_bercovici_pata(rng):
    nc_counts = [len(enumerate_noncrossing_partitions(n)) for n in range(1, 6)]
    pois = bercovici_pata(MomentSequence([1, 2, 5, 15, 52])).values
    gauss = bercovici_pata(MomentSequence([0, 1, 0, 3, 0, 15])).values
    ok_pois = nc_counts == [1, 2, 5, 14, 42] and np.allclose(pois, nc_counts, rtol=0, atol=1e-9)
    ok_gauss = np.allclose(gauss, [0, 1, 0, 2, 0, 5], rtol=0, atol=1e-9)
    homs = 0
    for _ in range(100):
        m1, m2 = _random_atoms(rng), _random_atoms(rng)
        assert m1.is_realizable() and m2.is_realizable()
        homs += is_homomorphism_check(m1, m2, atol=1e-9)
    record("4 Bercovici-Pata", ok_pois and ok_gauss and homs == 100, f"poisson={pois.tolist()} gauss={gauss.tolist()} homomorphism {homs}/100")


def test_5_fock_axioms(rng):
    space = fock.FockSpace(3, 4)
    adjoint_ok = True
    for _ in range(10):
        u = rng.normal(size=3) + 1j * rng.normal(size=3)
        X = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        adjoint_ok &= (fock.annihilation(space, u).to_matrix() != fock.creation(space, u).to_matrix().conj().T).nnz == 0
        adjoint_ok &= (fock.conservation(space, X).to_matrix().conj().T != fock.conservation(space, X.conj().T).to_matrix()).nnz == 0
    worst = 0.0
    for k in range(50):
        r = int(rng.integers(1, 9))
        params = np.random.default_rng(k)
        terms = [(params.normal(size=2), params.normal(size=2), params.normal(size=(2, 2)), params.normal()) for _ in range(r)]
        vals = []
        for depth in (r, r + 2):
            s = fock.FockSpace(2, depth)
            ops = [fock.creation(s, u) + fock.annihilation(s, v) + fock.conservation(s, X) + c for u, v, X, c in terms]
            vals.append(fock.vacuum_expectation(ops))
        worst = max(worst, abs(vals[0] - vals[1]))
    record("5 Fock axioms", adjoint_ok and worst <= 1e-12, f"adjointness exact={adjoint_ok} truncation dev={worst:.2e}")


def test_6_ito_levy_split(rng):
    worst = 0.0
    for i in range(50):
        tup = random_symmetric_tuple(rng)
        if i % 2:
            w, V = np.linalg.eigh(tup.T)
            w[0] = 0.0
            tup = GeneratorTuple(V @ np.diag(w) @ V.T, tup.u, None, tup.lam)
        split = ito_levy_split(tup)
        for flavor in ("free", "classical"):
            total = tuple_cumulants(tup, 1.0, flavor, 8).values
            parts = tuple_cumulants(split.gaussian, 1.0, flavor, 8).values + tuple_cumulants(split.jump, 1.0, flavor, 8).values
            worst = max(worst, float(np.abs(total - parts).max()))

    # definition-level checks on hand-built tuples
    gaussian = GeneratorTuple([[0.0]], [1.3], None, -0.4)
    gaussian_def = np.all(gaussian.T == 0)
    atoms, weights = np.array([-1.0, 0.5, 2.0]), np.array([0.3, 1.2, 0.25])
    cp = compound_poisson_tuple(atoms, weights)
    omega = np.sqrt(weights)  # the constant function 1
    cp_def = np.allclose(cp.T @ omega, cp.u) and np.isclose(np.dot(omega, cp.T @ omega), cp.lam)
    delta = GeneratorTuple([[1.0]], [1.0], None, 1.0)
    agree = (
        gaussian_def
        and classify(gaussian) is Kind.GAUSSIAN
        and cp_def
        and classify(cp) is Kind.COMPOUND_POISSON
        and classify(delta) is Kind.COMPOUND_POISSON
        and classify(GeneratorTuple([[1.0]], [1.0], None, 5.0)) is Kind.GENERAL
    )
    record("6 Ito-Levy split", worst <= 1e-9 and agree, f"additivity dev={worst:.2e} classification agrees={agree}")


def _random_increment(rng, space, interval):
    d = space.dim
    X = rng.normal(size=(d, d))
    a = fock.identity(space) + fock.conservation(space, 0.5 * X) + fock.creation(space, rng.normal(size=d))
    u = rng.normal(size=d)
    H = rng.normal(size=(d, d))
    B = fock.creation(space, u) + fock.annihilation(space, u) + fock.conservation(space, H + H.T)
    return AffineIncrementFree(a, B, interval)


def test_7_dual_affine(rng):
    start = time.perf_counter()
    space = fock.FockSpace(2, 4)
    assoc = 0.0
    min_eig = np.inf
    for _ in range(10):
        i1, i2, i3 = (_random_increment(rng, space, (k, k + 1.0)) for k in range(3))
        x = compose_free(compose_free(i1, i2), i3)
        y = compose_free(i1, compose_free(i2, i3))
        assoc = max(assoc, np.abs(x.a.toarray() - y.a.toarray()).max(), np.abs(x.B.toarray() - y.B.toarray()).max())
        for inc in (x, compose_free(i1, i2)):
            A = inc.A.toarray()
            min_eig = min(min_eig, np.linalg.eigvalsh((A + A.conj().T) / 2).min())

    t = 1.5
    target = np.array([0.0 if k % 2 else comb(k, k // 2) // (k // 2 + 1) * t ** (k // 2) for k in range(1, 9)])
    gamma1 = max(float(np.abs(azema_free(1.0, t, n, 6, 6).values - target[:6]).max()) for n in (1, 2, 3, 4, 8, 16, 32))
    # order 8 needs depth 8, which fits under the default basis cap up to N = 16
    gamma1 = max(gamma1, *(float(np.abs(azema_free(1.0, t, n, 8, 8).values - target).max()) for n in (1, 5, 16)))

    conv = azema_convergence(0.5, 1.0, (4, 8, 16, 32), max_order=6, depth=6)
    diffs = conv["differences"]
    shrink = all(b < a for a, b in zip(diffs, diffs[1:])) and all(r >= 1.5 for r in conv["ratios"])
    elapsed = time.perf_counter() - start
    ok = assoc <= 1e-12 and min_eig >= -1e-12 and gamma1 <= 1e-10 and shrink and elapsed < 120
    record(
        "7 dual affine group",
        ok,
        f"assoc dev={assoc:.2e} min eig(A)={min_eig:.2e} gamma=1 dev={gamma1:.2e} "
        f"diffs={[f'{d:.4f}' for d in diffs]} ratios={[f'{r:.3f}' for r in conv['ratios']]} time={elapsed:.2f}s",
    )


def test_8_compound_poisson_bell_oracle():
    atoms, weights = [-1.0, 0.5, 2.0], [0.3, 1.2, 0.25]
    tup = compound_poisson_tuple(atoms, weights)
    worst = 0.0
    for t in (0.5, 1.0, 2.0):
        # exp(t int (e^{iux} - 1) dmu) has cumulants t int x^j dmu; moments are complete Bell polynomials
        kap = [sympy.nsimplify(t) * sum(sympy.nsimplify(w) * sympy.nsimplify(x) ** j for x, w in zip(atoms, weights)) for j in range(1, 9)]
        bell = [sum(sympy.bell(n, k, kap[: n - k + 1]) for k in range(1, n + 1)) for n in range(1, 9)]
        expected = np.array([float(b) for b in bell])
        got = cumulants_to_moments(tuple_cumulants(tup, t, "classical", 8)).values
        worst = max(worst, float(np.abs(got - expected).max()))
    record("8 compound Poisson vs Bell polynomials", worst <= 1e-9, f"max dev={worst:.2e}")
