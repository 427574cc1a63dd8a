import json
from fractions import Fraction

import numpy as np
import pytest

from qpii.darboux import (
    ConfigError,
    DarbouxConfig,
    DivergenceError,
    DressingChain,
    Eigenpair,
    GridFunction,
    LevelOrderViolation,
    SingularEigenfunction,
    darboux_nfold,
    darboux_once,
    dress_eigenfunctions,
    integrate_linear_system,
    integrator_convergence_table,
    qpii_residual_numeric,
    quasidet_solution_form,
    riccati_residual_numeric,
    run_config,
    vacuum_seed,
)
from qpii.gaussian import gauss
from qpii.quasidet import BlockMatrix, ExactScalarCarrier, quasideterminant_expand
from qpii.reportio import dumps

LAM = 1 + 0.5j


def vacuum_pair(lam, z0=0.0, h=1e-2, count=101, d=1, init_chi=None, init_phi=None):
    u = vacuum_seed(z0, h, count, d)
    init_chi = np.eye(d) if init_chi is None else init_chi
    init_phi = np.eye(d) if init_phi is None else init_phi
    return u, integrate_linear_system(u, lam, init_chi, init_phi)


# -- integration ---------------------------------------------------------------


def test_vacuum_closed_form():
    u, pair = vacuum_pair(LAM)
    zs = u.zs
    chi_exact = np.exp(-2j * LAM * zs)
    phi_exact = np.exp(2j * LAM * zs)
    assert np.max(np.abs(pair.chi.values[:, 0, 0] - chi_exact)) < 5e-8
    assert np.max(np.abs(pair.phi.values[:, 0, 0] - phi_exact)) < 5e-8


def test_zero_spectral_value_constant():
    u, pair = vacuum_pair(0.0)
    assert np.max(np.abs(pair.chi.values - pair.chi.values[0])) == 0.0
    assert np.max(np.abs(pair.phi.values - pair.phi.values[0])) == 0.0


def test_integrator_order():
    table = integrator_convergence_table()
    for ratio in table["halving_ratios"]:
        assert 8.0 <= ratio <= 32.0


def test_divergence_detected():
    u = vacuum_seed(0.0, 1e-2, 101, 1)
    with pytest.raises(DivergenceError):
        integrate_linear_system(u, 1e200, np.eye(1), np.eye(1))


def test_grid_function_validation():
    with pytest.raises(Exception):
        GridFunction(0.0, 1e-2, np.zeros((1, 2, 2)))
    with pytest.raises(Exception):
        GridFunction(0.0, -1.0, np.zeros((5, 2, 2)))
    with pytest.raises(Exception):
        GridFunction(0.0, 1e-2, np.full((5, 2, 2), np.nan))


# -- one-fold transformation -----------------------------------------------------


def test_darboux_once_vacuum_closed_form():
    u, pair = vacuum_pair(LAM)
    u1 = darboux_once(u, pair)
    zs = u.zs
    expected = -4 * LAM * np.exp(4j * LAM * zs)
    assert np.max(np.abs(u1.values[:, 0, 0] - expected)) < 1e-7


def test_darboux_once_equal_pair_collapses():
    # with phi = chi the dressing factor is the identity
    z0, h, count, d = 0.0, 1e-2, 21, 2
    rng = np.random.default_rng(7)
    vals = rng.normal(size=(count, d, d)) + 1j * rng.normal(size=(count, d, d))
    vals = vals + 3 * np.eye(d)
    chi = GridFunction(z0, h, vals)
    u = GridFunction(z0, h, rng.normal(size=(count, d, d)) + 0j)
    pair = Eigenpair(LAM, chi, chi)
    u1 = darboux_once(u, pair)
    expected = -4 * LAM * np.eye(d) + u.values
    assert np.max(np.abs(u1.values - expected)) < 1e-10


def test_darboux_once_singularity_reports_index():
    z0, h, count = 0.0, 1e-2, 11
    vals = np.ones((count, 1, 1), dtype=np.complex128)
    vals[4] = 0.0
    chi = GridFunction(z0, h, vals)
    phi = GridFunction(z0, h, np.ones((count, 1, 1), dtype=np.complex128))
    u = vacuum_seed(z0, h, count, 1)
    with pytest.raises(SingularEigenfunction) as err:
        darboux_once(u, Eigenpair(LAM, chi, phi))
    assert err.value.z_index == 4


# -- eigenfunction dressing -------------------------------------------------------


def test_kernel_property():
    u, pair = vacuum_pair(LAM, d=2)
    chi1, phi1 = dress_eigenfunctions(pair.chi, pair.phi, pair.lam, pair)
    assert chi1.max_norm() <= 1e-10
    assert phi1.max_norm() <= 1e-10


def test_dressing_at_zero_spectral_value():
    u, pair = vacuum_pair(LAM)
    u2, other = vacuum_pair(0.3 - 0.2j)
    chi1, _phi1 = dress_eigenfunctions(other.chi, other.phi, 0.0, pair)
    # chi[1] = -lam1 phi1 chi1^-1 chi pointwise
    want = np.array(
        [
            -pair.lam * pair.phi.values[k] @ np.linalg.inv(pair.chi.values[k]) @ other.chi.values[k]
            for k in range(u.count)
        ]
    )
    assert np.max(np.abs(chi1.values - want)) < 1e-12


def test_dressed_pair_matches_two_by_two_quasideterminant():
    u, pair1 = vacuum_pair(LAM, d=2, init_phi=np.array([[1.0, 0.3], [-0.2, 1.0]]))
    _u, pair0 = vacuum_pair(
        0.4 - 0.3j, d=2, init_chi=np.array([[1.0, 0.1], [0.0, 1.0]])
    )
    chi1, phi1 = dress_eigenfunctions(pair0.chi, pair0.phi, pair0.lam, pair1)
    from qpii.quasidet import ComplexMatrixCarrier

    carrier = ComplexMatrixCarrier(2)
    for k in (0, 37, 100):
        arr = BlockMatrix(
            carrier,
            [
                [pair1.chi.values[k], pair0.chi.values[k]],
                [pair1.lam * pair1.phi.values[k], pair0.lam * pair0.phi.values[k]],
            ],
        )
        got = quasideterminant_expand(arr, 1, 1)
        assert np.max(np.abs(got - chi1.values[k])) < 1e-12


def test_level_template_matches_recursion_exactly():
    # Scalar rational chain oracle: two dressing steps by exact recursion
    # versus the 3x3 spectral-weighted array, evaluated over the exact
    # carrier.  Frozen values were computed by hand with Fractions.
    chi = {1: Fraction(2), 2: Fraction(7), 0: Fraction(17)}
    phi = {1: Fraction(3), 2: Fraction(11), 0: Fraction(19)}
    gam = {1: Fraction(5), 2: Fraction(13), 0: Fraction(23)}

    def dress(values_chi, values_phi, seed):
        out_chi, out_phi = {}, {}
        for m in values_chi:
            if m == seed:
                continue
            out_chi[m] = gam[m] * values_phi[m] - gam[seed] * values_phi[seed] / values_chi[seed] * values_chi[m]
            out_phi[m] = gam[m] * values_chi[m] - gam[seed] * values_chi[seed] / values_phi[seed] * values_phi[m]
        return out_chi, out_phi

    chi1, phi1 = dress(chi, phi, 1)
    chi2, phi2 = dress(chi1, phi1, 2)
    assert chi2[0] == Fraction(926856, 181)
    assert phi2[0] == Fraction(3816, 163)

    carrier = ExactScalarCarrier()
    rows_chi = [
        [gauss(chi[2]), gauss(chi[1]), gauss(chi[0])],
        [gauss(gam[2] * phi[2]), gauss(gam[1] * phi[1]), gauss(gam[0] * phi[0])],
        [
            gauss(gam[2] ** 2 * chi[2]),
            gauss(gam[1] ** 2 * chi[1]),
            gauss(gam[0] ** 2 * chi[0]),
        ],
    ]
    rows_phi = [
        [gauss(phi[2]), gauss(phi[1]), gauss(phi[0])],
        [gauss(gam[2] * chi[2]), gauss(gam[1] * chi[1]), gauss(gam[0] * chi[0])],
        [
            gauss(gam[2] ** 2 * phi[2]),
            gauss(gam[1] ** 2 * phi[1]),
            gauss(gam[0] ** 2 * phi[0]),
        ],
    ]
    got_chi = quasideterminant_expand(BlockMatrix(carrier, rows_chi), 2, 2)
    got_phi = quasideterminant_expand(BlockMatrix(carrier, rows_phi), 2, 2)
    assert got_chi == gauss(Fraction(926856, 181))
    assert got_phi == gauss(Fraction(3816, 163))


# -- chains ------------------------------------------------------------------------


def chain_for(lams, d=1, count=101, h=1e-2, inits=None):
    seed = vacuum_seed(0.0, h, count, d)
    pairs = []
    for idx, lam in enumerate(lams):
        if inits is None:
            ic = ip = np.eye(d)
        else:
            ic, ip = inits[idx]
        pairs.append(integrate_linear_system(seed, lam, ic, ip))
    return seed, DressingChain(seed, pairs)


def test_nfold_one_is_bit_identical_to_once():
    seed, chain = chain_for([LAM])
    u1 = darboux_nfold(chain, 1)
    direct = darboux_once(seed, chain.eigenpairs[0])
    assert np.array_equal(u1.values, direct.values)
    uq = quasidet_solution_form(chain, 1)
    assert np.array_equal(uq.values, direct.values)


def test_nfold_two_matches_manual_iteration():
    lams = [LAM, 0.3 - 0.2j]
    seed, chain = chain_for(lams)
    u2 = darboux_nfold(chain, 2)
    # manual: dress pair2 by pair1, then apply the one-fold step twice
    p1, p2 = chain.eigenpairs
    u1 = darboux_once(seed, p1)
    chi2, phi2 = dress_eigenfunctions(p2.chi, p2.phi, p2.lam, p1)
    manual = darboux_once(u1, Eigenpair(p2.lam, chi2, phi2))
    assert np.max(np.abs(u2.values - manual.values)) <= 1e-10


def test_scalar_chain_commutative_collapse():
    lams = [LAM, 0.3 - 0.2j]
    seed, chain = chain_for(lams)
    chain.ensure(2)
    # scalar case: the sandwich is theta^2 u + linear term at each level
    p1 = chain.eigenpairs[0]
    theta = p1.phi.values[:, 0, 0] / p1.chi.values[:, 0, 0]
    u1 = chain.solution(1).values[:, 0, 0]
    expect = -4 * p1.lam * theta + theta * seed.values[:, 0, 0] * theta
    assert np.max(np.abs(u1 - expect)) < 1e-12


@pytest.mark.parametrize("d", [1, 2])
@pytest.mark.parametrize("n", [2, 3])
def test_path_consistency(d, n):
    lams = [1 + 0.5j, 0.3 - 0.2j, -0.7 + 0.4j][:n]
    inits = None
    if d == 2:
        inits = [
            (np.eye(2), np.array([[1.0, 0.3], [-0.2, 1.0]])),
            (np.array([[1.0, 0.1], [0.0, 1.0]]), np.eye(2)),
            (np.eye(2), np.array([[1.2, 0.0], [0.1, 0.9]])),
        ][:n]
    _seed, chain = chain_for(lams, d=d, count=201, h=5e-3, inits=inits)
    u_rec = darboux_nfold(chain, n)
    u_qd = quasidet_solution_form(chain, n)
    dev = np.max(np.linalg.norm(u_rec.values - u_qd.values, axis=(1, 2)))
    assert dev <= 1e-8


def test_level_order_enforced():
    _seed, chain = chain_for([LAM, 0.3 - 0.2j])
    with pytest.raises(LevelOrderViolation):
        chain.compute_level(2)
    chain.compute_level(1)
    with pytest.raises(LevelOrderViolation):
        chain.compute_level(1)
    with pytest.raises(LevelOrderViolation):
        chain.solution(2)


def test_chain_rejects_duplicate_spectral_values():
    seed = vacuum_seed(0.0, 1e-2, 101, 1)
    pair = integrate_linear_system(seed, LAM, np.eye(1), np.eye(1))
    with pytest.raises(Exception, match="distinct"):
        DressingChain(seed, [pair, pair])


# -- residual diagnostics ------------------------------------------------------------


def test_riccati_residual_vacuum_small():
    u, pair = vacuum_pair(LAM, h=1e-3, count=1001)
    res = riccati_residual_numeric(pair, u)
    assert float(np.max(res)) <= 1e-6


def test_riccati_residual_monotone_under_refinement():
    maxima = []
    for h, count in ((4e-3, 251), (2e-3, 501), (1e-3, 1001)):
        u, pair = vacuum_pair(LAM, h=h, count=count)
        maxima.append(float(np.max(riccati_residual_numeric(pair, u))))
    assert maxima[0] > maxima[1] > maxima[2]


def test_qpii_residual_zero_on_trivial_seed():
    u = vacuum_seed(0.0, 1e-2, 101, 1)
    res = qpii_residual_numeric(u, 0.0)
    assert float(np.max(res)) == 0.0


def test_qpii_residual_linear_seed_formula():
    d = 2
    z0, h, count = 0.0, 1e-2, 101
    zs = z0 + h * np.arange(count)
    vals = zs.reshape(-1, 1, 1) * np.eye(d)
    u = GridFunction(z0, h, vals)
    res = qpii_residual_numeric(u, 0.0)
    interior = zs[1:-1]
    want = np.abs(4 * interior**2 - 2 * interior**3) * np.sqrt(d)
    assert np.max(np.abs(res - want)) < 1e-9


# -- config and report ------------------------------------------------------------


def test_config_from_json_and_run_deterministic():
    doc = {
        "d": 1,
        "grid": {"z0": 0.0, "h": 5e-3, "count": 201},
        "lambdas": [[1.0, 0.5], [0.3, -0.2]],
        "c": [0.0, 0.0],
        "seed": "vacuum",
    }
    cfg = DarbouxConfig.from_json(json.dumps(doc))
    r1 = run_config(cfg)
    r2 = run_config(DarbouxConfig.from_json(json.dumps(doc)))
    assert dumps(r1) == dumps(r2)
    assert all(level["within_tolerance"] for level in r1["levels"])
    assert r1["qpii_residual"]["final_max"] > 0.0


def test_run_config_threads_identical():
    doc = {
        "d": 2,
        "grid": {"z0": 0.0, "h": 1e-2, "count": 101},
        "lambdas": [[1.0, 0.5], [0.3, -0.2]],
        "inits": [
            {"chi": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "phi": [[[1, 0], [0.3, 0]], [[-0.2, 0], [1, 0]]]},
            {"chi": [[[1, 0], [0.1, 0]], [[0, 0], [1, 0]]], "phi": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]},
        ],
    }
    cfg = DarbouxConfig.from_json(json.dumps(doc))
    assert dumps(run_config(cfg, threads=1)) == dumps(run_config(cfg, threads=4))


def test_config_rejects_duplicate_lambdas():
    doc = {
        "d": 1,
        "grid": {"z0": 0.0, "h": 1e-2, "count": 101},
        "lambdas": [[1.0, 0.5], [1.0, 0.5]],
    }
    with pytest.raises(ConfigError):
        DarbouxConfig.from_json(json.dumps(doc))


def test_config_seed_values_roundtrip():
    count = 7
    doc = {
        "d": 1,
        "grid": {"z0": 0.0, "h": 0.1, "count": count},
        "lambdas": [[1.0, 0.5]],
        "seed": {"values": [[[[0.1 * k, 0.0]]] for k in range(count)]},
    }
    cfg = DarbouxConfig.from_json(json.dumps(doc))
    seed = cfg.seed_grid()
    assert seed.values.shape == (count, 1, 1)
    assert abs(seed.values[3, 0, 0] - 0.3) < 1e-15
