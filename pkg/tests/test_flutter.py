"""Flutter solver tests: pencils, modal reduction, sweeps, damping, scales."""

import numpy as np
import pytest
import scipy.linalg as la
import scipy.sparse as sp

from fgmflutter import (ModalBasis, NormalizationRefs, PlateCase,
                        SweepConfig, apply_bc, build_system,
                        isotropic_case, normalization_refs, run_case,
                        solve_eigen, structured_rect_mesh,
                        sweep_and_detect, write_branch_csv,
                        write_summary)
from fgmflutter.assembly import GlobalSystem

from conftest import make_isotropic_section, run_cached


def dense_system(matrices):
    """Wrap small dense matrices as a GlobalSystem for solver tests."""
    zeros = sp.csr_matrix(matrices["K"].shape)
    return GlobalSystem(
        K=sp.csr_matrix(matrices["K"]),
        KG=sp.csr_matrix(matrices.get("KG", zeros.toarray())),
        M=sp.csr_matrix(matrices["M"]),
        A=sp.csr_matrix(matrices.get("A", zeros.toarray())),
        DA=sp.csr_matrix(matrices.get("DA", zeros.toarray())),
        free=np.arange(matrices["K"].shape[0]),
    )


def reduced_plate(nx=8, ny=8, a_over_h=100.0, bc="SSSS"):
    section = make_isotropic_section(h=1.0 / a_over_h)
    mesh = structured_rect_mesh(1.0, 1.0, nx, ny)
    return apply_bc(build_system(mesh, section), mesh, bc)


# ---------------------------------------------------------------------------
# solve_eigen
# ---------------------------------------------------------------------------

def test_hand_built_pencil_exact():
    # R = M V diag(3, 7) V^-1 makes (R, M) eigenvalues exactly {3, 7}
    M = np.array([[2.0, 1.0], [1.0, 2.0]])
    V = np.array([[1.0, 1.0], [0.0, 1.0]])
    R = M @ V @ np.diag([3.0, 7.0]) @ la.inv(V)
    system = dense_system({"K": R, "M": M})
    w, vec = solve_eigen(system, 0.0)
    assert np.allclose(sorted(w.real), [3.0, 7.0], rtol=1e-12)
    assert np.abs(w.imag).max() < 1e-12


def test_solve_eigen_zero_pressure_real_positive():
    system = reduced_plate(6, 6)
    w, _ = solve_eigen(system, 0.0)
    assert np.abs(w.imag).max() <= 1e-8 * np.abs(w).max()
    assert w.real.min() > 0.0


def test_solve_eigen_eigenvectors_satisfy_pencil():
    system = reduced_plate(3, 3)
    refs = NormalizationRefs("isotropic", 1.0, 0.01,
                             70e9 * 0.01**3 / (12 * 0.91), 2700.0)
    lam = refs.pressure_dimensional(3.0)
    w, vec = solve_eigen(system, lam)
    R = (system.K + system.KG + lam * system.A).toarray()
    M = system.M.toarray()
    for k in (0, 3, 7):
        res = R @ vec[:, k] - w[k] * (M @ vec[:, k])
        assert np.abs(res).max() < 1e-6 * np.abs(R @ vec[:, k]).max()


def test_solve_eigen_rejects_indefinite_mass():
    system = dense_system({"K": np.eye(2), "M": np.diag([1.0, -1.0])})
    with pytest.raises(ValueError):
        solve_eigen(system, 0.0)


def test_thin_plate_frequency_at_extreme_slenderness():
    # locking check: a/h = 1e4 must still match the Kirchhoff value
    for a_over_h in (100.0, 1e4):
        system = reduced_plate(24, 24, a_over_h=a_over_h)
        basis = ModalBasis(system, 6)
        E, nu, rho, h = 70e9, 0.3, 2700.0, 1.0 / a_over_h
        D = E * h**3 / (12 * (1 - nu * nu))
        omega_bar = np.sqrt(basis.omega2[0]) * np.sqrt(rho * h / D)
        assert omega_bar == pytest.approx(2 * np.pi**2, rel=0.02)


def test_in_vacuo_frequencies_against_benchmark():
    # nondimensional first two frequency squares of the graded square plate
    # (a/h = 20, metal reference scales)
    refs = {0.0: (2051.986, 12542.351), 5.0: (496.765, 3021.286)}
    for n, (w1_ref, w2_ref) in refs.items():
        rec = run_cached(PlateCase(n=n, nx=24, ny=24), lambda_bar_max=1000.0)
        full = run_case(PlateCase(n=n, nx=24, ny=24), lambda_bar_max=1000.0,
                        keep_result=True)
        scale = full["refs"].time_scale ** 2
        w1 = full["basis"].omega2[0] * scale
        w2 = full["basis"].omega2[1] * scale
        assert w1 == pytest.approx(w1_ref, rel=0.025), n
        assert w2 == pytest.approx(w2_ref, rel=0.025), n


def test_flow_angle_rotational_equivalence():
    import math
    # 180 degrees: the fixed-diagonal mesh is symmetric under a half turn
    # about the plate centre, so reversing the flow is an exact congruence
    fwd = run_cached(PlateCase(n=0.0, nx=12, ny=12), lambda_bar_max=1000.0)
    rev = run_cached(PlateCase(n=0.0, nx=12, ny=12, theta_prime=math.pi),
                     lambda_bar_max=1000.0)
    assert rev["lambda_cr"] == pytest.approx(fwd["lambda_cr"], rel=1e-9)
    # 90 degrees: the same physical 1 x 2 plate with spanwise flow, meshed
    # with identical square cells; only the split diagonal orientation
    # differs after the rotation, so agreement is at mesh-bias level
    stream = run_cached(PlateCase(a=1.0, a_over_b=0.5, a_over_h=20.0, n=0.0,
                                  nx=12, ny=24), lambda_bar_max=800.0)
    span = run_cached(PlateCase(a=2.0, a_over_b=2.0, a_over_h=40.0, n=0.0,
                                nx=24, ny=12, theta_prime=math.pi / 2),
                      lambda_bar_max=8000.0)
    # same thickness, same D_ref; the span case reports lambda * (2a)^3
    assert span["lambda_cr"] == pytest.approx(8 * stream["lambda_cr"],
                                              rel=0.015)


def test_clamped_thin_plate_frequency():
    system = reduced_plate(24, 24, bc="CCCC")
    basis = ModalBasis(system, 4)
    E, nu, rho, h = 70e9, 0.3, 2700.0, 0.01
    D = E * h**3 / (12 * (1 - nu * nu))
    omega_bar = np.sqrt(basis.omega2[0]) * np.sqrt(rho * h / D)
    assert omega_bar == pytest.approx(35.985, rel=0.02)


# ---------------------------------------------------------------------------
# modal reduction quality
# ---------------------------------------------------------------------------

def test_modal_and_dense_sweeps_agree():
    system = reduced_plate(8, 8)
    refs = NormalizationRefs("isotropic", 1.0, 0.01,
                             70e9 * 0.01**3 / (12 * 0.91), 2700.0)
    cfg = SweepConfig(lambda_end=refs.pressure_dimensional(10.0),
                      lambda_step=refs.pressure_dimensional(10.0) / 100)
    modal = sweep_and_detect(system, cfg)
    dense = sweep_and_detect(system, SweepConfig(
        lambda_end=cfg.lambda_end, lambda_step=cfg.lambda_step,
        method="dense"))
    assert modal.found and dense.found
    assert modal.lambda_cr == pytest.approx(dense.lambda_cr, rel=2e-3)
    assert modal.omega_cr_sq == pytest.approx(dense.omega_cr_sq, rel=5e-3)


def test_basis_size_convergence():
    rec30 = run_cached(isotropic_case(a_over_h=100.0, nx=10, ny=10),
                       lambda_bar_max=10.0, basis_size=30)
    rec60 = run_cached(isotropic_case(a_over_h=100.0, nx=10, ny=10),
                       lambda_bar_max=10.0, basis_size=60)
    assert rec30["lambda_cr"] == pytest.approx(rec60["lambda_cr"], rel=1e-3)
    # thick plates interleave membrane and flexural modes; the automatic
    # basis there must be rich enough that doubling no longer moves the
    # boundary appreciably
    thick = PlateCase(n=0.0, a_over_h=5.0, nx=16, ny=16)
    rec_auto = run_cached(thick, lambda_bar_max=800.0)
    rec_big = run_cached(thick, lambda_bar_max=800.0, basis_size=300)
    assert rec_auto["lambda_cr"] == pytest.approx(rec_big["lambda_cr"], rel=5e-3)


# ---------------------------------------------------------------------------
# sweep and coalescence
# ---------------------------------------------------------------------------

def test_kirchhoff_galerkin_flutter_oracle():
    """Independent sine-series model of the thin SSSS square plate.

    Galerkin with w = sum q_mn sin(m pi x) sin(n pi y) turns the thin-plate
    flutter equation D lap^2 w + lam w_x + rho h w_tt = 0 into a small
    nonsymmetric eigenproblem per cross-stream index n; the FE boundary at
    a/h = 100 must match its coalescence pressure within 2 percent.
    """
    m_max = 8
    K = np.diag([(np.pi**4) * (m * m + 1.0)**2 for m in range(1, m_max + 1)])
    C = np.zeros((m_max, m_max))
    for mi in range(1, m_max + 1):
        for mj in range(1, m_max + 1):
            if (mi + mj) % 2 == 1:
                C[mi - 1, mj - 1] = 2.0 * mi * mj / (mi * mi - mj * mj) * -2.0
    # C[i, j] = integral 2 sin(i pi x) d/dx sin(j pi x) dx on (0, 1)
    lam_grid = np.linspace(0.0, 600.0, 601)
    lam_cr = None
    prev = lam_grid[0]
    for lam in lam_grid[1:]:
        w = la.eigvals(K + lam * C)
        if np.any(np.abs(w.imag) > 1e-9 * np.abs(w)):
            lo, hi = prev, lam
            for _ in range(40):
                mid = 0.5 * (lo + hi)
                w = la.eigvals(K + mid * C)
                if np.any(np.abs(w.imag) > 1e-9 * np.abs(w)):
                    hi = mid
                else:
                    lo = mid
            lam_cr = 0.5 * (lo + hi)
            break
        prev = lam
    assert lam_cr is not None
    assert lam_cr == pytest.approx(512.6, rel=5e-3)   # classical value

    rec = run_cached(isotropic_case(a_over_h=100.0, nx=24, ny=24),
                     lambda_bar_max=10.0)
    assert rec["lambda_cr"] * np.pi**4 == pytest.approx(lam_cr, rel=0.02)


def test_sweep_detects_and_brackets_coalescence():
    system = reduced_plate(8, 8)
    refs = NormalizationRefs("isotropic", 1.0, 0.01,
                             70e9 * 0.01**3 / (12 * 0.91), 2700.0)
    cfg = SweepConfig(lambda_end=refs.pressure_dimensional(10.0),
                      lambda_step=refs.pressure_dimensional(10.0) / 200)
    res = sweep_and_detect(system, cfg)
    assert res.found
    lo, hi = res.bracket
    assert (hi - lo) <= cfg.bisection_tol * hi * 1.0001
    # below: the pair is real and separated; above: complex conjugates
    tol = cfg.coalescence_tol
    assert np.all(np.abs(res.eigs_lo.imag) <= tol * np.abs(res.eigs_lo))
    i, j = res.mode_pair
    assert abs(res.eigs_lo[i] - res.eigs_lo[j]) > 0.0
    assert np.any(np.abs(res.eigs_hi.imag) > tol * np.abs(res.eigs_hi))
    assert res.omega_cr_sq > 0.0


def test_sweep_below_boundary_reports_no_flutter():
    system = reduced_plate(8, 8)
    refs = NormalizationRefs("isotropic", 1.0, 0.01,
                             70e9 * 0.01**3 / (12 * 0.91), 2700.0)
    cfg = SweepConfig(lambda_end=refs.pressure_dimensional(3.0),
                      lambda_step=refs.pressure_dimensional(3.0) / 60)
    res = sweep_and_detect(system, cfg)
    assert not res.found
    assert res.lambda_cr is None
    # branch history is monotone in pressure and all-real
    lams = np.array(res.branches.lambdas)
    assert np.all(np.diff(lams) > 0)
    for kappas in res.branches.values:
        assert np.abs(kappas.imag).max() <= 1e-6 * np.abs(kappas).max()


def test_branch_continuity():
    system = reduced_plate(8, 8)
    refs = NormalizationRefs("isotropic", 1.0, 0.01,
                             70e9 * 0.01**3 / (12 * 0.91), 2700.0)
    cfg = SweepConfig(lambda_end=refs.pressure_dimensional(8.0),
                      lambda_step=refs.pressure_dimensional(8.0) / 160)
    res = sweep_and_detect(system, cfg)
    vals = np.array(res.branches.values[:-1])   # up to the last all-real step
    if len(vals) > 3:
        steps = np.abs(np.diff(vals, axis=0))
        floor = 1e-3 * np.abs(vals[:-1]).max()
        for k in range(2, len(steps)):
            pred = steps[k - 1] + floor
            assert np.all(steps[k] < 10 * pred)


# ---------------------------------------------------------------------------
# damped boundary
# ---------------------------------------------------------------------------

def test_damped_zero_damping_matches_undamped():
    case = PlateCase(n=0.0, nx=10, ny=10)
    undamped = run_cached(case, lambda_bar_max=1000.0)
    damped = run_cached(case, lambda_bar_max=1000.0, damped=True, g_bar=0.0)
    assert damped["lambda_cr"] == pytest.approx(undamped["lambda_cr"], rel=5e-4)


def test_damping_raises_boundary():
    case = PlateCase(n=1.0, nx=10, ny=10)
    undamped = run_cached(case, lambda_bar_max=1000.0)
    damped = run_cached(case, lambda_bar_max=1000.0, damped=True, g_bar=8.0)
    assert damped["lambda_cr"] > undamped["lambda_cr"]


def test_damped_scalar_relation_on_flutter_branch():
    # with DA = Mw/p the quadratic pencil reproduces the single-mode
    # relation: growth rates satisfy s^2 + (g/p) s + kappa = 0 for the
    # transverse-dominated branches at zero pressure
    case = PlateCase(n=0.0, nx=8, ny=8)
    rec = run_case(case, lambda_bar_max=10.0, keep_result=True)
    system, basis = rec["system"], rec["basis"]
    p = rec["section_props"].p
    g = 0.05 * p * np.sqrt(basis.omega2[0])
    s = basis.damped_eigenvalues(0.0, g)
    s1 = s[np.argsort(np.abs(s.imag - np.sqrt(basis.omega2[0])))[0]]
    kappa = basis.omega2[0]
    resid = s1**2 + (g / p) * s1 + kappa
    # exact only when rotary inertia is neglected, which is the DA
    # definition; the residual carries the small rotary fraction of the mode
    assert abs(resid) < 1e-3 * kappa


# ---------------------------------------------------------------------------
# normalization and trace output
# ---------------------------------------------------------------------------

def test_metal_reference_rigidity_arithmetic():
    case = PlateCase(a_over_h=20.0)
    refs = normalization_refs(case)
    T = 300.0
    E_m = 201.04e9 * (1 + 3.079e-4 * T - 6.534e-7 * T * T)
    h = 1.0 / 20.0
    assert refs.D_ref == pytest.approx(E_m * h**3 / (12 * (1 - 0.28**2)), rel=1e-12)
    assert refs.rho_ref == 8166.0
    # round trip
    assert refs.pressure(refs.pressure_dimensional(123.4)) == pytest.approx(123.4)


def test_trace_files(tmp_path):
    case = isotropic_case(a_over_h=100.0, nx=8, ny=8)
    rec = run_case(case, lambda_bar_max=10.0, n_steps=100, keep_result=True)
    res, refs = rec["result"], rec["refs"]
    branch_path = tmp_path / "branches.csv"
    summary_path = tmp_path / "summary.csv"
    write_branch_csv(res, branch_path, refs)
    write_summary(res, summary_path, refs)
    lines = branch_path.read_text().splitlines()
    assert lines[0] == "lambda,mode_index,re_kappa,im_kappa"
    assert len(lines) > 100
    lam0, mode0, re0, im0 = lines[1].split(",")
    assert float(lam0) == 0.0 and int(mode0) == 0
    assert float(re0) > 0.0 and float(im0) == 0.0
    summary = summary_path.read_text().splitlines()
    assert summary[0] == "lambda_cr,omega_cr_sq,mode_pair,damped,found"
    lam_cr = float(summary[1].split(",")[0])
    assert lam_cr == pytest.approx(rec["lambda_cr"])
