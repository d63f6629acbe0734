import importlib

import numpy as np
import pytest

from diraczero.conformal import CoshPower, PolynomialEven, Tabulated
from diraczero.discrete import BACKEND, Grid, assemble, near_zero_eigen, residual, resolution
from diraczero.discrete import _kernels_py
from diraczero.errors import ResolutionError
from diraczero.verify import KERNEL_CALIBRATION, convergence_ratios
from diraczero.zeromode import PhysicalParams, ZeroMode, build_zero_mode, spinor_eigenpair

FLAT = Tabulated([-100.0, -50.0, 0.0, 50.0, 100.0], [1.0] * 5)
FREE = PhysicalParams(M=0.0, k_v=0.0)

try:
    _kernels_c = importlib.import_module("diraczero.discrete._kernels")
except ImportError:  # extension not built
    _kernels_c = None


def random_spinor(n, seed=0):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))


class TestGrid:
    def test_spacing_and_refinement(self):
        g = Grid(-1.0, 1.0, 5)
        assert g.h == 0.5
        fine = g.refined()
        assert fine.n_points == 9
        np.testing.assert_array_equal(fine.nodes[::2], g.nodes)

    @pytest.mark.parametrize("args", [(0, 1, 4), (0, 1, 1), (1, 0, 5), (0, float("inf"), 5)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            Grid(*args)


class TestStructure:
    def test_free_flat_operator_is_purely_kinetic(self):
        m = assemble(FREE, FLAT, Grid(-1, 1, 9), bc="periodic").to_dense()
        assert np.all(np.diag(m) == 0)
        np.testing.assert_allclose(m, m.conj().T, atol=0)
        # only the sigma_1 coupling between neighbours survives
        h = 0.25
        assert m[0, 2 * 1 + 1] == pytest.approx(-1j / (2 * h))
        assert m[1, 2 * 1 + 0] == pytest.approx(-1j / (2 * h))
        assert m[0, 2 * 1] == 0

    def test_dirichlet_rows(self):
        m = assemble(PhysicalParams(M=1.0, k_v=2.0, k_y=0.5), PolynomialEven(), Grid(-1, 1, 5)).to_dense()
        zero_rows = [i for i in range(m.shape[0]) if not np.any(m[i])]
        assert zero_rows == [0, 1, 8, 9]

    def test_constant_spinor_gives_sigma3(self):
        mat = assemble(PhysicalParams(M=1.0, k_v=0.0), FLAT, Grid(-3, 3, 31))
        psi = np.tile([0.3 + 0.1j, -0.7j], (31, 1))
        out = mat.apply(psi)
        np.testing.assert_allclose(out[1:-1], psi[1:-1] * np.array([1.0, -1.0]), atol=1e-15)

    def test_active_operator_shape(self):
        g = Grid(-1, 1, 11)
        p = PhysicalParams(M=0.5, k_v=1.0)
        assert assemble(p, FLAT, g).active_operator().shape == (18, 18)
        assert assemble(p, FLAT, g, bc="periodic").active_operator().shape == (22, 22)

    def test_unknown_bc(self):
        with pytest.raises(ValueError):
            assemble(FREE, FLAT, Grid(-1, 1, 5), bc="neumann")


class TestApply:
    @pytest.mark.parametrize("bc", ["dirichlet", "periodic"])
    def test_matrix_free_matches_sparse(self, bc):
        g = Grid(-4, 4, 201)
        mat = assemble(PhysicalParams(M=1.5, k_v=2.5, k_y=-0.7), CoshPower(n=2), g, bc)
        psi = random_spinor(g.n_points)
        a = mat.apply(psi).reshape(-1)
        b = mat.to_sparse() @ psi.reshape(-1)
        assert np.max(np.abs(a - b)) <= 1e-13 * np.max(np.abs(b))

    def test_flat_input_shape_preserved(self):
        g = Grid(-1, 1, 7)
        mat = assemble(PhysicalParams(M=1, k_v=2), FLAT, g)
        assert mat.apply(np.ones(14, dtype=complex)).shape == (14,)

    @pytest.mark.skipif(_kernels_c is None, reason="compiled kernels not built")
    @pytest.mark.parametrize("periodic", [False, True])
    def test_backends_agree(self, periodic):
        psi = random_spinor(1001, seed=3)
        w = CoshPower(n=1).value(np.linspace(-5, 5, 1001))
        args = (psi, w, 0.01, 0.4, 1.5, 2.5, periodic)
        np.testing.assert_allclose(_kernels_c.apply_dirac(*args), _kernels_py.apply_dirac(*args), rtol=0, atol=1e-13)
        np.testing.assert_allclose(_kernels_c.row_norms(psi), _kernels_py.row_norms(psi), rtol=1e-15)

    def test_backend_name(self):
        assert BACKEND in ("cython", "python")


class TestResidual:
    def test_massless_polynomial(self):
        # truncation error is h^2 (lambda Omega)^3 / 6 at the edges, about 1.8e-2 here
        p, om = PhysicalParams(M=0.0, k_v=1.0), PolynomialEven()
        mode = build_zero_mode(p, om)
        g = Grid(-5, 5, 4001)
        r1 = residual(p, om, g, mode)
        r2 = residual(p, om, g.refined(), mode)
        assert r1 == pytest.approx(0.01827, rel=1e-2)
        assert 3.5 <= r1 / r2 <= 4.5

    def test_lambda_zero_boundary_is_exact(self):
        p, om = PhysicalParams(M=4.0, k_v=5.0, k_y=3.0), CoshPower(n=1)
        assert residual(p, om, Grid(-5, 5, 1001), build_zero_mode(p, om)) < 1e-12

    def test_real_lambda_still_solves_ode(self):
        p, om = PhysicalParams(M=1.0, k_v=1.0, k_y=0.5), PolynomialEven()
        lam, chi = spinor_eigenpair(p)
        assert lam == 0.5
        mode = ZeroMode(lam, chi, 1.0, p, om)
        r = [residual(p, om, Grid(-2, 2, n), mode) for n in (401, 801)]
        assert r[0] < 1e-3 and 3.5 <= r[0] / r[1] <= 4.5

    def test_boundary_condition_does_not_change_interior_residual(self):
        p, om = PhysicalParams(M=1.5, k_v=2.5), CoshPower(n=1)
        mode, g = build_zero_mode(p, om), Grid(-3, 3, 2001)
        assert residual(p, om, g, mode, "dirichlet") == residual(p, om, g, mode, "periodic")

    def test_under_resolved(self):
        p, om = PhysicalParams(M=1.5, k_v=2.5), PolynomialEven()
        mode, g = build_zero_mode(p, om), Grid(-5, 5, 101)
        assert resolution(mode, g) > 0.5
        with pytest.raises(ResolutionError):
            residual(p, om, g, mode)

    @pytest.mark.parametrize("omega", [PolynomialEven(n=1), CoshPower(n=1)])
    @pytest.mark.parametrize("params", [PhysicalParams(M=1.5, k_v=2.5), PhysicalParams(M=0.0, k_v=1.0)])
    def test_second_order(self, omega, params):
        for ratio in convergence_ratios(params, omega):
            assert 3.5 <= ratio <= 4.5


class TestEigen:
    def test_periodic_free_case_has_exact_zero(self):
        mat = assemble(FREE, FLAT, Grid(-5, 5, 51), bc="periodic")
        vals = near_zero_eigen(mat, k=2, method="dense")
        assert abs(vals[0]) < 1e-12

    def test_periodic_free_case_sparse_survives_singularity(self):
        mat = assemble(FREE, FLAT, Grid(-5, 5, 401), bc="periodic")
        vals = near_zero_eigen(mat, k=3, method="sparse")
        assert abs(vals[0]) < 1e-8

    def test_dense_and_sparse_agree(self):
        mat = assemble(PhysicalParams(M=1.5, k_v=2.5), CoshPower(n=1), Grid(-6, 6, 301))
        dense = near_zero_eigen(mat, k=4, method="dense")
        sparse = near_zero_eigen(mat, k=4, method="sparse")
        np.testing.assert_allclose(np.abs(dense), np.abs(sparse), rtol=1e-8)

    def test_sorted_by_modulus(self):
        vals = near_zero_eigen(assemble(PhysicalParams(M=0.5, k_v=1.0), FLAT, Grid(-2, 2, 41)), k=10)
        assert np.all(np.diff(np.abs(vals)) >= 0)

    def test_kernel_separation_on_truncated_grid(self):
        g = Grid(-8, 8, 2001)
        adm = abs(near_zero_eigen(assemble(PhysicalParams(M=1.5, k_v=2.5), CoshPower(n=1), g), k=4)[0])
        ctl = abs(near_zero_eigen(assemble(PhysicalParams(M=1.5, k_v=0.5), CoshPower(n=1), g), k=4)[0])
        assert adm == pytest.approx(KERNEL_CALIBRATION["admissible_min_abs"], rel=1e-5)
        assert ctl == pytest.approx(KERNEL_CALIBRATION["control_min_abs"], rel=1e-5)
        assert ctl / adm >= 10

    def test_bad_arguments(self):
        mat = assemble(FREE, FLAT, Grid(-1, 1, 5))
        with pytest.raises(ValueError):
            near_zero_eigen(mat, k=0)
        with pytest.raises(ValueError):
            near_zero_eigen(mat, method="qr")
