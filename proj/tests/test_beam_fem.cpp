#include "modirect/beam_fem.hpp"
#include "modirect/errors.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace modirect;

namespace {

Eigen::VectorXd zeros(int n) { return Eigen::VectorXd::Zero(n); }

// Written out by hand rather than taken from the library.
Eigen::Matrix4d hermite_stiffness(double EI, double L) {
    Eigen::Matrix4d k;
    k << 12, 6 * L, -12, 6 * L,
         6 * L, 4 * L * L, -6 * L, 2 * L * L,
         -12, -6 * L, 12, -6 * L,
         6 * L, 2 * L * L, -6 * L, 4 * L * L;
    return EI / (L * L * L) * k;
}

}  // namespace

TEST(BeamModel, RejectsNonPositiveFields) {
    BeamModel m;
    m.mass_density = 0.0;
    EXPECT_THROW(m.validate(), InvalidInput);
    m = BeamModel{};
    m.n_elements = 0;
    EXPECT_THROW(m.validate(), InvalidInput);
    EXPECT_NO_THROW(BeamModel{}.validate());
    EXPECT_EQ(BeamModel::benchmark(20).free_dofs(), 40);
}

TEST(Assemble, TwoElementBeamMatchesHandAssembly) {
    BeamModel m = BeamModel::benchmark(2);
    const double EI = m.youngs_modulus * m.second_moment_area;
    const Eigen::Matrix4d ke = hermite_stiffness(EI, m.element_length);

    Eigen::Matrix4d healthy = Eigen::Matrix4d::Zero();
    healthy.topLeftCorner<2, 2>() += ke.bottomRightCorner<2, 2>();  // element 1, node 0 clamped
    healthy += ke;                                                 // element 2, nodes 1-2

    Eigen::Matrix4d damaged = Eigen::Matrix4d::Zero();
    damaged.topLeftCorner<2, 2>() += 0.5 * ke.bottomRightCorner<2, 2>();
    damaged += ke;

    const SystemMatrices h = assemble(m, zeros(2));
    const SystemMatrices d = assemble(m, Eigen::Vector2d(0.5, 0.0));
    EXPECT_LE((h.stiffness - healthy).cwiseAbs().maxCoeff(), 1e-6 * healthy.cwiseAbs().maxCoeff());
    EXPECT_LE((d.stiffness - damaged).cwiseAbs().maxCoeff(), 1e-6 * healthy.cwiseAbs().maxCoeff());
    EXPECT_EQ(h.mass, d.mass);
}

TEST(Assemble, ElementStiffnessesSumToHealthy) {
    const BeamModel m = BeamModel::benchmark(15);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(30, 30);
    for (int i = 0; i < 15; ++i) sum += element_stiffness_global(m, i);
    const Eigen::MatrixXd k = assemble(m, zeros(15)).stiffness;
    EXPECT_LE((sum - k).cwiseAbs().maxCoeff(), 1e-12 * k.cwiseAbs().maxCoeff());
    EXPECT_TRUE(k.isApprox(k.transpose(), 0.0));
}

TEST(Assemble, FullDamageZeroesStiffness) {
    const BeamModel m = BeamModel::benchmark(4);
    EXPECT_EQ(assemble(m, Eigen::VectorXd::Ones(4)).stiffness.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Assemble, RejectsBadAlpha) {
    const BeamModel m = BeamModel::benchmark(4);
    EXPECT_THROW(assemble(m, zeros(3)), InvalidInput);
    EXPECT_THROW(assemble(m, Eigen::VectorXd::Constant(4, 1.5)), InvalidInput);
}

TEST(SolveModal, MatchesAnalyticalCantilever) {
    const BeamModel m = BeamModel::benchmark(15);
    const ModalData md = solve_modal(m, zeros(15), 3);
    const double L = 15 * m.element_length;
    for (int k = 1; k <= 3; ++k) {
        const double exact = oracle::cantilever_eigenvalue(k, m.youngs_modulus, m.second_moment_area,
                                                           m.mass_density, m.cross_section_area, L);
        const double omega_ratio = std::sqrt(md.eigenvalues[k - 1] / exact);
        EXPECT_NEAR(omega_ratio, 1.0, 0.005) << "mode " << k;
    }
}

TEST(SolveModal, MassOrthonormalAndResidual) {
    const BeamModel m = BeamModel::benchmark(15);
    Eigen::VectorXd alpha = zeros(15);
    alpha[2] = 0.09;
    alpha[13] = 0.05;
    const ModalData md = solve_modal(m, alpha, 10);
    const SystemMatrices s = assemble(m, alpha);
    const Eigen::MatrixXd gram = md.mode_shapes.transpose() * s.mass * md.mode_shapes;
    EXPECT_LE((gram - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-8);
    for (int j = 0; j < 10; ++j) {
        const Eigen::VectorXd phi = md.mode_shapes.col(j);
        const double lambda = md.eigenvalues[j];
        EXPECT_NEAR(phi.dot(s.stiffness * phi) / lambda, 1.0, 1e-8);
        const Eigen::VectorXd lm = lambda * (s.mass * phi);
        EXPECT_LE((s.stiffness * phi - lm).norm() / lm.norm(), 1e-10);
        if (j > 0) EXPECT_GT(lambda, md.eigenvalues[j - 1]);
    }
}

TEST(SolveModal, SignConvention) {
    const BeamModel m = BeamModel::benchmark(15);
    const ModalData md = solve_modal(m, zeros(15), 6);
    const auto dofs = translational_dofs(m);
    for (int j = 0; j < 6; ++j) {
        double best = 0.0;
        for (int d : dofs) {
            if (std::abs(md.mode_shapes(d, j)) > std::abs(best)) best = md.mode_shapes(d, j);
        }
        EXPECT_GT(best, 0.0);
    }
}

TEST(SolveModal, UniformDamageScalesEigenvalues) {
    const BeamModel m = BeamModel::benchmark(15);
    const ModalData h = solve_modal(m, zeros(15), 5);
    const ModalData d = solve_modal(m, Eigen::VectorXd::Constant(15, 0.1), 5);
    for (int j = 0; j < 5; ++j) EXPECT_NEAR(d.eigenvalues[j] / h.eigenvalues[j], 0.9, 1e-11);
    const Eigen::VectorXd dl = eigen_change(m, Eigen::VectorXd::Constant(15, 0.1), 5);
    for (int j = 0; j < 5; ++j) EXPECT_NEAR(dl[j] / h.eigenvalues[j], 0.1, 1e-10);
    EXPECT_LE(mode_change(m, Eigen::VectorXd::Constant(15, 0.1), 2).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SolveModal, SingularStiffnessIsNumericalFailure) {
    const BeamModel m = BeamModel::benchmark(3);
    Eigen::VectorXd alpha = zeros(3);
    alpha[0] = 1.0;  // the clamped element carries no stiffness
    EXPECT_THROW(solve_modal(m, alpha, 2), NumericalFailure);
}

TEST(SolveModal, RejectsTooManyModes) {
    const BeamModel m = BeamModel::benchmark(3);
    EXPECT_THROW(solve_modal(m, zeros(3), 7), InvalidInput);
    EXPECT_THROW(solve_modal(m, zeros(3), 0), InvalidInput);
}

TEST(SolveModal, MeshRefinementConverges) {
    // same 150 m beam, element length halved
    BeamModel coarse = BeamModel::benchmark(30);
    coarse.element_length = 5.0;
    BeamModel fine = BeamModel::benchmark(60);
    fine.element_length = 2.5;
    const ModalData a = solve_modal(coarse, zeros(30), 3);
    const ModalData b = solve_modal(fine, zeros(60), 3);
    for (int j = 0; j < 3; ++j) {
        EXPECT_NEAR(std::sqrt(a.eigenvalues[j] / b.eigenvalues[j]), 1.0, 1e-3);
    }
}

TEST(SolveModal, Deterministic) {
    const BeamModel m = BeamModel::benchmark(15);
    Eigen::VectorXd alpha = Eigen::VectorXd::LinSpaced(15, 0.0, 0.2);
    const ModalData a = solve_modal(m, alpha, 8);
    const ModalData b = ModalSolver(m).solve(alpha, 8);
    EXPECT_EQ(a.eigenvalues, b.eigenvalues);
    EXPECT_EQ(a.mode_shapes, b.mode_shapes);
}

TEST(EigenChange, ZeroAndMonotone) {
    const BeamModel m = BeamModel::benchmark(15);
    EXPECT_EQ(eigen_change(m, zeros(15), 5).cwiseAbs().maxCoeff(), 0.0);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 0.15);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd a(15), b(15);
        for (int i = 0; i < 15; ++i) {
            a[i] = u(rng);
            b[i] = a[i] + u(rng);
        }
        const Eigen::VectorXd da = eigen_change(m, a, 6);
        const Eigen::VectorXd db = eigen_change(m, b, 6);
        for (int j = 0; j < 6; ++j) {
            EXPECT_GE(da[j], 0.0);
            EXPECT_GE(db[j], da[j]);
        }
    }
}

TEST(ModeChange, ZeroForHealthyAndSignIndependent) {
    const BeamModel m = BeamModel::benchmark(15);
    EXPECT_EQ(mode_change(m, zeros(15), 2).cwiseAbs().maxCoeff(), 0.0);

    Eigen::VectorXd alpha = zeros(15);
    alpha[2] = 0.09;
    alpha[13] = 0.05;
    const auto dofs = translational_dofs(m);
    const ModalSolver solver(m);
    const ModalData h = solver.solve(zeros(15), 2);
    const ModalData d = solver.solve(alpha, 2);
    ModalData flipped = d;
    flipped.mode_shapes.col(1) *= -1.0;

    const Eigen::VectorXd a = mode_change(h, d, 2, dofs);
    const Eigen::VectorXd b = mode_change(h, flipped, 2, dofs);
    EXPECT_GT(a.norm(), 0.0);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, mode_change(m, alpha, 2));
    EXPECT_EQ(a.size(), 15);
    EXPECT_THROW(mode_change(m, alpha, 31), InvalidInput);
}

TEST(Sensitivity, RowSumsAndSign) {
    const BeamModel m = BeamModel::benchmark(15);
    const Eigen::MatrixXd s = sensitivity_matrix(m, 9);
    const ModalData h = solve_modal(m, zeros(15), 9);
    ASSERT_EQ(s.rows(), 9);
    ASSERT_EQ(s.cols(), 15);
    EXPECT_GE(s.minCoeff(), 0.0);
    for (int j = 0; j < 9; ++j) EXPECT_NEAR(s.row(j).sum() / h.eigenvalues[j], 1.0, 1e-8);
}

TEST(Sensitivity, FirstOrderMatchesExactChange) {
    const BeamModel m = BeamModel::benchmark(15);
    const Eigen::MatrixXd s = sensitivity_matrix(m, 5);
    Eigen::VectorXd alpha = zeros(15);
    alpha[2] = 0.01;
    const Eigen::VectorXd exact = eigen_change(m, alpha, 5);
    for (int j = 0; j < 5; ++j) EXPECT_NEAR((s * alpha)[j] / exact[j], 1.0, 0.01) << "mode " << j + 1;
}

TEST(Sensitivity, FirstOrderConvergence) {
    // Rayleigh: the linear prediction never exceeds the exact change, and the gap
    // shrinks linearly with alpha
    const BeamModel m = BeamModel::benchmark(15);
    const Eigen::MatrixXd s = sensitivity_matrix(m, 5);
    const ModalData h = solve_modal(m, zeros(15), 5);
    for (int i = 0; i < 15; ++i) {
        double gap[2];
        for (int k = 0; k < 2; ++k) {
            Eigen::VectorXd alpha = zeros(15);
            alpha[i] = k == 0 ? 0.01 : 0.001;
            const Eigen::VectorXd exact = eigen_change(m, alpha, 5);
            const Eigen::VectorXd linear = s * alpha;
            for (int j = 0; j < 5; ++j) EXPECT_LE(linear[j], exact[j] * (1 + 1e-9));
            gap[k] = 0.0;
            for (int j = 0; j < 5; ++j) {
                if (s(j, i) < 1e-3 * h.eigenvalues[j]) continue;  // change below eigenvalue precision
                gap[k] = std::max(gap[k], 1.0 - linear[j] / exact[j]);
            }
        }
        EXPECT_LT(gap[0], 0.011) << "element " << i + 1;
        EXPECT_NEAR(gap[0] / gap[1], 10.0, 1.0) << "element " << i + 1;
    }
}

TEST(Sensitivity, ModeShapeDerivativeMatchesFiniteDifference) {
    const BeamModel m = BeamModel::benchmark(15);
    const auto dofs = translational_dofs(m);
    const Eigen::MatrixXd g = mode_sensitivity_matrix(m, 2, dofs);
    for (int i : {2, 8, 13}) {
        Eigen::VectorXd alpha = zeros(15);
        alpha[i] = 1e-4;
        const Eigen::VectorXd fd = mode_change(m, alpha, 2) / 1e-4;
        EXPECT_LE((fd - g.col(i)).norm(), 1e-3 * g.col(i).norm()) << "element " << i + 1;
    }
}

TEST(Sensitivity, DensityRescalingScalesEigenvalues) {
    BeamModel a = BeamModel::benchmark(15);
    BeamModel b = a;
    b.mass_density *= 3.0;
    const ModalData ma = solve_modal(a, zeros(15), 5);
    const ModalData mb = solve_modal(b, zeros(15), 5);
    for (int j = 0; j < 5; ++j) EXPECT_NEAR(mb.eigenvalues[j] * 3.0 / ma.eigenvalues[j], 1.0, 1e-10);
}

TEST(ModalAssurance, Basics) {
    Eigen::VectorXd a(3), b(3);
    a << 1, 2, 3;
    b << -2, -4, -6;
    EXPECT_NEAR(modal_assurance(a, b), 1.0, 1e-15);
    EXPECT_EQ(modal_assurance(a, Eigen::VectorXd::Zero(3)), 0.0);
}
