#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <vector>

namespace modirect {

/// Uniform Euler-Bernoulli cantilever discretized into equal 2-node elements.
///
/// Node 0 is clamped; every other node carries a transverse translation and a
/// rotation, so free DOF 2k is the translation of node k+1 and 2k+1 its rotation.
struct BeamModel {
    int n_elements = 15;
    double element_length = 10.0;       // m
    double youngs_modulus = 69.0e9;      // Pa
    double cross_section_area = 1.0;     // m^2
    double second_moment_area = 1.0 / 12.0;  // m^4, square section of area 1
    double mass_density = 2700.0;        // kg/m^3

    /// Throws InvalidInput unless every field is strictly positive.
    void validate() const;

    int free_dofs() const { return 2 * n_elements; }

    /// Benchmark beam with the default material and section and `n_elements` elements.
    static BeamModel benchmark(int n_elements);
};

struct SystemMatrices {
    Eigen::MatrixXd stiffness;
    Eigen::MatrixXd mass;
};

/// Lowest eigenpairs of (K, M), ascending. Columns of `mode_shapes` are
/// mass-normalized and signed so the largest-magnitude translation is positive.
struct ModalData {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd mode_shapes;

    int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// 4x4 cubic-Hermite bending stiffness of one element, DOF order (w1, th1, w2, th2).
Eigen::Matrix4d element_stiffness(const BeamModel& model);

/// 4x4 consistent mass matrix of one element.
Eigen::Matrix4d element_mass(const BeamModel& model);

/// Healthy stiffness of a single element scattered into the free-DOF space (K_i^R).
Eigen::MatrixXd element_stiffness_global(const BeamModel& model, int element);

/// Stiffness sum((1 - alpha_i) K_i^R) and the alpha-independent consistent mass.
SystemMatrices assemble(const BeamModel& model, const Eigen::VectorXd& alpha);

/// Indices of the translational free DOFs (the measured DOFs of a mode shape).
std::vector<int> translational_dofs(const BeamModel& model);

/// Reusable generalized eigensolver for one beam model. The mass matrix does not
/// depend on damage and is assembled once; each solve factors the damaged
/// stiffness and reduces to a symmetric standard eigenproblem.
class ModalSolver {
public:
    explicit ModalSolver(BeamModel model);

    ModalData solve(const Eigen::VectorXd& alpha, int n_modes) const;

    const BeamModel& model() const { return model_; }
    const Eigen::MatrixXd& mass() const { return mass_; }

private:
    BeamModel model_;
    Eigen::Matrix4d element_stiffness_;
    Eigen::MatrixXd mass_;
};

ModalData solve_modal(const BeamModel& model, const Eigen::VectorXd& alpha, int n_modes);

/// Exact eigenvalue change lambda(healthy) - lambda(damaged) of the first q modes.
Eigen::VectorXd eigen_change(const BeamModel& model, const Eigen::VectorXd& alpha, int q);

/// phi_j(healthy) - phi_j(damaged) on the translational DOFs, `mode_number` 1-based.
/// The damaged mode is flipped first if its inner product with the healthy one is negative.
Eigen::VectorXd mode_change(const BeamModel& model, const Eigen::VectorXd& alpha, int mode_number);

/// Same as mode_change but from precomputed modal data; the sign alignment makes
/// the result independent of the sign of `damaged`.
Eigen::VectorXd mode_change(const ModalData& healthy, const ModalData& damaged, int mode_number,
                            const std::vector<int>& measured_dofs);

/// S(j, i) = phi_j^T K_i^R phi_j with healthy mass-normalized modes, j < q.
Eigen::MatrixXd sensitivity_matrix(const BeamModel& model, int q);

/// First-order change of mode `mode_number` on the measured DOFs per unit alpha_i:
/// column i holds d(phi_h - phi_d)/d alpha_i from a modal expansion over all modes.
Eigen::MatrixXd mode_sensitivity_matrix(const BeamModel& model, int mode_number,
                                        const std::vector<int>& measured_dofs);

/// Modal assurance criterion (a.b)^2 / (|a|^2 |b|^2); 0 if either vector is zero.
double modal_assurance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace modirect
