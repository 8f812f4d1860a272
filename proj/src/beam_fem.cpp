#include "modirect/beam_fem.hpp"

#include "modirect/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace modirect {

namespace {

void check_alpha(const BeamModel& model, const Eigen::VectorXd& alpha) {
    if (alpha.size() != model.n_elements) {
        throw InvalidInput("damage vector has " + std::to_string(alpha.size()) +
                           " components, model has " + std::to_string(model.n_elements) +
                           " elements");
    }
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        if (!(alpha[i] >= 0.0 && alpha[i] <= 1.0)) {
            throw InvalidInput("damage index " + std::to_string(i + 1) + " = " +
                               std::to_string(alpha[i]) + " outside [0, 1]");
        }
    }
}

// Free-DOF index of the local element DOF, or -1 for the clamped root node.
int global_dof(int element, int local) {
    const int node = element + local / 2;
    if (node == 0) return -1;
    return 2 * (node - 1) + local % 2;
}

void scatter_add(Eigen::MatrixXd& global, const Eigen::Matrix4d& local, int element,
                 double scale) {
    for (int a = 0; a < 4; ++a) {
        const int ga = global_dof(element, a);
        if (ga < 0) continue;
        for (int b = 0; b < 4; ++b) {
            const int gb = global_dof(element, b);
            if (gb < 0) continue;
            global(ga, gb) += scale * local(a, b);
        }
    }
}

Eigen::MatrixXd assemble_mass(const BeamModel& model) {
    const int n = model.free_dofs();
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
    const Eigen::Matrix4d me = element_mass(model);
    for (int e = 0; e < model.n_elements; ++e) scatter_add(mass, me, e, 1.0);
    return mass;
}

Eigen::MatrixXd assemble_stiffness(const BeamModel& model, const Eigen::Matrix4d& ke,
                                   const Eigen::VectorXd& alpha) {
    const int n = model.free_dofs();
    Eigen::MatrixXd stiffness = Eigen::MatrixXd::Zero(n, n);
    for (int e = 0; e < model.n_elements; ++e) scatter_add(stiffness, ke, e, 1.0 - alpha[e]);
    return stiffness;
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> mode) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index k = 0; k < mode.size(); k += 2) {
        if (std::abs(mode[k]) > best_abs) {
            best_abs = std::abs(mode[k]);
            best = k;
        }
    }
    if (mode[best] < 0.0) mode = -mode;
}

void check_mode_number(const BeamModel& model, int mode_number) {
    if (mode_number < 1 || mode_number > model.free_dofs()) {
        throw InvalidInput("mode number " + std::to_string(mode_number) + " outside [1, " +
                           std::to_string(model.free_dofs()) + "]");
    }
}

}  // namespace

void BeamModel::validate() const {
    if (n_elements <= 0) throw InvalidInput("n_elements must be positive");
    if (!(element_length > 0.0)) throw InvalidInput("element_length must be positive");
    if (!(youngs_modulus > 0.0)) throw InvalidInput("youngs_modulus must be positive");
    if (!(cross_section_area > 0.0)) throw InvalidInput("cross_section_area must be positive");
    if (!(second_moment_area > 0.0)) throw InvalidInput("second_moment_area must be positive");
    if (!(mass_density > 0.0)) throw InvalidInput("mass_density must be positive");
}

BeamModel BeamModel::benchmark(int n_elements) {
    BeamModel model;
    model.n_elements = n_elements;
    model.validate();
    return model;
}

Eigen::Matrix4d element_stiffness(const BeamModel& model) {
    const double L = model.element_length;
    const double c = model.youngs_modulus * model.second_moment_area / (L * L * L);
    Eigen::Matrix4d k;
    // clang-format off
    k <<  12.0,     6.0 * L,     -12.0,     6.0 * L,
          6.0 * L,  4.0 * L * L, -6.0 * L,  2.0 * L * L,
         -12.0,    -6.0 * L,      12.0,    -6.0 * L,
          6.0 * L,  2.0 * L * L, -6.0 * L,  4.0 * L * L;
    // clang-format on
    return c * k;
}

Eigen::Matrix4d element_mass(const BeamModel& model) {
    const double L = model.element_length;
    const double c = model.mass_density * model.cross_section_area * L / 420.0;
    Eigen::Matrix4d m;
    // clang-format off
    m << 156.0,     22.0 * L,     54.0,    -13.0 * L,
          22.0 * L,  4.0 * L * L,  13.0 * L, -3.0 * L * L,
          54.0,     13.0 * L,    156.0,    -22.0 * L,
         -13.0 * L, -3.0 * L * L, -22.0 * L, 4.0 * L * L;
    // clang-format on
    return c * m;
}

Eigen::MatrixXd element_stiffness_global(const BeamModel& model, int element) {
    if (element < 0 || element >= model.n_elements) {
        throw InvalidInput("element index " + std::to_string(element) + " out of range");
    }
    const int n = model.free_dofs();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    scatter_add(k, element_stiffness(model), element, 1.0);
    return k;
}

SystemMatrices assemble(const BeamModel& model, const Eigen::VectorXd& alpha) {
    model.validate();
    check_alpha(model, alpha);
    return {assemble_stiffness(model, element_stiffness(model), alpha), assemble_mass(model)};
}

std::vector<int> translational_dofs(const BeamModel& model) {
    std::vector<int> dofs;
    dofs.reserve(model.n_elements);
    for (int k = 0; k < model.n_elements; ++k) dofs.push_back(2 * k);
    return dofs;
}

ModalSolver::ModalSolver(BeamModel model) : model_(model) {
    model_.validate();
    element_stiffness_ = element_stiffness(model_);
    mass_ = assemble_mass(model_);
    if (Eigen::LLT<Eigen::MatrixXd>(mass_).info() != Eigen::Success) {
        throw NumericalFailure("mass matrix is not positive definite (Cholesky failed)");
    }
}

ModalData ModalSolver::solve(const Eigen::VectorXd& alpha, int n_modes) const {
    check_alpha(model_, alpha);
    const int n = model_.free_dofs();
    if (n_modes < 1 || n_modes > n) {
        throw InvalidInput("requested " + std::to_string(n_modes) + " modes, model has " +
                           std::to_string(n) + " free DOFs");
    }

    const Eigen::MatrixXd stiffness = assemble_stiffness(model_, element_stiffness_, alpha);
    const Eigen::LLT<Eigen::MatrixXd> factor(stiffness);
    if (factor.info() != Eigen::Success) {
        throw NumericalFailure("stiffness matrix is not positive definite (Cholesky failed)");
    }

    // Inverted problem C y = (1/lambda) y with C = L^-1 M L^-T, K = L L^T. The low
    // modes become the dominant ones, so they keep full relative accuracy even though
    // the spectrum spans many orders of magnitude.
    Eigen::MatrixXd reduced = factor.matrixL().solve(mass_);
    reduced = factor.matrixL().solve(reduced.transpose()).eval();
    reduced = 0.5 * (reduced + reduced.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced);
    if (eig.info() != Eigen::Success) {
        throw NumericalFailure("symmetric eigensolver did not converge on reduced mass");
    }

    ModalData out;
    out.eigenvalues.resize(n_modes);
    Eigen::MatrixXd y(n, n_modes);
    for (int j = 0; j < n_modes; ++j) {
        const double mu = eig.eigenvalues()[n - 1 - j];
        if (!(mu > 0.0) || !std::isfinite(1.0 / mu)) {
            throw NumericalFailure("stiffness matrix is not positive definite (eigenvalue 1/" +
                                   std::to_string(mu) + ")");
        }
        out.eigenvalues[j] = 1.0 / mu;
        y.col(j) = eig.eigenvectors().col(n - 1 - j) / std::sqrt(mu);  // phi^T M phi = 1
    }
    out.mode_shapes = factor.matrixU().solve(y);
    for (int j = 0; j < n_modes; ++j) fix_sign(out.mode_shapes.col(j));
    return out;
}

ModalData solve_modal(const BeamModel& model, const Eigen::VectorXd& alpha, int n_modes) {
    return ModalSolver(model).solve(alpha, n_modes);
}

Eigen::VectorXd eigen_change(const BeamModel& model, const Eigen::VectorXd& alpha, int q) {
    const ModalSolver solver(model);
    const ModalData healthy = solver.solve(Eigen::VectorXd::Zero(model.n_elements), q);
    const ModalData damaged = solver.solve(alpha, q);
    return healthy.eigenvalues - damaged.eigenvalues;
}

Eigen::VectorXd mode_change(const ModalData& healthy, const ModalData& damaged, int mode_number,
                            const std::vector<int>& measured_dofs) {
    if (mode_number < 1 || mode_number > healthy.size() || mode_number > damaged.size()) {
        throw InvalidInput("mode number " + std::to_string(mode_number) +
                           " not available in modal data");
    }
    const auto h = healthy.mode_shapes.col(mode_number - 1);
    Eigen::VectorXd d = damaged.mode_shapes.col(mode_number - 1);
    if (d.dot(h) < 0.0) d = -d;

    Eigen::VectorXd out(static_cast<Eigen::Index>(measured_dofs.size()));
    for (std::size_t k = 0; k < measured_dofs.size(); ++k) {
        out[static_cast<Eigen::Index>(k)] = h[measured_dofs[k]] - d[measured_dofs[k]];
    }
    return out;
}

Eigen::VectorXd mode_change(const BeamModel& model, const Eigen::VectorXd& alpha,
                            int mode_number) {
    check_mode_number(model, mode_number);
    const ModalSolver solver(model);
    const ModalData healthy = solver.solve(Eigen::VectorXd::Zero(model.n_elements), mode_number);
    const ModalData damaged = solver.solve(alpha, mode_number);
    return mode_change(healthy, damaged, mode_number, translational_dofs(model));
}

Eigen::MatrixXd sensitivity_matrix(const BeamModel& model, int q) {
    const ModalData healthy = solve_modal(model, Eigen::VectorXd::Zero(model.n_elements), q);
    const Eigen::Matrix4d ke = element_stiffness(model);
    Eigen::MatrixXd s(q, model.n_elements);
    for (int j = 0; j < q; ++j) {
        const auto phi = healthy.mode_shapes.col(j);
        for (int e = 0; e < model.n_elements; ++e) {
            // phi^T K_e phi restricted to the element's DOFs
            Eigen::Vector4d local = Eigen::Vector4d::Zero();
            for (int a = 0; a < 4; ++a) {
                const int g = global_dof(e, a);
                if (g >= 0) local[a] = phi[g];
            }
            s(j, e) = local.dot(ke * local);
        }
    }
    return s;
}

Eigen::MatrixXd mode_sensitivity_matrix(const BeamModel& model, int mode_number,
                                        const std::vector<int>& measured_dofs) {
    check_mode_number(model, mode_number);
    const int n = model.free_dofs();
    const ModalData healthy = solve_modal(model, Eigen::VectorXd::Zero(model.n_elements), n);
    const int j = mode_number - 1;
    const auto phi_j = healthy.mode_shapes.col(j);

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(measured_dofs.size()),
                                                model.n_elements);
    for (int e = 0; e < model.n_elements; ++e) {
        const Eigen::VectorXd ke_phi_j = element_stiffness_global(model, e) * phi_j;
        Eigen::VectorXd column = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const double gap = healthy.eigenvalues[j] - healthy.eigenvalues[k];
            column += (healthy.mode_shapes.col(k).dot(ke_phi_j) / gap) * healthy.mode_shapes.col(k);
        }
        for (std::size_t r = 0; r < measured_dofs.size(); ++r) {
            out(static_cast<Eigen::Index>(r), e) = column[measured_dofs[r]];
        }
    }
    return out;
}

double modal_assurance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double aa = a.squaredNorm();
    const double bb = b.squaredNorm();
    if (aa == 0.0 || bb == 0.0) return 0.0;
    const double ab = a.dot(b);
    return ab * ab / (aa * bb);
}

}  // namespace modirect
