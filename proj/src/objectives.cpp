#include "modirect/objectives.hpp"

#include "modirect/errors.hpp"

#include <algorithm>
#include <string>

namespace modirect {

double mdlac(const Eigen::VectorXd& measured, const Eigen::VectorXd& predicted) {
    if (measured.size() != predicted.size()) {
        throw InvalidInput("MDLAC length mismatch: " + std::to_string(measured.size()) + " vs " +
                           std::to_string(predicted.size()));
    }
    const double mm = measured.squaredNorm();
    if (mm == 0.0) throw InvalidInput("MDLAC measured change vector is all zero");
    const double pp = predicted.squaredNorm();
    if (pp == 0.0) return 0.0;
    const double mp = measured.dot(predicted);
    // Cauchy-Schwarz bounds the ratio by 1; rounding can overshoot by an ulp
    return std::clamp(mp * mp / (mm * pp), 0.0, 1.0);
}

Measurement::Measurement(Eigen::VectorXd delta_lambda, Eigen::VectorXd delta_phi,
                         int mode_number)
    : delta_lambda_(std::move(delta_lambda)),
      delta_phi_(std::move(delta_phi)),
      mode_number_(mode_number) {
    if (delta_lambda_.size() < 1) throw InvalidInput("measurement needs at least one frequency");
    if (mode_number_ < 1) throw InvalidInput("mode number must be 1-based and positive");
    if (delta_lambda_.squaredNorm() == 0.0) {
        throw InvalidInput("measured eigenvalue change is all zero");
    }
    if (delta_phi_.size() < 1 || delta_phi_.squaredNorm() == 0.0) {
        throw InvalidInput("measured mode shape change is empty or all zero");
    }
}

std::string_view to_string(PredictionMode mode) {
    switch (mode) {
        case PredictionMode::exact: return "exact";
        case PredictionMode::sensitivity: return "sensitivity";
    }
    return "exact";
}

PredictionMode parse_prediction_mode(std::string_view text) {
    if (text == "exact") return PredictionMode::exact;
    if (text == "sensitivity") return PredictionMode::sensitivity;
    throw InvalidInput("unknown prediction mode '" + std::string(text) + "'");
}

Measurement exact_measurement(const BeamModel& model, const Eigen::VectorXd& alpha, int q,
                              int mode_number) {
    const ModalSolver solver(model);
    const int n_modes = std::max(q, mode_number);
    const ModalData healthy = solver.solve(Eigen::VectorXd::Zero(model.n_elements), n_modes);
    const ModalData damaged = solver.solve(alpha, n_modes);
    Eigen::VectorXd dl = (healthy.eigenvalues - damaged.eigenvalues).head(q);
    Eigen::VectorXd dp = mode_change(healthy, damaged, mode_number, translational_dofs(model));
    return Measurement(std::move(dl), std::move(dp), mode_number);
}

DamageObjective::DamageObjective(BeamModel model, Measurement measurement, PredictionMode mode)
    : solver_(model), measurement_(std::move(measurement)), mode_(mode) {
    const int n_dofs = solver_.model().free_dofs();
    if (measurement_.q() > n_dofs || measurement_.mode_number() > n_dofs) {
        throw InvalidInput("measurement asks for more modes than the model has DOFs");
    }
    measured_dofs_ = translational_dofs(solver_.model());
    if (measurement_.delta_phi().size() != static_cast<Eigen::Index>(measured_dofs_.size())) {
        throw InvalidInput("mode shape change has " +
                           std::to_string(measurement_.delta_phi().size()) +
                           " components, model measures " +
                           std::to_string(measured_dofs_.size()) + " DOFs");
    }
    const int n_modes = std::max(measurement_.q(), measurement_.mode_number());
    healthy_ = solver_.solve(Eigen::VectorXd::Zero(solver_.model().n_elements), n_modes);
    if (mode_ == PredictionMode::sensitivity) {
        eigen_sensitivity_ = sensitivity_matrix(solver_.model(), measurement_.q());
        mode_sensitivity_ =
            mode_sensitivity_matrix(solver_.model(), measurement_.mode_number(), measured_dofs_);
    }
}

ObjectiveVector DamageObjective::evaluate(const Eigen::VectorXd& alpha) const {
    Eigen::VectorXd dl;
    Eigen::VectorXd dp;
    if (mode_ == PredictionMode::sensitivity) {
        if (alpha.size() != eigen_sensitivity_.cols()) {
            throw InvalidInput("damage vector length does not match the model");
        }
        dl = eigen_sensitivity_ * alpha;
        dp = mode_sensitivity_ * alpha;
    } else {
        const ModalData damaged = solver_.solve(alpha, healthy_.size());
        dl = (healthy_.eigenvalues - damaged.eigenvalues).head(measurement_.q());
        dp = mode_change(healthy_, damaged, measurement_.mode_number(), measured_dofs_);
    }
    return {-mdlac(measurement_.delta_lambda(), dl), -mdlac(measurement_.delta_phi(), dp)};
}

ObjectiveVector DamageObjective::operator()(const DecisionVector& alpha) const {
    return evaluate(Eigen::Map<const Eigen::VectorXd>(alpha.data(),
                                                      static_cast<Eigen::Index>(alpha.size())));
}

ObjectiveVector evaluate(const Eigen::VectorXd& alpha, const Measurement& measurement,
                         const BeamModel& model) {
    return DamageObjective(model, measurement).evaluate(alpha);
}

}  // namespace modirect
