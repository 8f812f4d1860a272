#pragma once

#include "modirect/beam_fem.hpp"
#include "modirect/types.hpp"

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace modirect {

/// Multiple damage location assurance criterion:
/// <measured, predicted>^2 / (<measured, measured> <predicted, predicted>).
///
/// Returns 0 when `predicted` is the zero vector. Throws InvalidInput on a length
/// mismatch or an all-zero `measured`.
double mdlac(const Eigen::VectorXd& measured, const Eigen::VectorXd& predicted);

/// Measured modal changes: eigenvalue changes of the first q modes and the change
/// of one mode shape (1-based `mode_number`) on the measured DOFs.
class Measurement {
public:
    Measurement(Eigen::VectorXd delta_lambda, Eigen::VectorXd delta_phi, int mode_number);

    const Eigen::VectorXd& delta_lambda() const { return delta_lambda_; }
    const Eigen::VectorXd& delta_phi() const { return delta_phi_; }
    int q() const { return static_cast<int>(delta_lambda_.size()); }
    int mode_number() const { return mode_number_; }

private:
    Eigen::VectorXd delta_lambda_;
    Eigen::VectorXd delta_phi_;
    int mode_number_;
};

/// How predicted changes are computed for a candidate alpha.
enum class PredictionMode {
    exact,        // full re-solve of the damaged model
    sensitivity,  // first-order: S alpha for eigenvalues, modal expansion for the mode shape
};

std::string_view to_string(PredictionMode mode);
PredictionMode parse_prediction_mode(std::string_view text);

/// Noise-free measurement produced by the forward model at `alpha`.
Measurement exact_measurement(const BeamModel& model, const Eigen::VectorXd& alpha, int q,
                              int mode_number);

/// The two-objective damage identification problem
///   f1 = -MDLAC(delta_lambda, alpha), f2 = -MDLAC(delta_phi_j, alpha).
///
/// Holds the healthy baseline so each evaluation costs one eigensolve. Immutable
/// after construction and safe to call from several threads.
class DamageObjective {
public:
    DamageObjective(BeamModel model, Measurement measurement,
                    PredictionMode mode = PredictionMode::exact);

    ObjectiveVector evaluate(const Eigen::VectorXd& alpha) const;
    ObjectiveVector operator()(const DecisionVector& alpha) const;

    int num_objectives() const { return 2; }
    const BeamModel& model() const { return solver_.model(); }
    const Measurement& measurement() const { return measurement_; }

private:
    ModalSolver solver_;
    Measurement measurement_;
    PredictionMode mode_;
    ModalData healthy_;
    std::vector<int> measured_dofs_;
    Eigen::MatrixXd eigen_sensitivity_;  // sensitivity mode only
    Eigen::MatrixXd mode_sensitivity_;   // sensitivity mode only
};

/// One-shot evaluation with exact predictions.
ObjectiveVector evaluate(const Eigen::VectorXd& alpha, const Measurement& measurement,
                         const BeamModel& model);

}  // namespace modirect
