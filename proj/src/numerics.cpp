#include "darts271/numerics.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <string>

namespace darts271::numerics {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) noexcept {
    return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

} // namespace

Eigen::SparseMatrix<double, Eigen::RowMajor> build_design(std::span<const LogisticObservation> observations,
                                                          Eigen::Index n_features) {
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t i = 0; i < observations.size(); ++i) {
        for (const auto& [col, value] : observations[i].features) {
            if (col < 0 || col >= n_features) throw Error(ErrorCode::InvalidConfig, "feature index out of range");
            triplets.emplace_back(static_cast<Eigen::Index>(i), col, value);
        }
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor> x(static_cast<Eigen::Index>(observations.size()), n_features);
    x.setFromTriplets(triplets.begin(), triplets.end());
    return x;
}

double logistic_objective(const Eigen::SparseMatrix<double, Eigen::RowMajor>& design,
                          const Vector<double>& labels, const Vector<double>& coefficients, double l2) {
    const Vector<double> z = design * coefficients;
    double nll = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) nll += softplus(z(i)) - labels(i) * z(i);
    const double n = std::max<double>(1.0, static_cast<double>(z.size()));
    return nll / n + 0.5 * l2 * coefficients.squaredNorm();
}

Vector<double> logistic_gradient(const Eigen::SparseMatrix<double, Eigen::RowMajor>& design,
                                 const Vector<double>& labels, const Vector<double>& coefficients, double l2) {
    const Vector<double> z = design * coefficients;
    Vector<double> residual(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) residual(i) = sigmoid(z(i)) - labels(i);
    const double n = std::max<double>(1.0, static_cast<double>(z.size()));
    return (design.transpose() * residual) / n + l2 * coefficients;
}

LogisticFit fit_logistic(std::span<const LogisticObservation> observations, Eigen::Index n_features,
                         const LogisticOptions& options) {
    if (options.l2 < 0.0) throw Error(ErrorCode::InvalidConfig, "l2 must be nonnegative");
    const auto design = build_design(observations, n_features);
    Vector<double> labels(static_cast<Eigen::Index>(observations.size()));
    for (std::size_t i = 0; i < observations.size(); ++i) labels(static_cast<Eigen::Index>(i)) = observations[i].label;
    const double n = std::max<double>(1.0, static_cast<double>(observations.size()));

    LogisticFit fit;
    fit.coefficients = Vector<double>::Zero(n_features);
    fit.objective = logistic_objective(design, labels, fit.coefficients, options.l2);
    fit.objective_trace.push_back(fit.objective);

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        const Vector<double> z = design * fit.coefficients;
        Vector<double> residual(z.size());
        Vector<double> weight(z.size());
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            const double p = sigmoid(z(i));
            residual(i) = p - labels(i);
            weight(i) = p * (1.0 - p);
        }
        const Vector<double> gradient = (design.transpose() * residual) / n + options.l2 * fit.coefficients;
        if (gradient.norm() <= options.gradient_tolerance) {
            fit.iterations = iter;
            return fit;
        }

        Eigen::SparseMatrix<double> hessian =
            (design.transpose() * weight.asDiagonal() * design).eval() / n;
        Matrix<double> h = Matrix<double>(hessian);
        h.diagonal().array() += options.l2;
        Eigen::LDLT<Matrix<double>> ldlt(h);
        Vector<double> step = ldlt.solve(-gradient);
        // Fall back to steepest descent when the Hessian is singular (l2 = 0 with separable data).
        if (ldlt.info() != Eigen::Success || !step.allFinite() || step.dot(gradient) >= 0.0) step = -gradient;

        double t = 1.0;
        const double slope = step.dot(gradient);
        bool accepted = false;
        for (int halvings = 0; halvings < 60; ++halvings) {
            Vector<double> candidate = fit.coefficients + t * step;
            const double objective = logistic_objective(design, labels, candidate, options.l2);
            // Inside the quadratic convergence region the decrease drops below
            // the objective's rounding noise, so accept a non-increasing full step.
            const bool armijo = objective <= fit.objective + 1e-4 * t * slope;
            const bool converging = -slope < 1e-14 && objective <= fit.objective + 1e-15 * std::abs(fit.objective);
            if (armijo || converging) {
                fit.coefficients = std::move(candidate);
                fit.objective = objective;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
        fit.objective_trace.push_back(fit.objective);
        fit.iterations = iter + 1;
    }

    const Vector<double> gradient = logistic_gradient(design, labels, fit.coefficients, options.l2);
    if (gradient.norm() <= options.gradient_tolerance) return fit;
    throw Error(ErrorCode::NonConvergence,
                "logistic fit did not converge after " + std::to_string(fit.iterations) + " iterations",
                std::to_string(fit.iterations));
}

} // namespace darts271::numerics
