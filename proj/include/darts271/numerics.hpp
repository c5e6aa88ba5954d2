#pragma once

#include "darts271/error.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <span>
#include <utility>
#include <vector>

namespace darts271::numerics {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Sparse coefficient list: (unknown index, value).
template <typename Scalar>
using SparseRow = std::vector<std::pair<Eigen::Index, Scalar>>;

/// Overdetermined system X r = y assembled row by row.
template <typename Scalar>
struct LinearSystem {
    struct Row {
        SparseRow<Scalar> coefficients;
        Scalar rhs{};
    };

    std::vector<Row> rows;
    Eigen::Index n_unknowns = 0;

    void add_row(SparseRow<Scalar> coefficients, Scalar rhs) {
        rows.push_back(Row{std::move(coefficients), rhs});
    }

    Matrix<Scalar> dense_matrix() const {
        Matrix<Scalar> x = Matrix<Scalar>::Zero(static_cast<Eigen::Index>(rows.size()), n_unknowns);
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            for (const auto& [col, value] : rows[static_cast<std::size_t>(i)].coefficients) {
                if (col < 0 || col >= n_unknowns) {
                    throw Error(ErrorCode::InvalidConfig, "coefficient index out of range");
                }
                x(i, col) += value;
            }
        }
        return x;
    }

    Vector<Scalar> rhs() const {
        Vector<Scalar> y(static_cast<Eigen::Index>(rows.size()));
        for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = rows[static_cast<std::size_t>(i)].rhs;
        return y;
    }
};

/// Minimum-Euclidean-norm minimizer of ||X r - y||. The result is orthogonal
/// to the kernel of X, so a system whose kernel is span(1) yields sum(r) = 0.
template <typename Scalar>
Vector<Scalar> least_squares_min_norm(const LinearSystem<Scalar>& system) {
    if (system.n_unknowns < 1) throw Error(ErrorCode::EmptySystem, "system has no unknowns");
    if (system.rows.empty()) return Vector<Scalar>::Zero(system.n_unknowns);
    const Matrix<Scalar> x = system.dense_matrix();
    Eigen::CompleteOrthogonalDecomposition<Matrix<Scalar>> cod(x);
    return cod.solve(system.rhs());
}

template <typename Scalar>
struct Line {
    Scalar slope{};
    Scalar intercept{};

    Scalar operator()(Scalar t) const noexcept { return intercept + slope * t; }
};

/// Ordinary least-squares line through (t, y) pairs.
/// Throws DegenerateInput with fewer than two distinct t values.
template <typename Scalar>
Line<Scalar> linear_regression_1d(std::span<const std::pair<Scalar, Scalar>> points) {
    if (points.size() < 2) throw Error(ErrorCode::DegenerateInput, "need at least two points");
    const auto n = static_cast<Scalar>(points.size());
    Scalar mean_t{}, mean_y{};
    for (const auto& [t, y] : points) {
        mean_t += t;
        mean_y += y;
    }
    mean_t /= n;
    mean_y /= n;
    Scalar sxx{}, sxy{};
    for (const auto& [t, y] : points) {
        sxx += (t - mean_t) * (t - mean_t);
        sxy += (t - mean_t) * (y - mean_y);
    }
    if (sxx == Scalar{0}) throw Error(ErrorCode::DegenerateInput, "all t values are equal");
    const Scalar slope = sxy / sxx;
    return {slope, mean_y - slope * mean_t};
}

struct LogisticObservation {
    SparseRow<double> features;
    int label = 0;
};

struct LogisticOptions {
    double l2 = 1e-3;
    double gradient_tolerance = 1e-8;
    int max_iterations = 500;
};

struct LogisticFit {
    Vector<double> coefficients;
    int iterations = 0;
    double objective = 0.0;
    /// Objective after each accepted step, starting from the zero vector.
    std::vector<double> objective_trace;
};

/// Penalized objective: mean negative log-likelihood + (l2 / 2) * ||c||^2.
double logistic_objective(const Eigen::SparseMatrix<double, Eigen::RowMajor>& design,
                          const Vector<double>& labels, const Vector<double>& coefficients, double l2);

Vector<double> logistic_gradient(const Eigen::SparseMatrix<double, Eigen::RowMajor>& design,
                                 const Vector<double>& labels, const Vector<double>& coefficients, double l2);

Eigen::SparseMatrix<double, Eigen::RowMajor> build_design(std::span<const LogisticObservation> observations,
                                                          Eigen::Index n_features);

/// Damped Newton iterations from zero. Throws NonConvergence after the iteration cap.
LogisticFit fit_logistic(std::span<const LogisticObservation> observations, Eigen::Index n_features,
                         const LogisticOptions& options = {});

inline double sigmoid(double z) noexcept {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace darts271::numerics
