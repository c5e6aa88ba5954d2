#include "darts271/numerics.hpp"
#include "darts271/random.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace darts271;
using namespace darts271::numerics;

namespace {

LinearSystem<double> random_system(RandomSource& rng, int rows, int cols) {
    LinearSystem<double> s;
    s.n_unknowns = cols;
    for (int i = 0; i < rows; ++i) {
        SparseRow<double> row;
        for (int j = 0; j < cols; ++j) row.emplace_back(j, rng.uniform() * 2 - 1);
        s.add_row(std::move(row), rng.uniform() * 4 - 2);
    }
    return s;
}

double normal_draw(RandomSource& rng) {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2);
}

} // namespace

TEST_SUITE("numerics") {

TEST_CASE("least squares small cases") {
    LinearSystem<double> one;
    one.n_unknowns = 1;
    one.add_row({{0, 1.0}}, 3.0);
    CHECK(least_squares_min_norm(one)(0) == doctest::Approx(3.0));

    LinearSystem<double> contradictory;
    contradictory.n_unknowns = 2;
    contradictory.add_row({{0, 1.0}, {1, -1.0}}, 1.0);
    contradictory.add_row({{1, 1.0}, {0, -1.0}}, 1.0);
    const auto r = least_squares_min_norm(contradictory);
    CHECK(std::abs(r(0)) < 1e-12);
    CHECK(std::abs(r(1)) < 1e-12);

    LinearSystem<double> empty;
    CHECK_THROWS_AS(least_squares_min_norm(empty), Error);
}

TEST_CASE("least squares matches normal equations on full-rank systems") {
    RandomSource rng(8, 4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_system(rng, 8, 4);
        const auto got = least_squares_min_norm(s);
        const auto want = testing::normal_equations_solve(s.dense_matrix(), s.rhs());
        CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("least squares satisfies the normal equations and the pinv oracle when rank deficient") {
    RandomSource rng(9, 1);
    for (int trial = 0; trial < 30; ++trial) {
        const int cols = 2 + static_cast<int>(rng.uniform() * 10);
        const int rows = 1 + static_cast<int>(rng.uniform() * 14);
        auto s = random_system(rng, rows, cols);
        // Duplicate a column to force a nontrivial kernel.
        for (auto& row : s.rows) row.coefficients.back().second = row.coefficients.front().second;
        const auto x = s.dense_matrix();
        const auto y = s.rhs();
        const auto r = least_squares_min_norm(s);
        const double scale = std::max(1.0, (x.transpose() * y).cwiseAbs().maxCoeff());
        CHECK((x.transpose() * (x * r - y)).cwiseAbs().maxCoeff() <= 1e-8 * scale);
        CHECK((r - testing::pinv_solve(x, y)).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("kernel span(1) gives a zero-sum solution") {
    RandomSource rng(10, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 6;
        LinearSystem<double> s;
        s.n_unknowns = n;
        for (int k = 0; k < 20; ++k) {
            const int i = static_cast<int>(rng.uniform() * n);
            int j = static_cast<int>(rng.uniform() * (n - 1));
            if (j >= i) ++j;
            s.add_row({{i, 1.0}, {j, -1.0}}, rng.uniform() * 2 - 1);
        }
        for (int i = 0; i + 1 < n; ++i) s.add_row({{i, 1.0}, {i + 1, -1.0}}, 0.0);
        const auto r = least_squares_min_norm(s);
        CHECK(std::abs(r.sum()) <= 1e-10 * n);
    }
}

TEST_CASE("linear regression") {
    const std::vector<std::pair<double, double>> two{{0, 1}, {1, 3}};
    const auto l = linear_regression_1d<double>(two);
    CHECK(l.slope == doctest::Approx(2.0));
    CHECK(l.intercept == doctest::Approx(1.0));

    const std::vector<std::pair<double, double>> flat{{0, 5}, {1, 5}, {2, 5}};
    const auto f = linear_regression_1d<double>(flat);
    CHECK(f.slope == doctest::Approx(0.0));
    CHECK(f.intercept == doctest::Approx(5.0));

    RandomSource rng(3, 3);
    std::vector<std::pair<double, double>> noisy;
    for (int i = 0; i < 100; ++i) {
        const double t = i / 10.0;
        noisy.emplace_back(t, 0.3 * t + 0.1 + 0.01 * normal_draw(rng));
    }
    const auto n = linear_regression_1d<double>(noisy);
    CHECK(std::abs(n.slope - 0.3) <= 0.01);

    const std::vector<std::pair<double, double>> same_t{{1, 2}, {1, 3}};
    CHECK_THROWS_AS(linear_regression_1d<double>(same_t), Error);
    const std::vector<std::pair<double, double>> single{{1, 2}};
    CHECK_THROWS_AS(linear_regression_1d<double>(single), Error);
}

TEST_CASE("linear regression in single precision") {
    const std::vector<std::pair<float, float>> two{{0.f, 1.f}, {2.f, 5.f}};
    const auto l = linear_regression_1d<float>(two);
    CHECK(l.slope == doctest::Approx(2.0f));
    CHECK(l(1.f) == doctest::Approx(3.0f));
}

TEST_CASE("logistic fit: forced directions") {
    std::vector<LogisticObservation> ones(50, LogisticObservation{{{0, 1.0}}, 1});
    const auto fit = fit_logistic(ones, 1);
    CHECK(fit.coefficients(0) > 0);
    CHECK(sigmoid(fit.coefficients(0)) > 0.99);

    std::vector<LogisticObservation> balanced;
    for (int i = 0; i < 40; ++i) balanced.push_back({{}, i % 2});
    const auto b = fit_logistic(balanced, 1);
    CHECK(std::abs(b.coefficients(0)) < 1e-9);
}

TEST_CASE("logistic fit recovers planted coefficients") {
    RandomSource rng(2024, 9);
    std::vector<LogisticObservation> obs;
    for (int i = 0; i < 10000; ++i) {
        const double x = normal_draw(rng);
        const int y = rng.uniform() < sigmoid(0.5 + 1.2 * x) ? 1 : 0;
        obs.push_back({{{0, 1.0}, {1, x}}, y});
    }
    LogisticOptions options;
    options.l2 = 1e-4;
    const auto fit = fit_logistic(obs, 2, options);
    CHECK(std::abs(fit.coefficients(0) - 0.5) <= 0.05);
    CHECK(std::abs(fit.coefficients(1) - 1.2) <= 0.05);
}

TEST_CASE("logistic gradient matches central differences") {
    RandomSource rng(77, 0);
    std::vector<LogisticObservation> obs;
    for (int i = 0; i < 200; ++i) {
        SparseRow<double> f{{0, 1.0}};
        for (int j = 1; j < 5; ++j)
            if (rng.uniform() < 0.6) f.emplace_back(j, rng.uniform() * 4 - 2);
        obs.push_back({f, rng.uniform() < 0.4 ? 1 : 0});
    }
    const auto design = build_design(obs, 5);
    Vector<double> labels(static_cast<Eigen::Index>(obs.size()));
    for (std::size_t i = 0; i < obs.size(); ++i) labels(static_cast<Eigen::Index>(i)) = obs[i].label;
    const double l2 = 1e-3;
    const double h = 1e-5;
    for (int point = 0; point < 10; ++point) {
        Vector<double> c(5);
        for (int j = 0; j < 5; ++j) c(j) = rng.uniform() * 4 - 2;
        const auto g = logistic_gradient(design, labels, c, l2);
        for (int j = 0; j < 5; ++j) {
            Vector<double> up = c, down = c;
            up(j) += h;
            down(j) -= h;
            const double fd = (logistic_objective(design, labels, up, l2) -
                               logistic_objective(design, labels, down, l2)) /
                              (2 * h);
            CHECK(std::abs(fd - g(j)) <= 1e-4 * std::max(1.0, std::abs(g(j))));
        }
    }
}

TEST_CASE("logistic objective never increases across iterations") {
    RandomSource rng(5, 5);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<LogisticObservation> obs;
        for (int i = 0; i < 300; ++i) {
            const double x = normal_draw(rng) * 3;
            // Nearly separable labels stress the damping.
            obs.push_back({{{0, 1.0}, {1, x}, {2, x * x / 5}}, x + 0.1 * normal_draw(rng) > 0 ? 1 : 0});
        }
        const auto fit = fit_logistic(obs, 3);
        REQUIRE(fit.objective_trace.size() >= 2);
        for (std::size_t i = 1; i < fit.objective_trace.size(); ++i)
            CHECK(fit.objective_trace[i] <= fit.objective_trace[i - 1]);
    }
}

TEST_CASE("logistic iteration cap") {
    std::vector<LogisticObservation> obs;
    for (int i = 0; i < 20; ++i) obs.push_back({{{0, 1.0}, {1, i - 9.5}}, i >= 10});
    LogisticOptions options;
    options.max_iterations = 1;
    options.l2 = 1e-6;
    try {
        fit_logistic(obs, 2, options);
        FAIL("expected NonConvergence");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonConvergence);
    }
}

TEST_CASE("sample_categorical") {
    RandomSource rng(1, 1);
    const std::vector<double> one{1.0};
    const std::vector<double> middle{0.0, 1.0, 0.0};
    for (int i = 0; i < 1000; ++i) {
        CHECK(sample_categorical(rng, one) == 0);
        CHECK(sample_categorical(rng, middle) == 1);
    }

    const std::vector<double> half{0.5, 0.5};
    CategoricalSampler sampler(half);
    std::size_t hits = 0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) hits += sampler(rng);
    CHECK(std::abs(static_cast<double>(hits) / n - 0.5) <= 0.002);

    const std::vector<double> bad_sum{0.5, 0.4};
    const std::vector<double> negative{1.5, -0.5};
    CHECK_THROWS_AS(CategoricalSampler{bad_sum}, Error);
    CHECK_THROWS_AS(CategoricalSampler{negative}, Error);
    CHECK_THROWS_AS(CategoricalSampler{std::vector<double>{}}, Error);
}

TEST_CASE("random streams are reproducible and distinct") {
    const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
    RandomSource a(42, 7), b(42, 7), c(42, 8);
    std::vector<std::size_t> da, db, dc;
    for (int i = 0; i < 1000; ++i) {
        da.push_back(sample_categorical(a, w));
        db.push_back(sample_categorical(b, w));
        dc.push_back(sample_categorical(c, w));
    }
    CHECK(da == db);
    CHECK(da != dc);
    CHECK(hash_seed("live-000001") == hash_seed("live-000001"));
    CHECK(hash_seed("a") != hash_seed("b"));
}

}
