#include <catch2/catch_amalgamated.hpp>

#include <boost/math/distributions/negative_binomial.hpp>

#include <cmath>
#include <vector>

#include "skucast/simulate.hpp"

using namespace skucast;

namespace {

FittedModel model(double alpha, double theta, double z_final) {
    FittedModel m;
    m.alpha = alpha;
    m.theta = theta;
    m.z_final = z_final;
    m.z_seed = z_final;
    return m;
}

const std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

// Parametric quantile via an independent library: the mean/over-dispersion
// NB(lambda, theta) is NB(r = lambda/theta, p = 1/(1+theta)) counting failures.
double parametric_quantile(double lambda, double theta, double tau) {
    boost::math::negative_binomial dist(lambda / theta, 1.0 / (1.0 + theta));
    return std::floor(boost::math::quantile(dist, tau));
}

} // namespace

TEST_CASE("same configuration reproduces identical trajectory matrices") {
    const FittedModel m = model(0.3, 1.5, 4.0);
    const TrajectorySet a = generate_trajectories(m, ones(8), 200, 99, "series_A");
    const TrajectorySet b = generate_trajectories(m, ones(8), 200, 99, "series_A");
    CHECK(a.samples == b.samples);
    const TrajectorySet c = generate_trajectories(m, ones(8), 200, 100, "series_A");
    CHECK(a.samples != c.samples);
    const TrajectorySet d = generate_trajectories(m, ones(8), 200, 99, "series_B");
    CHECK(a.samples != d.samples);
}

TEST_CASE("trajectory u is independent of how many trajectories are generated") {
    const FittedModel m = model(0.4, 2.0, 3.0);
    const TrajectorySet small = generate_trajectories(m, ones(5), 10, 7, "s");
    const TrajectorySet large = generate_trajectories(m, ones(5), 50, 7, "s");
    for (std::size_t u = 0; u < 10; ++u)
        for (std::size_t t = 0; t < 5; ++t) CHECK(small.at(u, t) == large.at(u, t));
}

TEST_CASE("alpha 0 makes steps iid with mean z_final") {
    const double z = 4.0, theta = 2.0;
    const std::size_t U = 100000;
    const TrajectorySet ts = generate_trajectories(model(0.0, theta, z), ones(6), U, 5, "iid");
    // Standard error of the column mean is sqrt(z*(theta+1)/U) ~ 0.011.
    const double tolerance = 4.0 * std::sqrt(z * (theta + 1.0) / static_cast<double>(U));
    for (std::size_t t = 0; t < 6; ++t) {
        double sum = 0.0;
        for (std::size_t u = 0; u < U; ++u) sum += static_cast<double>(ts.at(u, t));
        CHECK(sum / static_cast<double>(U) == Catch::Approx(z).margin(tolerance));
    }
}

TEST_CASE("tiny theta behaves like a Poisson") {
    const std::size_t U = 100000;
    const TrajectorySet ts = generate_trajectories(model(0.0, 1e-6, 4.0), ones(1), U, 11, "po");
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t u = 0; u < U; ++u) {
        const auto x = static_cast<double>(ts.at(u, 0));
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / static_cast<double>(U);
    const double var = sum_sq / static_cast<double>(U) - mean * mean;
    CHECK(var / mean == Catch::Approx(1.0).epsilon(0.05));
}

TEST_CASE("empirical distribution counts trajectories") {
    TrajectorySet ts;
    ts.num_trajectories = 4;
    ts.horizon = 1;
    ts.samples = {0, 0, 1, 3};
    const auto pmf = empirical_distribution(ts, 1);
    CHECK(pmf.at(0) == 0.5);
    CHECK(pmf.at(1) == 0.25);
    CHECK(pmf.at(3) == 0.25);

    TrajectorySet single;
    single.num_trajectories = 1;
    single.horizon = 1;
    single.samples = {7};
    const auto point = empirical_distribution(single, 1);
    CHECK(point.size() == 1);
    CHECK(point.at(7) == 1.0);

    CHECK_THROWS_AS(empirical_distribution(ts, 2), data_error);

    double total = 0.0;
    for (const auto& [k, p] : pmf) total += p;
    CHECK(total == 1.0);
}

TEST_CASE("empirical distribution converges to the parametric pmf") {
    const double z = 4.0, theta = 2.0;
    const TrajectorySet ts = generate_trajectories(model(0.0, theta, z), ones(1), 100000, 3, "tv");
    const auto pmf = empirical_distribution(ts, 1);
    double tv = 0.0;
    for (long long k = 0; k <= 200; ++k) {
        const auto it = pmf.find(k);
        const double emp = it == pmf.end() ? 0.0 : it->second;
        tv += std::fabs(emp - nb_pmf(k, {z, theta}));
    }
    CHECK(tv / 2.0 < 0.01);
}

TEST_CASE("nearest-rank quantiles on a permutation of 1..100") {
    TrajectorySet ts;
    ts.num_trajectories = 100;
    ts.horizon = 1;
    for (long long k = 100; k >= 1; --k) ts.samples.push_back(k);
    const std::vector<double> levels = {0.005, 0.25, 0.5, 0.995};
    const QuantileForecast qf = extract_quantiles(ts, levels);
    CHECK(qf.at(0, 0) == 1.0);
    CHECK(qf.at(0, 1) == 25.0);
    CHECK(qf.at(0, 2) == 50.0);
    CHECK(qf.at(0, 3) == 100.0);
}

TEST_CASE("degenerate samples collapse every quantile") {
    TrajectorySet ts;
    ts.num_trajectories = 20;
    ts.horizon = 2;
    ts.samples.assign(40, 6);
    const QuantileForecast qf = extract_quantiles(ts, kDefaultQuantileLevels);
    for (std::size_t t = 0; t < 2; ++t)
        for (std::size_t q = 0; q < qf.levels.size(); ++q) CHECK(qf.at(t, q) == 6.0);
}

TEST_CASE("quantile rows are non-decreasing across levels") {
    const TrajectorySet ts = generate_trajectories(model(0.5, 1.2, 2.5), ones(10), 5000, 21, "mono");
    const QuantileForecast qf = extract_quantiles(ts, kDefaultQuantileLevels);
    for (std::size_t t = 0; t < qf.horizon; ++t)
        for (std::size_t q = 1; q < qf.levels.size(); ++q) CHECK(qf.at(t, q) >= qf.at(t, q - 1));
}

TEST_CASE("simulated median matches the parametric NB median within one count") {
    const TrajectorySet ts = generate_trajectories(model(0.0, 2.0, 5.0), ones(1), 10000, 31, "med");
    const QuantileForecast qf = extract_quantiles(ts, std::vector<double>{0.5});
    CHECK(std::fabs(qf.at(0, 0) - parametric_quantile(5.0, 2.0, 0.5)) <= 1.0);
}

TEST_CASE("empty or invalid simulation input is rejected") {
    const FittedModel m = model(0.2, 1.0, 2.0);
    CHECK_THROWS_AS(generate_trajectories(m, {}, 10, 0, "x"), data_error);
    CHECK_THROWS_AS(generate_trajectories(m, ones(3), 0, 0, "x"), data_error);
    const std::vector<double> bad = {1.0, 0.0, 1.0};
    CHECK_THROWS_AS(generate_trajectories(m, bad, 10, 0, "x"), data_error);
    TrajectorySet empty;
    CHECK_THROWS_AS(extract_quantiles(empty, kDefaultQuantileLevels), data_error);
}
