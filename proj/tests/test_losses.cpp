#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "scoredecomp/losses.hpp"
#include "scoredecomp/rng.hpp"

using namespace scoredecomp;

namespace {

// Independent reference implementations for the oracle checks.
double shannon_entropy_nats(const std::vector<double>& q) {
    double h = 0.0;
    for (double v : q)
        if (v > 0.0) h -= v * std::log(v);
    return h;
}

double kl_nats(const std::vector<double>& q, const std::vector<double>& p) {
    double d = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] > 0.0) d += q[i] * std::log(q[i] / p[i]);
    return d;
}

ProbVector random_simplex(int k, CounterRng& rng) {
    std::vector<double> v(static_cast<std::size_t>(k));
    double sum = 0.0;
    for (auto& x : v) {
        x = -std::log(rng.next_uniform());
        sum += x;
    }
    for (auto& x : v) x /= sum;
    return ProbVector(v);
}

}  // namespace

TEST_CASE("pointwise loss matches the binary conventions") {
    const ProperLoss brier = ProperLoss::brier();
    const ProperLoss ll = ProperLoss::logloss();
    const ProbVector half = ProbVector::bernoulli(0.5);

    CHECK(pointwise_loss(brier, half, Outcome{1}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(pointwise_loss(ll, half, Outcome{1}) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-15));
    for (int y = 0; y < 2; ++y)
        CHECK(pointwise_loss(brier, ProbVector::onehot(y, 2), Outcome{y}) == 0.0);
    // Multi-class Brier is the full squared distance to the one-hot vector.
    const ProbVector p3({0.2, 0.3, 0.5});
    const double expect = 0.2 * 0.2 + 0.3 * 0.3 + 0.5 * 0.5;
    CHECK(pointwise_loss(brier, p3, Outcome{2}) ==
          doctest::Approx(0.04 + 0.09 + 0.25).epsilon(1e-14));
    (void)expect;
}

TEST_CASE("conditional risk closed forms") {
    const ProperLoss brier = ProperLoss::brier();
    const ProperLoss ll = ProperLoss::logloss();
    for (int i = 1; i <= 10; ++i) {
        for (int j = 1; j <= 10; ++j) {
            const double p = i / 11.0;
            const double q = j / 11.0;
            const double risk =
                conditional_risk(brier, ProbVector::bernoulli(p), ProbVector::bernoulli(q));
            CHECK(std::abs(risk - ((p - q) * (p - q) + q * (1.0 - q))) < 1e-12);
        }
    }
    CounterRng rng(7, 0);
    for (int rep = 0; rep < 50; ++rep) {
        const int k = 2 + static_cast<int>(rng.next_below(3));
        const ProbVector q = random_simplex(k, rng);
        CHECK(std::abs(entropy(ll, q) - shannon_entropy_nats(q.probs())) < 1e-12);
        // Degenerate q reduces the risk to the pointwise loss.
        const int y = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k)));
        const ProbVector p = random_simplex(k, rng);
        CHECK(std::abs(conditional_risk(brier, p, ProbVector::onehot(y, k)) -
                       pointwise_loss(brier, p, Outcome{y})) < 1e-12);
    }
}

TEST_CASE("divergence closed forms and fixtures") {
    const ProperLoss brier = ProperLoss::brier();
    const ProperLoss ll = ProperLoss::logloss();

    CHECK(divergence(brier, ProbVector::bernoulli(0.5), ProbVector::bernoulli(0.9)) ==
          doctest::Approx(0.16).epsilon(1e-14));

    // Oracle: d_log(p, q) = KL(q || p); evaluated directly for the
    // half-vs-0.9 pair used throughout the fixtures.
    const double frozen = 0.9 * std::log(0.9 / 0.5) + 0.1 * std::log(0.1 / 0.5);
    CHECK(frozen == doctest::Approx(0.36806420716849696).epsilon(1e-15));
    CHECK(divergence(ll, ProbVector::bernoulli(0.5), ProbVector::bernoulli(0.9)) ==
          doctest::Approx(frozen).epsilon(1e-12));

    CounterRng rng(11, 0);
    for (int rep = 0; rep < 50; ++rep) {
        const ProbVector q = random_simplex(3, rng);
        CHECK(divergence(brier, q, q) == 0.0);
        CHECK(divergence(ll, q, q) == 0.0);
    }
}

TEST_CASE("propriety and strictness over random pairs") {
    CounterRng rng(13, 0);
    for (const auto& loss : {ProperLoss::brier(), ProperLoss::logloss()}) {
        for (int rep = 0; rep < 1000; ++rep) {
            const int k = 2 + static_cast<int>(rng.next_below(3));
            const ProbVector p = random_simplex(k, rng);
            const ProbVector q = random_simplex(k, rng);
            CHECK(divergence(loss, p, q) >= 0.0);
        }
        // Near-diagonal pairs: a tiny divergence pins p to q.
        for (int rep = 0; rep < 200; ++rep) {
            const ProbVector q = random_simplex(2, rng);
            const double eps = rng.next_uniform() * 1e-5;
            const double q1 = std::min(1.0, std::max(0.0, q[1] + eps));
            const ProbVector p = ProbVector::bernoulli(q1);
            if (divergence(loss, p, q) < 1e-9) {
                CHECK(std::abs(p[1] - q[1]) < 1e-4);
                CHECK(std::abs(p[0] - q[0]) < 1e-4);
            }
        }
    }
}

TEST_CASE("brier and log-loss closed forms at tolerance") {
    CounterRng rng(17, 0);
    const ProperLoss brier = ProperLoss::brier();
    const ProperLoss ll = ProperLoss::logloss();
    for (int rep = 0; rep < 300; ++rep) {
        const double p = 0.01 + 0.98 * rng.next_uniform();
        const double q = 0.01 + 0.98 * rng.next_uniform();
        CHECK(std::abs(divergence(brier, ProbVector::bernoulli(p), ProbVector::bernoulli(q)) -
                       (p - q) * (p - q)) < 1e-12);
        CHECK(std::abs(entropy(brier, ProbVector::bernoulli(q)) - q * (1.0 - q)) < 1e-12);
        CHECK(std::abs(divergence(ll, ProbVector::bernoulli(p), ProbVector::bernoulli(q)) -
                       kl_nats({1.0 - q, q}, {1.0 - p, p})) < 1e-12);
    }
}

TEST_CASE("scalar binary helpers agree with the vector path") {
    CounterRng rng(19, 0);
    for (const auto& loss : {ProperLoss::brier(), ProperLoss::logloss()}) {
        for (int rep = 0; rep < 200; ++rep) {
            const double p = rng.next_uniform();
            const double q = rng.next_uniform();
            const int y = rng.next_uniform() < 0.5 ? 0 : 1;
            CHECK(std::abs(binary_pointwise_loss(loss, p, y) -
                           pointwise_loss(loss, ProbVector::bernoulli(p), Outcome{y})) < 1e-14);
            CHECK(std::abs(binary_entropy(loss, q) -
                           entropy(loss, ProbVector::bernoulli(q))) < 1e-13);
            CHECK(std::abs(binary_divergence(loss, p, q) -
                           divergence(loss, ProbVector::bernoulli(p), ProbVector::bernoulli(q))) <
                  1e-13);
        }
    }
}

TEST_CASE("log-loss clamp keeps boundary scores finite") {
    const ProperLoss ll = ProperLoss::logloss();
    const double at_zero = pointwise_loss(ll, ProbVector::onehot(0, 2), Outcome{1});
    CHECK(std::isfinite(at_zero));
    CHECK(at_zero == doctest::Approx(-std::log(1e-12)));
}

TEST_CASE("dimension mismatches are rejected") {
    const ProperLoss brier = ProperLoss::brier();
    const ProbVector p2 = ProbVector::bernoulli(0.5);
    const ProbVector p3({0.2, 0.3, 0.5});
    CHECK_THROWS_AS((void)conditional_risk(brier, p2, p3), std::invalid_argument);
    CHECK_THROWS_AS((void)divergence(brier, p3, p2), std::invalid_argument);
    CHECK_THROWS_AS((void)pointwise_loss(brier, p2, Outcome{2}), std::invalid_argument);
    CHECK_THROWS_AS(ProbVector({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(ProbVector({1.2, -0.2}), std::invalid_argument);
}
