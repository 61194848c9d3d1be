#include "doctest.h"

#include "tgm/errors.hpp"
#include "tgm/rng.hpp"
#include "tgm/uncertainty.hpp"

#include <cmath>
#include <limits>
#include <sstream>

using namespace tgm;

namespace {

UncertaintySetSpec gm_set(ActionVector d, double q, double omega, ActionVector r0 = {}) {
    UncertaintySetSpec s;
    s.kind = ConjugateKind::Gm;
    s.d = std::move(d);
    s.q = q;
    s.omega = omega;
    s.r0 = std::move(r0);
    return s;
}

UncertaintySetSpec shannon_set(double omega, ActionVector r0 = {}) {
    UncertaintySetSpec s;
    s.kind = ConjugateKind::NegShannon;
    s.omega = omega;
    s.r0 = std::move(r0);
    return s;
}

ActionVector random_distribution(Rng& rng, std::size_t n) {
    ActionVector d(n);
    double total = 0.0;
    for (double& x : d) {
        x = 0.05 + rng.uniform();
        total += x;
    }
    for (double& x : d) {
        x /= total;
    }
    return d;
}

} // namespace

TEST_CASE("membership examples") {
    const ActionVector r0{1.0, 1.0};
    const auto kl_like = membership(gm_set({0.5, 0.5}, 1.0, 1.0, r0), r0);
    CHECK(kl_like.status == Membership::Boundary);
    CHECK(kl_like.margin == doctest::Approx(0.0));

    const auto shannon = membership(shannon_set(1.0, r0), r0);
    CHECK(shannon.status == Membership::Outside);
    CHECK(shannon.margin == doctest::Approx(1.0));

    const double l2 = std::log(2.0);
    const ActionVector delta{l2, l2};
    CHECK(membership_of_perturbation(shannon_set(1.0), delta).status == Membership::Boundary);

    const ActionVector mixed{l2, -std::log(5.5)};
    const auto skewed = membership_of_perturbation(gm_set({0.9, 0.1}, 1.0, 1.0), mixed);
    CHECK(skewed.status == Membership::Boundary);
    CHECK(std::abs(skewed.margin) <= 1e-12);
    const ActionVector pushed{l2, -std::log(5.5) - 1e-3};
    CHECK(membership_of_perturbation(gm_set({0.9, 0.1}, 1.0, 1.0), pushed).status ==
          Membership::Outside);
}

TEST_CASE("kl kind matches gm with q = 1") {
    UncertaintySetSpec kl = gm_set({0.3, 0.7}, 0.2, 1.5);
    kl.kind = ConjugateKind::Kl;
    const auto gm1 = gm_set({0.3, 0.7}, 1.0, 1.5);
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const ActionVector r{rng.uniform() * 4 - 2, rng.uniform() * 4 - 2};
        CHECK(membership(kl, r).margin == membership(gm1, r).margin);
    }
}

TEST_CASE("membership errors") {
    const ActionVector nan{std::numeric_limits<double>::quiet_NaN(), 0.0};
    CHECK_THROWS_AS(membership(shannon_set(1.0), nan), NumericalError);
    CHECK_THROWS_AS(membership(gm_set({0.5, 0.5}, 1.5, 1.0), ActionVector{0.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(membership(gm_set({0.5, 0.5}, 1.0, 0.0), ActionVector{0.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(membership(gm_set({0.5, 0.5}, 1.0, 1.0), ActionVector{0.0, 0.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(membership(gm_set({0.6, 0.6}, 1.0, 1.0), ActionVector{0.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("zero perturbation: never contained for q = 0, always on the boundary for q = 1") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 2 + rng.below(6);
        const auto d = random_distribution(rng, n);
        const ActionVector zero(n, 0.0);
        const double omega = 0.1 + 10.0 * rng.uniform();
        CHECK(membership_of_perturbation(gm_set(d, 0.0, omega), zero).status ==
              Membership::Outside);
        CHECK(membership_of_perturbation(gm_set(d, 1.0, omega), zero).status ==
              Membership::Boundary);
    }
}

TEST_CASE("boundary trace") {
    SUBCASE("layout and header") {
        const auto rows = boundary_trace_2d(shannon_set(1.0), 3, -1.0, 1.0);
        REQUIRE(rows.size() == 9);
        CHECK(rows[1].delta1 == -1.0);
        CHECK(rows[1].delta2 == 0.0);
        CHECK(rows[3].delta1 == 0.0);
        CHECK(rows[4].margin == doctest::Approx(1.0));
        std::ostringstream out;
        write_trace_csv(out, rows);
        CHECK(out.str().rfind("delta1,delta2,margin\n-1,-1,", 0) == 0);
    }
    SUBCASE("q = 0: origin outside, diagonal boundary at log2/omega") {
        for (double omega : {1.0, 2.0, 5.0}) {
            const auto spec = shannon_set(omega);
            const ActionVector origin{0.0, 0.0};
            CHECK(membership_of_perturbation(spec, origin).margin == doctest::Approx(1.0));
            const double t = std::log(2.0) / omega;
            const ActionVector diag{t, t};
            CHECK(std::abs(membership_of_perturbation(spec, diag).margin) <= 1e-12);
        }
    }
    SUBCASE("uniform reference gives a symmetric set") {
        const auto rows = boundary_trace_2d(gm_set({0.5, 0.5}, 1.0, 2.5), 21, -2.0, 2.0);
        for (std::size_t i = 0; i < 21; ++i) {
            for (std::size_t j = 0; j < 21; ++j) {
                CHECK(rows[i * 21 + j].margin == rows[j * 21 + i].margin);
            }
        }
    }
    SUBCASE("three actions is an error") {
        CHECK_THROWS_WITH_AS(boundary_trace_2d(gm_set({0.2, 0.3, 0.5}, 1.0, 1.0), 5, -1, 1),
                             "2D trace requires two actions", std::invalid_argument);
    }
}

TEST_CASE("minkowski examples") {
    const double l2 = std::log(2.0);
    const auto spec = shannon_set(1.0);
    const ActionVector tripled{3 * l2, 3 * l2};
    CHECK(minkowski_membership(spec, 3, tripled).status == Membership::Boundary);
    const ActionVector origin{0.0, 0.0};
    const auto far = minkowski_membership(spec, 3, origin);
    CHECK(far.status == Membership::Outside);
    CHECK(far.margin == doctest::Approx(1.0));
    CHECK_THROWS_AS(minkowski_membership(spec, 0, origin), std::invalid_argument);

    // k-fold sum of a shifted set is shifted by k r0.
    const auto shifted = shannon_set(1.0, {1.0, -2.0});
    const ActionVector r{3 + 3 * l2, -6 + 3 * l2};
    CHECK(minkowski_membership(shifted, 3, r).status == Membership::Boundary);
}

TEST_CASE("k = 1 Minkowski membership is plain membership") {
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const auto spec = gm_set(random_distribution(rng, 3), rng.uniform(), 0.5 + rng.uniform() * 3,
                                 {rng.uniform(), rng.uniform(), rng.uniform()});
        const ActionVector r{rng.uniform() * 4 - 2, rng.uniform() * 4 - 2, rng.uniform() * 4 - 2};
        const auto a = membership(spec, r);
        const auto b = minkowski_membership(spec, 1, r);
        CHECK(a.status == b.status);
        CHECK(a.margin == b.margin);
    }
}

TEST_CASE("k-fold scaling matches the single-step set at r / k") {
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
        const auto spec = gm_set(random_distribution(rng, 2), rng.uniform(), 0.5 + rng.uniform() * 3);
        const ActionVector r{rng.uniform() * 8 - 4, rng.uniform() * 8 - 4};
        for (int k = 1; k <= 10; ++k) {
            const ActionVector scaled{r[0] / k, r[1] / k};
            const auto a = minkowski_membership(spec, k, r);
            const auto b = membership(spec, scaled);
            CHECK(a.status == b.status);
            CHECK(a.margin == b.margin);
        }
    }
}

TEST_CASE("membership sets are convex") {
    Rng rng(29);
    int pairs = 0;
    while (pairs < 500) {
        const auto spec = gm_set(random_distribution(rng, 3), rng.uniform(), 0.5 + rng.uniform() * 3);
        auto draw = [&] {
            return ActionVector{rng.uniform() * 4 - 1, rng.uniform() * 4 - 1, rng.uniform() * 4 - 1};
        };
        const auto r = draw();
        const auto s = draw();
        if (membership(spec, r).margin > 0.0 || membership(spec, s).margin > 0.0) {
            continue;
        }
        ++pairs;
        const double lambda = rng.uniform();
        ActionVector mix(3);
        for (std::size_t a = 0; a < 3; ++a) {
            mix[a] = lambda * r[a] + (1 - lambda) * s[a];
        }
        CHECK(membership(spec, mix).margin <= 1e-9);
    }
}

TEST_CASE("raising a coordinate of delta never raises the margin") {
    Rng rng(31);
    for (int i = 0; i < 500; ++i) {
        const auto spec = gm_set(random_distribution(rng, 4), rng.uniform(), 0.5 + rng.uniform() * 3);
        ActionVector delta{rng.uniform() * 4 - 2, rng.uniform() * 4 - 2, rng.uniform() * 4 - 2,
                           rng.uniform() * 4 - 2};
        const double before = membership_of_perturbation(spec, delta).margin;
        delta[rng.below(4)] += rng.uniform() * 2;
        CHECK(membership_of_perturbation(spec, delta).margin <= before);
    }
}

TEST_CASE("support function of the set is the regularizer") {
    // max over boundary points of <pi, -delta> equals Omega(pi).
    Rng rng(37);
    for (int i = 0; i < 10; ++i) {
        const auto d = random_distribution(rng, 2);
        const double q = rng.uniform();
        const double omega = 0.5 + 2.5 * rng.uniform();
        const double p0 = 0.05 + 0.9 * rng.uniform();
        const ActionVector pi{p0, 1 - p0};
        GmParams params;
        params.q = q;
        params.omega = omega;
        const double expected = omega_gm(pi, d, params);

        const auto spec = gm_set(d, q, omega);
        double best = -std::numeric_limits<double>::infinity();
        const int samples = 40001;
        for (int j = 0; j < samples; ++j) {
            const double d1 = -10.0 + 20.0 * j / (samples - 1);
            const auto d2 = boundary_delta2(spec, d1);
            if (d2) {
                best = std::max(best, -(pi[0] * d1 + pi[1] * *d2));
            }
        }
        CHECK(std::abs(best - expected) <= 1e-3);
    }
}
