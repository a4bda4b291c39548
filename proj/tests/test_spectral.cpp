#include "doctest.h"

#include <cmath>
#include <fstream>

#include "memsteer/errors.hpp"
#include "memsteer/spectral.hpp"
#include "support.hpp"

using namespace memsteer;

namespace {

const double root_half_pi = std::sqrt(pi / 2.0);

StateSnapshot snapshot(int n_max) {
    StateSnapshot s;
    s.n_max = n_max;
    s.a.assign(n_max, 0.0);
    s.b.assign(n_max, 0.0);
    return s;
}

} // namespace

TEST_SUITE("spectral") {

TEST_CASE("basis is orthonormal sine") {
    CHECK(basis(1, pi / 2) == doctest::Approx(std::sqrt(2.0 / pi)));
    CHECK(std::abs(basis(3, 0.0)) == 0.0);
}

TEST_CASE("projection of sin x and sin 2x") {
    const Target t = coefficients_from_function([](double x) { return std::sin(x); }, [](double) { return 0.0; },
                                                4, 4096);
    CHECK(t.n_max == 4);
    CHECK(t.xi[0] == doctest::Approx(root_half_pi).epsilon(1e-12));
    for (int i = 1; i < 4; ++i) CHECK(std::abs(t.xi[i]) < 1e-12);
    for (double e : t.eta) CHECK(std::abs(e) < 1e-12);
    CHECK(t.provenance == Provenance::analytic);
    CHECK(t.tail_estimate < 1e-12);

    const Target u = coefficients_from_function([](double) { return 0.0; },
                                                [](double x) { return std::sin(2 * x); }, 4, 4096);
    CHECK(u.eta[1] == doctest::Approx(root_half_pi).epsilon(1e-12));
    CHECK(std::abs(u.eta[0]) < 1e-12);
    CHECK(std::abs(u.eta[2]) < 1e-12);
}

TEST_CASE("projection of x (pi - x) against its sine series") {
    const Target t = coefficients_from_function([](double x) { return x * (pi - x); }, [](double) { return 0.0; },
                                                8, 4096);
    for (int n = 1; n <= 8; ++n) {
        CAPTURE(n);
        const double inner = std::sqrt(2.0 / pi) * (2.0 / (n * n * n)) * (1.0 - std::pow(-1.0, n));
        CHECK(std::abs(t.xi[n - 1] - n * inner) <= 1e-6);
    }
    CHECK(t.tail_estimate > 0.0);
}

TEST_CASE("projection preconditions") {
    auto zero = [](double) { return 0.0; };
    try {
        coefficients_from_function(zero, zero, 16, 64);
        FAIL("expected aliasing error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::aliasing);
    }
    try {
        coefficients_from_function([](double) { return 1.0; }, zero, 4, 4096);
        FAIL("expected H^1_0 error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_in_h10);
    }
    CHECK_THROWS_AS(coefficients_from_function(zero, zero, 0, 4096), Error);
}

TEST_CASE("projection from samples matches projection from a function") {
    const int q = 2048;
    std::vector<double> xi(q + 1), eta(q + 1);
    for (int j = 0; j <= q; ++j) {
        const double x = j * pi / q;
        xi[j] = std::sin(x) + 0.25 * std::sin(3 * x);
        eta[j] = -0.5 * std::sin(2 * x);
    }
    const Target s = coefficients_from_samples(xi, eta, 6);
    CHECK(s.provenance == Provenance::sampled);
    CHECK(s.xi[0] == doctest::Approx(root_half_pi).epsilon(1e-10));
    CHECK(s.xi[2] == doctest::Approx(3 * 0.25 * root_half_pi).epsilon(1e-10));
    CHECK(s.eta[1] == doctest::Approx(-0.5 * root_half_pi).epsilon(1e-10));
    CHECK_THROWS_AS(coefficients_from_samples(xi, std::vector<double>(10, 0.0), 6), Error);
}

TEST_CASE("state error definitions") {
    Target t = Target::zero(3);
    t.xi = {1.0, 2.0, 0.5};
    t.eta = {0.0, -1.0, 0.0};
    StateSnapshot hit = snapshot(3);
    for (int i = 0; i < 3; ++i) {
        hit.a[i] = t.xi[i] / (i + 1);
        hit.b[i] = t.eta[i];
    }
    const StateError e0 = state_error(hit, t);
    CHECK(e0.h1 == 0.0);
    CHECK(e0.l2 == 0.0);
    CHECK(e0.total == 0.0);

    Target one = Target::zero(3);
    one.xi[0] = 1.0;
    const StateError e1 = state_error(snapshot(3), one);
    CHECK(e1.h1 == 1.0);
    CHECK(e1.l2 == 0.0);

    Target vel = Target::zero(3);
    vel.eta[1] = 3.0;
    StateSnapshot s = snapshot(3);
    s.b[1] = 3.0 + 1e-3;
    CHECK(state_error(s, vel).l2 == doctest::Approx(1e-3).epsilon(1e-9));
    CHECK(state_error(snapshot(3), t).total == doctest::Approx(t.norm()));

    CHECK_THROWS_AS(state_error(snapshot(2), t), Error);
}

TEST_CASE("reconstruction") {
    StateSnapshot s = snapshot(4);
    s.a[0] = 1.0;
    const auto w = reconstruct(s, 129);
    CHECK(w[64] == doctest::Approx(std::sqrt(2.0 / pi)).epsilon(1e-14));
    CHECK(w[64] == doctest::Approx(0.7979).epsilon(1e-4));

    const auto zero = reconstruct(snapshot(4), 33);
    CHECK(test_support::max_abs(zero) == 0.0);

    const Target t = coefficients_from_function([](double x) { return std::sin(x); }, [](double) { return 0.0; },
                                                4, 4096);
    StateSnapshot back = snapshot(4);
    for (int i = 0; i < 4; ++i) back.a[i] = t.xi[i] / (i + 1);
    const auto sine = reconstruct(back, 257);
    double worst = 0.0;
    for (int j = 0; j < 257; ++j) worst = std::max(worst, std::abs(sine[j] - std::sin(j * pi / 256)));
    CHECK(worst <= 1e-6);
    CHECK_THROWS_AS(reconstruct(back, 1), Error);
}

}
