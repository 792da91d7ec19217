#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "bbr/series.hpp"

using namespace bbr;
using std::abs;

namespace {

TruncatedSeries from_fn(std::size_t order, auto coeff) {
    std::vector<complex> c(order + 1);
    for (std::size_t l = 0; l <= order; ++l) {
        c[l] = coeff(l);
    }
    return TruncatedSeries(std::move(c));
}

TruncatedSeries geometric(std::size_t order, complex q = 1.0) {
    return from_fn(order, [q](std::size_t l) { return std::pow(q, static_cast<double>(l)); })
        .with_tail_bound_rate(abs(q));
}

TruncatedSeries random_unit(std::mt19937_64& rng, std::size_t order) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return from_fn(order, [&](std::size_t l) -> complex {
        if (l == 0) {
            return 1.0;
        }
        return complex(u(rng), u(rng)) * std::pow(0.5, static_cast<double>(l)) / std::sqrt(2.0);
    });
}

}  // namespace

TEST_CASE("construction rejects empty lists and bad tail rates") {
    CHECK_THROWS_AS(TruncatedSeries(std::vector<complex>{}), DomainError);
    CHECK_THROWS_AS(TruncatedSeries({1.0}, -1.0), DomainError);
    CHECK_THROWS_AS(TruncatedSeries({1.0}, std::nan("")), DomainError);
    auto m = TruncatedSeries::monomial(3, 5, 2.0);
    CHECK(m.order() == 5);
    CHECK(m[3] == complex(2.0));
    CHECK(m[2] == complex(0.0));
}

TEST_CASE("geometric series matches 1/(1-z) inside the disk") {
    const auto g = geometric(200);
    for (complex z : {complex(0.3, 0.2), complex(-0.5, 0.1), complex(0.0, 0.6)}) {
        CHECK(abs(eval(g, z) - 1.0 / (1.0 - z)) < 1e-14);
    }
    CHECK_THROWS_AS((void)eval_with_bound(g, complex(1.0, 0.0)), DomainError);
    CHECK_THROWS_AS((void)eval_with_bound(g, complex(0.8, 0.7)), DomainError);
}

TEST_CASE("evaluation error bound covers the true error") {
    const auto g = geometric(20);
    for (double r : {0.1, 0.5, 0.8, 0.95}) {
        const complex z = std::polar(r, 0.7);
        const auto bv = eval_with_bound(g, z);
        CHECK(abs(bv.value - 1.0 / (1.0 - z)) <= bv.err * (1 + 1e-12) + 1e-15);
        // sum_{l>20} r^l
        CHECK(truncation_error(g, r) == doctest::Approx(std::pow(r, 21) / (1 - r)).epsilon(1e-12));
    }
    const auto no_rate = g.with_tail_bound_rate(std::nullopt);
    CHECK(std::isinf(eval_with_bound(no_rate, 0.5).err));
}

TEST_CASE("truncation widens the tail rate") {
    const auto s = from_fn(10, [](std::size_t l) { return complex(l == 7 ? 5.0 : 0.1); })
                       .with_tail_bound_rate(1.0);
    const auto t = s.truncated(4);
    CHECK(t.order() == 4);
    REQUIRE(t.tail_bound_rate());
    CHECK(*t.tail_bound_rate() >= 5.0);
}

TEST_CASE("ring algebra on random series") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_unit(rng, 40);
        const auto b = random_unit(rng, 40);
        const auto c = random_unit(rng, 40);
        CHECK(max_coeff_distance(a * b, b * a) < 1e-15);
        CHECK(max_coeff_distance(a * (b + c), a * b + a * c) < 1e-14);
        CHECK(max_coeff_distance((a * b) * c, a * (b * c)) < 1e-14);
        CHECK(max_coeff_distance(a - a, TruncatedSeries::constant(0.0, 40)) == 0.0);
        // D(ab) = (Da) b + a (Db) with D = z d/dz
        CHECK(max_coeff_distance(z_derivative(a * b), z_derivative(a) * b + a * z_derivative(b)) < 1e-13);
    }
}

TEST_CASE("products truncate at the smaller order") {
    const auto a = geometric(10);
    const auto b = geometric(5);
    CHECK((a * b).order() == 5);
    CHECK((a + b).order() == 5);
    // 1/(1-z)^2 has coefficients l+1
    const auto sq = a * a;
    for (std::size_t l = 0; l <= 10; ++l) {
        CHECK(sq[l].real() == doctest::Approx(static_cast<double>(l + 1)));
    }
}

TEST_CASE("exp and log against closed forms") {
    // log(1 + z) = sum (-1)^{l+1} z^l / l
    const auto one_plus_z = from_fn(30, [](std::size_t l) { return complex(l <= 1 ? 1.0 : 0.0); });
    const auto lg = log_unit(one_plus_z);
    for (std::size_t l = 1; l <= 30; ++l) {
        const double expect = ((l % 2) ? 1.0 : -1.0) / static_cast<double>(l);
        CHECK(abs(lg[l] - expect) < 1e-15);
    }
    CHECK(abs(lg[0]) == 0.0);
    // exp(z) = sum z^l / l!
    const auto z = TruncatedSeries::monomial(1, 25);
    const auto ex = exp_unit(z);
    double fact = 1.0;
    for (std::size_t l = 0; l <= 25; ++l) {
        if (l > 0) {
            fact *= static_cast<double>(l);
        }
        CHECK(abs(ex[l] - 1.0 / fact) < 1e-15);
    }
    CHECK_THROWS_AS((void)log_unit(TruncatedSeries::constant(2.0, 3)), DomainError);
    CHECK_THROWS_AS((void)exp_unit(TruncatedSeries::constant(1.0, 3)), DomainError);
}

TEST_CASE("exp and log are inverse on unit series") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_unit(rng, 48);
        CHECK(max_coeff_distance(exp_unit(log_unit(a)), a) < 1e-13);
    }
}

TEST_CASE("real powers") {
    // (1 - z)^{-alpha} has coefficients (alpha)_l / l!
    const double alpha = 2.5;
    const auto p = pow_real(from_fn(20, [](std::size_t l) { return complex(l == 0 ? 1.0 : (l == 1 ? -1.0 : 0.0)); }),
                            -alpha);
    double c = 1.0;
    for (std::size_t l = 0; l <= 20; ++l) {
        if (l > 0) {
            c *= (alpha + static_cast<double>(l) - 1.0) / static_cast<double>(l);
        }
        CHECK(abs(p[l] - c) < 1e-12 * c);
    }
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_unit(rng, 40);
        CHECK(max_coeff_distance(pow_real(pow_real(a, 1.0 / 3.0), 3.0), a) < 1e-13);
        CHECK(max_coeff_distance(pow_real(a, 2.0), a * a) < 1e-14);
    }
}

TEST_CASE("minimum real part on a circle") {
    // Re(1 + z) on |z| = r is smallest at z = -r
    const auto s = from_fn(4, [](std::size_t l) { return complex(l <= 1 ? 1.0 : 0.0); });
    for (double r : {0.1, 0.5, 0.9}) {
        CHECK(min_re_on_circle(s, r) == doctest::Approx(1.0 - r).epsilon(1e-13));
    }
    // Re(1 + z^3 e^{0.1 i}) has minimum 1 - r^3 off the grid points
    const auto t = from_fn(4, [](std::size_t l) { return l == 0 ? complex(1.0) : (l == 3 ? std::polar(1.0, 0.1) : complex(0.0)); });
    CHECK(min_re_on_circle(t, 0.8, 64) == doctest::Approx(1.0 - 0.512).epsilon(1e-12));
}

TEST_CASE("circle samples agree with direct evaluation") {
    const auto g = geometric(60, 0.5);
    const auto v = sample_circle(g, 0.7, 16);
    REQUIRE(v.size() == 16);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const complex z = std::polar(0.7, 2.0 * std::numbers::pi * static_cast<double>(i) / 16.0);
        CHECK(abs(v[i] - eval(g, z)) < 1e-13);
    }
}

TEST_CASE("winding number and zero-free radius") {
    // 1 - 2z vanishes at 1/2; (1 - 2z)(1 + 3z^2 ...) style product with two zeros
    const auto lin = from_fn(3, [](std::size_t l) { return complex(l == 0 ? 1.0 : (l == 1 ? -2.0 : 0.0)); });
    CHECK(winding_number(lin, 0.4) == 0);
    CHECK(winding_number(lin, 0.6) == 1);
    const double zr = zero_free_radius(lin, 0.95);
    CHECK(zr <= 0.5);
    CHECK(zr >= 0.5 - 1e-4);
    const auto quad = lin * from_fn(3, [](std::size_t l) { return complex(l == 0 ? 1.0 : (l == 2 ? 2.0 : 0.0)); });
    CHECK(winding_number(quad, 0.8) == 3);
    CHECK(zero_free_radius(geometric(30, 0.5), 0.9) == doctest::Approx(0.9));
}

TEST_CASE("order for a truncation budget") {
    const std::size_t N = order_for_budget(1.0, 0.5, 1e-12, 0);
    // sum_{l>N} 0.5^l = 0.5^N
    CHECK(std::pow(0.5, static_cast<double>(N)) <= 1e-12);
    CHECK(std::pow(0.5, static_cast<double>(N - 1)) > 1e-12);
    CHECK(order_for_budget(1.0, 0.5, 1e-12) >= kDefaultOrder);
}
