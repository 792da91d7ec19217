#include <doctest.h>

#include <cmath>
#include <complex>

#include "bbr/classes.hpp"

using namespace bbr;

namespace {

TransformSpec first(double sigma, int n) { return {TransformKind::first, sigma, n}; }
TransformSpec second(double sigma, int n) { return {TransformKind::second, sigma, n}; }

}  // namespace

TEST_CASE("normalized functions need constant term 1") {
    CHECK_THROWS_AS(NormalizedFunction(TruncatedSeries::constant(2.0, 4), 1.0), DomainError);
    CHECK_THROWS_AS(NormalizedFunction(TruncatedSeries::constant(1.0, 4), 0.0), DomainError);
}

TEST_CASE("tau coefficients against the gamma function") {
    for (double sigma : {1.0, 2.5, 4.0}) {
        for (int n : {0, 1, 2}) {
            const double a = sigma - (n - 1);
            if (!(a > 0)) {
                CHECK_THROWS_AS((void)tau_coefficient(sigma, n, 1), DomainError);
                continue;
            }
            for (std::size_t l = 1; l <= 30; ++l) {
                const double dl = static_cast<double>(l);
                const double expect = std::exp(std::lgamma(a + dl - 1) - std::lgamma(a) - std::lgamma(dl));
                CHECK(tau_coefficient(sigma, n, l) == doctest::Approx(expect).epsilon(1e-12));
            }
        }
    }
    CHECK(tau_coefficient(1.0, 1, 17) == 1.0);
}

TEST_CASE("L operator inverts the second-kind multipliers") {
    for (double sigma : {1.0, 2.5, 4.0}) {
        for (int n : {1, 2}) {
            if (!(sigma - (n - 1) > 0)) {
                continue;
            }
            for (std::size_t l = 0; l <= 128; ++l) {
                const double c = coeff_multiplier(second(sigma, n), l);
                CHECK(std::abs(l_operator_multiplier(sigma, n, l) * c - 1.0) <= 1e-12);
            }
        }
    }
}

TEST_CASE("second-kind class roundtrip and derivative identity") {
    for (double sigma : {1.0, 2.5, 4.0}) {
        for (int n : {1, 2}) {
            if (!(sigma - (n - 1) > 0)) {
                continue;
            }
            const auto spec = second(sigma, n);
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                const auto h = random_pk_member({4.0, 0.25}, 4, seed, 64).first;
                const auto f = construct_B(h, spec);
                CHECK(max_coeff_distance(L_operator(f, sigma, n), h) <= 1e-12);
                CHECK(max_coeff_distance(b_derivative_quantity(f, sigma, n), apply_phi(spec.with_n(n - 1), h)) <= 1e-12);
            }
        }
    }
    CHECK_THROWS_AS((void)construct_B(TruncatedSeries::constant(1.0, 4), second(1.0, 3)), DomainError);
}

TEST_CASE("first-kind class roundtrip and derivative identity") {
    for (double sigma : {1.0, 2.5, 4.0}) {
        for (int n : {1, 2}) {
            const auto spec = first(sigma, n);
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                const auto h = random_p_member(0.25, 4, seed, 64).first;
                const auto f = construct_T(h, spec);
                CHECK(max_coeff_distance(salagean_normalized(f, sigma, n), h) <= 1e-12);
                CHECK(max_coeff_distance(t_power_quantity(f, sigma), apply_phi(spec, h)) <= 1e-12);
                CHECK(max_coeff_distance(t_derivative_quantity(f, sigma), apply_phi(spec.with_n(n - 1), h)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("level n maps into level n - 1") {
    const auto h = random_pk_member({3.0, 0.0}, 4, 8, 64).first;
    for (TransformSpec spec : {first(2.5, 2), second(4.0, 3), second(1.0, 1)}) {
        const auto lower = lower_level_preimage(spec, h);
        CHECK(max_coeff_distance(apply_phi(spec.with_n(spec.n - 1), lower), apply_phi(spec, h)) <= 1e-15);
    }
}

TEST_CASE("branch radius of the power root") {
    CHECK(root_is_entire(1.0));
    CHECK(root_is_entire(0.5));
    CHECK_FALSE(root_is_entire(2.5));
    const auto H = extremal_H({4.0, 0.0}, 512);
    // H vanishes at 2 - sqrt(3) for k = 4, beta = 0
    const double br = t_branch_radius(H, first(2.5, 0));
    CHECK(br <= 2.0 - std::sqrt(3.0));
    CHECK(br >= 2.0 - std::sqrt(3.0) - 1e-4);
    CHECK(t_branch_radius(H, first(1.0, 0)) == 0.95);
}
