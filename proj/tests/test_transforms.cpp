#include <doctest.h>

#include <cmath>
#include <complex>

#include "bbr/transforms.hpp"

using namespace bbr;
using std::abs;

namespace {

TruncatedSeries geometric(std::size_t order) {
    return TruncatedSeries(std::vector<complex>(order + 1, 1.0), 1.0);
}

TransformSpec first(double sigma, int n) { return {TransformKind::first, sigma, n}; }
TransformSpec second(double sigma, int n) { return {TransformKind::second, sigma, n}; }

// integral of H over [0, r] for k = 4, beta = 0
double integral_H_k4(double r) { return -r + std::log((1 + r) / (1 - r)) + 2 * std::log(1 - r * r); }

double bisect(auto f, double a, double b) {
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        ((f(a) > 0) == (f(m) > 0) ? a : b) = m;
    }
    return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("transform parameters are validated") {
    CHECK(first(0.0, 1).violation().find("sigma") != std::string::npos);
    CHECK(first(1.0, -1).violation().find("n must") != std::string::npos);
    CHECK(second(1.0, 2).violation().find("sigma - (n - 1)") != std::string::npos);
    CHECK(second(1.5, 2).violation().empty());
    CHECK_THROWS_AS((void)transform_kind(3), DomainError);
    CHECK_THROWS_AS((void)coeff_multiplier(second(1.0, 3), 1), DomainError);
}

TEST_CASE("coefficient multipliers") {
    for (std::size_t l = 0; l <= 20; ++l) {
        CHECK(coeff_multiplier(first(1.0, 1), l) == doctest::Approx(1.0 / (l + 1.0)).epsilon(1e-15));
        CHECK(coeff_multiplier(first(2.0, 0), l) == 1.0);
    }
    CHECK(coeff_multiplier(second(2.0, 2), 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(coeff_multiplier(first(2.5, 3), 2) == doctest::Approx(std::pow(2.5 / 4.5, 3)).epsilon(1e-15));
    // j = 1 and j = 2 agree at n = 1
    for (std::size_t l = 0; l <= 20; ++l) {
        CHECK(coeff_multiplier(second(2.5, 1), l) == coeff_multiplier(first(2.5, 1), l));
    }
    const auto v = multipliers(second(4.0, 3), 128);
    REQUIRE(v.size() == 129);
    CHECK(v[0] == 1.0);
    for (std::size_t l = 1; l <= 128; ++l) {
        CHECK(v[l] <= v[l - 1]);
        CHECK(v[l] > 0.0);
        CHECK(v[l] == coeff_multiplier(second(4.0, 3), l));
    }
}

TEST_CASE("averaging the geometric series gives -log(1-z)/z") {
    const auto phi = apply_phi(first(1.0, 1), geometric(400));
    const auto phi2 = apply_phi(first(2.0, 1), geometric(400));
    for (complex z : {complex(0.3, 0.2), complex(-0.5, 0.0), complex(0.0, 0.6)}) {
        CHECK(abs(eval(phi, z) - (-std::log(1.0 - z) / z)) < 1e-13);
        CHECK(abs(eval(phi2, z) - 2.0 * (-z - std::log(1.0 - z)) / (z * z)) < 1e-12);
        CHECK(abs(phi_by_quadrature(first(1.0, 1), geometric(400), z) - (-std::log(1.0 - z) / z)) < 1e-10);
    }
}

TEST_CASE("quadrature agrees with the multipliers") {
    const ClassParams cp{4.0, 0.25};
    const auto h = random_pk_member(cp, 4, 3, 256).first;
    for (TransformSpec spec : {first(1.0, 2), first(2.5, 3), second(2.5, 2), second(4.0, 3)}) {
        const complex z = std::polar(0.5, 1.0);
        CHECK(abs(phi_by_quadrature(spec, h, z) - eval(apply_phi(spec, h), z)) < 1e-8);
    }
}

TEST_CASE("recurrence and commutation") {
    const auto h = random_pk_member({3.0, 0.0}, 5, 17, 128).first;
    for (TransformSpec spec : {first(1.0, 1), first(2.5, 2), second(4.0, 3), second(2.5, 2)}) {
        CHECK(recurrence_residual(spec, h) <= 1e-12);
    }
    CHECK(commutation_residual(first(1.0, 2), first(2.5, 1), h) <= 1e-15);
    CHECK(commutation_residual(second(4.0, 2), second(2.5, 3), h) <= 1e-15);
}

TEST_CASE("F multiplies by gamma / (gamma + l)") {
    const auto g = geometric(400);
    const auto fg = apply_F(0.5, 0.5, g);  // gamma = 1
    CHECK(abs(eval(fg, 0.4) - (-std::log(0.6) / 0.4)) < 1e-13);
    CHECK(max_coeff_distance(apply_F(1.5, 1.0, g), apply_phi(first(2.5, 1), g)) < 1e-16);
    CHECK_THROWS_AS((void)apply_F(-1.0, 0.5, g), DomainError);
}

TEST_CASE("positivity radius closed form") {
    CHECK(radius_closed_form({2.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(radius_closed_form({4.0, 0.0}) == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-15));
    CHECK(radius_closed_form({4.0, 0.5}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(radius_closed_form({3.0, 0.5}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    // continuous through beta = 1/2
    CHECK(radius_closed_form({3.0, 0.5 + 1e-9}) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
    CHECK(radius_closed_form({3.0, 0.5 - 1e-9}) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
    CHECK(omega_bound(0.2, {4.0, 0.0}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(omega_bound(radius_closed_form({6.0, 0.25}), {6.0, 0.25}) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("numeric positivity radius brackets the closed form") {
    for (ClassParams cp : {ClassParams{4.0, 0.0}, ClassParams{2.5, 0.25}, ClassParams{6.0, 0.75}, ClassParams{3.0, 0.5}}) {
        const double cf = radius_closed_form(cp);
        const auto rep = radius_numeric_adaptive([&](std::size_t N) { return extremal_H(cp, N); }, 1e-7, cf);
        CHECK(rep.lo <= rep.hi);
        REQUIRE(rep.discrepancy);
        CHECK(*rep.discrepancy <= 1e-5);
    }
}

TEST_CASE("averaged extremal function keeps positivity beyond r(k, beta)") {
    // Re phi(H)(r) = integral_H(r) / r, with min over |z| = r at z = r
    const ClassParams cp{4.0, 0.0};
    const double root = bisect(integral_H_k4, 0.3, 0.9);
    CHECK(root == doctest::Approx(0.5219386).epsilon(1e-6));
    const auto rep = radius_numeric_adaptive([&](std::size_t N) { return apply_phi(first(1.0, 1), extremal_H(cp, N)); }, 1e-8);
    CHECK(abs(rep.lo - root) <= 1e-6);
    CHECK(rep.lo > radius_closed_form(cp));
}

TEST_CASE("transformed lower bound") {
    const ClassParams cp{4.0, 0.0};
    CHECK(std::abs(transformed_lower_bound(first(1.0, 0), cp, 0.2) - 0.25) <= 1e-12);
    for (double r : {0.1, 0.3, 0.5, 0.7}) {
        const auto iv = transformed_lower_bound_interval(first(1.0, 1), cp, r);
        CHECK(iv.lower <= iv.upper);
        CHECK(iv.upper - iv.lower <= 2e-12);  // value -+ a tail below 1e-12
        CHECK(iv.lower == doctest::Approx(integral_H_k4(r) / r).epsilon(1e-11));
    }
    // the bound is attained by the averaged extremal function at z = r
    const auto phiH = apply_phi(second(2.5, 2), extremal_H({3.0, 0.25}, 2000));
    CHECK(abs(transformed_lower_bound(second(2.5, 2), {3.0, 0.25}, 0.4) - eval(phiH, 0.4).real()) < 1e-12);
}
