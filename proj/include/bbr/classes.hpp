#pragma once

// Normalized univalent-type functions f(z) = z + a_2 z^2 + ... built from
// P_k(beta) members.
//
// T-class objects satisfy D^n f^sigma / (sigma^n z^sigma) in P_k(beta), where D
// is the Salagean operator z d/dz; B-class objects satisfy L^sigma_n f / z in
// P_k(beta), L^sigma_n being the convolution with tau_sigma * tau_{sigma,n}^{-1}.
// Both are produced constructively: f^sigma/z^sigma (resp. f/z) is the
// transform phi^1 (resp. phi^2) of a P_k(beta) member.
//
// Powers f^sigma are never formed; everything works on the unit series f/z and
// its principal powers.

#include "bbr/caratheodory.hpp"
#include "bbr/series.hpp"
#include "bbr/transforms.hpp"

namespace bbr {

struct NormalizedFunction {
    TruncatedSeries unit_series;  // f(z)/z, constant term 1
    double sigma = 1.0;

    /// Throws DomainError unless the constant term is 1 and sigma > 0.
    NormalizedFunction(TruncatedSeries unit, double sigma_context);
};

/// D^n f^sigma / (sigma^n z^sigma): coefficient l of (f/z)^sigma times ((sigma+l)/sigma)^n.
[[nodiscard]] TruncatedSeries salagean_normalized(const NormalizedFunction& f, double sigma, int n);

/// Coefficient of z^l in z / (1 - z)^a with a = sigma - (n - 1):
/// (a)_{l-1} / (l-1)!, by a product loop.
[[nodiscard]] double tau_coefficient(double sigma, int n, std::size_t l);

/// Multiplier that L^sigma_n applies to coefficient l of f/z:
/// tau(sigma, 0, l+1) / tau(sigma, n, l+1).
[[nodiscard]] double l_operator_multiplier(double sigma, int n, std::size_t l);

/// Series of L^sigma_n f(z) / z.
[[nodiscard]] TruncatedSeries L_operator(const NormalizedFunction& f, double sigma, int n);

/// f with f^sigma/z^sigma = phi^1_{sigma,n}(h), i.e. f/z = (phi^1 h)^{1/sigma}.
[[nodiscard]] NormalizedFunction construct_T(const TruncatedSeries& h, const TransformSpec& spec);
/// f with f/z = phi^2_{sigma,n}(h).
[[nodiscard]] NormalizedFunction construct_B(const TruncatedSeries& h, const TransformSpec& spec);

/// f^sigma / z^sigma as a series.
[[nodiscard]] TruncatedSeries t_power_quantity(const NormalizedFunction& f, double sigma);

/// f^{sigma-1} f' / z^{sigma-1} = g + z g' / sigma with g = (f/z)^sigma.
[[nodiscard]] TruncatedSeries t_derivative_quantity(const NormalizedFunction& f, double sigma);

/// ((sigma - n) f/z + f') / (sigma - n + 1). Requires sigma - (n - 1) > 0.
[[nodiscard]] TruncatedSeries b_derivative_quantity(const NormalizedFunction& f, double sigma, int n);

/// For spec at level n >= 1 returns h' with phi_spec(h) = phi_{spec at n-1}(h'):
/// one extra averaging step, phi^1_{sigma,1} for j = 1 and phi^1_{sigma-n+1,1}
/// for j = 2. This is the constructive form of the level inclusions.
[[nodiscard]] TruncatedSeries lower_level_preimage(const TransformSpec& spec, const TruncatedSeries& h);

/// True when x^{1/sigma} needs no branch choice (1/sigma a positive integer).
[[nodiscard]] bool root_is_entire(double sigma);

/// Radius (<= r_max) of the largest disk on which phi^1_{sigma,n}(h) has no
/// zeros: where the principal branch of (phi^1 h)^{1/sigma} and hence
/// construct_T(h) is analytic. r_max when root_is_entire(sigma).
[[nodiscard]] double t_branch_radius(const TruncatedSeries& h, const TransformSpec& spec,
                                     double r_max = 0.95);

}  // namespace bbr
