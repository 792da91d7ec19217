#pragma once

// Iterated integral transforms acting on Caratheodory-type series.
//
// For j = 1 the level-m kernel is sigma t^{sigma-1} / z^sigma; for j = 2 it is
// (sigma-m+1) t^{sigma-m} / z^{sigma-m+1}. Either way the n-fold transform is
// diagonal on Taylor coefficients:
//
//   j = 1:  c_{l,n} = (sigma / (sigma + l))^n
//   j = 2:  c_{l,n} = prod_{i<n} (sigma - i) / (sigma + l - i)
//
// which is what apply_phi uses. phi_by_quadrature evaluates the integrals
// themselves and exists to check the multipliers.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bbr/caratheodory.hpp"
#include "bbr/series.hpp"

namespace bbr {

enum class TransformKind : int { first = 1, second = 2 };

struct TransformSpec {
    TransformKind j = TransformKind::first;
    double sigma = 1.0;
    int n = 0;

    void validate() const;
    [[nodiscard]] std::string violation() const;
    [[nodiscard]] TransformSpec with_n(int level) const { return {j, sigma, level}; }
    [[nodiscard]] int j_index() const { return static_cast<int>(j); }

    friend bool operator==(const TransformSpec&, const TransformSpec&) = default;
};

[[nodiscard]] TransformKind transform_kind(int j);

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate)
        : std::runtime_error(what), estimate_(estimate) {}
    [[nodiscard]] double error_estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

/// c^j_{l,n} by a running product; 1 when n == 0.
[[nodiscard]] double coeff_multiplier(const TransformSpec& spec, std::size_t l);
/// c^j_{0..order,n} with c_0 = 1.
[[nodiscard]] std::vector<double> multipliers(const TransformSpec& spec, std::size_t order);

/// Multiplies coefficient l by c^j_{l,n}. Requires constant term 1; keeps the
/// tail rate since every multiplier lies in (0, 1].
[[nodiscard]] TruncatedSeries apply_phi(const TransformSpec& spec, const TruncatedSeries& h);

/// Evaluates the n-fold integral along the segment [0, z] by nested
/// tanh-sinh quadrature: h is evaluated directly, intermediate levels through
/// Chebyshev interpolants on the segment [0, z].
/// Throws QuadratureError when a level misses `target` (absolute).
[[nodiscard]] complex phi_by_quadrature(const TransformSpec& spec, const TruncatedSeries& h,
                                        complex z, double target = 1e-10);

/// max_l |[phi_n h + z (phi_n h)' / d] - phi_{n-1} h|, d = sigma (j=1) or sigma-n+1 (j=2).
[[nodiscard]] double recurrence_residual(const TransformSpec& spec, const TruncatedSeries& h);

/// max_l |phi_{s1}(phi_{s2} h) - phi_{s2}(phi_{s1} h)|. Both specs must share j.
[[nodiscard]] double commutation_residual(const TransformSpec& s1, const TransformSpec& s2,
                                          const TruncatedSeries& h);

/// Radius of the largest disk on which every P_k(beta) member has positive
/// real part: the smaller root of (1-2beta) r^2 - (1-beta) k r + 1, or 2/k
/// when |1 - 2 beta| < 1e-12. Clamped to (0, 1].
[[nodiscard]] double radius_closed_form(const ClassParams& params);

/// Sharp lower bound for Re h on |z| = rho over P_k(beta):
///   ((1-2beta) rho^2 - (1-beta) k rho + 1) / (1 - rho^2).
[[nodiscard]] double omega_bound(double rho, const ClassParams& params);

struct RadiusReport {
    std::optional<double> closed_form;
    double lo = 0.0;
    double hi = 0.0;
    std::optional<double> discrepancy;  // max(|cf - lo|, |cf - hi|) when cf is known
    std::size_t order = 0;              // truncation order the bracket was found at

    friend bool operator==(const RadiusReport&, const RadiusReport&) = default;
};

inline constexpr double kRadiusSearchMax = 0.999;

/// Brackets the smallest r at which min_{|z|=r} Re h crosses zero. An upward
/// scan locates the first sign change, then bisection narrows it to `tol`.
/// Without a sign change on r <= search_max the bracket is [1, 1] (or
/// [search_max, 1] for a search_max below 0.999).
/// Throws TruncationBudgetError when the tail bound at the bracket exceeds
/// `tol`, or when positivity at search_max is not certified by the tail bound.
[[nodiscard]] RadiusReport radius_numeric(const TruncatedSeries& h, double tol,
                                          std::optional<double> closed_form = std::nullopt,
                                          double search_max = kRadiusSearchMax,
                                          std::size_t grid = kDefaultCircleGrid);

/// radius_numeric on make(order), raising the order until the truncation
/// budget is met (up to max_order).
[[nodiscard]] RadiusReport radius_numeric_adaptive(
    const std::function<TruncatedSeries(std::size_t)>& make, double tol,
    std::optional<double> closed_form = std::nullopt, double search_max = kRadiusSearchMax,
    std::size_t order = kDefaultOrder, std::size_t max_order = std::size_t{1} << 16);

struct BoundInterval {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t terms = 0;
};

/// 1 + (1-beta) sum_{l=1}^{terms} (2 c_{2l,n} r - k c_{2l-1,n}) r^{2l-1} with a
/// certified interval for the omitted tail. terms == 0 picks the smallest
/// count whose tail is below 1e-12.
[[nodiscard]] BoundInterval transformed_lower_bound_interval(const TransformSpec& spec,
                                                             const ClassParams& params, double r,
                                                             std::size_t terms = 0);
/// Lower end of transformed_lower_bound_interval.
[[nodiscard]] double transformed_lower_bound(const TransformSpec& spec, const ClassParams& params,
                                             double r, std::size_t terms = 0);

/// F: multiplies coefficient l by gamma / (gamma + l), gamma = c + kappa > 0.
[[nodiscard]] TruncatedSeries apply_F(double c, double kappa, const TruncatedSeries& g);

}  // namespace bbr
