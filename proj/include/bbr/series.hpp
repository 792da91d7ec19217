#pragma once

// Truncated complex power series about the origin.
//
// A TruncatedSeries holds c_0..c_N and, optionally, a tail rate B with
// |c_l| <= B for every l > N. The rate is what turns a partial sum into a
// value with a certified truncation error on |z| < 1.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace bbr {

using complex = std::complex<double>;

inline constexpr std::size_t kDefaultOrder = 64;
inline constexpr std::size_t kDefaultCircleGrid = 4096;

// Tolerance used when a constant term is required to equal exactly 0 or 1.
inline constexpr double kUnitTolerance = 1e-12;

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a certified truncation error exceeds what a result needs.
/// `radius` and `budget` say where and how small the tail bound must be, so
/// callers can re-derive an order with order_for_budget().
class TruncationBudgetError : public std::runtime_error {
public:
    TruncationBudgetError(const std::string& what, double radius, double budget)
        : std::runtime_error(what), radius_(radius), budget_(budget) {}
    [[nodiscard]] double radius() const noexcept { return radius_; }
    [[nodiscard]] double budget() const noexcept { return budget_; }

private:
    double radius_;
    double budget_;
};

class TruncatedSeries {
public:
    /// Takes ownership of c_0..c_N; throws DomainError on an empty list or a
    /// negative / non-finite tail rate.
    explicit TruncatedSeries(std::vector<complex> coeffs,
                             std::optional<double> tail_bound_rate = std::nullopt);

    [[nodiscard]] static TruncatedSeries constant(complex c, std::size_t order);
    [[nodiscard]] static TruncatedSeries monomial(std::size_t degree, std::size_t order,
                                                  complex c = 1.0);

    [[nodiscard]] std::size_t order() const noexcept { return coeffs_.size() - 1; }
    [[nodiscard]] std::span<const complex> coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] const complex& operator[](std::size_t l) const { return coeffs_.at(l); }
    [[nodiscard]] std::optional<double> tail_bound_rate() const noexcept { return tail_rate_; }

    [[nodiscard]] TruncatedSeries with_tail_bound_rate(std::optional<double> rate) const;
    /// Drops coefficients above `order`; the tail rate, if any, is widened to
    /// cover the dropped coefficients.
    [[nodiscard]] TruncatedSeries truncated(std::size_t order) const;

private:
    std::vector<complex> coeffs_;
    std::optional<double> tail_rate_;
};

// Arithmetic. Binary operations truncate at the smaller order.
[[nodiscard]] TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b);
[[nodiscard]] TruncatedSeries sub(const TruncatedSeries& a, const TruncatedSeries& b);
[[nodiscard]] TruncatedSeries scale(const TruncatedSeries& a, complex factor);
/// Cauchy product. The tail rate is dropped; callers that know a bound re-attach it.
[[nodiscard]] TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b);

[[nodiscard]] inline TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) { return add(a, b); }
[[nodiscard]] inline TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return sub(a, b); }
[[nodiscard]] inline TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) { return mul(a, b); }
[[nodiscard]] inline TruncatedSeries operator*(complex f, const TruncatedSeries& a) { return scale(a, f); }

/// log(a) for a series with a(0) = 1, via l*L_l = l*a_l - sum_{m<l} m*L_m*a_{l-m}.
[[nodiscard]] TruncatedSeries log_unit(const TruncatedSeries& a);
/// exp(a) for a series with a(0) = 0, via l*b_l = sum_{m<=l} m*a_m*b_{l-m}.
[[nodiscard]] TruncatedSeries exp_unit(const TruncatedSeries& a);
/// Principal branch a^alpha for a(0) = 1. Integer exponents avoid the log/exp
/// route (same series, better conditioned when a has zeros in the disk).
[[nodiscard]] TruncatedSeries pow_real(const TruncatedSeries& a, double alpha);

/// z * a'(z): coefficient l becomes l * c_l.
[[nodiscard]] TruncatedSeries z_derivative(const TruncatedSeries& a);

struct BoundedValue {
    complex value;
    double err;  // +inf when no tail rate is known
};

/// Horner evaluation plus the geometric tail bound B |z|^{N+1} / (1 - |z|).
[[nodiscard]] BoundedValue eval_with_bound(const TruncatedSeries& a, complex z);
[[nodiscard]] complex eval(const TruncatedSeries& a, complex z);

/// Tail bound alone at radius r, +inf without a rate.
[[nodiscard]] double truncation_error(const TruncatedSeries& a, double r);

/// Smallest N with B r^{N+1} / (1 - r) <= budget, never below `floor`.
[[nodiscard]] std::size_t order_for_budget(double rate, double r, double budget,
                                           std::size_t floor = kDefaultOrder);

/// Minimum of Re a(r e^{i theta}) over a uniform theta grid, refined by one
/// golden-section pass around the best grid point.
[[nodiscard]] double min_re_on_circle(const TruncatedSeries& a, double r,
                                      std::size_t grid = kDefaultCircleGrid);

/// Values of the partial sum at r * exp(2 pi i m / grid), m = 0..grid-1.
[[nodiscard]] std::vector<complex> sample_circle(const TruncatedSeries& a, double r,
                                                 std::size_t grid);

/// Number of zeros of the partial sum inside |z| < r by the argument principle.
/// The grid is refined until consecutive phase steps stay below pi/4.
/// Throws DomainError if the polynomial (numerically) vanishes on the circle.
[[nodiscard]] int winding_number(const TruncatedSeries& a, double r,
                                 std::size_t grid = kDefaultCircleGrid);

/// Largest radius <= r_max such that the partial sum has no zeros in the
/// open disk of that radius (bisection on the winding number, to `tol`).
/// Never too large: a zero closer to the circle than the finest phase grid
/// resolves (about 2 pi r / 65536) counts as inside, so the result can sit up
/// to that much below the true radius.
[[nodiscard]] double zero_free_radius(const TruncatedSeries& a, double r_max, double tol = 1e-6);

/// max_l |a_l - b_l| over the common order.
[[nodiscard]] double max_coeff_distance(const TruncatedSeries& a, const TruncatedSeries& b);
[[nodiscard]] double max_coeff_abs(const TruncatedSeries& a);

}  // namespace bbr
