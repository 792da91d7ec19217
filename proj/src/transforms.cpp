#include "bbr/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace bbr {

namespace {

void require_unit_constant(const TruncatedSeries& h, const char* op) {
    if (std::abs(h[0] - 1.0) > kUnitTolerance) {
        throw DomainError(std::string(op) + ": constant term must be 1");
    }
}

// Exponent a of the level-m weight a u^{a-1} on [0, 1] (t = u z).
double level_exponent(const TransformSpec& spec, int level) {
    return spec.j == TransformKind::first ? spec.sigma : spec.sigma - (level - 1);
}

// integrate() is not const-qualified in this Boost version.
boost::math::quadrature::tanh_sinh<double>& integrator() {
    static boost::math::quadrature::tanh_sinh<double> ts;
    return ts;
}

}  // namespace

TransformKind transform_kind(int j) {
    if (j == 1) {
        return TransformKind::first;
    }
    if (j == 2) {
        return TransformKind::second;
    }
    throw DomainError("transform index j must be 1 or 2");
}

std::string TransformSpec::violation() const {
    if (j != TransformKind::first && j != TransformKind::second) {
        return "j must be 1 or 2";
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        return "sigma must be > 0";
    }
    if (n < 0) {
        return "n must be >= 0";
    }
    if (j == TransformKind::second && !(sigma - (n - 1) > 0.0)) {
        return "sigma - (n - 1) must be > 0 for j = 2";
    }
    return {};
}

void TransformSpec::validate() const {
    if (auto v = violation(); !v.empty()) {
        throw DomainError(v);
    }
}

namespace {

double multiplier_unchecked(const TransformSpec& spec, std::size_t l) {
    const auto dl = static_cast<double>(l);
    double m = 1.0;
    if (spec.j == TransformKind::first) {
        const double ratio = spec.sigma / (spec.sigma + dl);
        for (int i = 0; i < spec.n; ++i) {
            m *= ratio;
        }
    } else {
        for (int i = 0; i < spec.n; ++i) {
            m *= (spec.sigma - i) / (spec.sigma + dl - i);
        }
    }
    return m;
}

}  // namespace

double coeff_multiplier(const TransformSpec& spec, std::size_t l) {
    spec.validate();
    return multiplier_unchecked(spec, l);
}

std::vector<double> multipliers(const TransformSpec& spec, std::size_t order) {
    spec.validate();
    std::vector<double> c(order + 1);
    for (std::size_t l = 0; l <= order; ++l) {
        c[l] = multiplier_unchecked(spec, l);
    }
    return c;
}

TruncatedSeries apply_phi(const TransformSpec& spec, const TruncatedSeries& h) {
    spec.validate();
    require_unit_constant(h, "apply_phi");
    const auto m = multipliers(spec, h.order());
    std::vector<complex> c(h.coeffs().begin(), h.coeffs().end());
    for (std::size_t l = 1; l < c.size(); ++l) {
        c[l] *= m[l];
    }
    return TruncatedSeries(std::move(c), h.tail_bound_rate());
}

complex phi_by_quadrature(const TransformSpec& spec, const TruncatedSeries& h, complex z,
                          double target) {
    spec.validate();
    if (spec.n < 1) {
        throw DomainError("phi_by_quadrature: n must be >= 1");
    }
    if (!(std::abs(z) < 1.0)) {
        throw DomainError("phi_by_quadrature: |z| must be < 1");
    }

    // Along the segment s z, s in [0, 1]:
    //   F_0(s) = h(s z),  F_m(s) = integral_0^1 a_m u^{a_m - 1} F_{m-1}(u s) du.
    // F_0 is evaluated directly. Each intermediate level is sampled at
    // Chebyshev points of [0, 1] and interpolated; h is analytic on |w| < 1, so
    // F_m extends to |s| < 1/|z| and the interpolant converges geometrically at
    // the Bernstein-ellipse rate rho = x + sqrt(x^2 - 1), x = 2/|z| - 1.
    const double rz = std::abs(z);
    std::size_t degree = 16;
    if (rz > 0.0) {
        const double x = 2.0 / rz - 1.0;
        const double rho = x + std::sqrt(x * x - 1.0);
        degree = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::ceil(std::log(1e16) / std::log(rho))) + 8, 16, 4096);
    }
    std::vector<double> nodes(degree + 1);
    std::vector<double> weights(degree + 1);
    for (std::size_t i = 0; i <= degree; ++i) {
        nodes[i] = 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(degree)));
        weights[i] = ((i % 2 == 0) ? 1.0 : -1.0) * ((i == 0 || i == degree) ? 0.5 : 1.0);
    }
    std::vector<complex> values(degree + 1);

    // Barycentric interpolation of the previous level.
    auto interpolate = [&](double s) -> complex {
        complex num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i <= degree; ++i) {
            const double d = s - nodes[i];
            if (d == 0.0) {
                return values[i];
            }
            const double t = weights[i] / d;
            num += t * values[i];
            den += t;
        }
        return num / den;
    };

    auto integrate_level = [&](int m, double s, const std::function<complex(double)>& prev) -> complex {
        if (s == 0.0) {
            return h[0];  // the weight integrates to 1
        }
        const double a = level_exponent(spec, m);
        auto integrand = [&](double u) -> complex { return a * std::pow(u, a - 1.0) * prev(u * s); };
        double error = 0.0;
        double l1 = 0.0;
        const complex v = integrator().integrate(integrand, 0.0, 1.0, 1e-13, &error, &l1);
        const double allowed = target * std::max(1.0, l1);
        if (!(error <= allowed) || !std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw QuadratureError("phi_by_quadrature: level " + std::to_string(m) + " did not converge", error);
        }
        return v;
    };

    std::function<complex(double)> prev = [&](double s) { return eval(h, s * z); };
    for (int m = 1; m < spec.n; ++m) {
        std::vector<complex> next(degree + 1);
        for (std::size_t i = 0; i <= degree; ++i) {
            next[i] = integrate_level(m, nodes[i], prev);
        }
        values = std::move(next);
        prev = interpolate;
    }
    return integrate_level(spec.n, 1.0, prev);
}

double recurrence_residual(const TransformSpec& spec, const TruncatedSeries& h) {
    spec.validate();
    if (spec.n < 1) {
        throw DomainError("recurrence_residual: n must be >= 1");
    }
    const double d = spec.j == TransformKind::first ? spec.sigma : spec.sigma - (spec.n - 1);
    const auto g = apply_phi(spec, h);
    const auto lhs = add(g, scale(z_derivative(g), 1.0 / d));
    const auto rhs = apply_phi(spec.with_n(spec.n - 1), h);
    return max_coeff_distance(lhs, rhs);
}

double commutation_residual(const TransformSpec& s1, const TransformSpec& s2,
                            const TruncatedSeries& h) {
    if (s1.j != s2.j) {
        throw DomainError("commutation_residual: specs must share j");
    }
    const auto a = apply_phi(s1, apply_phi(s2, h));
    const auto b = apply_phi(s2, apply_phi(s1, h));
    return max_coeff_distance(a, b);
}

double radius_closed_form(const ClassParams& params) {
    params.validate();
    const double k = params.k;
    const double beta = params.beta;
    const double lead = 1.0 - 2.0 * beta;
    double r = 0.0;
    if (std::abs(lead) < 1e-12) {
        r = 2.0 / k;
    } else {
        const double b = (1.0 - beta) * k;
        const double disc = std::max(0.0, b * b - 4.0 * lead);
        // Smaller positive root; the second form avoids cancellation when
        // lead is small: (b - sqrt(disc)) / (2 lead) = 2 / (b + sqrt(disc)).
        r = 2.0 / (b + std::sqrt(disc));
    }
    return std::clamp(r, std::numeric_limits<double>::min(), 1.0);
}

double omega_bound(double rho, const ClassParams& params) {
    params.validate();
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw DomainError("omega_bound: rho must lie in [0, 1)");
    }
    const double k = params.k;
    const double beta = params.beta;
    return ((1.0 - 2.0 * beta) * rho * rho - (1.0 - beta) * k * rho + 1.0) / (1.0 - rho * rho);
}

RadiusReport radius_numeric(const TruncatedSeries& h, double tol, std::optional<double> closed_form,
                            double search_max, std::size_t grid) {
    require_unit_constant(h, "radius_numeric");
    if (!(tol > 0.0)) {
        throw DomainError("radius_numeric: tol must be > 0");
    }
    if (!(search_max > 0.0 && search_max < 1.0)) {
        throw DomainError("radius_numeric: search_max must lie in (0, 1)");
    }
    auto min_re = [&](double r) { return min_re_on_circle(h, r, grid); };

    RadiusReport report;
    report.closed_form = closed_form;
    report.order = h.order();

    // The minimum over |z| = r is nonincreasing in r, so the first sign change
    // of an upward scan is the crossing. Scanning also keeps evaluation away
    // from radii where a truncated series stops tracking its function.
    constexpr int kScanSteps = 64;
    double lo = 0.0;
    std::optional<double> hi;
    for (int i = 1; i <= kScanSteps; ++i) {
        const double r = search_max * i / kScanSteps;
        if (min_re(r) <= 0.0) {
            hi = r;
            break;
        }
        lo = r;
    }

    if (!hi) {
        const double margin = min_re(search_max);
        const double err = truncation_error(h, search_max);
        if (!(err < margin)) {
            throw TruncationBudgetError("radius_numeric: positivity at the search limit is not certified",
                                        search_max, 0.5 * margin);
        }
        report.lo = search_max >= kRadiusSearchMax ? 1.0 : search_max;
        report.hi = 1.0;
    } else {
        double upper = *hi;
        while (upper - lo > tol) {
            const double mid = 0.5 * (lo + upper);
            if (min_re(mid) > 0.0) {
                lo = mid;
            } else {
                upper = mid;
            }
        }
        const double err = truncation_error(h, upper);
        if (!(err <= tol)) {
            throw TruncationBudgetError("radius_numeric: truncation error at the bracket exceeds tol",
                                        upper, tol);
        }
        report.lo = lo;
        report.hi = upper;
    }
    if (closed_form) {
        report.discrepancy = std::max(std::abs(*closed_form - report.lo), std::abs(*closed_form - report.hi));
    }
    return report;
}

RadiusReport radius_numeric_adaptive(const std::function<TruncatedSeries(std::size_t)>& make,
                                     double tol, std::optional<double> closed_form, double search_max,
                                     std::size_t order, std::size_t max_order) {
    for (;;) {
        const auto h = make(order);
        try {
            return radius_numeric(h, tol, closed_form, search_max);
        } catch (const TruncationBudgetError& e) {
            if (!h.tail_bound_rate() || order >= max_order || !(e.budget() > 0.0)) {
                throw;
            }
            const std::size_t needed = order_for_budget(*h.tail_bound_rate(), e.radius(), e.budget(), order);
            const std::size_t next = std::min(max_order, std::max(needed + 8, order * 2));
            order = next;
        }
    }
}

BoundInterval transformed_lower_bound_interval(const TransformSpec& spec, const ClassParams& params,
                                               double r, std::size_t terms) {
    spec.validate();
    params.validate();
    if (!(r >= 0.0 && r < 1.0)) {
        throw DomainError("transformed_lower_bound: r must lie in [0, 1)");
    }
    const double k = params.k;
    const double scale_factor = 1.0 - params.beta;
    // Each omitted term is bounded by (1-beta)(2r + k) r^{2l-1}, all multipliers being <= 1.
    auto tail_after = [&](std::size_t count) {
        if (r == 0.0) {
            return 0.0;
        }
        return scale_factor * (2.0 * r + k) * std::pow(r, 2.0 * static_cast<double>(count) + 1.0) /
               (1.0 - r * r);
    };
    if (terms == 0) {
        terms = 1;
        while (tail_after(terms) > 1e-12) {
            ++terms;
        }
    }
    const auto c = multipliers(spec, 2 * terms);
    double sum = 0.0;
    double odd_power = r;  // r^{2l-1}
    for (std::size_t l = 1; l <= terms; ++l) {
        sum += (2.0 * c[2 * l] * r - k * c[2 * l - 1]) * odd_power;
        odd_power *= r * r;
    }
    const double value = 1.0 + scale_factor * sum;
    const double tail = tail_after(terms);
    return {value - tail, value + tail, terms};
}

double transformed_lower_bound(const TransformSpec& spec, const ClassParams& params, double r,
                               std::size_t terms) {
    return transformed_lower_bound_interval(spec, params, r, terms).lower;
}

TruncatedSeries apply_F(double c, double kappa, const TruncatedSeries& g) {
    const double gamma = c + kappa;
    if (!(gamma > 0.0)) {
        throw DomainError("apply_F: c + kappa must be > 0");
    }
    return apply_phi(TransformSpec{TransformKind::first, gamma, 1}, g);
}

}  // namespace bbr
