#include "bbr/classes.hpp"

#include <cmath>

namespace bbr {

namespace {

void require_j(const TransformSpec& spec, TransformKind j, const char* op) {
    spec.validate();
    if (spec.j != j) {
        throw DomainError(std::string(op) + ": wrong transform family");
    }
}

}  // namespace

NormalizedFunction::NormalizedFunction(TruncatedSeries unit, double sigma_context)
    : unit_series(std::move(unit)), sigma(sigma_context) {
    if (std::abs(unit_series[0] - 1.0) > kUnitTolerance) {
        throw DomainError("NormalizedFunction: f(z)/z must have constant term 1");
    }
    if (!(sigma > 0.0)) {
        throw DomainError("NormalizedFunction: sigma must be > 0");
    }
}

TruncatedSeries salagean_normalized(const NormalizedFunction& f, double sigma, int n) {
    if (!(sigma > 0.0) || n < 0) {
        throw DomainError("salagean_normalized: need sigma > 0 and n >= 0");
    }
    const auto g = pow_real(f.unit_series, sigma);
    std::vector<complex> c(g.coeffs().begin(), g.coeffs().end());
    for (std::size_t l = 1; l < c.size(); ++l) {
        const double ratio = (sigma + static_cast<double>(l)) / sigma;
        for (int i = 0; i < n; ++i) {
            c[l] *= ratio;
        }
    }
    return TruncatedSeries(std::move(c));
}

double tau_coefficient(double sigma, int n, std::size_t l) {
    const double a = sigma - (n - 1);
    if (!(a > 0.0)) {
        throw DomainError("tau_coefficient: sigma - (n - 1) must be > 0");
    }
    if (l < 1) {
        throw DomainError("tau_coefficient: l must be >= 1");
    }
    double c = 1.0;
    for (std::size_t i = 0; i + 1 < l; ++i) {
        c *= (a + static_cast<double>(i)) / static_cast<double>(i + 1);
    }
    return c;
}

double l_operator_multiplier(double sigma, int n, std::size_t l) {
    const double denom = tau_coefficient(sigma, n, l + 1);
    if (denom == 0.0) {
        throw DomainError("L_operator: vanishing tau coefficient");
    }
    return tau_coefficient(sigma, 0, l + 1) / denom;
}

TruncatedSeries L_operator(const NormalizedFunction& f, double sigma, int n) {
    if (!(sigma > 0.0) || n < 0 || !(sigma - (n - 1) > 0.0)) {
        throw DomainError("L_operator: need sigma > 0, n >= 0 and sigma - (n - 1) > 0");
    }
    // tau(sigma, 0, l+1) / tau(sigma, n, l+1) taken factor by factor:
    // prod_{i<l} (sigma + 1 + i) / (sigma - n + 1 + i).
    const double a = sigma - (n - 1);
    std::vector<complex> c(f.unit_series.coeffs().begin(), f.unit_series.coeffs().end());
    double ratio = 1.0;
    for (std::size_t l = 1; l < c.size(); ++l) {
        const auto i = static_cast<double>(l - 1);
        ratio *= (sigma + 1.0 + i) / (a + i);
        c[l] *= ratio;
    }
    return TruncatedSeries(std::move(c));
}

NormalizedFunction construct_T(const TruncatedSeries& h, const TransformSpec& spec) {
    require_j(spec, TransformKind::first, "construct_T");
    const auto g = apply_phi(spec, h);
    return NormalizedFunction(pow_real(g, 1.0 / spec.sigma), spec.sigma);
}

NormalizedFunction construct_B(const TruncatedSeries& h, const TransformSpec& spec) {
    require_j(spec, TransformKind::second, "construct_B");
    return NormalizedFunction(apply_phi(spec, h).with_tail_bound_rate(std::nullopt), spec.sigma);
}

TruncatedSeries t_power_quantity(const NormalizedFunction& f, double sigma) {
    if (!(sigma > 0.0)) {
        throw DomainError("t_power_quantity: sigma must be > 0");
    }
    return pow_real(f.unit_series, sigma);
}

TruncatedSeries t_derivative_quantity(const NormalizedFunction& f, double sigma) {
    const auto g = t_power_quantity(f, sigma);
    return add(g, scale(z_derivative(g), 1.0 / sigma));
}

TruncatedSeries b_derivative_quantity(const NormalizedFunction& f, double sigma, int n) {
    const double d = sigma - (n - 1);
    if (!(sigma > 0.0) || n < 0 || !(d > 0.0)) {
        throw DomainError("b_derivative_quantity: need sigma > 0, n >= 0 and sigma - (n - 1) > 0");
    }
    // f = z u  =>  f' = u + z u'
    const auto& u = f.unit_series;
    const auto f_prime = add(u, z_derivative(u));
    return scale(add(scale(u, sigma - n), f_prime), 1.0 / d);
}

TruncatedSeries lower_level_preimage(const TransformSpec& spec, const TruncatedSeries& h) {
    spec.validate();
    if (spec.n < 1) {
        throw DomainError("lower_level_preimage: n must be >= 1");
    }
    const double gamma = spec.j == TransformKind::first ? spec.sigma : spec.sigma - (spec.n - 1);
    return apply_phi(TransformSpec{TransformKind::first, gamma, 1}, h);
}

bool root_is_entire(double sigma) {
    const double inv = 1.0 / sigma;
    return inv >= 1.0 && inv == std::floor(inv);
}

double t_branch_radius(const TruncatedSeries& h, const TransformSpec& spec, double r_max) {
    require_j(spec, TransformKind::first, "t_branch_radius");
    if (root_is_entire(spec.sigma)) {
        return r_max;
    }
    return zero_free_radius(apply_phi(spec, h), r_max);
}

}  // namespace bbr
