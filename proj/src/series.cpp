#include "bbr/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <unsupported/Eigen/FFT>

namespace bbr {

namespace {

void require_unit(const TruncatedSeries& a, complex expected, const char* op) {
    if (std::abs(a[0] - expected) > kUnitTolerance) {
        throw DomainError(std::string(op) + ": constant term must be " +
                          (expected == complex(0.0) ? "0" : "1"));
    }
}

std::optional<double> sum_rates(std::optional<double> a, std::optional<double> b) {
    if (a && b) {
        return *a + *b;
    }
    return std::nullopt;
}

}  // namespace

TruncatedSeries::TruncatedSeries(std::vector<complex> coeffs, std::optional<double> tail_bound_rate)
    : coeffs_(std::move(coeffs)), tail_rate_(tail_bound_rate) {
    if (coeffs_.empty()) {
        throw DomainError("TruncatedSeries: at least one coefficient is required");
    }
    if (tail_rate_ && !(std::isfinite(*tail_rate_) && *tail_rate_ >= 0.0)) {
        throw DomainError("TruncatedSeries: tail bound rate must be finite and >= 0");
    }
}

TruncatedSeries TruncatedSeries::constant(complex c, std::size_t order) {
    std::vector<complex> v(order + 1, complex(0.0));
    v[0] = c;
    return TruncatedSeries(std::move(v), 0.0);
}

TruncatedSeries TruncatedSeries::monomial(std::size_t degree, std::size_t order, complex c) {
    std::vector<complex> v(order + 1, complex(0.0));
    if (degree <= order) {
        v[degree] = c;
    }
    return TruncatedSeries(std::move(v), degree <= order ? 0.0 : std::abs(c));
}

TruncatedSeries TruncatedSeries::with_tail_bound_rate(std::optional<double> rate) const {
    return TruncatedSeries(coeffs_, rate);
}

TruncatedSeries TruncatedSeries::truncated(std::size_t order) const {
    if (order >= this->order()) {
        return *this;
    }
    std::vector<complex> head(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(order) + 1);
    std::optional<double> rate = tail_rate_;
    if (rate) {
        for (std::size_t l = order + 1; l < coeffs_.size(); ++l) {
            rate = std::max(*rate, std::abs(coeffs_[l]));
        }
    }
    return TruncatedSeries(std::move(head), rate);
}

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.order(), b.order());
    std::vector<complex> c(n + 1);
    for (std::size_t l = 0; l <= n; ++l) {
        c[l] = a[l] + b[l];
    }
    return TruncatedSeries(std::move(c), sum_rates(a.tail_bound_rate(), b.tail_bound_rate()));
}

TruncatedSeries sub(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.order(), b.order());
    std::vector<complex> c(n + 1);
    for (std::size_t l = 0; l <= n; ++l) {
        c[l] = a[l] - b[l];
    }
    return TruncatedSeries(std::move(c), sum_rates(a.tail_bound_rate(), b.tail_bound_rate()));
}

TruncatedSeries scale(const TruncatedSeries& a, complex factor) {
    std::vector<complex> c(a.coeffs().begin(), a.coeffs().end());
    for (auto& x : c) {
        x *= factor;
    }
    std::optional<double> rate;
    if (a.tail_bound_rate()) {
        rate = *a.tail_bound_rate() * std::abs(factor);
    }
    return TruncatedSeries(std::move(c), rate);
}

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.order(), b.order());
    const auto ca = a.coeffs();
    const auto cb = b.coeffs();
    std::vector<complex> c(n + 1, complex(0.0));
    for (std::size_t i = 0; i <= n; ++i) {
        if (ca[i] == complex(0.0)) {
            continue;
        }
        for (std::size_t j = 0; i + j <= n; ++j) {
            c[i + j] += ca[i] * cb[j];
        }
    }
    return TruncatedSeries(std::move(c));
}

TruncatedSeries log_unit(const TruncatedSeries& a) {
    require_unit(a, 1.0, "log_unit");
    const std::size_t n = a.order();
    const auto ca = a.coeffs();
    std::vector<complex> L(n + 1, complex(0.0));
    for (std::size_t l = 1; l <= n; ++l) {
        complex acc = static_cast<double>(l) * ca[l];
        for (std::size_t m = 1; m < l; ++m) {
            acc -= static_cast<double>(m) * L[m] * ca[l - m];
        }
        L[l] = acc / static_cast<double>(l);
    }
    return TruncatedSeries(std::move(L));
}

TruncatedSeries exp_unit(const TruncatedSeries& a) {
    require_unit(a, 0.0, "exp_unit");
    const std::size_t n = a.order();
    const auto ca = a.coeffs();
    std::vector<complex> b(n + 1, complex(0.0));
    b[0] = 1.0;
    for (std::size_t l = 1; l <= n; ++l) {
        complex acc = 0.0;
        for (std::size_t m = 1; m <= l; ++m) {
            acc += static_cast<double>(m) * ca[m] * b[l - m];
        }
        b[l] = acc / static_cast<double>(l);
    }
    return TruncatedSeries(std::move(b));
}

TruncatedSeries pow_real(const TruncatedSeries& a, double alpha) {
    require_unit(a, 1.0, "pow_real");
    if (alpha == 0.0) {
        return TruncatedSeries::constant(1.0, a.order());
    }
    // Exact small integer powers by repeated squaring.
    if (alpha > 0.0 && alpha <= 64.0 && alpha == std::floor(alpha)) {
        auto e = static_cast<unsigned>(alpha);
        TruncatedSeries result = TruncatedSeries::constant(1.0, a.order()).with_tail_bound_rate(std::nullopt);
        TruncatedSeries base = a.with_tail_bound_rate(std::nullopt);
        bool first = true;
        while (e != 0) {
            if (e & 1U) {
                result = first ? base : mul(result, base);
                first = false;
            }
            e >>= 1U;
            if (e != 0) {
                base = mul(base, base);
            }
        }
        return result;
    }
    return exp_unit(scale(log_unit(a), alpha));
}

TruncatedSeries z_derivative(const TruncatedSeries& a) {
    std::vector<complex> c(a.coeffs().begin(), a.coeffs().end());
    for (std::size_t l = 0; l < c.size(); ++l) {
        c[l] *= static_cast<double>(l);
    }
    return TruncatedSeries(std::move(c));
}

complex eval(const TruncatedSeries& a, complex z) {
    const auto c = a.coeffs();
    complex acc = 0.0;
    for (std::size_t l = c.size(); l-- > 0;) {
        acc = acc * z + c[l];
    }
    return acc;
}

double truncation_error(const TruncatedSeries& a, double r) {
    if (!a.tail_bound_rate()) {
        return std::numeric_limits<double>::infinity();
    }
    const double b = *a.tail_bound_rate();
    if (b == 0.0 || r == 0.0) {
        return 0.0;
    }
    return b * std::pow(r, static_cast<double>(a.order() + 1)) / (1.0 - r);
}

BoundedValue eval_with_bound(const TruncatedSeries& a, complex z) {
    const double r = std::abs(z);
    if (!(r < 1.0)) {
        throw DomainError("eval_with_bound: |z| must be < 1");
    }
    return {eval(a, z), truncation_error(a, r)};
}

std::size_t order_for_budget(double rate, double r, double budget, std::size_t floor) {
    if (!(r >= 0.0 && r < 1.0)) {
        throw DomainError("order_for_budget: radius must lie in [0, 1)");
    }
    if (!(budget > 0.0)) {
        throw DomainError("order_for_budget: budget must be positive");
    }
    if (rate == 0.0 || r == 0.0) {
        return floor;
    }
    // B r^{N+1} / (1 - r) <= budget  <=>  N + 1 >= log(budget (1 - r) / B) / log r
    const double need = std::log(budget * (1.0 - r) / rate) / std::log(r) - 1.0;
    if (need <= 0.0) {
        return floor;
    }
    auto n = static_cast<std::size_t>(std::ceil(need));
    // ceil can land one short when need is within rounding of an integer
    while (rate * std::pow(r, static_cast<double>(n + 1)) / (1.0 - r) > budget) {
        ++n;
    }
    return std::max(floor, n);
}

std::vector<complex> sample_circle(const TruncatedSeries& a, double r, std::size_t grid) {
    if (grid == 0) {
        throw DomainError("sample_circle: grid must be positive");
    }
    // Fold c_l r^l into residue classes mod grid, then one DFT:
    //   P(r w^m) = sum_q b_q w^{qm},  w = exp(2 pi i / grid).
    // Eigen's forward transform uses exp(-2 pi i / grid), so conjugate in and out.
    std::vector<complex> folded(grid, complex(0.0));
    const auto c = a.coeffs();
    double rl = 1.0;
    for (std::size_t l = 0; l < c.size(); ++l) {
        folded[l % grid] += c[l] * rl;
        rl *= r;
    }
    for (auto& x : folded) {
        x = std::conj(x);
    }
    Eigen::FFT<double> fft;
    std::vector<complex> out;
    fft.fwd(out, folded);
    for (auto& x : out) {
        x = std::conj(x);
    }
    return out;
}

double min_re_on_circle(const TruncatedSeries& a, double r, std::size_t grid) {
    if (!(r >= 0.0 && r < 1.0)) {
        throw DomainError("min_re_on_circle: radius must lie in [0, 1)");
    }
    if (grid < 8) {
        throw DomainError("min_re_on_circle: grid must be >= 8");
    }
    if (r == 0.0) {
        return a[0].real();
    }
    const auto values = sample_circle(a, r, grid);
    std::size_t best = 0;
    for (std::size_t m = 1; m < grid; ++m) {
        if (values[m].real() < values[best].real()) {
            best = m;
        }
    }
    double best_value = values[best].real();

    const double step = 2.0 * std::numbers::pi / static_cast<double>(grid);
    const double center = step * static_cast<double>(best);
    auto re_at = [&](double theta) { return eval(a, std::polar(r, theta)).real(); };

    // The grid minimum brackets the true one within one step on either side;
    // near a minimum Re is smooth, so Brent converges in a few evaluations.
    const auto [theta, value] = boost::math::tools::brent_find_minima(
        re_at, center - step, center + step, std::numeric_limits<double>::digits / 2);
    (void)theta;
    return std::min(best_value, value);
}

int winding_number(const TruncatedSeries& a, double r, std::size_t grid) {
    if (!(r > 0.0 && r < 1.0)) {
        throw DomainError("winding_number: radius must lie in (0, 1)");
    }
    constexpr std::size_t kMaxGrid = std::size_t{1} << 16;
    grid = std::max<std::size_t>(grid, 8);
    for (;; grid *= 2) {
        const auto values = sample_circle(a, r, grid);
        double scale_ref = 0.0;
        for (const auto& v : values) {
            scale_ref = std::max(scale_ref, std::abs(v));
        }
        double total = 0.0;
        double max_step = 0.0;
        bool vanishes = false;
        for (std::size_t m = 0; m < grid; ++m) {
            const complex& v0 = values[m];
            const complex& v1 = values[(m + 1) % grid];
            if (std::abs(v0) <= 1e-13 * scale_ref) {
                vanishes = true;
                break;
            }
            const double d = std::arg(v1 / v0);
            max_step = std::max(max_step, std::abs(d));
            total += d;
        }
        if (vanishes) {
            throw DomainError("winding_number: series vanishes on the circle");
        }
        if (max_step < std::numbers::pi / 4.0) {
            return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
        }
        if (grid >= kMaxGrid) {
            throw DomainError("winding_number: phase could not be resolved on the circle");
        }
    }
}

double zero_free_radius(const TruncatedSeries& a, double r_max, double tol) {
    auto zero_free = [&](double r) {
        try {
            return winding_number(a, r) == 0;
        } catch (const DomainError&) {
            return false;  // a zero on the circle itself
        }
    };
    if (zero_free(r_max)) {
        return r_max;
    }
    if (a[0] == complex(0.0)) {
        return 0.0;
    }
    double lo = 0.0;
    double hi = r_max;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (zero_free(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

double max_coeff_distance(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.order(), b.order());
    double d = 0.0;
    for (std::size_t l = 0; l <= n; ++l) {
        d = std::max(d, std::abs(a[l] - b[l]));
    }
    return d;
}

double max_coeff_abs(const TruncatedSeries& a) {
    double d = 0.0;
    for (const auto& c : a.coeffs()) {
        d = std::max(d, std::abs(c));
    }
    return d;
}

}  // namespace bbr
