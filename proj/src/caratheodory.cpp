#include "bbr/caratheodory.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace bbr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform double in [0, 1) from the top 53 bits; unlike
// std::uniform_real_distribution this is identical across standard libraries.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11U) * 0x1.0p-53;
}

// Splits `mass` over `count` random positive parts.
std::vector<double> random_partition(std::mt19937_64& rng, int count, double mass) {
    std::vector<double> parts(static_cast<std::size_t>(count));
    double total = 0.0;
    for (auto& p : parts) {
        p = 0.05 + unit_uniform(rng);
        total += p;
    }
    for (auto& p : parts) {
        p *= mass / total;
    }
    return parts;
}

// e^{-i l s}. The phase is reduced in turns so that angles that are simple
// fractions of the circle (0, pi, pi/2) give exact signs at every l.
complex kernel_phase(std::size_t l, double s, double amplitude) {
    const double turns = s / kTwoPi;
    double frac = std::fmod(static_cast<double>(l) * turns, 1.0);
    return std::polar(amplitude, -kTwoPi * frac);
}

std::vector<Atom> normalized_part(const std::vector<Atom>& atoms, bool positive) {
    std::vector<Atom> part;
    double mass = 0.0;
    for (const auto& a : atoms) {
        if ((a.w > 0.0) == positive && a.w != 0.0) {
            part.push_back({a.s, std::abs(a.w)});
            mass += std::abs(a.w);
        }
    }
    for (auto& a : part) {
        a.w *= 2.0 / mass;
    }
    return part;
}

}  // namespace

std::string ClassParams::violation() const {
    if (!(k >= 2.0) || !std::isfinite(k)) {
        return "k < 2 outside M_k";
    }
    if (!(beta >= 0.0)) {
        return "beta < 0 outside P(beta)";
    }
    if (!(beta < 1.0)) {
        return "beta >= 1 outside P(beta)";
    }
    return {};
}

void ClassParams::validate() const {
    if (auto v = violation(); !v.empty()) {
        throw DomainError(v);
    }
}

double canonical_angle(double s) {
    double t = std::fmod(s, kTwoPi);
    if (t < 0.0) {
        t += kTwoPi;
    }
    if (t >= kTwoPi) {
        t = 0.0;
    }
    return t;
}

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    for (auto& a : atoms_) {
        if (!std::isfinite(a.s) || !std::isfinite(a.w)) {
            throw DomainError("AtomicMeasure: non-finite atom");
        }
        a.s = canonical_angle(a.s);
    }
    if (std::abs(total_mass() - 2.0) > 1e-12) {
        throw DomainError("AtomicMeasure: total mass must equal 2");
    }
}

double AtomicMeasure::total_mass() const noexcept {
    double m = 0.0;
    for (const auto& a : atoms_) {
        m += a.w;
    }
    return m;
}

double AtomicMeasure::total_variation() const noexcept {
    return positive_mass() + negative_mass();
}

double AtomicMeasure::positive_mass() const noexcept {
    double m = 0.0;
    for (const auto& a : atoms_) {
        m += a.w > 0.0 ? a.w : 0.0;
    }
    return m;
}

double AtomicMeasure::negative_mass() const noexcept {
    double m = 0.0;
    for (const auto& a : atoms_) {
        m += a.w < 0.0 ? -a.w : 0.0;
    }
    return m;
}

bool AtomicMeasure::admissible_for(const ClassParams& params) const noexcept {
    return std::abs(total_mass() - 2.0) <= 1e-12 && total_variation() <= params.k + 1e-12;
}

std::vector<Atom> AtomicMeasure::positive_part_normalized() const {
    return normalized_part(atoms_, true);
}

std::vector<Atom> AtomicMeasure::negative_part_normalized() const {
    return normalized_part(atoms_, false);
}

TruncatedSeries mobius_kernel(double beta, double s, std::size_t order) {
    ClassParams{2.0, beta}.validate();
    const double amplitude = 2.0 * (1.0 - beta);
    std::vector<complex> c(order + 1);
    c[0] = 1.0;
    for (std::size_t l = 1; l <= order; ++l) {
        c[l] = kernel_phase(l, s, amplitude);
    }
    return TruncatedSeries(std::move(c), amplitude);
}

TruncatedSeries herglotz_series(const std::vector<Atom>& atoms, double beta, std::size_t order) {
    ClassParams{2.0, beta}.validate();
    const double amplitude = 2.0 * (1.0 - beta);
    std::vector<complex> c(order + 1, complex(0.0));
    double mass = 0.0;
    double variation = 0.0;
    for (const auto& a : atoms) {
        mass += a.w;
        variation += std::abs(a.w);
        for (std::size_t l = 1; l <= order; ++l) {
            c[l] += 0.5 * a.w * kernel_phase(l, a.s, amplitude);
        }
    }
    c[0] = 0.5 * mass;
    return TruncatedSeries(std::move(c), 0.5 * variation * amplitude);
}

TruncatedSeries herglotz_series(const AtomicMeasure& m, double beta, std::size_t order) {
    if (std::abs(m.total_mass() - 2.0) > 1e-12) {
        throw DomainError("herglotz_series: measure mass must equal 2");
    }
    auto h = herglotz_series(m.atoms(), beta, order);
    std::vector<complex> c(h.coeffs().begin(), h.coeffs().end());
    c[0] = 1.0;
    return TruncatedSeries(std::move(c), h.tail_bound_rate());
}

TruncatedSeries extremal_H(const ClassParams& params, std::size_t order) {
    params.validate();
    const double odd = -params.k * (1.0 - params.beta);
    const double even = 2.0 * (1.0 - params.beta);
    std::vector<complex> c(order + 1);
    c[0] = 1.0;
    for (std::size_t l = 1; l <= order; ++l) {
        c[l] = (l % 2 == 1) ? odd : even;
    }
    return TruncatedSeries(std::move(c), params.coefficient_bound());
}

AtomicMeasure extremal_measure(const ClassParams& params) {
    params.validate();
    std::vector<Atom> atoms{{std::numbers::pi, (params.k + 2.0) / 2.0}};
    if (params.k > 2.0) {
        atoms.push_back({0.0, -(params.k - 2.0) / 2.0});
    }
    return AtomicMeasure(std::move(atoms));
}

TruncatedSeries compose_pk(const TruncatedSeries& p, const TruncatedSeries& q,
                           const ClassParams& params) {
    params.validate();
    if (std::abs(p[0] - 1.0) > kUnitTolerance || std::abs(q[0] - 1.0) > kUnitTolerance) {
        throw DomainError("compose_pk: p and q must have constant term 1");
    }
    const double a = (params.k + 2.0) / 4.0;
    const double b = (params.k - 2.0) / 4.0;
    if (b == 0.0) {
        return p;
    }
    return sub(scale(p, a), scale(q, b));
}

std::pair<TruncatedSeries, AtomicMeasure>
random_pk_member(const ClassParams& params, int n_atoms, std::uint64_t seed, std::size_t order) {
    params.validate();
    if (n_atoms < 1) {
        throw DomainError("random_pk_member: n_atoms must be >= 1");
    }
    std::mt19937_64 rng(seed);
    const bool signed_measure = params.k > 2.0 && n_atoms >= 2;
    const int n_pos = signed_measure ? (n_atoms + 1) / 2 : n_atoms;
    const int n_neg = n_atoms - n_pos;
    const double t = unit_uniform(rng);
    const double negative = signed_measure ? t * (params.k - 2.0) / 2.0 : 0.0;
    const double positive = 2.0 + negative;

    const auto pos = random_partition(rng, n_pos, positive);
    const auto neg = n_neg > 0 ? random_partition(rng, n_neg, negative) : std::vector<double>{};
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(n_atoms));
    for (double w : pos) {
        atoms.push_back({kTwoPi * unit_uniform(rng), w});
    }
    for (double w : neg) {
        atoms.push_back({kTwoPi * unit_uniform(rng), -w});
    }
    // Absorb the rounding of the partition into the first atom so that the
    // mass is 2 to the last bit the summation order allows.
    double mass = 0.0;
    for (const auto& a : atoms) {
        mass += a.w;
    }
    atoms.front().w += 2.0 - mass;

    AtomicMeasure m(std::move(atoms));
    auto h = herglotz_series(m, params.beta, order);
    return {std::move(h), std::move(m)};
}

std::pair<TruncatedSeries, AtomicMeasure>
random_p_member(double beta, int n_atoms, std::uint64_t seed, std::size_t order) {
    return random_pk_member(ClassParams{2.0, beta}, n_atoms, seed, order);
}

}  // namespace bbr
