#include "bbr/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "bbr/classes.hpp"

namespace bbr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSampleRadius = 0.95;
constexpr double kSharpRadii[] = {0.1, 0.3, 0.5, 0.7};
constexpr std::size_t kMultiplierLimit = 128;

// Declared budgets; a case's tolerance is always truncation + roundoff.
struct Budget {
    double truncation = 0.0;
    double roundoff = 0.0;
    [[nodiscard]] double total() const { return truncation + roundoff; }
};

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31U);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h = (h ^ c) * 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t seed_for(std::uint64_t base, std::string_view tag, std::uint64_t a = 0, std::uint64_t b = 0) {
    return splitmix(base ^ splitmix(fnv1a(tag) ^ splitmix(a ^ splitmix(b))));
}

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11U) * 0x1.0p-53;
}

complex random_point(std::mt19937_64& rng, double radius) {
    const double r = radius * std::sqrt(unit_uniform(rng));
    return std::polar(r, kTwoPi * unit_uniform(rng));
}

json params_json(const ClassParams& p) {
    return {{"k", p.k}, {"beta", p.beta}};
}

json spec_json(const TransformSpec& s) {
    return {{"j", s.j_index()}, {"sigma", s.sigma}, {"n", s.n}};
}

json complex_json(complex z) {
    return json::array({z.real(), z.imag()});
}

json measure_witness(const AtomicMeasure& m) {
    json atoms = json::array();
    for (const auto& a : m.atoms()) {
        atoms.push_back({{"s", a.s}, {"w", a.w}});
    }
    return atoms;
}

struct Outcome {
    Outcome(double m, json w = {}, std::string d = {}) : measured(m), witness(std::move(w)), detail(std::move(d)) {}

    double measured = 0.0;
    json witness;
    std::string detail;
    bool skipped = false;
};

struct Member {
    TruncatedSeries h;  // at the high order
    AtomicMeasure measure;
    std::uint64_t seed;
};

class Suite {
public:
    Suite(const SuiteOptions& opts) : opts_(opts) {}

    void run(const Grid& grid);
    std::vector<VerificationCase> take() { return std::move(cases_); }

private:
    void record(std::string name, const ClassParams& params, std::optional<TransformSpec> spec,
                Budget budget, const std::function<Outcome()>& body);
    void skip(std::string name, const ClassParams& params, std::optional<TransformSpec> spec,
              std::string reason);

    void series_cases();
    void params_cases(const ClassParams& params, std::size_t index);
    void cell_cases(const ClassParams& params, const TransformSpec& spec, std::size_t index);
    void t_class_cases(const ClassParams& params, const TransformSpec& spec, std::size_t index);
    void b_class_cases(const ClassParams& params, const TransformSpec& spec, std::size_t index);
    void global_cases(const std::vector<ClassParams>& params, const std::vector<TransformSpec>& specs);

    std::vector<Member> members(const ClassParams& params, std::string_view tag, std::size_t index,
                                std::size_t order) const;
    std::vector<Member> admissible_t_members(const ClassParams& params, const TransformSpec& spec,
                                             std::size_t index, std::size_t order,
                                             std::string& note) const;
    std::size_t sample_order(const ClassParams& params, double budget) const {
        return order_for_budget(params.coefficient_bound(), kSampleRadius, budget, opts_.order);
    }

    const RadiusReport& transformed_radius(const ClassParams& params, const TransformSpec& spec);

    SuiteOptions opts_;
    std::vector<VerificationCase> cases_;
    std::map<std::string, RadiusReport> radius_cache_;
};

// Specs with identical multipliers produce identical series, so their radius
// searches are shared: every n = 0 spec is the identity, and j = 2 at n = 1
// coincides with j = 1 at n = 1.
const RadiusReport& Suite::transformed_radius(const ClassParams& params, const TransformSpec& spec) {
    TransformSpec canonical = spec;
    if (spec.n == 0) {
        canonical = {TransformKind::first, 1.0, 0};
    } else if (spec.j == TransformKind::second && spec.n == 1) {
        canonical.j = TransformKind::first;
    }
    const auto key = fmt::format("{}|{}|{}|{}|{}", params.k, params.beta, canonical.j_index(), canonical.sigma,
                                 canonical.n);
    if (auto it = radius_cache_.find(key); it != radius_cache_.end()) {
        return it->second;
    }
    auto report = radius_numeric_adaptive(
        [&](std::size_t order) { return apply_phi(canonical, extremal_H(params, order)); }, 1e-7,
        radius_closed_form(params), kRadiusSearchMax, opts_.order);
    return radius_cache_.emplace(key, report).first->second;
}

void Suite::record(std::string name, const ClassParams& params, std::optional<TransformSpec> spec,
                   Budget budget, const std::function<Outcome()>& body) {
    VerificationCase c;
    c.name = std::move(name);
    c.params = params;
    c.spec = spec;
    c.tolerance = budget.total();
    try {
        Outcome o = body();
        c.measured = o.measured;
        c.detail = std::move(o.detail);
        if (o.skipped) {
            c.status = CaseStatus::skipped;
        } else if (std::isfinite(o.measured) && o.measured <= c.tolerance) {
            c.status = CaseStatus::pass;
        } else {
            c.status = CaseStatus::fail;
            c.witness = o.witness.is_null() ? json::object() : std::move(o.witness);
        }
    } catch (const std::exception& e) {
        c.status = CaseStatus::fail;
        c.measured = std::numeric_limits<double>::infinity();
        c.witness = json{{"error", e.what()}};
    }
    if (c.status == CaseStatus::fail) {
        (*c.witness)["params"] = params_json(params);
        if (spec) {
            (*c.witness)["spec"] = spec_json(*spec);
        }
        (*c.witness)["budget"] = {{"truncation", budget.truncation}, {"roundoff", budget.roundoff}};
    }
    cases_.push_back(std::move(c));
}

void Suite::skip(std::string name, const ClassParams& params, std::optional<TransformSpec> spec,
                 std::string reason) {
    VerificationCase c;
    c.name = std::move(name);
    c.params = params;
    c.spec = spec;
    c.status = CaseStatus::skipped;
    c.detail = std::move(reason);
    cases_.push_back(std::move(c));
}

std::vector<Member> Suite::members(const ClassParams& params, std::string_view tag, std::size_t index,
                                   std::size_t order) const {
    std::vector<Member> out;
    for (int m = 0; m < opts_.members_per_cell; ++m) {
        const auto seed = seed_for(opts_.seed, tag, index, static_cast<std::uint64_t>(m));
        const int atoms = 2 + static_cast<int>(seed % 5U);
        auto [h, measure] = random_pk_member(params, atoms, seed, order);
        out.push_back({std::move(h), std::move(measure), seed});
    }
    return out;
}

bool t_zero_free_on(const TruncatedSeries& h, const TransformSpec& spec, double r) {
    if (root_is_entire(spec.sigma)) {
        return true;
    }
    try {
        return winding_number(apply_phi(spec, h), r) == 0;
    } catch (const DomainError&) {
        return false;  // a zero on or too close to the circle
    }
}

// Members whose transform has no zeros on |z| <= 0.95, so that the principal
// 1/sigma power and the T-class object are analytic where they are sampled.
std::vector<Member> Suite::admissible_t_members(const ClassParams& params, const TransformSpec& spec,
                                                std::size_t index, std::size_t order,
                                                std::string& note) const {
    constexpr int kMaxAttempts = 400;
    std::vector<Member> out;
    int attempts = 0;
    for (; attempts < kMaxAttempts && static_cast<int>(out.size()) < opts_.members_per_cell; ++attempts) {
        const auto seed = seed_for(opts_.seed, "t-class", index, static_cast<std::uint64_t>(attempts));
        const int atoms = 2 + static_cast<int>(seed % 5U);
        auto [h, measure] = random_pk_member(params, atoms, seed, order);
        if (t_zero_free_on(h, spec, kSampleRadius)) {
            out.push_back({std::move(h), std::move(measure), seed});
        }
    }
    note = fmt::format("{} of {} draws admissible", out.size(), attempts);
    return out;
}

// --- series arithmetic ------------------------------------------------------

TruncatedSeries random_series(std::mt19937_64& rng, std::size_t order, double max_abs) {
    std::vector<complex> c(order + 1);
    for (auto& x : c) {
        x = std::polar(max_abs * unit_uniform(rng), kTwoPi * unit_uniform(rng));
    }
    return TruncatedSeries(std::move(c));
}

double relative_distance(const TruncatedSeries& a, const TruncatedSeries& b) {
    return max_coeff_distance(a, b) / std::max(1.0, std::max(max_coeff_abs(a), max_coeff_abs(b)));
}

void Suite::series_cases() {
    const ClassParams none{};
    constexpr int kCases = 10;
    for (int i = 0; i < kCases; ++i) {
        std::mt19937_64 rng(seed_for(opts_.seed, "series", static_cast<std::uint64_t>(i)));
        const std::size_t order = 16 + (rng() % 113U);  // <= 128
        const auto a = random_series(rng, order, 1.0);
        const auto b = random_series(rng, order, 1.0);
        const auto c = random_series(rng, order, 1.0);
        const json w{{"case", i}, {"order", order}};

        record("series.add_mul_algebra", none, std::nullopt, {0.0, 1e-14}, [&] {
            double d = 0.0;
            d = std::max(d, relative_distance(a + b, b + a));
            d = std::max(d, relative_distance((a + b) + c, a + (b + c)));
            d = std::max(d, relative_distance(a * b, b * a));
            d = std::max(d, relative_distance((a * b) * c, a * (b * c)));
            return Outcome{d, w};
        });
        record("series.distributive", none, std::nullopt, {0.0, 1e-13}, [&] {
            return Outcome{max_coeff_distance(a * (b + c), a * b + a * c), w};
        });
        record("series.leibniz", none, std::nullopt, {0.0, 1e-12}, [&] {
            const auto lhs = z_derivative(a * b);
            const auto rhs = z_derivative(a) * b + a * z_derivative(b);
            return Outcome{max_coeff_distance(lhs, rhs), w};
        });

        // log and fractional powers are only well conditioned on zero-free
        // series, so the unit series is drawn with |c_l| <= 2^{-l}.
        const std::size_t low = std::min<std::size_t>(order, 64);
        const auto decaying = [&](double c0) {
            auto s = random_series(rng, low, 1.0);
            std::vector<complex> cs(s.coeffs().begin(), s.coeffs().end());
            cs[0] = c0;
            for (std::size_t l = 1; l <= low; ++l) {
                cs[l] *= std::ldexp(1.0, -static_cast<int>(l));
            }
            return TruncatedSeries(std::move(cs));
        };
        const auto u = decaying(1.0);
        const auto v = decaying(0.0);
        record("series.exp_log_inverse", none, std::nullopt, {0.0, 1e-12}, [&] {
            const double d1 = max_coeff_distance(exp_unit(log_unit(u)), u);
            const double d2 = max_coeff_distance(log_unit(exp_unit(v)), v);
            return Outcome{std::max(d1, d2), w};
        });
        const double alpha = 0.25 + 3.0 * unit_uniform(rng);
        record("series.pow_inverse", none, std::nullopt, {0.0, 1e-12}, [&] {
            const auto prod = pow_real(u, alpha) * pow_real(u, -alpha);
            return Outcome{max_coeff_distance(prod, TruncatedSeries::constant(1.0, low)),
                           json{{"case", i}, {"alpha", alpha}}};
        });
    }

    // Geometric series 1/(1 - q z) with tail rate 1 and a Koebe-type series
    // 1/(1 - z)^2 = sum (l+1) z^l, checked against their closed forms.
    std::mt19937_64 rng(seed_for(opts_.seed, "series-eval"));
    record("series.eval_bound_valid", none, std::nullopt, {0.0, 1e-13}, [&] {
        double worst = -std::numeric_limits<double>::infinity();
        json witness;
        for (int i = 0; i < 100; ++i) {
            const std::size_t order = 8 + (rng() % 121U);
            const complex q = std::polar(unit_uniform(rng), kTwoPi * unit_uniform(rng));
            std::vector<complex> c(order + 1);
            complex p = 1.0;
            for (auto& x : c) {
                x = p;
                p *= q;
            }
            const TruncatedSeries s(std::move(c), 1.0);
            const complex z = random_point(rng, 0.9);
            const auto bv = eval_with_bound(s, z);
            const double excess = std::abs(bv.value - 1.0 / (1.0 - q * z)) - bv.err;
            if (excess > worst) {
                worst = excess;
                witness = {{"q", complex_json(q)}, {"z", complex_json(z)}, {"order", order}};
            }
        }
        return Outcome{worst, witness, "|value - closed form| - err; geometric series"};
    });
    record("series.eval_bound_koebe", none, std::nullopt, {0.0, 1e-12}, [&] {
        // Coefficients l + 1 are not uniformly bounded; the tail is summed in
        // closed form instead: sum_{l>N} (l+1) r^l.
        double worst = -std::numeric_limits<double>::infinity();
        json witness;
        for (int i = 0; i < 100; ++i) {
            const std::size_t order = 8 + (rng() % 121U);
            std::vector<complex> c(order + 1);
            for (std::size_t l = 0; l <= order; ++l) {
                c[l] = static_cast<double>(l + 1);
            }
            const TruncatedSeries s(std::move(c));
            const complex z = random_point(rng, 0.9);
            const double r = std::abs(z);
            const double n1 = static_cast<double>(order + 1);
            const double tail = std::pow(r, n1) * (n1 + 1.0 - n1 * r) / ((1.0 - r) * (1.0 - r));
            const double excess = std::abs(eval(s, z) - 1.0 / ((1.0 - z) * (1.0 - z))) - tail;
            if (excess > worst) {
                worst = excess;
                witness = {{"z", complex_json(z)}, {"order", order}};
            }
        }
        return Outcome{worst, witness, "|value - closed form| - tail; 1/(1-z)^2"};
    });
}

// --- P_k(beta) level -------------------------------------------------------

void Suite::params_cases(const ClassParams& params, std::size_t index) {
    const double bound = params.coefficient_bound();

    record("herglotz.extremal_radius", params, std::nullopt, {1e-7, 1e-5 - 1e-7}, [&] {
        const auto& report = transformed_radius(params, TransformSpec{});
        return Outcome{report.discrepancy.value_or(0.0), radius_report_to_json(report),
                       fmt::format("bracket [{:.10f}, {:.10f}] at order {}", report.lo, report.hi,
                                   report.order)};
    });

    record("herglotz.extremal_closed_form", params, std::nullopt, {1e-10, 1e-10}, [&] {
        const auto h = extremal_H(params, sample_order(params, 1e-10));
        double worst = 0.0;
        json witness;
        for (int i = 0; i <= 19; ++i) {
            const double r = 0.05 * i;
            const double d = std::abs(eval(h, r).real() - omega_bound(r, params));
            if (d > worst) {
                worst = d;
                witness = {{"r", r}, {"order", h.order()}};
            }
        }
        return Outcome{worst, witness};
    });

    record("herglotz.two_atom_measure", params, std::nullopt, {0.0, 1e-14}, [&] {
        const auto h = extremal_H(params, opts_.order);
        const auto m = herglotz_series(extremal_measure(params), params.beta, opts_.order);
        return Outcome{max_coeff_distance(h, m), json{{"order", opts_.order}}};
    });

    record("herglotz.compose_single_atoms", params, std::nullopt, {0.0, 1e-14}, [&] {
        std::mt19937_64 rng(seed_for(opts_.seed, "compose", index));
        double worst = max_coeff_distance(
            compose_pk(mobius_kernel(params.beta, std::numbers::pi, opts_.order),
                       mobius_kernel(params.beta, 0.0, opts_.order), params),
            extremal_H(params, opts_.order));
        json witness{{"s1", std::numbers::pi}, {"s2", 0.0}};
        for (int m = 0; m < opts_.members_per_cell; ++m) {
            const double s1 = kTwoPi * unit_uniform(rng);
            const double s2 = kTwoPi * unit_uniform(rng);
            const auto lhs = compose_pk(mobius_kernel(params.beta, s1, opts_.order),
                                        mobius_kernel(params.beta, s2, opts_.order), params);
            std::vector<Atom> atoms{{s1, (params.k + 2.0) / 2.0}};
            if (params.k > 2.0) {
                atoms.push_back({s2, -(params.k - 2.0) / 2.0});
            }
            const auto rhs = herglotz_series(AtomicMeasure(atoms), params.beta, opts_.order);
            const double d = max_coeff_distance(lhs, rhs);
            if (d > worst) {
                worst = d;
                witness = {{"s1", s1}, {"s2", s2}};
            }
        }
        return Outcome{worst, witness};
    });

    const auto hi_order = sample_order(params, 1e-10);
    const auto pk = members(params, "pk-members", index, hi_order);

    record("herglotz.coefficient_bound", params, std::nullopt, {0.0, 1e-12 * bound}, [&] {
        double worst = -bound;
        json witness;
        for (const auto& m : pk) {
            double over = -bound;
            for (std::size_t l = 1; l <= m.h.order(); ++l) {
                over = std::max(over, std::abs(m.h[l]) - bound);
            }
            over = std::max(over, m.h.tail_bound_rate().value_or(bound) - bound);
            if (over > worst) {
                worst = over;
                witness = {{"seed", m.seed}, {"atoms", measure_witness(m.measure)}};
            }
        }
        return Outcome{worst, witness, "max_l |h_l| - k(1-beta)"};
    });

    record("herglotz.disk_lower_bound", params, std::nullopt, {1e-10, 1e-12}, [&] {
        double worst = -std::numeric_limits<double>::infinity();
        json witness;
        for (const auto& m : pk) {
            for (int i = 1; i <= 19; ++i) {
                const double r = 0.05 * i;
                const double shortfall =
                    omega_bound(r, params) - min_re_on_circle(m.h, r) - truncation_error(m.h, r);
                if (shortfall > worst) {
                    worst = shortfall;
                    witness = {{"seed", m.seed}, {"r", r}, {"atoms", measure_witness(m.measure)}};
                }
            }
        }
        return Outcome{worst, witness, "omega(r) - min Re h on |z| = r, after the tail bound"};
    });

    const auto pb = members(ClassParams{2.0, params.beta}, "p-members", index, hi_order);
    record("herglotz.positivity", params, std::nullopt, {1e-10, 1e-12}, [&] {
        double worst = -std::numeric_limits<double>::infinity();
        json witness;
        for (const auto& m : pb) {
            for (int i = 1; i <= 19; ++i) {
                const double r = 0.05 * i;
                const double shortfall = params.beta - min_re_on_circle(m.h, r) - truncation_error(m.h, r);
                if (shortfall > worst) {
                    worst = shortfall;
                    witness = {{"seed", m.seed}, {"r", r}, {"atoms", measure_witness(m.measure)}};
                }
            }
        }
        return Outcome{worst, witness, "beta - min Re p on |z| = r, after the tail bound; P(beta) members"};
    });
}

// --- transforms ------------------------------------------------------------

double member_bound_shortfall(const TransformSpec& bound_spec, const ClassParams& params,
                              const TruncatedSeries& q, std::mt19937_64& rng, int points,
                              complex& where) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < points; ++p) {
        const complex z = random_point(rng, kSampleRadius);
        const double shortfall =
            transformed_lower_bound(bound_spec, params, std::abs(z)) - eval(q, z).real();
        if (shortfall > worst) {
            worst = shortfall;
            where = z;
        }
    }
    return worst;
}

void Suite::cell_cases(const ClassParams& params, const TransformSpec& spec, std::size_t index) {
    const double bound = params.coefficient_bound();
    const double cf = radius_closed_form(params);

    record("transform.sharpness", params, spec, {1e-10 + 1e-12, 1e-9}, [&] {
        const auto g = apply_phi(spec, extremal_H(params, order_for_budget(bound, 0.7, 1e-10, opts_.order)));
        double worst = 0.0;
        json witness;
        for (double r : kSharpRadii) {
            const double d = std::abs(eval(g, r).real() - transformed_lower_bound(spec, params, r));
            if (d > worst) {
                worst = d;
                witness = {{"r", r}};
            }
        }
        return Outcome{worst, witness};
    });

    const auto hi_order = sample_order(params, 1e-9);
    const auto pk = members(params, "cell-members", index, hi_order);

    record("transform.member_bound", params, spec, {1e-9, 1e-9}, [&] {
        std::mt19937_64 rng(seed_for(opts_.seed, "member-points", index));
        double worst = -std::numeric_limits<double>::infinity();
        json witness;
        for (const auto& m : pk) {
            complex z;
            const double s = member_bound_shortfall(spec, params, apply_phi(spec, m.h), rng,
                                                    opts_.sample_points, z);
            if (s > worst) {
                worst = s;
                witness = {{"seed", m.seed}, {"z", complex_json(z)}, {"atoms", measure_witness(m.measure)}};
            }
        }
        return Outcome{worst, witness, "bound(|z|) - Re phi(h)(z)"};
    });

    record("transform.positivity_radius", params, spec, {1e-7, 1e-4 - 1e-7}, [&] {
        const auto& report = transformed_radius(params, spec);
        // The transform averages H over shrunken disks with positive weights,
        // so its positivity disk can only grow; at n = 0 it is H itself.
        const double measured = spec.n == 0 ? *report.discrepancy : cf - report.lo;
        return Outcome{measured, radius_report_to_json(report),
                       fmt::format("transformed radius in [{:.10f}, {:.10f}], r(k,beta) = {:.10f}",
                                   report.lo, report.hi, cf)};
    });

    const auto next = spec.with_n(spec.n + 1);
    if (next.violation().empty()) {
        record("transform.multiplier_monotone", params, spec, {0.0, 0.0}, [&] {
            // measured < 0 iff every strict inequality holds
            double worst = -std::numeric_limits<double>::infinity();
            json witness;
            for (std::size_t l = 1; l <= kMultiplierLimit; ++l) {
                const double a = coeff_multiplier(next, l);
                const double b = coeff_multiplier(spec, l);
                // c_{l,n} <= 1 is not strict; it only counts once it is exceeded.
                const double v = std::max({a - b, -a, b > 1.0 ? b - 1.0 : -1.0});
                if (v > worst) {
                    worst = v;
                    witness = {{"l", l}, {"c_next", a}, {"c", b}};
                }
            }
            return Outcome{worst >= 0.0 ? std::max(worst, 1e-300) : worst, witness};
        });
    }

    const auto low = [&](const Member& m) { return m.h.truncated(opts_.order); };

    if (spec.n >= 1) {
        record("transform.recurrence", params, spec, {0.0, 1e-12}, [&] {
            double worst = 0.0;
            json witness;
            for (const auto& m : pk) {
                const double d = recurrence_residual(spec, low(m));
                if (d > worst) {
                    worst = d;
                    witness = {{"seed", m.seed}};
                }
            }
            return Outcome{worst, witness};
        });

        record("transform.level_inclusion", params, spec, {0.0, 1e-14}, [&] {
            double worst = 0.0;
            json witness;
            for (const auto& m : pk) {
                const auto h = low(m);
                const auto hp = lower_level_preimage(spec, h);
                double d = max_coeff_distance(apply_phi(spec, h), apply_phi(spec.with_n(spec.n - 1), hp));
                for (std::size_t l = 1; l <= hp.order(); ++l) {
                    d = std::max(d, std::abs(hp[l]) - bound);
                }
                if (d > worst) {
                    worst = d;
                    witness = {{"seed", m.seed}};
                }
            }
            return Outcome{worst, witness, "phi_n(h) = phi_{n-1}(h'), |h'_l| <= k(1-beta)"};
        });
    }

    record("transform.commutation", params, spec, {0.0, 1e-15}, [&] {
        std::mt19937_64 rng(seed_for(opts_.seed, "partner", index));
        double worst = 0.0;
        json witness;
        for (const auto& m : pk) {
            TransformSpec partner{spec.j, 0.5 + 4.0 * unit_uniform(rng), static_cast<int>(rng() % 4U)};
            while (!partner.violation().empty()) {
                partner.n -= 1;
            }
            const double d = commutation_residual(spec, partner, low(m));
            if (d > worst) {
                worst = d;
                witness = {{"seed", m.seed}, {"partner", spec_json(partner)}};
            }
        }
        return Outcome{worst, witness};
    });

    // Each member splits as (P/2) p - (M/2) q with p, q in P(beta); the
    // transform acts on p and q separately and keeps them in P(beta).
    record("transform.class_inclusion", params, spec, {1e-9, 1e-12}, [&] {
        double worst = -std::numeric_limits<double>::infinity();
        json witness;
        for (const auto& m : pk) {
            const double variation = m.measure.total_variation();
            const auto pos = m.measure.positive_part_normalized();
            const auto neg = m.measure.negative_part_normalized();
            const auto p = herglotz_series(AtomicMeasure(pos), params.beta, hi_order);
            const auto gp = apply_phi(spec, p);
            double d = 0.0;
            std::vector<TruncatedSeries> parts{gp};
            if (!neg.empty()) {
                const auto gq = apply_phi(spec, herglotz_series(AtomicMeasure(neg), params.beta, hi_order));
                const auto composed = compose_pk(gp, gq, ClassParams{variation, params.beta});
                d = max_coeff_distance(composed, apply_phi(spec, m.h));
                parts.push_back(gq);
            } else {
                d = max_coeff_distance(gp, apply_phi(spec, m.h));
            }
            double shortfall = d - 1e-12;  // decomposition residual, then positivity
            for (const auto& part : parts) {
                for (double r : {0.5, 0.9, kSampleRadius}) {
                    shortfall = std::max(shortfall, params.beta - min_re_on_circle(part, r) -
                                                        truncation_error(part, r));
                }
            }
            if (shortfall > worst) {
                worst = shortfall;
                witness = {{"seed", m.seed}, {"decomposition_residual", d}, {"atoms", measure_witness(m.measure)}};
            }
        }
        return Outcome{worst, witness, "beta - min Re of the transformed P(beta) parts"};
    });

    if (spec.j == TransformKind::first) {
        t_class_cases(params, spec, index);
    } else {
        b_class_cases(params, spec, index);
    }
}

// --- normalized classes --------------------------------------------------------

struct ExtremalCheck {
    double worst = 0.0;
    json witness;
    std::vector<double> skipped_radii;
};

// |Re q(r) - bound_spec(r)| at the standard radii where `analytic(r)` holds.
ExtremalCheck extremal_equality(const TruncatedSeries& q, const TransformSpec& bound_spec,
                                const ClassParams& params, const std::function<bool(double)>& analytic) {
    ExtremalCheck out;
    for (double r : kSharpRadii) {
        if (!analytic(r)) {
            out.skipped_radii.push_back(r);
            continue;
        }
        const double d = std::abs(eval(q, r).real() - transformed_lower_bound(bound_spec, params, r));
        if (d > out.worst) {
            out.worst = d;
            out.witness = {{"r", r}};
        }
    }
    return out;
}

const auto kEverywhere = [](double) { return true; };

std::string radii_note(const std::vector<double>& skipped) {
    if (skipped.empty()) {
        return {};
    }
    std::string s = "not evaluated beyond the first zero of phi(H), where f is not analytic: r =";
    for (double r : skipped) {
        s += fmt::format(" {}", r);
    }
    return s;
}

void Suite::t_class_cases(const ClassParams& params, const TransformSpec& spec, std::size_t index) {
    const double bound = params.coefficient_bound();
    const double cf = radius_closed_form(params);
    const double sigma = spec.sigma;
    const auto hi_order = sample_order(params, 1e-9);
    std::string note;
    const auto pool = admissible_t_members(params, spec, index, hi_order, note);
    if (pool.empty()) {
        skip("classes.T_members", params, spec, "no admissible member found: " + note);
        return;
    }

    record("classes.T_roundtrip", params, spec, {0.0, 1e-10}, [&] {
        double worst = 0.0;
        json witness;
        for (const auto& m : pool) {
            const auto h = m.h.truncated(opts_.order);
            const double d = max_coeff_distance(salagean_normalized(construct_T(h, spec), sigma, spec.n), h);
            if (d > worst) {
                worst = d;
                witness = {{"seed", m.seed}};
            }
        }
        return Outcome{worst, witness, note};
    });

    if (spec.n >= 1) {
        record("classes.T_level_inclusion", params, spec, {0.0, 1e-12}, [&] {
            double worst = 0.0;
            json witness;
            for (const auto& m : pool) {
                const auto h = m.h.truncated(opts_.order);
                const auto hp = lower_level_preimage(spec, h);
                const double d = max_coeff_distance(construct_T(h, spec).unit_series,
                                                    construct_T(hp, spec.with_n(spec.n - 1)).unit_series);
                if (d > worst) {
                    worst = d;
                    witness = {{"seed", m.seed}};
                }
            }
            return Outcome{worst, witness};
        });
    }

    // The salagean-normalized quantity is H itself, so it carries H's tail rate.
    const bool branch_free = root_is_entire(sigma);
    const double search_max = branch_free ? kRadiusSearchMax : kSampleRadius;
    record("classes.T_positivity_radius", params, spec, {1e-7, 1e-4 - 1e-7}, [&] {
        const auto report = radius_numeric_adaptive(
            [&](std::size_t order) {
                const auto f = construct_T(extremal_H(params, order), spec);
                return salagean_normalized(f, sigma, spec.n).with_tail_bound_rate(bound);
            },
            1e-7, cf, search_max, opts_.order, branch_free ? std::size_t{1} << 16 : 4096);
        double measured = *report.discrepancy;
        std::string detail = fmt::format("bracket [{:.10f}, {:.10f}]", report.lo, report.hi);
        if (report.hi == 1.0 && cf >= search_max) {
            measured = 0.0;  // no sign change up to the search limit, none expected
            detail += fmt::format("; no sign change up to {}", search_max);
        }
        return Outcome{measured, radius_report_to_json(report), detail};
    });

    // construct_T(H) is analytic on |z| <= r iff phi(H) has no zeros there.
    const auto h_ext = extremal_H(params, order_for_budget(bound, 0.7, 1e-10, opts_.order));
    const auto h_check = extremal_H(params, hi_order);
    const auto ext_analytic = [&](double r) { return t_zero_free_on(h_check, spec, r); };
    const auto f_ext = construct_T(h_ext, spec);

    std::vector<NormalizedFunction> built;
    for (const auto& m : pool) {
        built.push_back(construct_T(m.h, spec));
    }

    record("classes.T_power_bound", params, spec, {1e-9, 1e-9}, [&] {
        std::mt19937_64 rng(seed_for(opts_.seed, "t-power-points", index));
        double worst = -std::numeric_limits<double>::infinity();
        json witness;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            complex z;
            const double s = member_bound_shortfall(spec, params, t_power_quantity(built[i], sigma), rng,
                                                    opts_.sample_points, z);
            if (s > worst) {
                worst = s;
                witness = {{"seed", pool[i].seed}, {"z", complex_json(z)}};
            }
        }
        return Outcome{worst, witness, "bound_n(|z|) - Re f^sigma/z^sigma; " + note};
    });

    record("classes.T_power_extremal", params, spec, {1e-10, 1e-9}, [&] {
        const auto chk = extremal_equality(t_power_quantity(f_ext, sigma), spec, params, ext_analytic);
        return Outcome{chk.worst, chk.witness, radii_note(chk.skipped_radii)};
    });

    if (spec.n >= 1) {
        const auto prev = spec.with_n(spec.n - 1);
        record("classes.T_derivative_identity", params, spec, {0.0, 1e-12}, [&] {
            double worst = 0.0;
            json witness;
            for (const auto& m : pool) {
                const auto h = m.h.truncated(opts_.order);
                const auto q = t_derivative_quantity(construct_T(h, spec), sigma);
                const double d = max_coeff_distance(q, apply_phi(prev, h));
                if (d > worst) {
                    worst = d;
                    witness = {{"seed", m.seed}};
                }
            }
            return Outcome{worst, witness};
        });

        record("classes.T_derivative_bound", params, spec, {1e-9, 1e-9}, [&] {
            std::mt19937_64 rng(seed_for(opts_.seed, "t-derivative-points", index));
            double worst = -std::numeric_limits<double>::infinity();
            json witness;
            for (std::size_t i = 0; i < pool.size(); ++i) {
                complex z;
                const double s = member_bound_shortfall(prev, params, t_derivative_quantity(built[i], sigma),
                                                        rng, opts_.sample_points, z);
                if (s > worst) {
                    worst = s;
                    witness = {{"seed", pool[i].seed}, {"z", complex_json(z)}};
                }
            }
            return Outcome{worst, witness, "bound_{n-1}(|z|) - Re f^{sigma-1} f' / z^{sigma-1}"};
        });

        record("classes.T_derivative_extremal", params, spec, {1e-10, 1e-9}, [&] {
            const auto chk = extremal_equality(t_derivative_quantity(f_ext, sigma), prev, params, ext_analytic);
            return Outcome{chk.worst, chk.witness, radii_note(chk.skipped_radii)};
        });
    }
}

void Suite::b_class_cases(const ClassParams& params, const TransformSpec& spec, std::size_t index) {
    const double bound = params.coefficient_bound();
    const double cf = radius_closed_form(params);
    const double sigma = spec.sigma;
    const auto hi_order = sample_order(params, 1e-9);
    const auto pool = members(params, "b-class", index, hi_order);
    const auto low = [&](const Member& m) { return m.h.truncated(opts_.order); };

    record("classes.tau_two_path", params, spec, {0.0, 1e-12}, [&] {
        double worst = 0.0;
        json witness;
        for (std::size_t l = 1; l <= kMultiplierLimit; ++l) {
            const double d = std::abs(l_operator_multiplier(sigma, spec.n, l) * coeff_multiplier(spec, l) - 1.0);
            if (d > worst) {
                worst = d;
                witness = {{"l", l}};
            }
        }
        return Outcome{worst, witness, "|tau ratio * c_{l,n} - 1|"};
    });

    record("classes.B_roundtrip", params, spec, {0.0, 1e-12}, [&] {
        double worst = 0.0;
        json witness;
        for (const auto& m : pool) {
            const auto h = low(m);
            const double d = max_coeff_distance(L_operator(construct_B(h, spec), sigma, spec.n), h);
            if (d > worst) {
                worst = d;
                witness = {{"seed", m.seed}};
            }
        }
        return Outcome{worst, witness};
    });

    if (spec.n >= 1) {
        record("classes.B_level_inclusion", params, spec, {0.0, 1e-14}, [&] {
            double worst = 0.0;
            json witness;
            for (const auto& m : pool) {
                const auto h = low(m);
                const auto hp = lower_level_preimage(spec, h);
                const double d = max_coeff_distance(construct_B(h, spec).unit_series,
                                                    construct_B(hp, spec.with_n(spec.n - 1)).unit_series);
                if (d > worst) {
                    worst = d;
                    witness = {{"seed", m.seed}};
                }
            }
            return Outcome{worst, witness};
        });
    }

    record("classes.B_positivity_radius", params, spec, {1e-7, 1e-4 - 1e-7}, [&] {
        const auto report = radius_numeric_adaptive(
            [&](std::size_t order) {
                const auto f = construct_B(extremal_H(params, order), spec);
                return L_operator(f, sigma, spec.n).with_tail_bound_rate(bound);
            },
            1e-7, cf, kRadiusSearchMax, opts_.order);
        return Outcome{*report.discrepancy, radius_report_to_json(report),
                       fmt::format("bracket [{:.10f}, {:.10f}]", report.lo, report.hi)};
    });

    const auto f_ext = construct_B(extremal_H(params, order_for_budget(bound, 0.7, 1e-10, opts_.order)), spec);

    record("classes.B_power_bound", params, spec, {1e-9, 1e-9}, [&] {
        std::mt19937_64 rng(seed_for(opts_.seed, "b-points", index));
        double worst = -std::numeric_limits<double>::infinity();
        json witness;
        for (const auto& m : pool) {
            complex z;
            const double s = member_bound_shortfall(spec, params, construct_B(m.h, spec).unit_series, rng,
                                                    opts_.sample_points, z);
            if (s > worst) {
                worst = s;
                witness = {{"seed", m.seed}, {"z", complex_json(z)}};
            }
        }
        return Outcome{worst, witness, "bound_n(|z|) - Re f/z"};
    });

    record("classes.B_power_extremal", params, spec, {1e-10, 1e-9}, [&] {
        const auto chk = extremal_equality(f_ext.unit_series, spec, params, kEverywhere);
        return Outcome{chk.worst, chk.witness};
    });

    if (spec.n >= 1) {
        const auto prev = spec.with_n(spec.n - 1);
        record("classes.B_derivative_identity", params, spec, {0.0, 1e-12}, [&] {
            double worst = 0.0;
            json witness;
            for (const auto& m : pool) {
                const auto h = low(m);
                const auto q = b_derivative_quantity(construct_B(h, spec), sigma, spec.n);
                const double d = max_coeff_distance(q, apply_phi(prev, h));
                if (d > worst) {
                    worst = d;
                    witness = {{"seed", m.seed}};
                }
            }
            return Outcome{worst, witness};
        });

        record("classes.B_derivative_bound", params, spec, {1e-9, 1e-9}, [&] {
            std::mt19937_64 rng(seed_for(opts_.seed, "b-derivative-points", index));
            double worst = -std::numeric_limits<double>::infinity();
            json witness;
            for (const auto& m : pool) {
                complex z;
                const auto q = b_derivative_quantity(construct_B(m.h, spec), sigma, spec.n);
                const double s = member_bound_shortfall(prev, params, q, rng, opts_.sample_points, z);
                if (s > worst) {
                    worst = s;
                    witness = {{"seed", m.seed}, {"z", complex_json(z)}};
                }
            }
            return Outcome{worst, witness, "bound_{n-1}(|z|) - Re ((sigma-n) f/z + f') / (sigma-n+1)"};
        });

        record("classes.B_derivative_extremal", params, spec, {1e-10, 1e-9}, [&] {
            const auto q = b_derivative_quantity(f_ext, sigma, spec.n);
            const auto chk = extremal_equality(q, prev, params, kEverywhere);
            return Outcome{chk.worst, chk.witness};
        });
    }
}

// --- randomized families over the whole grid ------------------------------------

void Suite::global_cases(const std::vector<ClassParams>& params, const std::vector<TransformSpec>& specs) {
    if (params.empty() || specs.empty()) {
        return;
    }
    std::mt19937_64 rng(seed_for(opts_.seed, "global"));
    auto pick_params = [&] { return params[rng() % params.size()]; };
    auto pick_spec = [&](int max_n) {
        const auto& base = specs[rng() % specs.size()];
        TransformSpec s{base.j, base.sigma, static_cast<int>(rng() % static_cast<std::uint64_t>(max_n + 1))};
        while (!s.violation().empty()) {
            s.n -= 1;
        }
        return s;
    };

    for (int i = 0; i < opts_.oracle_cases; ++i) {
        const auto p = pick_params();
        auto s = pick_spec(3);
        if (s.n == 0) {
            s.n = s.with_n(1).violation().empty() ? 1 : 0;
        }
        const auto seed = rng();
        const complex z = random_point(rng, 0.9);
        if (s.n == 0) {
            skip("transform.quadrature_oracle", p, s, "no integral at level 0");
            continue;
        }
        record("transform.quadrature_oracle", p, s, {0.0, 1e-8}, [&] {
            // Order chosen so the multiplier side carries no visible truncation at |z| <= 0.9.
            const auto order = order_for_budget(p.coefficient_bound(), 0.9, 1e-12, opts_.order);
            auto [h, m] = random_pk_member(p, 2 + static_cast<int>(seed % 5U), seed, order);
            const complex q = phi_by_quadrature(s, h, z, 1e-10);
            const complex direct = eval(apply_phi(s, h), z);
            return Outcome{std::abs(q - direct), json{{"seed", seed}, {"z", complex_json(z)}}};
        });
    }

    for (int i = 0; i < opts_.identity_cases; ++i) {
        const auto p = pick_params();
        auto s = pick_spec(4);
        if (s.n == 0) {
            s.n = 1;
        }
        const auto seed = rng();
        if (!s.violation().empty()) {
            skip("transform.recurrence_random", p, s, s.violation());
            continue;
        }
        record("transform.recurrence_random", p, s, {0.0, 1e-12}, [&] {
            auto [h, m] = random_pk_member(p, 2 + static_cast<int>(seed % 5U), seed, opts_.order);
            return Outcome{recurrence_residual(s, h), json{{"seed", seed}}};
        });
    }

    for (int i = 0; i < opts_.identity_cases; ++i) {
        const auto p = pick_params();
        const auto s1 = pick_spec(4);
        auto s2 = pick_spec(4);
        s2.j = s1.j;
        while (!s2.violation().empty()) {
            s2.n -= 1;
        }
        const auto seed = rng();
        record("transform.commutation_random", p, s1, {0.0, 1e-15}, [&] {
            auto [h, m] = random_pk_member(p, 2 + static_cast<int>(seed % 5U), seed, opts_.order);
            return Outcome{commutation_residual(s1, s2, h), json{{"seed", seed}, {"partner", spec_json(s2)}}};
        });
    }

    for (int i = 0; i < opts_.f_cases; ++i) {
        const auto p = pick_params();
        const auto s = pick_spec(3);
        const double c = -0.5 + 4.0 * unit_uniform(rng);
        const double kappa = 0.6 + 2.0 * unit_uniform(rng);
        const auto seed = rng();
        record("transform.F_commutes", p, s, {0.0, 1e-15}, [&] {
            auto [h, m] = random_pk_member(p, 2 + static_cast<int>(seed % 5U), seed, opts_.order);
            const auto a = apply_F(c, kappa, apply_phi(s, h));
            const auto b = apply_phi(s, apply_F(c, kappa, h));
            return Outcome{max_coeff_distance(a, b), json{{"seed", seed}, {"c", c}, {"kappa", kappa}}};
        });
    }
}

void Suite::run(const Grid& grid) {
    series_cases();

    // Invalid axis values are reported once each and dropped.
    std::vector<double> ks;
    for (double k : grid.k) {
        if (auto v = ClassParams{k, 0.0}.violation(); !v.empty()) {
            skip("grid.entry", ClassParams{k, 0.0}, std::nullopt, v);
        } else {
            ks.push_back(k);
        }
    }
    std::vector<double> betas;
    for (double beta : grid.beta) {
        if (auto v = ClassParams{2.0, beta}.violation(); !v.empty()) {
            skip("grid.entry", ClassParams{2.0, beta}, std::nullopt, v);
        } else {
            betas.push_back(beta);
        }
    }
    std::vector<ClassParams> params;
    for (double k : ks) {
        for (double beta : betas) {
            params.push_back({k, beta});
        }
    }

    std::vector<int> js;
    for (int j : grid.j) {
        if (j != 1 && j != 2) {
            skip("grid.entry", ClassParams{}, std::nullopt, fmt::format("j = {} is not 1 or 2", j));
        } else {
            js.push_back(j);
        }
    }
    std::vector<double> sigmas;
    for (double sigma : grid.sigma) {
        if (auto v = TransformSpec{TransformKind::first, sigma, 0}.violation(); !v.empty()) {
            skip("grid.entry", ClassParams{}, TransformSpec{TransformKind::first, sigma, 0}, v);
        } else {
            sigmas.push_back(sigma);
        }
    }
    std::vector<int> ns;
    for (int n : grid.n) {
        if (auto v = TransformSpec{TransformKind::first, 1.0, n}.violation(); !v.empty()) {
            skip("grid.entry", ClassParams{}, TransformSpec{TransformKind::first, 1.0, n}, v);
        } else {
            ns.push_back(n);
        }
    }
    // j = 2 cells with sigma - (n - 1) <= 0 lie outside that family and are dropped silently.
    std::vector<TransformSpec> specs;
    for (int j : js) {
        for (double sigma : sigmas) {
            for (int n : ns) {
                const TransformSpec s{transform_kind(j), sigma, n};
                if (s.violation().empty()) {
                    specs.push_back(s);
                }
            }
        }
    }

    for (std::size_t i = 0; i < params.size(); ++i) {
        params_cases(params[i], i);
    }
    std::size_t cell = 0;
    for (const auto& p : params) {
        for (const auto& s : specs) {
            cell_cases(p, s, cell++);
        }
    }
    global_cases(params, specs);
}

std::vector<double> parse_numbers(std::string_view axis, std::string_view list) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        auto end = list.find(',', start);
        if (end == std::string_view::npos) {
            end = list.size();
        }
        auto item = list.substr(start, end - start);
        while (!item.empty() && item.front() == ' ') {
            item.remove_prefix(1);
        }
        while (!item.empty() && item.back() == ' ') {
            item.remove_suffix(1);
        }
        if (!item.empty()) {
            double v = 0.0;
            const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
            if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
                throw DomainError(fmt::format("grid: cannot parse '{}' on axis {}", item, axis));
            }
            out.push_back(v);
        }
        start = end + 1;
    }
    if (out.empty()) {
        throw DomainError(fmt::format("grid: axis {} is empty", axis));
    }
    return out;
}

std::vector<int> to_ints(std::string_view axis, const std::vector<double>& v) {
    std::vector<int> out;
    for (double x : v) {
        if (x != std::floor(x) || std::abs(x) > 1e6) {
            throw DomainError(fmt::format("grid: axis {} needs integers", axis));
        }
        out.push_back(static_cast<int>(x));
    }
    return out;
}

void set_axis(Grid& g, std::string_view axis, const std::vector<double>& values) {
    if (axis == "k") {
        g.k = values;
    } else if (axis == "beta") {
        g.beta = values;
    } else if (axis == "sigma") {
        g.sigma = values;
    } else if (axis == "n") {
        g.n = to_ints(axis, values);
    } else if (axis == "j") {
        g.j = to_ints(axis, values);
    } else {
        throw DomainError(fmt::format("grid: unknown axis '{}'", axis));
    }
}

}  // namespace

std::string_view to_string(CaseStatus s) {
    switch (s) {
        case CaseStatus::pass:
            return "pass";
        case CaseStatus::fail:
            return "fail";
        case CaseStatus::skipped:
            return "skipped";
    }
    return "fail";
}

CaseStatus case_status_from_string(std::string_view s) {
    if (s == "pass") {
        return CaseStatus::pass;
    }
    if (s == "fail") {
        return CaseStatus::fail;
    }
    if (s == "skipped") {
        return CaseStatus::skipped;
    }
    throw FormatError("unknown case status");
}

json case_to_json(const VerificationCase& c) {
    json j{{"name", c.name},
           {"params", params_json(c.params)},
           {"spec", c.spec ? spec_json(*c.spec) : json(nullptr)},
           {"tolerance", c.tolerance},
           {"status", to_string(c.status)},
           {"measured", std::isfinite(c.measured) ? json(c.measured) : json(nullptr)},
           {"detail", c.detail}};
    if (c.witness) {
        j["witness"] = *c.witness;
    }
    return j;
}

VerificationCase case_from_json(const json& j) {
    try {
        VerificationCase c;
        c.name = j.at("name").get<std::string>();
        c.params = {j.at("params").at("k").get<double>(), j.at("params").at("beta").get<double>()};
        if (!j.at("spec").is_null()) {
            const auto& s = j.at("spec");
            c.spec = TransformSpec{transform_kind(s.at("j").get<int>()), s.at("sigma").get<double>(),
                                   s.at("n").get<int>()};
        }
        c.tolerance = j.at("tolerance").get<double>();
        c.status = case_status_from_string(j.at("status").get<std::string>());
        c.measured = j.at("measured").is_null() ? std::numeric_limits<double>::infinity()
                                                : j.at("measured").get<double>();
        c.detail = j.value("detail", "");
        if (j.contains("witness")) {
            c.witness = j.at("witness");
        }
        if (c.status == CaseStatus::fail && !c.witness) {
            throw FormatError("failed case without witness");
        }
        return c;
    } catch (const json::exception& e) {
        throw FormatError(e.what());
    }
}

Grid parse_grid(std::string_view text) {
    Grid g;
    std::size_t start = 0;
    bool any = false;
    while (start <= text.size()) {
        auto end = text.find(';', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const auto part = text.substr(start, end - start);
        start = end + 1;
        if (part.find_first_not_of(' ') == std::string_view::npos) {
            continue;
        }
        const auto eq = part.find('=');
        if (eq == std::string_view::npos) {
            throw DomainError(fmt::format("grid: expected axis=values, got '{}'", part));
        }
        auto axis = part.substr(0, eq);
        while (!axis.empty() && axis.front() == ' ') {
            axis.remove_prefix(1);
        }
        while (!axis.empty() && axis.back() == ' ') {
            axis.remove_suffix(1);
        }
        set_axis(g, axis, parse_numbers(axis, part.substr(eq + 1)));
        any = true;
    }
    if (!any) {
        throw DomainError("grid: empty grid");
    }
    return g;
}

Grid grid_from_json(const json& j) {
    if (!j.is_object() || j.empty()) {
        throw DomainError("grid: empty grid");
    }
    Grid g;
    for (const auto& [axis, values] : j.items()) {
        if (!values.is_array() || values.empty()) {
            throw DomainError(fmt::format("grid: axis {} is empty", axis));
        }
        std::vector<double> v;
        for (const auto& x : values) {
            if (!x.is_number()) {
                throw DomainError(fmt::format("grid: axis {} holds a non-number", axis));
            }
            v.push_back(x.get<double>());
        }
        set_axis(g, axis, v);
    }
    return g;
}

std::vector<VerificationCase> run_suite(const Grid& grid, const SuiteOptions& opts) {
    if (grid.k.empty() || grid.beta.empty() || grid.sigma.empty() || grid.n.empty() || grid.j.empty()) {
        throw DomainError("run_suite: empty grid");
    }
    if (opts.order < 8) {
        throw DomainError("run_suite: order must be >= 8");
    }
    Suite suite(opts);
    suite.run(grid);
    auto cases = suite.take();
    std::stable_sort(cases.begin(), cases.end(),
                     [](const VerificationCase& a, const VerificationCase& b) { return a.name < b.name; });
    return cases;
}

bool any_failed(const std::vector<VerificationCase>& cases) {
    return std::any_of(cases.begin(), cases.end(),
                       [](const VerificationCase& c) { return c.status == CaseStatus::fail; });
}

void write_report(std::ostream& out, const std::vector<VerificationCase>& cases) {
    for (const auto& c : cases) {
        out << case_to_json(c).dump() << '\n';
    }
}

void write_summary(std::ostream& out, const std::vector<VerificationCase>& cases) {
    struct Row {
        int pass = 0;
        int fail = 0;
        int skipped = 0;
        double worst_ratio = 0.0;
    };
    std::map<std::string, Row> rows;
    for (const auto& c : cases) {
        auto& r = rows[c.name];
        switch (c.status) {
            case CaseStatus::pass:
                ++r.pass;
                break;
            case CaseStatus::fail:
                ++r.fail;
                break;
            case CaseStatus::skipped:
                ++r.skipped;
                break;
        }
        if (c.status != CaseStatus::skipped && c.tolerance > 0.0) {
            const double ratio = std::isfinite(c.measured) ? c.measured / c.tolerance
                                                           : std::numeric_limits<double>::infinity();
            r.worst_ratio = std::max(r.worst_ratio, ratio);
        }
    }
    out << fmt::format("{:<36} {:>6} {:>6} {:>8} {:>12}\n", "family", "pass", "fail", "skipped",
                       "worst/tol");
    int pass = 0;
    int fail = 0;
    int skipped = 0;
    for (const auto& [name, r] : rows) {
        out << fmt::format("{:<36} {:>6} {:>6} {:>8} {:>12.3e}\n", name, r.pass, r.fail, r.skipped,
                           r.worst_ratio);
        pass += r.pass;
        fail += r.fail;
        skipped += r.skipped;
    }
    out << fmt::format("{:<36} {:>6} {:>6} {:>8}\n", "total", pass, fail, skipped);
}

std::vector<ScanRow> sharpness_scan(const ClassParams& params, const TransformSpec& spec,
                                    const std::vector<double>& radii) {
    params.validate();
    spec.validate();
    const double rate = params.coefficient_bound();
    const double cf = radius_closed_form(params);
    std::vector<ScanRow> rows;
    for (double r : radii) {
        if (!(r >= 0.0 && r <= kSampleRadius)) {
            throw DomainError("sharpness_scan: radii must lie in [0, 0.95]");
        }
        const auto g = apply_phi(spec, extremal_H(params, order_for_budget(rate, r, 1e-13, kDefaultOrder)));
        ScanRow row;
        row.r = r;
        row.bound = transformed_lower_bound(spec, params, r);
        row.value_at_H = eval(g, r).real();
        row.gap = std::abs(row.value_at_H - row.bound);
        row.min_re = min_re_on_circle(g, r);
        row.sign = (row.min_re > 0.0) - (row.min_re < 0.0);
        row.inside = r < cf;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace bbr
