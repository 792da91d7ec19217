#pragma once

// Members of P(beta) and P_k(beta) built from finitely many Herglotz atoms.
//
// Conventions: a measure m has total mass sum w_i = 2 and total variation
// sum |w_i| <= k, and
//
//   h(z) = 1/2 sum_i w_i (1 + (1 - 2 beta) z e^{-i s_i}) / (1 - z e^{-i s_i}),
//
// so that splitting m into positive and negative parts gives
// h = (k+2)/4 p - (k-2)/4 q with p, q in P(beta) when sum |w_i| = k.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bbr/series.hpp"

namespace bbr {

/// Rotation bound k >= 2 and real-part floor beta in [0, 1).
struct ClassParams {
    double k = 2.0;
    double beta = 0.0;

    /// Throws DomainError naming the violated bound.
    void validate() const;
    /// Empty when valid, otherwise the reason.
    [[nodiscard]] std::string violation() const;
    /// B = k (1 - beta): bound on every coefficient of a member.
    [[nodiscard]] double coefficient_bound() const { return k * (1.0 - beta); }

    friend bool operator==(const ClassParams&, const ClassParams&) = default;
};

struct Atom {
    double s = 0.0;  // angle in [0, 2 pi)
    double w = 0.0;  // signed weight

    friend bool operator==(const Atom&, const Atom&) = default;
};

class AtomicMeasure {
public:
    AtomicMeasure() = default;
    /// Angles are reduced to [0, 2 pi). Throws DomainError unless the total
    /// mass is 2 within 1e-12.
    explicit AtomicMeasure(std::vector<Atom> atoms);

    [[nodiscard]] const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    [[nodiscard]] double total_mass() const noexcept;
    [[nodiscard]] double total_variation() const noexcept;
    [[nodiscard]] double positive_mass() const noexcept;
    [[nodiscard]] double negative_mass() const noexcept;  // >= 0
    [[nodiscard]] bool admissible_for(const ClassParams& params) const noexcept;

    /// Normalized positive / negative parts (each of mass 2), i.e. the Herglotz
    /// measures of p and q in h = a/2 p - b/2 q. The negative part is empty
    /// when the measure has no negative atoms.
    [[nodiscard]] std::vector<Atom> positive_part_normalized() const;
    [[nodiscard]] std::vector<Atom> negative_part_normalized() const;

private:
    std::vector<Atom> atoms_;
};

[[nodiscard]] double canonical_angle(double s);

/// 1 + 2 (1 - beta) sum_{l>=1} e^{-i l s} z^l, tail rate 2 (1 - beta).
[[nodiscard]] TruncatedSeries mobius_kernel(double beta, double s, std::size_t order);

/// 1/2 sum_i w_i kernel(s_i). Constant term is exactly 1; tail rate is the
/// total variation times (1 - beta).
[[nodiscard]] TruncatedSeries herglotz_series(const AtomicMeasure& m, double beta,
                                              std::size_t order);
/// Same from raw atoms (not required to be a measure of mass 2); used for the
/// positive/negative parts.
[[nodiscard]] TruncatedSeries herglotz_series(const std::vector<Atom>& atoms, double beta,
                                              std::size_t order);

/// H(z) = (k+2)/4 L(-z) - (k-2)/4 L(z), L(z) = beta + (1 - beta)(1 + z)/(1 - z).
/// Coefficients: 1, then -k(1-beta) at odd l and 2(1-beta) at even l.
[[nodiscard]] TruncatedSeries extremal_H(const ClassParams& params, std::size_t order);

/// The two atoms (pi, (k+2)/2) and (0, -(k-2)/2) whose Herglotz series is H.
[[nodiscard]] AtomicMeasure extremal_measure(const ClassParams& params);

/// (k+2)/4 p - (k-2)/4 q.
[[nodiscard]] TruncatedSeries compose_pk(const TruncatedSeries& p, const TruncatedSeries& q,
                                         const ClassParams& params);

/// Seeded random member: positive mass 2 + M and negative mass M with
/// M = t (k-2)/2, t uniform in [0, 1], spread over random angles.
/// The first ceil(n/2) atoms are positive, the rest negative (all positive
/// when k == 2 or n_atoms == 1). Bit-reproducible for a given seed.
[[nodiscard]] std::pair<TruncatedSeries, AtomicMeasure>
random_pk_member(const ClassParams& params, int n_atoms, std::uint64_t seed, std::size_t order);

/// A single-signed member of P(beta): all weights positive.
[[nodiscard]] std::pair<TruncatedSeries, AtomicMeasure>
random_p_member(double beta, int n_atoms, std::uint64_t seed, std::size_t order);

}  // namespace bbr
