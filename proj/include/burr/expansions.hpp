#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "burr/distributions.hpp"
#include "burr/numeric.hpp"

namespace burr {

/// Which quantity the expansion approximates: the quantile itself, or the
/// gap uep - F^{-1}(1-u) for the finite-endpoint members I, IV, V, XI.
enum class Frame { direct, upper_endpoint_gap };

enum class RemainderKind {
    power_of_u,
    power_of_log_reciprocal,
    power_of_loglog_reciprocal,
    power_of_u_over_log,
};

struct RemainderOrder {
    RemainderKind kind;
    double exponent;
    bool relative;  // remainder stated relative to the leading term
    bool exact;     // expansion has no remainder at all (Burr I)
};

struct ExpansionResult {
    double u;
    Frame frame;
    double value;       // leading + correction
    double leading;
    double correction;
    RemainderOrder remainder_spec;
};

/// Constants of the Burr XI upper-gap expansion, resolved by a numeric fit
/// of (1-F(1-t))/t^3 as t -> 0 together with the two printed candidates.
struct XiConstants {
    double alpha;            // fitted
    double beta;             // fitted
    double alpha_candidate_a;  // (2 pi)^2 / (6 r)
    double alpha_candidate_b;  // r (2 pi)^2 / 6
    double beta_candidate_a;   // -(2 pi)^4 / (120 r)
    double beta_candidate_b;   // -r (2 pi)^4 / 120
};

/// Three-point fit of 1-F(1-t) = alpha t^3 + beta t^5 + gamma t^6 + ...
inline XiConstants fit_xi_constants(double r) {
    const long double t0 = 1e-2L;
    const long double ts[3] = {t0, t0 / 2.0L, t0 / 4.0L};
    long double g[3];
    for (int i = 0; i < 3; ++i) {
        const long double sv = -std::expm1(r * std::log1p(-tail::xi_g(ts[i])));
        g[i] = sv / (ts[i] * ts[i] * ts[i]);
    }
    // solve g_i = alpha + beta t_i^2 + gamma t_i^3 exactly
    long double M[3][4];
    for (int i = 0; i < 3; ++i) {
        M[i][0] = 1.0L;
        M[i][1] = ts[i] * ts[i];
        M[i][2] = ts[i] * ts[i] * ts[i];
        M[i][3] = g[i];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::abs(M[row][col]) > std::abs(M[piv][col])) piv = row;
        for (int j = 0; j < 4; ++j) std::swap(M[piv][j], M[col][j]);
        for (int row = 0; row < 3; ++row) {
            if (row == col) continue;
            const long double f = M[row][col] / M[col][col];
            for (int j = col; j < 4; ++j) M[row][j] -= f * M[col][j];
        }
    }
    const double alpha = static_cast<double>(M[0][3] / M[0][0]);
    const double beta = static_cast<double>(M[1][3] / M[1][1]);
    const double c2 = 4.0 * detail::pi * detail::pi;
    return XiConstants{alpha, beta, c2 / (6.0 * r), r * c2 / 6.0,
                       -c2 * c2 / (120.0 * r), -r * c2 * c2 / 120.0};
}

inline RemainderOrder remainder_spec(Member m, const Params& P) {
    switch (m) {
        case Member::I: return {RemainderKind::power_of_u, 0.0, false, true};
        case Member::II: return {RemainderKind::power_of_u, 2.0, false, false};
        case Member::III: return {RemainderKind::power_of_u, 2.0, true, false};
        case Member::IV: return {RemainderKind::power_of_u, 2.0, true, false};
        case Member::V: return {RemainderKind::power_of_log_reciprocal, 5.0, false, false};
        case Member::VI: return {RemainderKind::power_of_loglog_reciprocal, 3.0, false, false};
        case Member::VII: return {RemainderKind::power_of_u, 2.0, false, false};
        case Member::VIII: return {RemainderKind::power_of_u, 2.0, false, false};
        case Member::IX:
            return {RemainderKind::power_of_u, P.r <= 0.5 ? 2.0 : 1.0 / P.r, false, false};
        case Member::X: return {RemainderKind::power_of_u_over_log, 2.0, true, false};
        case Member::XI: return {RemainderKind::power_of_u, 4.0 / 9.0, true, false};
        case Member::XII: return {RemainderKind::power_of_u, 3.0 / P.r, true, false};
        case Member::Xa: return {RemainderKind::power_of_u_over_log, 2.0, true, false};
        default:
            throw unsupported_member_error("no tail expansion for member " +
                                           std::string(member_name(m)));
    }
}

inline Frame expansion_frame(Member m) {
    switch (m) {
        case Member::I:
        case Member::IV:
        case Member::V:
        case Member::XI:
            return Frame::upper_endpoint_gap;
        default:
            return Frame::direct;
    }
}

namespace detail {

struct TermsLD {
    long double leading;
    long double correction;
};

inline TermsLD expansion_terms_ld(const Distribution& dist, long double u) {
    const auto& P = dist.params();
    const long double r = P.r;
    const long double L0 = -std::log(u);
    switch (dist.member()) {
        case Member::I: return {u, 0.0L};
        case Member::II:
            return {std::log(r) + L0, -(r + 1.0L) / (2.0L * r) * u};
        case Member::III: {
            const long double lead = std::exp((std::log(r) + L0) / P.k);
            return {lead, lead * (-(r + 1.0L) / (2.0L * P.k * r) * u)};
        }
        case Member::IV: {
            const long double lead =
                P.c * std::exp(P.c * (std::log(u) - std::log(r)));
            return {lead, lead * (P.c * (r + 1.0L) / (2.0L * r) * u)};
        }
        case Member::V: {
            const long double L = std::log(P.k * r) + L0;
            if (L <= 0.0L)
                throw domain_error("Burr V expansion needs log(kr/u) > 0");
            return {1.0L / L, -1.0L / (3.0L * L * L * L)};
        }
        case Member::VI: {
            const long double L = std::log(P.k * r) + L0;
            if (L <= 0.0L)
                throw domain_error("Burr VI expansion needs log(kr/u) > 0");
            return {std::numbers::ln2_v<long double> + std::log(L),
                    1.0L / (4.0L * L * L)};
        }
        case Member::VII:
            return {0.5L * std::log(r) + 0.5L * L0, -(1.0L + r) / (4.0L * r) * u};
        case Member::VIII:
            return {std::log(2.0L * r / std::numbers::pi_v<long double>) + L0,
                    (1.0L - r) / (2.0L * r) * u};
        case Member::IX:
            return {(std::numbers::ln2_v<long double> - std::log((long double)P.k) + L0) / r,
                    -(2.0L - P.k) / (2.0L * r) * u};
        case Member::X: {
            const long double lead = std::sqrt(L0);
            return {lead, -(r + 1.0L) / (4.0L * r) * u / std::sqrt(L0)};
        }
        case Member::XI: {
            // gap = (u/a)^{1/3} (1 - (b/3a)(u/a)^{2/3} + ...), a and b from
            // the survival fit; the (u/a)^{2/3} factor is what direct series
            // inversion of u = a t^3 + b t^5 + ... produces
            const XiConstants xc = fit_xi_constants(P.r);
            const long double a = xc.alpha, b = xc.beta;
            const long double lead = std::exp((std::log(u) - std::log(a)) / 3.0L);
            return {lead, lead * (-(b / (3.0L * a)) *
                                  std::exp(2.0L / 3.0L * (std::log(u) - std::log(a))))};
        }
        case Member::XII: {
            const long double lead = std::exp(-std::log(u) / (r * P.c));
            const long double u1r = std::exp(std::log(u) / r);
            return {lead, lead * (-u1r / P.c +
                                  (1.0L - P.c) / (2.0L * P.c * P.c) * u1r * u1r)};
        }
        case Member::Xa: {
            const long double lead = std::sqrt(L0);
            return {lead, (1.0L - r) / (4.0L * r) * u / std::sqrt(L0)};
        }
        default:
            throw unsupported_member_error("no tail expansion for member " +
                                           std::string(member_name(dist.member())));
    }
}

inline void check_expansion_domain(const Distribution& dist, double u, double u0) {
    double limit = u0;
    if (dist.member() == Member::VI) limit = std::min(limit, 1.0 / std::numbers::e);
    if (!(u > 0.0 && u < limit))
        throw domain_error("expansion level u outside validity range (0, " +
                           std::to_string(limit) + ")");
}

} // namespace detail

inline ExpansionResult expand_quantile(const Distribution& dist, double u, double u0 = 0.1) {
    detail::check_expansion_domain(dist, u, u0);
    const auto t = detail::expansion_terms_ld(dist, u);
    ExpansionResult res;
    res.u = u;
    res.frame = expansion_frame(dist.member());
    res.leading = static_cast<double>(t.leading);
    res.correction = static_cast<double>(t.correction);
    res.value = res.leading + res.correction;
    res.remainder_spec = remainder_spec(dist.member(), dist.params());
    return res;
}

/// Exact quantity minus the two-term expansion, in the expansion's frame.
/// Evaluated in extended precision: remainders reach 1e-14 on the fit grids.
inline long double remainder_ld(const Distribution& dist, long double u, double u0 = 0.1) {
    detail::check_expansion_domain(dist, static_cast<double>(u), u0);
    const long double w = -std::log(u);
    const auto t = detail::expansion_terms_ld(dist, u);
    const long double expansion = t.leading + t.correction;
    long double exact;
    if (expansion_frame(dist.member()) == Frame::upper_endpoint_gap)
        exact = dist.tail_gap_ld(w);
    else
        exact = dist.tail_value_ld(w);
    return exact - expansion;
}

inline double remainder(const Distribution& dist, double u, double u0 = 0.1) {
    return static_cast<double>(remainder_ld(dist, u, u0));
}

struct RemainderFit {
    bool exact;       // remainders vanish identically; no order to fit
    double exponent;  // fitted slope when not exact
};

/// Log-log least-squares slope of |remainder| against the remainder kind's
/// scale variable; relative kinds divide by the leading term first.
inline RemainderFit fit_remainder_order(const Distribution& dist,
                                        std::span<const double> u_grid, double u0 = 0.1) {
    if (u_grid.size() < 5)
        throw domain_error("fit_remainder_order: need a grid of at least 5 points");
    const RemainderOrder spec = remainder_spec(dist.member(), dist.params());
    if (spec.exact) return {true, 0.0};
    std::vector<double> xs, ys;
    for (double u : u_grid) {
        long double rem = remainder_ld(dist, u, u0);
        const auto t = detail::expansion_terms_ld(dist, u);
        // below extended-precision round-off of the exact branch: exact case
        if (std::abs(rem) < 1e-17L * std::abs(t.leading)) continue;
        if (spec.relative) rem /= t.leading;
        double x;
        switch (spec.kind) {
            case RemainderKind::power_of_u:
            case RemainderKind::power_of_u_over_log:
                x = std::log(u);
                break;
            case RemainderKind::power_of_log_reciprocal:
                x = -std::log(-std::log(u));
                break;
            case RemainderKind::power_of_loglog_reciprocal:
                x = -std::log(std::log(-std::log(u)));
                break;
            default:
                throw numeric_error("unknown remainder kind");
        }
        xs.push_back(x);
        ys.push_back(static_cast<double>(std::log(std::abs(rem))));
    }
    if (xs.size() < u_grid.size() / 2 + 1) return {true, 0.0};
    return {false, num::slope_fit(xs, ys)};
}

} // namespace burr
