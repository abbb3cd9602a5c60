#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "burr/distributions.hpp"
#include "burr/numeric.hpp"

namespace burr {

enum class Transform { none, log_scale };

/// Extreme-value classification: index gamma, upper endpoint, and whether
/// the classification describes exp(X) (log_scale) rather than X itself.
struct DomainClass {
    double gamma;
    double uep;
    Transform transform;
};

inline DomainClass classify(const Distribution& dist) {
    const auto& P = dist.params();
    switch (dist.member()) {
        case Member::I: return {-1.0, 1.0, Transform::none};
        case Member::II: return {1.0, detail::inf, Transform::log_scale};
        case Member::III: return {1.0 / P.k, detail::inf, Transform::none};
        case Member::IV: return {-P.c, P.c, Transform::none};
        case Member::V: return {0.0, detail::pi / 2.0, Transform::none};
        case Member::VI: return {0.0, detail::inf, Transform::none};
        case Member::VII: return {0.5, detail::inf, Transform::log_scale};
        case Member::VIII: return {1.0, detail::inf, Transform::log_scale};
        case Member::IX: return {1.0 / P.r, detail::inf, Transform::log_scale};
        case Member::X: return {0.0, detail::inf, Transform::none};
        case Member::XI: return {-1.0 / 3.0, 1.0, Transform::none};
        case Member::XII: return {1.0 / (P.r * P.c), detail::inf, Transform::none};
        case Member::Xa: return {0.0, detail::inf, Transform::none};
        // related laws: Pareto-type tails
        case Member::SinghMaddala: return {1.0 / (P.r * P.c), detail::inf, Transform::none};
        case Member::Dagum: return {1.0 / P.b, detail::inf, Transform::none};
        case Member::ToppLeoneDagum: return {1.0 / (P.b * P.d), detail::inf, Transform::none};
    }
    throw unsupported_member_error("classify: unknown member");
}

/// GEV CDF H_gamma(x) = exp(-(1+gamma x)^{-1/gamma}); Gumbel exp(-e^{-x})
/// at gamma = 0, reached continuously.
inline double gev_cdf(double gamma, double x) {
    if (!std::isfinite(x)) throw domain_error("gev_cdf: x must be finite");
    if (gamma == 0.0) return std::exp(-std::exp(-x));
    const double t = 1.0 + gamma * x;
    if (t <= 0.0) return gamma > 0.0 ? 0.0 : 1.0;
    return std::exp(-std::exp(-std::log1p(gamma * x) / gamma));
}

enum class ProbeKind {
    heavy_tail_ratio,          // quantile ratio -> lambda^{-gamma}
    endpoint_gap_ratio,        // gap ratio -> lambda^{-gamma}
    log_transform_ratio,       // exp(X) route through quantile differences
    slow_variation_double_ratio,  // Gumbel double ratio -> log lambda / log mu
};

struct ProbeResult {
    ProbeKind kind;
    double reference;               // gamma, or log(lambda)/log(mu) for the double ratio
    std::vector<double> estimates;  // one per grid point
};

/// Numeric limit probes for the domain classification.  For gamma != 0 the
/// estimates approximate gamma directly; for the Gumbel members the double
/// ratio (fixed mu) is returned and should approach log(lambda)/log(mu).
inline ProbeResult probe_gamma(const Distribution& dist, double lambda,
                               std::span<const double> u_grid, double mu = 4.0) {
    if (!(lambda > 0.0) || lambda == 1.0)
        throw domain_error("probe_gamma: lambda must be positive and != 1");
    const DomainClass dc = classify(dist);
    ProbeResult res;
    const double ll = std::log(lambda);
    auto upper_q = [&](double u) {
        return static_cast<double>(dist.tail_value_ld(-std::log(u)));
    };
    if (dc.transform == Transform::log_scale) {
        res.kind = ProbeKind::log_transform_ratio;
        res.reference = dc.gamma;
        for (double u : u_grid)
            res.estimates.push_back(-(upper_q(lambda * u) - upper_q(u)) / ll);
    } else if (dc.gamma > 0.0) {
        res.kind = ProbeKind::heavy_tail_ratio;
        res.reference = dc.gamma;
        for (double u : u_grid) {
            const double lr = static_cast<double>(dist.tail_log_value_ld(-std::log(lambda * u)) -
                                                  dist.tail_log_value_ld(-std::log(u)));
            res.estimates.push_back(-lr / ll);
        }
    } else if (dc.gamma < 0.0) {
        res.kind = ProbeKind::endpoint_gap_ratio;
        res.reference = dc.gamma;
        for (double u : u_grid) {
            const long double g1 = dist.tail_gap_ld(-std::log(lambda * u));
            const long double g0 = dist.tail_gap_ld(-std::log(u));
            res.estimates.push_back(-static_cast<double>(std::log(g1 / g0)) / ll);
        }
    } else {
        if (!(mu > 0.0) || mu == 1.0 || mu == lambda)
            throw domain_error("probe_gamma: mu must be positive, != 1 and != lambda");
        res.kind = ProbeKind::slow_variation_double_ratio;
        res.reference = ll / std::log(mu);
        for (double u : u_grid) {
            const double q0 = upper_q(u);
            res.estimates.push_back((upper_q(lambda * u) - q0) / (upper_q(mu * u) - q0));
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Auxiliary functions s(u) and b(u)

namespace detail {

inline bool gumbel_quartet(Member m) {
    return m == Member::V || m == Member::VI || m == Member::X || m == Member::Xa;
}

} // namespace detail

/// de Haan auxiliary s(u) = -u d/du F^{-1}(1-u) for the Gumbel members
/// V, VI, X, Xa, parameterized by w = -log u so it stays evaluable at
/// u = e^{-n} for large n.  Uses d(u) = exp(-delta) identities:
///   s_V  = eps d / (1 + Y^2),      s_VI = eps d / sqrt(1 + Y^2),
///   s_X  = eps d / (2 sqrt(Y)),    s_Xa = eps_a d_a / (2 sqrt(Y_a)).
inline long double aux_s_log_tail(const Distribution& dist, long double w) {
    const auto& P = dist.params();
    const long double r = P.r;
    const auto core = tail::make_core(w, r);
    const long double u = core.u;
    switch (dist.member()) {
        case Member::V: {
            const long double eps = std::exp(-((r + 1.0L) / r) * std::log1p(-u));
            const long double d = std::exp(-core.delta_b);
            const long double Y = w + std::log((long double)P.k * r) - core.delta_b;
            return eps * d / (1.0L + Y * Y);
        }
        case Member::VI: {
            const long double eps = std::exp(-((r + 1.0L) / r) * std::log1p(-u));
            const long double d = std::exp(-core.delta_b);
            const long double Y = w + std::log((long double)P.k * r) - core.delta_b;
            return eps * d / std::sqrt(1.0L + Y * Y);
        }
        case Member::X: {
            const long double eps = std::exp(-((r + 1.0L) / r) * std::log1p(-u));
            const long double d = std::exp(-core.delta_b);
            const long double Y = w + std::log(r) - core.delta_b;
            if (Y <= 0.0L) throw domain_error("aux_s: below the Burr X plateau");
            return eps * d / (2.0L * std::sqrt(Y));
        }
        case Member::Xa: {
            const long double eps = std::exp(((1.0L - r) / r) * std::log1p(-u));
            const long double d = std::exp(-core.delta_bpp);
            const long double Y = w + std::log(r) - core.delta_bpp;
            return eps * d / (2.0L * std::sqrt(Y));
        }
        default:
            throw unsupported_member_error(
                "aux_s is defined for the Gumbel members V, VI, X, Xa only");
    }
}

inline double aux_s(const Distribution& dist, double u) {
    if (!(u > 0.0 && u < 1.0)) throw domain_error("aux_s: u must be in (0,1)");
    return static_cast<double>(aux_s_log_tail(dist, -std::log(static_cast<long double>(u))));
}

/// Karamata perturbation b(u) for members with gamma != 0 (after the log
/// transform where applicable); b(u) -> 0 as u -> 0.
inline double aux_b(const Distribution& dist, double u) {
    if (!(u > 0.0 && u < 1.0)) throw domain_error("aux_b: u must be in (0,1)");
    const DomainClass dc = classify(dist);
    if (dc.gamma == 0.0 && dc.transform == Transform::none)
        throw unsupported_member_error("aux_b needs gamma != 0 (possibly after log transform)");
    const double q = static_cast<double>(dist.tail_value_ld(-std::log(static_cast<long double>(u))));
    const double f = dist.pdf(q);
    if (dc.transform == Transform::log_scale) return u / f - dc.gamma;
    if (dc.gamma > 0.0) return u / (f * q) - dc.gamma;
    return -dc.gamma - u / (f * (dc.uep - q));
}

// ---------------------------------------------------------------------------
// Mean excess function

/// R(x,F) = E[X - x | X > x]: adaptive quadrature of the survival tail
/// divided by the survival at x; infinite endpoints handled through the
/// substitution y = x + t/(1-t).
inline double mean_excess(const Distribution& dist, double x) {
    if (!std::isfinite(x)) throw domain_error("mean_excess: x must be finite");
    const Support sp = dist.support();
    if (!(x > sp.lep && x < sp.uep))
        throw domain_error("mean_excess: x must be interior to the support");
    const DomainClass dc = classify(dist);
    if (dc.transform == Transform::none && dc.gamma >= 1.0)
        throw numeric_error("mean_excess diverges: tail index gamma >= 1");
    const double sx = dist.survival(x);
    if (sx <= 0.0) throw numeric_error("mean_excess: vanishing survival at x");
    boost::math::quadrature::tanh_sinh<double> integrator;
    double integral;
    if (std::isfinite(sp.uep)) {
        integral = integrator.integrate([&](double y) { return dist.survival(y); }, x, sp.uep,
                                        1e-9);
    } else {
        integral = integrator.integrate(
            [&](double t) {
                const double om = 1.0 - t;
                return dist.survival(x + t / om) / (om * om);
            },
            0.0, 1.0, 1e-9);
    }
    return integral / sx;
}

/// The (Hb) sequence sqrt(n) s(e^{-n}); tends to 0 for the Gumbel members.
inline std::vector<double> hb_limit(const Distribution& dist,
                                    std::span<const long long> n_grid) {
    if (!detail::gumbel_quartet(dist.member()))
        throw unsupported_member_error("hb_limit is defined for members V, VI, X, Xa only");
    std::vector<double> out;
    out.reserve(n_grid.size());
    for (long long n : n_grid)
        out.push_back(std::sqrt(static_cast<double>(n)) *
                      static_cast<double>(aux_s_log_tail(dist, static_cast<long double>(n))));
    return out;
}

} // namespace burr
