#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include "burr/distributions.hpp"
#include "burr/evt.hpp"
#include "burr/expansions.hpp"
#include "burr/numeric.hpp"
#include "burr/records.hpp"

namespace burr {

enum class Variant { canonical, alternative };

enum class LawShape { normal, log_of_variable_is_normal };

/// Limit law of the standardized n-th record, stated in the normal frame
/// (log-frame laws are tested on logarithms).
struct LawSpec {
    LawShape shape;
    double mean;
    double variance;
};

inline LawSpec target_law(const Distribution& dist, Variant variant = Variant::canonical) {
    if (variant == Variant::alternative) return {LawShape::normal, 0.0, 1.0};
    const auto& P = dist.params();
    switch (dist.member()) {
        case Member::I: return {LawShape::log_of_variable_is_normal, 0.0, 1.0};
        case Member::II: return {LawShape::normal, 0.0, 1.0};
        case Member::III:
            return {LawShape::log_of_variable_is_normal, 0.0, 1.0 / (P.k * P.k)};
        case Member::IV: return {LawShape::log_of_variable_is_normal, 0.0, P.c * P.c};
        case Member::V: return {LawShape::normal, 0.0, 1.0};
        case Member::VI: return {LawShape::normal, 0.0, 1.0};
        case Member::VII: return {LawShape::normal, 0.0, 0.25};
        case Member::VIII: return {LawShape::normal, 0.0, 1.0};
        case Member::IX: return {LawShape::normal, 0.0, 1.0 / (P.r * P.r)};
        case Member::X: return {LawShape::normal, 0.0, 0.25};
        case Member::XI: return {LawShape::log_of_variable_is_normal, 0.0, 1.0 / 9.0};
        case Member::XII:
            return {LawShape::log_of_variable_is_normal, 0.0, 1.0 / (P.r * P.c * P.r * P.c)};
        case Member::Xa: return {LawShape::normal, 0.0, 0.25};
        default:
            throw unsupported_member_error("no record limit law for member " +
                                           std::string(member_name(dist.member())));
    }
}

/// Coefficient of S_n^* in the normal-frame statistic.
inline double gamma_eff(const Distribution& dist, Variant variant = Variant::canonical) {
    if (variant == Variant::alternative) {
        if (!detail::gumbel_quartet(dist.member()))
            throw unsupported_member_error("alternative statistic exists for V, VI, X, Xa only");
        return 1.0;
    }
    const auto& P = dist.params();
    switch (dist.member()) {
        case Member::I: return -1.0;
        case Member::II: return 1.0;
        case Member::III: return 1.0 / P.k;
        case Member::IV: return -P.c;
        case Member::V: return -1.0;
        case Member::VI: return 1.0;
        case Member::VII: return 0.5;
        case Member::VIII: return 1.0;
        case Member::IX: return 1.0 / P.r;
        case Member::X: return 0.5;
        case Member::XI: return -1.0 / 3.0;
        case Member::XII: return 1.0 / (P.r * P.c);
        case Member::Xa: return 0.5;
        default:
            throw unsupported_member_error("no record statistic for member " +
                                           std::string(member_name(dist.member())));
    }
}

namespace detail {

using LD = long double;

inline LD phi_atan_series(LD Y) {
    // log(Y atan(1/Y)) for Y > 0
    if (Y < 4.0L) return std::log1p(Y * std::atan(1.0L / Y) - 1.0L);
    const LD iy2 = 1.0L / (Y * Y);
    const LD inner = iy2 * (-1.0L / 3.0L + iy2 * (1.0L / 5.0L - iy2 / 7.0L));
    return std::log1p(inner);
}

/// stat - gamma_eff * s_star for the canonical statistics, as an exact
/// function of (w, n) carried in long double: the residuals reach e^{-w}
/// scales far below double range at n = 1e4.
inline LD canonical_residual(const Distribution& dist, LD w, std::int64_t n) {
    const auto& P = dist.params();
    const LD r = P.r;
    const LD nd = static_cast<LD>(n);
    const LD sqn = std::sqrt(nd);
    const auto core = tail::make_core(w, r);
    switch (dist.member()) {
        case Member::I: return 0.0L;
        case Member::II: return (std::log(r) - core.delta_b) / sqn;
        case Member::III: return -core.delta_b / (P.k * sqn);
        case Member::IV: {
            const LD logB = -w - std::log(r) + core.delta_b;
            const LD Bc = std::exp(P.c * logB);
            return (P.c * core.delta_b - std::log1p(Bc)) / sqn;
        }
        case Member::V: {
            const LD Y = w + std::log((LD)P.k * r) - core.delta_b;
            const LD sstar = (w - nd) / sqn;
            if (Y <= 0.25L) {
                const LD gap = std::numbers::pi_v<LD> / 2.0L - std::atan(Y);
                return sqn * (std::log(gap) + std::log(nd)) + sstar;
            }
            return -sqn * num::l1pmx((Y - nd) / nd) -
                   (std::log((LD)P.k * r) - core.delta_b) / sqn + sqn * phi_atan_series(Y);
        }
        case Member::VI: {
            const LD Y = w + std::log((LD)P.k * r) - core.delta_b;
            return ((std::log((LD)P.k * r) - core.delta_b) +
                    1.0L / (2.0L * (std::sqrt(Y * Y + 1.0L) + Y))) /
                   sqn;
        }
        case Member::VII: return -core.delta_b / (2.0L * sqn);
        case Member::VIII: {
            const LD logBpp = -w - std::log(r) + core.delta_bpp;
            const LD h = std::numbers::pi_v<LD> / 2.0L * std::exp(logBpp);
            LD excess;
            if (h > 0.05L) {
                excess = -std::log(std::tan(h)) - w -
                         std::log(2.0L * r / std::numbers::pi_v<LD>);
            } else {
                const LD h2 = h * h;
                excess = -core.delta_bpp -
                         std::log1p(h2 * (1.0L / 3.0L + h2 * (2.0L / 15.0L + h2 * 17.0L / 315.0L)));
            }
            return excess / sqn;
        }
        case Member::IX: {
            const LD u = core.u;
            const LD k = P.k;
            const LD nu = std::log1p((k - 2.0L) * u / 2.0L);
            const LD C = w + std::log(2.0L / k) + nu;
            return (nu / r + std::log1p(-std::exp(-C / r))) / sqn;
        }
        case Member::X: {
            const LD Y = w + std::log(r) - core.delta_b;
            if (Y <= 0.0L)
                throw numeric_error("Burr X record statistic undefined: draw at the atom");
            return sqn / 2.0L * num::l1pmx((Y - nd) / nd) +
                   (std::log(r) - core.delta_b) / (2.0L * sqn);
        }
        case Member::XI: {
            LD gt;
            if (w < 20.0L)
                gt = -std::expm1(std::log1p(-core.u) / r);
            else
                gt = std::exp(-w - std::log(r) + core.delta_bpp);
            const LD t = tail::xi_solve_g(gt);
            const LD rho = tail::xi_rho(t);
            const XiConstants xc = fit_xi_constants(P.r);
            const LD const_term =
                std::log((LD)xc.alpha) - std::log(r * 4.0L * std::numbers::pi_v<LD> *
                                                  std::numbers::pi_v<LD> / 6.0L);
            return (rho + (core.delta_bpp + const_term) / 3.0L) / sqn;
        }
        case Member::XII:
            return std::log1p(-std::exp(-w / r)) / (P.c * sqn);
        case Member::Xa: {
            const LD Y = w + std::log(r) - core.delta_bpp;
            return sqn / 2.0L * num::l1pmx((Y - nd) / nd) +
                   (std::log(r) - core.delta_bpp) / (2.0L * sqn);
        }
        default:
            throw unsupported_member_error("no record statistic for member " +
                                           std::string(member_name(dist.member())));
    }
}

/// X(w) - X(n) for the alternative statistics, without cancellation.
inline LD alt_center_difference(const Distribution& dist, LD w, LD n) {
    const auto& P = dist.params();
    const LD r = P.r;
    const auto cw = tail::make_core(w, r);
    const auto cn = tail::make_core(n, r);
    switch (dist.member()) {
        case Member::V: {
            const LD Yw = w + std::log((LD)P.k * r) - cw.delta_b;
            const LD Yn = n + std::log((LD)P.k * r) - cn.delta_b;
            auto gap = [](LD Y) {
                return Y > 0.0L ? std::atan(1.0L / Y)
                                : std::numbers::pi_v<LD> / 2.0L - std::atan(Y);
            };
            return gap(Yn) - gap(Yw);
        }
        case Member::VI: {
            const LD Yw = w + std::log((LD)P.k * r) - cw.delta_b;
            const LD Yn = n + std::log((LD)P.k * r) - cn.delta_b;
            const LD sw = std::sqrt(Yw * Yw + 1.0L), sn = std::sqrt(Yn * Yn + 1.0L);
            const LD diff = (Yw - Yn) * (1.0L + (Yw + Yn) / (sw + sn));
            return std::log1p(diff / (Yn + sn));
        }
        case Member::X: {
            const LD Yw = w + std::log(r) - cw.delta_b;
            const LD Yn = n + std::log(r) - cn.delta_b;
            if (Yw <= 0.0L || Yn <= 0.0L)
                throw numeric_error("Burr X alternative statistic undefined at the atom");
            return (Yw - Yn) / (std::sqrt(Yw) + std::sqrt(Yn));
        }
        case Member::Xa: {
            const LD Yw = w + std::log(r) - cw.delta_bpp;
            const LD Yn = n + std::log(r) - cn.delta_bpp;
            return (Yw - Yn) / (std::sqrt(Yw) + std::sqrt(Yn));
        }
        default:
            throw unsupported_member_error("alternative statistic exists for V, VI, X, Xa only");
    }
}

} // namespace detail

/// statistic - gamma_eff * S_n^*: a deterministic function of S_n that
/// vanishes as n grows.  Returned in long double because for several members
/// it sits far below double range at large n.
inline long double coupling_residual(const Distribution& dist, const RecordDraw& draw,
                                     Variant variant = Variant::canonical) {
    const long double w = draw.s_n;
    const long double nd = static_cast<long double>(draw.n);
    if (variant == Variant::canonical) return detail::canonical_residual(dist, w, draw.n);
    const long double diff = detail::alt_center_difference(dist, w, nd);
    const long double s = aux_s_log_tail(dist, nd);
    const long double alt = diff / (s * std::sqrt(nd));
    return alt - (w - nd) / std::sqrt(nd);
}

/// Normal-frame standardized record statistic.  Power-form members are
/// returned as n^{-1/2} log(scaled quantity), the exact logarithm of the
/// printed power statistic.
inline double standardized_statistic(const Distribution& dist, const RecordDraw& draw,
                                     Variant variant = Variant::canonical) {
    if (draw.n < 2) throw domain_error("standardized_statistic: n must be >= 2");
    const long double sstar =
        (static_cast<long double>(draw.s_n) - draw.n) / std::sqrt(static_cast<long double>(draw.n));
    const long double g = gamma_eff(dist, variant);
    return static_cast<double>(g * sstar + coupling_residual(dist, draw, variant));
}

/// The direct power-form statistic for the log-frame members (the quantity
/// whose logarithm the normal frame carries), evaluated in extended
/// precision from the draw's partial sum.
inline double power_statistic(const Distribution& dist, const RecordDraw& draw) {
    using LD = long double;
    const auto& P = dist.params();
    const LD w = draw.s_n;
    const LD nd = static_cast<LD>(draw.n);
    const LD inv_sqn = 1.0L / std::sqrt(nd);
    switch (dist.member()) {
        case Member::I:
            return static_cast<double>(std::pow(std::exp(nd) * dist.tail_gap_ld(w), inv_sqn));
        case Member::III: {
            const LD scale = std::pow((LD)P.r, 1.0L / P.k) * std::exp(nd / P.k);
            return static_cast<double>(std::pow(dist.tail_value_ld(w) / scale, inv_sqn));
        }
        case Member::IV: {
            const LD scale = std::pow((LD)P.r, (LD)P.c) * std::exp(P.c * nd) / P.c;
            return static_cast<double>(std::pow(scale * dist.tail_gap_ld(w), inv_sqn));
        }
        case Member::XI: {
            const XiConstants xc = fit_xi_constants(P.r);
            const LD scale = std::pow((LD)xc.alpha, 1.0L / 3.0L) * std::exp(nd / 3.0L);
            return static_cast<double>(std::pow(scale * dist.tail_gap_ld(w), inv_sqn));
        }
        case Member::XII: {
            const LD scale = std::exp(nd / (P.r * P.c));
            return static_cast<double>(std::pow(dist.tail_value_ld(w) / scale, inv_sqn));
        }
        default:
            throw unsupported_member_error("power_statistic: member has a direct-frame statistic");
    }
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov

struct KsResult {
    double distance;
    double pvalue;
};

/// Exact one-sample Kolmogorov statistic against the normal-frame law, with
/// the asymptotic series p-value.
inline KsResult ks_test(std::span<const double> sample, const LawSpec& law) {
    const std::size_t m = sample.size();
    if (m < 8) throw domain_error("ks_test: sample size must be >= 8");
    std::vector<double> z(sample.begin(), sample.end());
    const double sd = std::sqrt(law.variance);
    for (double& v : z) v = (v - law.mean) / sd;
    std::sort(z.begin(), z.end());
    double d = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double F = num::normal_cdf(z[i]);
        d = std::max(d, (static_cast<double>(i) + 1.0) / static_cast<double>(m) - F);
        d = std::max(d, F - static_cast<double>(i) / static_cast<double>(m));
    }
    const bool degenerate = (z.front() == z.back());
    const double p = degenerate ? 0.0 : num::kolmogorov_sf(std::sqrt(static_cast<double>(m)) * d);
    return {d, p};
}

/// Two-sample Kolmogorov statistic with the asymptotic p-value.
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 2 || b.size() < 2) throw domain_error("ks_two_sample: samples too small");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    return {d, num::kolmogorov_sf(ne * d)};
}

// ---------------------------------------------------------------------------
// Monte Carlo experiment

struct ExperimentReport {
    Member member;
    Params params;
    std::int64_t n;
    std::int64_t m;
    std::uint64_t seed;
    Variant variant;
    std::vector<double> statistics;  // normal frame, failed replications excluded
    LawSpec target;
    double ks_distance;
    double ks_pvalue;
    double sample_mean;
    double sample_variance;
    std::int64_t failed_replications;
    bool warning_excess_failures;  // more than 1% of replications failed
};

inline ExperimentReport run_experiment(const Distribution& dist, std::int64_t n, std::int64_t m,
                                       std::uint64_t seed, Variant variant = Variant::canonical,
                                       int threads = 1) {
    if (n < 10) throw domain_error("run_experiment: n must be >= 10");
    if (m < 100) throw domain_error("run_experiment: m must be >= 100");
    gamma_eff(dist, variant);  // rejects unsupported member/variant pairs up front
    std::vector<double> stats(static_cast<std::size_t>(m));
    std::vector<std::uint8_t> failed(static_cast<std::size_t>(m), 0);

    auto worker = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t rep = lo; rep < hi; ++rep) {
            RandomStream stream =
                RandomStream::for_replication(seed, static_cast<std::uint64_t>(rep));
            try {
                const RecordDraw draw = simulate_record(dist, n, stream);
                stats[static_cast<std::size_t>(rep)] =
                    standardized_statistic(dist, draw, variant);
            } catch (const std::exception&) {
                failed[static_cast<std::size_t>(rep)] = 1;
            }
        }
    };

    const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(m)));
    if (nthreads == 1) {
        worker(0, m);
    } else {
        std::vector<std::thread> pool;
        const std::int64_t chunk = (m + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const std::int64_t lo = t * chunk, hi = std::min<std::int64_t>(m, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    ExperimentReport rep;
    rep.member = dist.member();
    rep.params = dist.params();
    rep.n = n;
    rep.m = m;
    rep.seed = seed;
    rep.variant = variant;
    rep.failed_replications = 0;
    for (std::int64_t i = 0; i < m; ++i) {
        if (failed[static_cast<std::size_t>(i)])
            ++rep.failed_replications;
        else
            rep.statistics.push_back(stats[static_cast<std::size_t>(i)]);
    }
    rep.warning_excess_failures = rep.failed_replications * 100 > m;
    rep.target = target_law(dist, variant);
    const auto ks = ks_test(rep.statistics, rep.target);
    rep.ks_distance = ks.distance;
    rep.ks_pvalue = ks.pvalue;
    rep.sample_mean = num::mean(rep.statistics);
    rep.sample_variance = num::variance(rep.statistics);
    return rep;
}

// ---------------------------------------------------------------------------
// Hypothesis test

struct HypothesisTestResult {
    double statistic;  // normal frame
    double z;
    double pvalue;
    bool reject;
    bool support_violation;
};

/// Normal-frame statistic recomputed from a raw observed record value.
inline double statistic_from_value(const Distribution& dist, std::int64_t n, double x,
                                   Variant variant = Variant::canonical) {
    const auto& P = dist.params();
    const double nd = static_cast<double>(n);
    const double sqn = std::sqrt(nd);
    if (variant == Variant::alternative) {
        const double center = static_cast<double>(dist.tail_value_ld(nd));
        const double s = static_cast<double>(aux_s_log_tail(dist, nd));
        return (x - center) / (s * sqn);
    }
    switch (dist.member()) {
        case Member::I: return (nd + std::log1p(-x)) / sqn;
        case Member::II: return (x - nd) / sqn;
        case Member::III: return (std::log(x) - (nd + std::log(P.r)) / P.k) / sqn;
        case Member::IV:
            return (P.c * nd + P.c * std::log(P.r) - std::log(P.c) + std::log(P.c - x)) / sqn;
        case Member::V: return sqn * (std::log(detail::pi / 2.0 - x) + std::log(nd));
        case Member::VI: return sqn * (std::exp(x) / (2.0 * nd) - 1.0);
        case Member::VII: return (x - nd / 2.0 - 0.5 * std::log(P.r)) / sqn;
        case Member::VIII: return (x - nd - std::log(2.0 * P.r / detail::pi)) / sqn;
        case Member::IX: return (x - nd / P.r - std::log(2.0 / P.k) / P.r) / sqn;
        case Member::X: return sqn * std::log(x / std::sqrt(nd));
        case Member::XI: {
            const XiConstants xc = fit_xi_constants(P.r);
            return (nd / 3.0 + std::log(xc.alpha) / 3.0 + std::log1p(-x)) / sqn;
        }
        case Member::XII: return (std::log(x) - nd / (P.r * P.c)) / sqn;
        case Member::Xa: return sqn * std::log(x / std::sqrt(nd));
        default:
            throw unsupported_member_error("no record statistic for member " +
                                           std::string(member_name(dist.member())));
    }
}

namespace detail {

inline HypothesisTestResult z_test(double stat, const LawSpec& law, double significance) {
    const double z = stat / std::sqrt(law.variance);
    const double p = std::erfc(std::abs(z) / std::numbers::sqrt2);
    return {stat, z, p, p < significance, false};
}

} // namespace detail

/// Asymptotic two-sided z-test of "the observed value is an n-th record of
/// this member" built on the normal-frame limit law.
inline HypothesisTestResult record_hypothesis_test(const Distribution& dist, std::int64_t n,
                                                   double observed, double significance,
                                                   Variant variant = Variant::canonical) {
    if (!(significance > 0.0 && significance < 1.0))
        throw domain_error("record_hypothesis_test: significance must be in (0,1)");
    const Support sp = dist.support();
    if (!(observed > sp.lep && observed < sp.uep))
        return {std::numeric_limits<double>::quiet_NaN(),
                std::numeric_limits<double>::infinity(), 0.0, true, true};
    const double stat = statistic_from_value(dist, n, observed, variant);
    return detail::z_test(stat, target_law(dist, variant), significance);
}

/// Same test fed from a simulated draw (numerically stable deep-tail path).
inline HypothesisTestResult record_hypothesis_test(const Distribution& dist,
                                                   const RecordDraw& draw, double significance,
                                                   Variant variant = Variant::canonical) {
    if (!(significance > 0.0 && significance < 1.0))
        throw domain_error("record_hypothesis_test: significance must be in (0,1)");
    const double stat = standardized_statistic(dist, draw, variant);
    return detail::z_test(stat, target_law(dist, variant), significance);
}

} // namespace burr
