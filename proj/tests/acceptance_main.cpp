// Acceptance suite: prints one pass/fail line per criterion and exits
// nonzero if any criterion fails.  argv[1] (optional) is the path of the
// command-line binary, used by the determinism criterion.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "burr/asymptotics.hpp"
#include "burr/cli.hpp"
#include "burr/distributions.hpp"
#include "burr/evt.hpp"
#include "burr/expansions.hpp"
#include "burr/records.hpp"
#include "test_support.hpp"

using namespace burr;

namespace {

int failures = 0;

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void report(int criterion, bool ok, const std::string& detail, double elapsed,
            double budget) {
    const bool in_budget = elapsed < budget;
    if (!ok || !in_budget) ++failures;
    std::printf("[%s] criterion %d: %s (%.2fs, budget %.0fs)\n",
                (ok && in_budget) ? "PASS" : "FAIL", criterion, detail.c_str(), elapsed,
                budget);
    std::fflush(stdout);
}

std::string capture(const std::string& cmd) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    pclose(pipe);
    return out;
}

// --- criterion 1: round-trip inversion --------------------------------------
void criterion_1() {
    const auto t0 = clock_type::now();
    double worst = 0.0, worst_xi = 0.0;
    bool ok = true;
    std::vector<double> grid;
    for (int i = 0; i < 50; ++i) {
        const double la = std::log(1e-6), lb = std::log(1.0 - 1e-6);
        grid.push_back(std::exp(la + (lb - la) * i / 49.0));
    }
    for (const auto& [m, P] : burr::test::member_param_grid()) {
        Distribution d(m, P);
        const double tol = (m == Member::XI) ? 1e-8 : 1e-9;
        for (double p : grid) {
            if (m == Member::X && std::log(p) <= -P.r * std::numbers::ln2) continue;
            const double err = std::abs(d.cdf(d.quantile(p)) - p);
            if (err > tol) ok = false;
            (m == Member::XI ? worst_xi : worst) = std::max(
                m == Member::XI ? worst_xi : worst, err);
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "round-trip |cdf(q(p))-p| <= 1e-9 (XI 1e-8): worst %.2e, XI %.2e", worst,
                  worst_xi);
    report(1, ok, buf, seconds_since(t0), 10.0);
}

// --- criterion 2: expansion order recovery ----------------------------------
void criterion_2() {
    const auto t0 = clock_type::now();
    const std::vector<double> grid = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
    struct Row {
        Member m;
        Params p;
        double expect;
    };
    const Row rows[] = {
        {Member::II, {.r = 2}, 2.0},          {Member::III, {.k = 2, .r = 2}, 2.0},
        {Member::IV, {.c = 2, .r = 1}, 2.0},  {Member::VII, {.r = 1}, 2.0},
        {Member::VIII, {.r = 2}, 2.0},        {Member::IX, {.k = 1, .r = 0.4}, 2.0},
        {Member::IX, {.k = 1, .r = 2}, 0.5},  {Member::XII, {.c = 3, .r = 2}, 1.5},
    };
    bool ok = true;
    double worst_dev = 0.0;
    for (const auto& row : rows) {
        const auto fit = fit_remainder_order(Distribution(row.m, row.p), grid);
        if (fit.exact || std::abs(fit.exponent - row.expect) > 0.15) ok = false;
        worst_dev = std::max(worst_dev, std::abs(fit.exponent - row.expect));
    }
    // Burr V: residual scaled by log^5 bounded (max/min <= 10)
    {
        Distribution d(Member::V, {.k = 1, .r = 1});
        double mx = 0.0, mn = std::numeric_limits<double>::infinity();
        for (double u : burr::test::geom_grid(1e-8, 1e-3, 6)) {
            const double L = std::log(1.0 / u);
            const long double gap = d.tail_gap_ld(-std::log((long double)u));
            const double scaled = std::abs(static_cast<double>(gap) - 1.0 / L +
                                           0.5 / (L * L * L)) *
                                  std::pow(L, 5);
            mx = std::max(mx, scaled);
            mn = std::min(mn, scaled);
        }
        if (!(mx / mn <= 10.0)) ok = false;
    }
    // Burr XI: exponent reported with the oracle-fitted alpha
    const auto xi_fit = fit_remainder_order(Distribution(Member::XI, {.r = 1}), grid);
    const XiConstants xc = fit_xi_constants(1.0);
    if (std::abs(xc.alpha - xc.alpha_candidate_b) > 1e-4 * xc.alpha) ok = false;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "fitted exponents within 0.15 (worst dev %.3f); V log^5-scaled residual "
                  "bounded; XI alpha=%.6f (fit), exponent %.3f reported",
                  worst_dev, xc.alpha, xi_fit.exponent);
    report(2, ok, buf, seconds_since(t0), 5.0);
}

// --- criterion 3: domain classification probes -------------------------------
void criterion_3() {
    const auto t0 = clock_type::now();
    const std::vector<std::pair<Member, Params>> gamma_rows = {
        {Member::I, {}},
        {Member::II, {.r = 2}},
        {Member::III, {.k = 2, .r = 1}},
        {Member::IV, {.c = 0.5, .r = 1}},
        {Member::VII, {.r = 3}},
        {Member::VIII, {.r = 2}},
        {Member::IX, {.k = 1, .r = 2}},
        {Member::XI, {.r = 2}},
        {Member::XII, {.c = 3, .r = 2}},
    };
    const std::vector<double> grid = {1e-6};
    bool ok = true;
    double worst = 0.0;
    for (const auto& [m, P] : gamma_rows) {
        Distribution d(m, P);
        const auto pr = probe_gamma(d, 2.0, grid);
        const double err = std::abs(pr.estimates[0] - classify(d).gamma);
        worst = std::max(worst, err);
        if (err > 0.05) ok = false;
    }
    double worst_ratio = 0.0;
    for (Member m : {Member::V, Member::VI, Member::X, Member::Xa}) {
        Distribution d(m, {.k = 1, .r = 1});
        const auto pr = probe_gamma(d, 2.0, grid, 4.0);
        const double err = std::abs(pr.estimates[0] - 0.5);
        worst_ratio = std::max(worst_ratio, err);
        if (err > 0.05) ok = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "gamma probes at u=1e-6 within 0.05 (worst %.4f); double ratio within "
                  "0.05 of 1/2 (worst %.4f)",
                  worst, worst_ratio);
    report(3, ok, buf, seconds_since(t0), 5.0);
}

// --- criterion 4: auxiliary-function agreement --------------------------------
void criterion_4() {
    const auto t0 = clock_type::now();
    bool ok = true;
    double worst = 0.0;
    const std::vector<std::pair<Member, Params>> rows = {
        {Member::V, {.k = 1, .r = 1}},  {Member::V, {.k = 2, .r = 0.5}},
        {Member::VI, {.k = 1, .r = 1}}, {Member::VI, {.k = 0.5, .r = 2}},
        {Member::X, {.r = 1}},          {Member::X, {.r = 2}},
        {Member::Xa, {.r = 1}},         {Member::Xa, {.r = 3}},
    };
    for (const auto& [m, P] : rows) {
        Distribution d(m, P);
        for (double u : burr::test::geom_grid(1e-6, 1e-2, 9)) {
            const double h = u * 1e-4;
            const double s_fd =
                -u * (d.quantile(1 - (u + h)) - d.quantile(1 - (u - h))) / (2 * h);
            const double rel = std::abs(aux_s(d, u) - s_fd) / s_fd;
            worst = std::max(worst, rel);
            if (rel > 1e-6) ok = false;
        }
    }
    // (Hb) sequences: vanish for V and VI; X and Xa converge to the
    // nondegenerate limit 1/2 (their record law variance 1/4 = (1/2)^2)
    const std::vector<long long> ns = {100, 1000, 10000};
    bool hb_ok = true;
    for (Member m : {Member::V, Member::VI}) {
        const auto v = hb_limit(Distribution(m, {.k = 1, .r = 1}), ns);
        if (!(v[0] > v[1] && v[1] > v[2] && v[2] <= 0.05)) hb_ok = false;
    }
    for (Member m : {Member::X, Member::Xa}) {
        const auto v = hb_limit(Distribution(m, {.k = 1, .r = 1}), ns);
        if (std::abs(v[2] - 0.5) > 1e-6) hb_ok = false;
    }
    ok = ok && hb_ok;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "closed-form s vs finite difference <= 1e-6 (worst %.2e); hb -> 0 for "
                  "V, VI; X/Xa hb -> 1/2 (nondegenerate limit)",
                  worst);
    report(4, ok, buf, seconds_since(t0), 30.0);
}

// --- criterion 5: record-simulator equivalence --------------------------------
void criterion_5() {
    const auto t0 = clock_type::now();
    bool ok = true;
    std::string detail = "two-sample KS at n=5, 2000 reps:";
    const std::vector<std::pair<Member, Params>> rows = {
        {Member::I, {}}, {Member::II, {.r = 1}}, {Member::XII, {.c = 1, .r = 1}}};
    std::uint64_t seed = 909;
    for (const auto& [m, P] : rows) {
        Distribution d(m, P);
        const auto ext = nth_record_by_extraction(d, 5, 2000, seed);
        std::vector<double> sim;
        for (int rep = 0; rep < 2000; ++rep) {
            auto st = RandomStream::for_replication(seed + 1, rep);
            sim.push_back(simulate_record(d, 5, st).value);
        }
        seed += 2;
        const auto ks = ks_two_sample(ext.values, sim);
        if (!(ks.pvalue > 1e-3)) ok = false;
        char buf[64];
        std::snprintf(buf, sizeof buf, " %s p=%.3g", std::string(member_name(m)).c_str(),
                      ks.pvalue);
        detail += buf;
    }
    report(5, ok, detail, seconds_since(t0), 120.0);
}

// --- criterion 6: pathwise coupling -------------------------------------------
void criterion_6() {
    const auto t0 = clock_type::now();
    struct Row {
        Member m;
        Params p;
    };
    const Row rows[] = {
        {Member::II, {.r = 2}},        {Member::III, {.k = 2, .r = 2}},
        {Member::IV, {.c = 0.5, .r = 1}}, {Member::V, {.k = 2, .r = 2}},
        {Member::VI, {.k = 2, .r = 2}},   {Member::VII, {.r = 2}},
        {Member::VIII, {.r = 2}},      {Member::IX, {.k = 1, .r = 2}},
        {Member::X, {.r = 2}},         {Member::XI, {.r = 2}},
        {Member::XII, {.c = 1, .r = 2}},  {Member::Xa, {.r = 2}},
    };
    bool ok = true;
    for (const auto& row : rows) {
        Distribution d(row.m, row.p);
        long double prev = std::numeric_limits<long double>::infinity();
        for (long long n : {100LL, 1000LL, 10000LL}) {
            std::vector<long double> res;
            res.reserve(1000);
            for (int rep = 0; rep < 1000; ++rep) {
                auto st = RandomStream::for_replication(7, rep);
                res.push_back(std::abs(coupling_residual(d, simulate_record(d, n, st))));
            }
            const long double med = num::median(res);
            if (!(med < prev)) ok = false;
            prev = med;
        }
    }
    // Burr I: residual identically zero
    {
        Distribution d(Member::I, {});
        for (int rep = 0; rep < 1000; ++rep) {
            auto st = RandomStream::for_replication(7, rep);
            if (coupling_residual(d, simulate_record(d, 1000, st)) != 0.0L) ok = false;
        }
    }
    report(6, ok,
           "median |coupling residual| strictly decreasing over n=1e2,1e3,1e4 for all "
           "members; Burr I residual identically 0",
           seconds_since(t0), 60.0);
}

// --- criterion 7: limit-law verification ---------------------------------------
void criterion_7() {
    const auto t0 = clock_type::now();
    struct Row {
        Member m;
        Params p;
    };
    const Row rows[] = {
        {Member::I, {}},
        {Member::II, {.r = 1}},
        {Member::III, {.k = 2, .r = 1}},
        {Member::IV, {.c = 0.5, .r = 1}},
        {Member::V, {.k = 1, .r = 1}},
        {Member::VI, {.k = 1, .r = 1}},
        {Member::VII, {.r = 1}},
        {Member::VIII, {.r = 2}},
        {Member::IX, {.k = 2, .r = 2}},
        {Member::X, {.r = 1}},
        {Member::XI, {.r = 1}},
        {Member::XII, {.c = 1, .r = 1}},
        {Member::Xa, {.r = 1}},
    };
    bool ok = true;
    double worst_ks = 0.0;
    for (const auto& row : rows) {
        Distribution d(row.m, row.p);
        const auto rep = run_experiment(d, 1000, 5000, 42, Variant::canonical, 4);
        const double sd = std::sqrt(rep.target.variance);
        const bool mean_ok = std::abs(rep.sample_mean) <= 3.0 * sd / std::sqrt(5000.0);
        const bool var_ok =
            std::abs(rep.sample_variance - rep.target.variance) <= 0.1 * rep.target.variance;
        const bool ks_ok = rep.ks_distance <= 0.03;
        worst_ks = std::max(worst_ks, rep.ks_distance);
        if (!(mean_ok && var_ok && ks_ok && rep.failed_replications == 0)) {
            ok = false;
            std::printf("  criterion 7 detail: %s mean=%.4f var=%.4f/%.4f ks=%.4f\n",
                        std::string(member_name(row.m)).c_str(), rep.sample_mean,
                        rep.sample_variance, rep.target.variance, rep.ks_distance);
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "all 13 members at n=1000, m=5000: mean within 3sd/sqrt(m), variance "
                  "within 10%%, KS <= 0.03 (worst %.4f)",
                  worst_ks);
    report(7, ok, buf, seconds_since(t0), 300.0);
}

// --- criterion 8: test calibration ----------------------------------------------
void criterion_8() {
    const auto t0 = clock_type::now();
    bool ok = true;
    std::string detail = "null rejection rate at 5% within [3.5%, 6.5%]:";
    const std::vector<std::pair<Member, Params>> rows = {
        {Member::II, {.r = 1}}, {Member::X, {.r = 1}}, {Member::XII, {.c = 1, .r = 1}}};
    for (const auto& [m, P] : rows) {
        Distribution d(m, P);
        int rejects = 0;
        for (int rep = 0; rep < 5000; ++rep) {
            auto st = RandomStream::for_replication(202, rep);
            rejects += record_hypothesis_test(d, simulate_record(d, 1000, st), 0.05).reject;
        }
        const double rate = rejects / 5000.0;
        if (!(rate >= 0.035 && rate <= 0.065)) ok = false;
        char buf[64];
        std::snprintf(buf, sizeof buf, " %s %.2f%%", std::string(member_name(m)).c_str(),
                      100.0 * rate);
        detail += buf;
    }
    report(8, ok, detail, seconds_since(t0), 120.0);
}

// --- criterion 9: determinism across thread counts -------------------------------
void criterion_9(const char* cli_path) {
    const auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;
    if (cli_path) {
        const std::string base = std::string(cli_path) +
                                 " experiment --member II --param r=1 --n 300 --m 1000 "
                                 "--seed 42 --threads ";
        const std::string a = capture(base + "1");
        const std::string b = capture(base + "4");
        ok = !a.empty() && a == b;
        detail = "CLI experiment bytes identical for --threads 1 vs 4";
    } else {
        detail = "CLI binary path not supplied; in-process check only";
    }
    Distribution d(Member::XII, {.c = 1, .r = 1});
    const auto r1 = run_experiment(d, 200, 500, 99, Variant::canonical, 1);
    const auto r4 = run_experiment(d, 200, 500, 99, Variant::canonical, 4);
    if (r1.statistics != r4.statistics) ok = false;
    report(9, ok, detail + "; run_experiment statistics identical for 1 vs 4 workers",
           seconds_since(t0), 60.0);
}

} // namespace

int main(int argc, char** argv) {
    const char* cli_path = argc > 1 ? argv[1] : nullptr;
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9(cli_path);
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
