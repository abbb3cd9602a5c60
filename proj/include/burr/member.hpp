#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "burr/errors.hpp"

namespace burr {

/// Family members I..XII plus the Xa variant and three related laws.
enum class Member {
    I, II, III, IV, V, VI, VII, VIII, IX, X, XI, XII, Xa,
    SinghMaddala, Dagum, ToppLeoneDagum,
};

inline constexpr std::array<Member, 16> all_members = {
    Member::I,   Member::II, Member::III, Member::IV,  Member::V,
    Member::VI,  Member::VII, Member::VIII, Member::IX, Member::X,
    Member::XI,  Member::XII, Member::Xa,
    Member::SinghMaddala, Member::Dagum, Member::ToppLeoneDagum,
};

/// The thirteen members covered by the record-law machinery.
inline constexpr std::array<Member, 13> classic_members = {
    Member::I,  Member::II,  Member::III, Member::IV, Member::V,
    Member::VI, Member::VII, Member::VIII, Member::IX, Member::X,
    Member::XI, Member::XII, Member::Xa,
};

inline std::string_view member_name(Member m) {
    switch (m) {
        case Member::I: return "I";
        case Member::II: return "II";
        case Member::III: return "III";
        case Member::IV: return "IV";
        case Member::V: return "V";
        case Member::VI: return "VI";
        case Member::VII: return "VII";
        case Member::VIII: return "VIII";
        case Member::IX: return "IX";
        case Member::X: return "X";
        case Member::XI: return "XI";
        case Member::XII: return "XII";
        case Member::Xa: return "Xa";
        case Member::SinghMaddala: return "SinghMaddala";
        case Member::Dagum: return "Dagum";
        case Member::ToppLeoneDagum: return "ToppLeoneDagum";
    }
    return "?";
}

/// Case-insensitive member lookup ("xii", "XII", "Xa", "singhmaddala", ...).
inline std::optional<Member> parse_member(std::string_view name) {
    std::string low(name);
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (Member m : all_members) {
        std::string cand(member_name(m));
        std::transform(cand.begin(), cand.end(), cand.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (low == cand) return m;
    }
    return std::nullopt;
}

/// Positive shape parameters. Only the fields a member uses are read;
/// unused fields default to 1.
struct Params {
    double k = 1.0;
    double c = 1.0;
    double r = 1.0;
    double a = 1.0;
    double b = 1.0;
    double d = 1.0;
    double f = 1.0;
};

/// Names of the parameters each member actually reads.
inline std::vector<std::string> used_params(Member m) {
    switch (m) {
        case Member::I: return {};
        case Member::II: return {"r"};
        case Member::III: return {"k", "r"};
        case Member::IV: return {"c", "r"};
        case Member::V: return {"k", "r"};
        case Member::VI: return {"k", "r"};
        case Member::VII: return {"r"};
        case Member::VIII: return {"r"};
        case Member::IX: return {"k", "r"};
        case Member::X: return {"r"};
        case Member::XI: return {"r"};
        case Member::XII: return {"c", "r"};
        case Member::Xa: return {"r"};
        case Member::SinghMaddala: return {"a", "c", "r"};
        case Member::Dagum: return {"a", "b", "c"};
        case Member::ToppLeoneDagum: return {"a", "b", "c", "d", "f"};
    }
    return {};
}

inline double param_field(const Params& p, std::string_view name) {
    if (name == "k") return p.k;
    if (name == "c") return p.c;
    if (name == "r") return p.r;
    if (name == "a") return p.a;
    if (name == "b") return p.b;
    if (name == "d") return p.d;
    if (name == "f") return p.f;
    throw parameter_error("unknown parameter name: " + std::string(name));
}

inline void set_param_field(Params& p, std::string_view name, double value) {
    if (name == "k") { p.k = value; return; }
    if (name == "c") { p.c = value; return; }
    if (name == "r") { p.r = value; return; }
    if (name == "a") { p.a = value; return; }
    if (name == "b") { p.b = value; return; }
    if (name == "d") { p.d = value; return; }
    if (name == "f") { p.f = value; return; }
    throw parameter_error("unknown parameter name: " + std::string(name));
}

/// Rejects zero/negative/non-finite parameters up front.
inline void validate_params(Member m, const Params& p) {
    for (const auto& name : used_params(m)) {
        const double v = param_field(p, name);
        if (!std::isfinite(v) || v <= 0.0)
            throw parameter_error("parameter " + name + " of Burr " +
                                  std::string(member_name(m)) +
                                  " must be positive and finite, got " + std::to_string(v));
    }
}

/// Support endpoints; +-infinity where unbounded.
struct Support {
    double lep;
    double uep;
};

} // namespace burr
