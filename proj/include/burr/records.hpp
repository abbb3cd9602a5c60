#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "burr/distributions.hpp"
#include "burr/numeric.hpp"

namespace burr {

/// Seeded uniform/exponential source.  Substreams for parallel replications
/// are derived from (master seed, replication index) so results do not
/// depend on scheduling.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(num::substream_seed(seed, 0)) {}

    static RandomStream for_replication(std::uint64_t master, std::uint64_t index) {
        RandomStream s(0);
        s.engine_.seed(num::substream_seed(master, index + 1));
        return s;
    }

    /// Uniform in the open interval (0,1); 0 excluded by construction.
    double next_uniform() { return num::uniform_from_bits(engine_()); }

    /// Unit exponential via inverse transform.
    double next_exponential() { return -std::log(next_uniform()); }

private:
    std::mt19937_64 engine_;
};

/// One simulated n-th record value together with the partial sum that
/// generated it.  When `value_log_scale` is set the direct-scale value would
/// overflow and `value` holds log X^{(n)} instead.
struct RecordDraw {
    std::int64_t n;
    double value;
    double s_n;
    double s_star;  // (s_n - n)/sqrt(n)
    bool value_log_scale;
};

/// Deterministic core of the simulator: the n-th record of the sequence
/// F^{-1}(1-e^{-E_j}) is F^{-1}(1-e^{-S_n}).
inline RecordDraw record_from_sum(const Distribution& dist, std::int64_t n, double s_n) {
    if (n < 1) throw domain_error("record index n must be >= 1");
    const TailQuantile tq = dist.quantile_log_tail(s_n);
    const double nd = static_cast<double>(n);
    return RecordDraw{n, tq.value, s_n, (s_n - nd) / std::sqrt(nd), tq.log_scale};
}

template <typename Stream>
RecordDraw simulate_record(const Distribution& dist, std::int64_t n, Stream& stream) {
    if (n < 1) throw domain_error("record index n must be >= 1");
    double s = 0.0;
    for (std::int64_t i = 0; i < n; ++i) s += stream.next_exponential();
    return record_from_sum(dist, n, s);
}

/// Joint path X^{(1)}, ..., X^{(n)} from prefix sums of the same
/// exponentials; values are strictly increasing.
template <typename Stream>
std::vector<RecordDraw> record_path(const Distribution& dist, std::int64_t n, Stream& stream) {
    if (n < 1) throw domain_error("record index n must be >= 1");
    std::vector<RecordDraw> path;
    path.reserve(static_cast<std::size_t>(n));
    double s = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) {
        s += stream.next_exponential();
        path.push_back(record_from_sum(dist, k, s));
    }
    return path;
}

/// Strong (strict) records of a stream, with their 1-based record times.
struct StreamRecords {
    std::vector<double> records;
    std::vector<std::int64_t> times;
};

inline StreamRecords extract_records(std::span<const double> stream) {
    if (stream.empty()) throw domain_error("extract_records: empty stream");
    StreamRecords out;
    double best = stream[0];
    out.records.push_back(best);
    out.times.push_back(1);
    for (std::size_t i = 1; i < stream.size(); ++i) {
        if (stream[i] > best) {
            best = stream[i];
            out.records.push_back(best);
            out.times.push_back(static_cast<std::int64_t>(i) + 1);
        }
    }
    return out;
}

/// Stream-extraction oracle: the n-th record of an iid stream, redrawing
/// replications whose record count stays below n within the draw cap.
struct StreamRecordSample {
    std::vector<double> values;
    std::int64_t redraws;  // replications that hit the cap and were resampled
};

inline StreamRecordSample nth_record_by_extraction(const Distribution& dist, std::int64_t n,
                                                   std::int64_t replications,
                                                   std::uint64_t seed,
                                                   std::int64_t draw_cap = 1000000) {
    StreamRecordSample out{{}, 0};
    out.values.reserve(static_cast<std::size_t>(replications));
    std::uint64_t attempt = 0;
    for (std::int64_t rep = 0; rep < replications;) {
        RandomStream stream = RandomStream::for_replication(seed, attempt++);
        double best = -std::numeric_limits<double>::infinity();
        std::int64_t count = 0;
        bool found = false;
        for (std::int64_t i = 0; i < draw_cap; ++i) {
            const double x = dist.quantile(stream.next_uniform());
            if (x > best) {
                best = x;
                if (++count == n) {
                    found = true;
                    break;
                }
            }
        }
        if (found) {
            out.values.push_back(best);
            ++rep;
        } else {
            ++out.redraws;
        }
    }
    return out;
}

} // namespace burr
