#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rcd {

// One evaluated input: ground-truth labels, the two detectors' confidence
// scores, and their measured response times.
struct SampleRecord {
    bool has_object = false; // positive ground truth for the EC
    bool is_ood = false;     // positive ground truth for the monitor
    double ec_score = 0.0;
    double ood_score = 0.0;
    double ec_time_ms = 1.0;
    double ood_time_ms = 1.0;

    void validate() const;
};

struct TraceMeta {
    std::string scenario_id;
    std::uint64_t seed = 0;
    std::string design_id;
};

struct Trace {
    std::vector<SampleRecord> samples;
    TraceMeta meta;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

// CSV columns: has_object,is_ood,ec_score,ood_score,ec_time_ms,ood_time_ms
// Booleans serialize as 0/1; floats with '.' decimal separator.
void write_trace_csv(const Trace& trace, std::ostream& out);
void write_trace_csv(const Trace& trace, const std::filesystem::path& path);
Trace read_trace_csv(std::istream& in, TraceMeta meta = {});
Trace read_trace_csv(const std::filesystem::path& path, TraceMeta meta = {});

// Deterministic shortest-exact formatting used by every CSV writer.
std::string format_double(double v);

} // namespace rcd
