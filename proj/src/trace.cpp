#include "rcd/trace.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rcd/error.hpp"

namespace rcd {

namespace {

constexpr const char* kHeader = "has_object,is_ood,ec_score,ood_score,ec_time_ms,ood_time_ms";

bool parse_bool01(const std::string& tok, bool& out) {
    if (tok == "0") { out = false; return true; }
    if (tok == "1") { out = true; return true; }
    return false;
}

} // namespace

std::string format_double(double v) {
    // Shortest decimal form that parses back exactly.
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void SampleRecord::validate() const {
    if (!(ec_score >= 0.0 && ec_score <= 1.0)) throw ValidationError("ec_score must lie in [0,1]");
    if (!(ood_score >= 0.0 && ood_score <= 1.0)) throw ValidationError("ood_score must lie in [0,1]");
    if (!(ec_time_ms > 0.0) || !std::isfinite(ec_time_ms)) {
        throw ValidationError("ec_time_ms must be positive and finite");
    }
    if (!(ood_time_ms > 0.0) || !std::isfinite(ood_time_ms)) {
        throw ValidationError("ood_time_ms must be positive and finite");
    }
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
    out << kHeader << '\n';
    for (const SampleRecord& s : trace.samples) {
        out << (s.has_object ? 1 : 0) << ',' << (s.is_ood ? 1 : 0) << ','
            << format_double(s.ec_score) << ',' << format_double(s.ood_score) << ','
            << format_double(s.ec_time_ms) << ',' << format_double(s.ood_time_ms) << '\n';
    }
}

void write_trace_csv(const Trace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open trace file for writing: " + path.string());
    write_trace_csv(trace, out);
}

Trace read_trace_csv(std::istream& in, TraceMeta meta) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("trace CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) throw IoError("trace CSV header mismatch; expected '" + std::string(kHeader) + "'");

    Trace trace;
    trace.meta = std::move(meta);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> toks;
        while (std::getline(ss, tok, ',')) toks.push_back(tok);
        if (toks.size() != 6) {
            throw IoError("trace CSV line " + std::to_string(line_no) + ": expected 6 fields");
        }
        SampleRecord s;
        if (!parse_bool01(toks[0], s.has_object) || !parse_bool01(toks[1], s.is_ood)) {
            throw IoError("trace CSV line " + std::to_string(line_no) + ": labels must be 0 or 1");
        }
        try {
            s.ec_score = std::stod(toks[2]);
            s.ood_score = std::stod(toks[3]);
            s.ec_time_ms = std::stod(toks[4]);
            s.ood_time_ms = std::stod(toks[5]);
        } catch (const std::exception&) {
            throw IoError("trace CSV line " + std::to_string(line_no) + ": malformed number");
        }
        s.validate();
        trace.samples.push_back(s);
    }
    return trace;
}

Trace read_trace_csv(const std::filesystem::path& path, TraceMeta meta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open trace file: " + path.string());
    return read_trace_csv(in, std::move(meta));
}

} // namespace rcd
