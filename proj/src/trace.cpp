#include "cpmx/trace.hpp"

#include <cstdio>
#include <ctime>
#include <sstream>

#include "cpmx/errors.hpp"
#include "cpmx/io.hpp"

namespace cpmx {

using nlohmann::json;

EvolutionTrace record(EvolutionTrace trace, TraceEntry entry) {
    if (!trace.entries.empty() && trace.entries.back().post_hash != entry.pre_hash)
        fail(Errc::hash_chain_broken,
             "entry pre-hash " + entry.pre_hash + " does not continue from " +
                 trace.entries.back().post_hash);
    entry.seq = trace.entries.size() + 1;
    trace.entries.push_back(std::move(entry));
    return trace;
}

Model replay(const Model& initial_model, const EvolutionTrace& trace) {
    Model current = initial_model;
    if (!trace.entries.empty() && canonical_hash(current) != trace.entries.front().pre_hash)
        fail(Errc::hash_chain_broken, "initial model does not match the trace's first pre-hash");
    for (const TraceEntry& entry : trace.entries) {
        current = apply_edits(current, entry.edits);
        if (canonical_hash(current) != entry.post_hash)
            fail(Errc::hash_chain_broken,
                 "post-hash mismatch at seq " + std::to_string(entry.seq));
    }
    return current;
}

std::pair<Model, EvolutionTrace> undo(const Model& model, const EvolutionTrace& trace) {
    if (trace.entries.empty()) fail(Errc::empty_trace, "nothing to undo");
    const TraceEntry& last = trace.entries.back();
    if (canonical_hash(model) != last.post_hash)
        fail(Errc::hash_chain_broken, "model does not match the last recorded post-hash");

    Model restored = model;
    for (auto it = last.edits.rbegin(); it != last.edits.rend(); ++it)
        restored = apply_edits(restored, {invert(*it)});
    if (canonical_hash(restored) != last.pre_hash)
        fail(Errc::hash_chain_broken, "undo did not restore the recorded pre-hash");

    EvolutionTrace shorter = trace;
    shorter.entries.pop_back();
    return {std::move(restored), std::move(shorter)};
}

json trace_entry_to_json(const TraceEntry& entry) {
    json edits = json::array();
    for (const Edit& edit : entry.edits) edits.push_back(edit_to_json(edit));
    return json{{"seq", entry.seq},
                {"pattern", entry.pattern},
                {"params", entry.params},
                {"edits", edits},
                {"pre_hash", entry.pre_hash},
                {"post_hash", entry.post_hash},
                {"timestamp", entry.timestamp}};
}

TraceEntry trace_entry_from_json(const json& value) {
    if (!value.is_object()) fail(Errc::parse_error, "trace entry is not a JSON object");
    TraceEntry entry;
    try {
        entry.seq = value.at("seq").get<std::uint64_t>();
        entry.pattern = value.at("pattern").get<std::string>();
        entry.params = value.value("params", json());
        entry.pre_hash = value.at("pre_hash").get<std::string>();
        entry.post_hash = value.at("post_hash").get<std::string>();
        entry.timestamp = value.value("timestamp", std::string{});
        for (const auto& edit : value.at("edits")) entry.edits.push_back(edit_from_json(edit));
    } catch (const json::exception& e) {
        fail(Errc::parse_error, std::string("trace entry: ") + e.what());
    }
    return entry;
}

std::string trace_to_jsonl(const EvolutionTrace& trace) {
    std::ostringstream out;
    for (const TraceEntry& entry : trace.entries) out << trace_entry_to_json(entry).dump() << "\n";
    return out.str();
}

EvolutionTrace trace_from_jsonl(std::string_view bytes) {
    EvolutionTrace trace;
    std::size_t line_start = 0;
    std::uint64_t expected_seq = 1;
    while (line_start < bytes.size()) {
        std::size_t line_end = bytes.find('\n', line_start);
        if (line_end == std::string_view::npos) line_end = bytes.size();
        std::string_view line = bytes.substr(line_start, line_end - line_start);
        line_start = line_end + 1;
        if (line.empty()) continue;
        json value;
        try {
            value = json::parse(line);
        } catch (const json::exception& e) {
            fail(Errc::parse_error, std::string("trace line ") + std::to_string(expected_seq) + ": " + e.what());
        }
        TraceEntry entry = trace_entry_from_json(value);
        if (entry.seq != expected_seq)
            fail(Errc::parse_error,
                 "trace sequence numbers must be contiguous from 1 (found " +
                     std::to_string(entry.seq) + ", expected " + std::to_string(expected_seq) + ")");
        if (!trace.entries.empty() && trace.entries.back().post_hash != entry.pre_hash)
            fail(Errc::hash_chain_broken, "stored trace chain is broken at seq " + std::to_string(entry.seq));
        trace.entries.push_back(std::move(entry));
        ++expected_seq;
    }
    return trace;
}

std::string iso8601_utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%04d-%02d-%02dT%02d:%02d:%02dZ", utc.tm_year + 1900,
                  utc.tm_mon + 1, utc.tm_mday, utc.tm_hour, utc.tm_min, utc.tm_sec);
    return buffer;
}

} // namespace cpmx
