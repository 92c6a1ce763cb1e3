#ifndef CPMX_TRACE_HPP
#define CPMX_TRACE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cpmx/diff.hpp"
#include "cpmx/model.hpp"

namespace cpmx {

// One pattern application: which pattern ran, the parameters as supplied,
// and the primitive edits it performed. pre/post hashes chain entries
// together so replay can detect any divergence.
struct TraceEntry {
    std::uint64_t seq = 0; // assigned by record()
    std::string pattern;
    nlohmann::json params;
    std::vector<Edit> edits;
    std::string pre_hash;
    std::string post_hash;
    std::string timestamp; // ISO-8601 UTC, informational only
};

struct EvolutionTrace {
    std::vector<TraceEntry> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
};

// Appends an entry, assigning the next sequence number. The entry's pre_hash
// must continue the chain (it is accepted as the chain root on an empty
// trace). Throws HashChainBroken otherwise.
EvolutionTrace record(EvolutionTrace trace, TraceEntry entry);

// Re-applies every entry's edits in order, verifying the hash chain along
// the way. Throws HashChainBroken / EditApplicationFailed.
Model replay(const Model& initial_model, const EvolutionTrace& trace);

// Reverts the last entry by applying its inverse edits in reverse order.
// Returns the restored model and the trace without its last entry.
std::pair<Model, EvolutionTrace> undo(const Model& model, const EvolutionTrace& trace);

nlohmann::json trace_entry_to_json(const TraceEntry& entry);
TraceEntry trace_entry_from_json(const nlohmann::json& value);

// Trace files hold one JSON object per line, in entry order.
std::string trace_to_jsonl(const EvolutionTrace& trace);
EvolutionTrace trace_from_jsonl(std::string_view bytes);

std::string iso8601_utc_now();

} // namespace cpmx

#endif
