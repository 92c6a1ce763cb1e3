#ifndef CPMX_EVOLUTION_HPP
#define CPMX_EVOLUTION_HPP

#include <string>

#include <json.hpp>

#include "cpmx/model.hpp"
#include "cpmx/specs.hpp"
#include "cpmx/trace.hpp"

namespace cpmx {

// Every pattern application is atomic: it either returns a validated model
// plus the trace entry describing it, or throws without observable effect.
struct ApplyResult {
    Model model;
    TraceEntry entry;
};

// Activity evolution patterns.
//
// The composite insertion: splices the variation point into the flow (or
// transforms an existing plain activity), inserts its variants, resolves the
// resource (assignment, variant-resource insertion, transformation, or
// fallback insertion of a new variation point resource), sets the flow
// condition, and inserts data.
ApplyResult vpai(const Model& model, const VpaiParams& params);

ApplyResult variant_activity_insert(const Model& model, const VaiParams& params);

// The composite substitution: replaces the old variation point by a new node
// or by an existing plain activity (transformed in place), dispositions the
// old variants (keep / delete / substitute, derived from the functionality
// subset test unless overridden), substitutes data and resource, and adjusts
// the flow condition.
ApplyResult vpas(const Model& model, const VpasParams& params);

ApplyResult variant_activity_substitute(const Model& model, const VasParams& params);

// Deletes the variation point with all its variants and their constraints,
// bridges the flow, and retracts resource/data elements only the deleted
// activities referenced.
ApplyResult vp_activity_delete(const Model& model, const std::string& vp_id);

ApplyResult variant_activity_delete(const Model& model, const std::string& variant_id);

// Dispatch by pattern id (vpai, vai, vpas, vas, vpad, vad, and the
// resource/data ids vpri, vri, vprs, vrs, vprd, vrd, vpdi, vdi, vpds, vds,
// vpdd, vdd). The raw params document is preserved in the trace entry.
ApplyResult apply_pattern(const Model& model, const std::string& pattern_id,
                          const nlohmann::json& params);

bool is_known_pattern_id(const std::string& pattern_id);

} // namespace cpmx

#endif
