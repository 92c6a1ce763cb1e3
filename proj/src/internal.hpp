#ifndef CPMX_SRC_INTERNAL_HPP
#define CPMX_SRC_INTERNAL_HPP

// Building blocks shared by the pattern implementations. These mutate a
// working copy inside an atomic pattern application; preconditions that the
// composite owns (capacity, commit-time validation) are checked by the
// public operations, not here.

#include <set>
#include <string>
#include <vector>

#include "cpmx/model.hpp"
#include "cpmx/specs.hpp"
#include "cpmx/trace.hpp"

namespace cpmx::internal {

void ensure_fresh_id(const Model& model, const std::string& id);

// Throws InvalidVcc unless endpoints are distinct existing variants and the
// constraint does not contradict an existing one on the same ordered pair.
void add_vcc_checked(Model& model, const Vcc& vcc);
void add_vccs_checked(Model& model, const std::vector<Vcc>& vccs);

// Variants (outside `removed`) holding a requires-constraint into `removed`.
std::vector<std::string> requiring_survivors(const Model& model, const std::set<std::string>& removed);

void erase_vccs_touching(Model& model, const std::string& id);

// Flow surgery. Bridging connects every predecessor to every successor,
// carrying the predecessor flow's condition; existing flows win.
void bridge_and_remove_flow_node(Model& model, const std::string& node_id);
void replace_flow_node(Model& model, const std::string& old_id, const std::string& new_id);

// Element insertion primitives.
void insert_variant_activity(Model& model, const std::string& vp_id, const VariantActivitySpec& spec);
void insert_variant_resource(Model& model, const std::string& vp_id, const VariantElementSpec& spec);
void insert_variant_data(Model& model, const std::string& vp_id, const VariantElementSpec& spec);
void insert_vp_resource(Model& model, const VpElementSpec& spec);
void insert_vp_data(Model& model, const VpElementSpec& spec);

// Assignment / reference primitives (throw TargetActivityNotFound,
// CoverageViolation).
void assign_resource(Model& model, const std::string& activity_id, const std::string& resource_id);
void attach_data(Model& model, const std::string& activity_id, const std::string& data_id);

// In-place variant replacement under the same parent, carrying over the old
// variant's resource assignment and data references. Constraints pointing at
// the old variant follow it; its own constraints are replaced by the spec's
// when supplied, renamed otherwise.
void substitute_variant_activity(Model& model, const std::string& old_variant_id,
                                 const VariantActivitySpec& spec, const std::string& parent_id);
void substitute_variant_resource(Model& model, const std::string& old_variant_id,
                                 const VariantElementSpec& spec, const std::string& parent_id);
void substitute_variant_data(Model& model, const std::string& old_variant_id,
                             const VariantElementSpec& spec, const std::string& parent_id);

// Removes resource/data elements that only the deleted activities referenced
// and that nothing else needs, so that deleting an insertion's variation
// point also retracts what the insertion brought along.
void sweep_exclusive_references(Model& model, std::set<std::string> candidates);

// Replaces a variation point resource/data element, re-pointing references
// and dispositioning its variants the same way the activity substitution
// does: explicit dispositions win, the rest are kept when compatible
// (functionality subset for resources, equal data type for data) and deleted
// otherwise. The replacement's own variants are inserted afterwards.
void substitute_vp_element(Model& model, ElementKind kind, const std::string& old_id,
                           const VpElementSpec& replacement,
                           const std::map<std::string, SecondaryDisposition>& dispositions);

// Commit gate: throws ModelInvalid when the result breaks a W rule.
void ensure_valid(const Model& model, const std::string& context);

TraceEntry make_entry(const std::string& pattern, nlohmann::json params, const Model& before,
                      const Model& after);

} // namespace cpmx::internal

#endif
