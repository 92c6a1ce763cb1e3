#ifndef CPMX_SECONDARY_HPP
#define CPMX_SECONDARY_HPP

#include <string>

#include "cpmx/evolution.hpp"
#include "cpmx/model.hpp"
#include "cpmx/specs.hpp"

namespace cpmx {

// Resource and data evolution patterns. These mirror the activity patterns
// with kind-specific payloads: functionality coverage plays the role of the
// subset test for resources, data type equality for data objects. Resources
// and data objects do not sit in the sequence flow; their position is the
// set of assignments and references.

// VPRI / VPDI
ApplyResult vp_insert(const Model& model, ElementKind kind, const VpElementSpec& spec);

// VRI / VDI
ApplyResult variant_insert(const Model& model, ElementKind kind, const SecondaryVariantInsert& params);

// VPRS / VPDS
ApplyResult vp_substitute(const Model& model, ElementKind kind, const SecondaryVpSubstitution& params);

// VRS / VDS
ApplyResult variant_substitute(const Model& model, ElementKind kind, const std::string& variant_id,
                               const VariantElementSpec& spec);

// VPRD / VPDD. Without `cascade`, a variation point still referenced by an
// activity is not deletable; with it, assignments and references are cleared.
ApplyResult vp_delete(const Model& model, ElementKind kind, const std::string& vp_id, bool cascade);

// VRD / VDD
ApplyResult variant_delete(const Model& model, ElementKind kind, const std::string& variant_id,
                           bool cascade);

} // namespace cpmx

#endif
