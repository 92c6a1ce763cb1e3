#ifndef CPMX_CONSTRAINTS_HPP
#define CPMX_CONSTRAINTS_HPP

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpmx/configuration.hpp"
#include "cpmx/model.hpp"

namespace cpmx {

enum class EcStatus { satisfied, violated, not_applicable };

std::string_view ec_status_label(EcStatus status);

// The five evolution constraints:
//   EC1 inserting a variation point requires at least one variant
//   EC2 inserting a variant requires a variation point (or a transformation)
//   EC3 substituting a variation point handles every existing variant
//   EC4 deleting a variation point cascades over its variants cleanly
//   EC5 deleting a variant requires that no other variant needs it
struct EvolutionConstraintReport {
    struct Item {
        std::string id; // "EC1" .. "EC5"
        EcStatus status = EcStatus::not_applicable;
        std::vector<std::string> offenders;
        std::string message;
    };
    std::array<Item, 5> items;

    const Item& operator[](int index) const { return items.at(index); }
};

// Evaluates the constraints relevant to a proposed pattern application;
// irrelevant constraints report not-applicable. Throws UnknownPattern.
EvolutionConstraintReport check_evolution_constraints(const Model& model,
                                                      const std::string& pattern_id,
                                                      const nlohmann::json& params);

struct VccConflict {
    std::string kind; // "contradiction", "self_competition", "unselectable"
    std::vector<std::string> ids;
    std::string message;
};

// Reports contradictory constraint pairs, requires edges between variants of
// one variation point, and variants that no valid configuration can select
// (established by bounded search; the chain of requirements that runs into
// an exclusion is named when one exists).
std::vector<VccConflict> check_vcc_consistency(const Model& model,
                                               std::uint64_t bound = default_enumeration_bound);

// Variants whose requires-constraint points at the given variant; with
// `transitive`, the closure of that relation.
std::set<std::string> variant_dependents(const Model& model, const std::string& variant_id,
                                         bool transitive = false);

nlohmann::json report_to_json(const EvolutionConstraintReport& report);
nlohmann::json conflicts_to_json(const std::vector<VccConflict>& conflicts);

} // namespace cpmx

#endif
