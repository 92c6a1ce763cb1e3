#ifndef CPMX_SPECS_HPP
#define CPMX_SPECS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpmx/model.hpp"

namespace cpmx {

// Parameter payloads for the evolution patterns. Every payload has a JSON
// form (the CLI's --params files); parsers throw ParseError on bad shapes.

struct NodeSpec {
    std::string id;
    std::string name; // defaults to id
};

// New variant activity: selection condition, configuration constraints, and
// the functionalities it requires.
struct VariantActivitySpec {
    std::string id;
    std::string name;
    std::optional<std::string> vsc;
    std::set<std::string> req_f;
    std::vector<Vcc> vccs;
};

// New variant resource or data object. `functionalities` applies to
// resources, `data_type` to data objects; `attach_to` lists activity ids the
// variant is assigned to (resource) or referenced by (data).
struct VariantElementSpec {
    std::string id;
    std::string name;
    std::optional<std::string> vsc;
    std::set<std::string> functionalities;
    std::string data_type;
    std::vector<std::string> attach_to;
    std::vector<Vcc> vccs;
};

// New variation point resource or data object, with its initial variants.
struct VpElementSpec {
    std::string id;
    std::string name;
    VpType type = VpType::alternative;
    std::set<std::string> functionalities; // resource kind: reference set for compatibility
    std::string data_type;                 // data kind: reference type for compatibility
    std::vector<VariantElementSpec> variants;
    std::vector<std::string> attach_to;
};

struct DataInsertSpec {
    std::string id;
    std::string name;
    std::string data_type;
    std::vector<std::string> attach_to;
};

// Resource resolution plan for a variation point activity insertion: try
// `candidate` first; when it covers the required functionalities it is
// assigned (inserting `variant_insert` under it, transforming a plain
// candidate when variants are called for); otherwise `fallback` is inserted
// as a new variation point resource and assigned.
struct VpaiResourcePlan {
    std::optional<std::string> candidate;
    std::optional<VpType> transform_candidate;
    std::optional<VariantElementSpec> variant_insert;
    std::optional<VpElementSpec> fallback;
};

struct VpaiParams {
    std::optional<NodeSpec> new_vp;                  // design choice: add a new node...
    std::optional<std::string> transform_existing;   // ...or transform an existing plain activity
    std::optional<FlowKey> position;                 // predecessor/successor, required for a new node
    VpType vp_type = VpType::alternative;
    std::set<std::string> req_f;
    std::vector<VariantActivitySpec> variants;
    std::optional<std::string> flow_condition;
    std::optional<VpaiResourcePlan> resource;
    std::optional<DataInsertSpec> data_insert;       // plain data object
    std::optional<VpElementSpec> data_insert_vp;     // or a variation point data object
};

struct VaiParams {
    std::string vp_id;
    std::optional<VpType> transform; // set when vp_id names a plain activity to transform first
    VariantActivitySpec variant;
};

enum class DispositionAction { keep, remove, substitute };

struct VariantDisposition {
    DispositionAction action = DispositionAction::keep;
    std::optional<VariantActivitySpec> replacement; // for substitute
};

struct SecondaryDisposition {
    DispositionAction action = DispositionAction::keep;
    std::optional<VariantElementSpec> replacement;
};

struct DataSubstitutionSpec {
    std::string old_id;
    DataInsertSpec replacement;
};

struct VpasResourcePlan {
    std::optional<std::string> assign;                  // existing resource for the substitute
    std::optional<VariantElementSpec> variant_insert;   // new variant under the assigned resource
    std::optional<std::string> substitute_old;          // full resource substitution: old id...
    std::optional<VpElementSpec> substitute_with;       // ...and its replacement
};

struct VpasParams {
    std::string old_vp_id;
    std::optional<NodeSpec> substitute_new;
    std::optional<std::string> substitute_existing;
    VpType vp_type = VpType::alternative;
    std::set<std::string> req_f; // required functionalities of the substitute
    std::map<std::string, VariantDisposition> dispositions; // explicit overrides per old variant
    std::vector<VariantActivitySpec> new_variants;
    std::optional<DataSubstitutionSpec> data_substitution;
    std::optional<DataInsertSpec> data_insert;
    std::optional<std::string> condition;
    std::optional<VpasResourcePlan> resource;
};

struct VasParams {
    std::string variant_id;
    VariantActivitySpec replacement;
};

// Secondary (resource/data) pattern payloads.

struct SecondaryVariantInsert {
    std::string vp_id;
    std::optional<VpType> transform;
    VariantElementSpec variant;
};

struct SecondaryVpSubstitution {
    std::string old_id;
    VpElementSpec replacement;
    std::map<std::string, SecondaryDisposition> dispositions;
};

// JSON conversions.
nlohmann::json to_json(const VpaiParams& params);
nlohmann::json to_json(const VaiParams& params);
nlohmann::json to_json(const VpasParams& params);
nlohmann::json to_json(const VasParams& params);
nlohmann::json to_json(const VpElementSpec& spec);
nlohmann::json to_json(const SecondaryVariantInsert& params);
nlohmann::json to_json(const SecondaryVpSubstitution& params);
nlohmann::json to_json(const VariantElementSpec& spec);
nlohmann::json to_json(const VariantActivitySpec& spec);

VpaiParams vpai_params_from_json(const nlohmann::json& value);
VaiParams vai_params_from_json(const nlohmann::json& value);
VpasParams vpas_params_from_json(const nlohmann::json& value);
VasParams vas_params_from_json(const nlohmann::json& value);
VpElementSpec vp_element_spec_from_json(const nlohmann::json& value);
SecondaryVariantInsert secondary_variant_insert_from_json(const nlohmann::json& value);
SecondaryVpSubstitution secondary_vp_substitution_from_json(const nlohmann::json& value);
VariantElementSpec variant_element_spec_from_json(const nlohmann::json& value);
VariantActivitySpec variant_activity_spec_from_json(const nlohmann::json& value);

} // namespace cpmx

#endif
