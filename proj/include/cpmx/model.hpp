#ifndef CPMX_MODEL_HPP
#define CPMX_MODEL_HPP

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cpmx {

// ---------------------------------------------------------------------------
// Variability roles
// ---------------------------------------------------------------------------

enum class VpType { optional, alternative, optional_alternative };

std::optional<VpType> parse_vp_type(std::string_view label);
std::string_view vp_type_label(VpType type);

struct PlainRole {
    friend bool operator==(const PlainRole&, const PlainRole&) = default;
};

// The type label is kept as written; whether it names a legal variation
// point type is a well-formedness question (rule W4), not a structural one.
struct VariationPointRole {
    std::string type;
    friend bool operator==(const VariationPointRole&, const VariationPointRole&) = default;
};

struct VariantRole {
    std::string parent;
    std::optional<std::string> vsc; // variant selection condition, opaque label
    friend bool operator==(const VariantRole&, const VariantRole&) = default;
};

using VariabilityRole = std::variant<PlainRole, VariationPointRole, VariantRole>;

bool is_plain(const VariabilityRole& role);
bool is_variation_point(const VariabilityRole& role);
bool is_variant(const VariabilityRole& role);

// Stereotype text shown on diagrams; a pure function of the role.
// VP(alternative) -> «VarPoint», VP(optional / optional-alternative) -> «Null»,
// Variant -> «Variant», Plain -> nothing.
std::optional<std::string> annotation(const VariabilityRole& role);

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

enum class ElementKind { activity, resource, data };

std::string_view kind_label(ElementKind kind);

struct Activity {
    std::string id;
    std::string name;
    VariabilityRole role = PlainRole{};
    std::set<std::string> req_f;            // required functionalities
    std::optional<std::string> resource;    // assigned resource id
    std::set<std::string> data_refs;        // referenced data object ids

    friend bool operator==(const Activity&, const Activity&) = default;
};

struct Resource {
    std::string id;
    std::string name;
    VariabilityRole role = PlainRole{};
    std::set<std::string> functionalities;  // functions this resource provides

    friend bool operator==(const Resource&, const Resource&) = default;
};

struct DataObject {
    std::string id;
    std::string name;
    VariabilityRole role = PlainRole{};
    std::string data_type;

    friend bool operator==(const DataObject&, const DataObject&) = default;
};

struct FlowKey {
    std::string source;
    std::string target;
    auto operator<=>(const FlowKey&) const = default;
};

enum class VccRelation { requires_presence, excludes_presence };

std::string_view vcc_relation_label(VccRelation relation);
std::optional<VccRelation> parse_vcc_relation(std::string_view label);

// Variant configuration constraint: choosing `subject` requires / excludes
// choosing `object`.
struct Vcc {
    std::string subject;
    VccRelation relation = VccRelation::requires_presence;
    std::string object;
    auto operator<=>(const Vcc&) const = default;
};

// ---------------------------------------------------------------------------
// The configurable process model
// ---------------------------------------------------------------------------

struct ConfigurableProcessModel {
    std::string id;
    std::string start_node;
    std::string end_node;
    int max_activities = 1;

    std::map<std::string, Activity> activities;
    std::map<std::string, Resource> resources;
    std::map<std::string, DataObject> data_objects;
    std::map<FlowKey, std::optional<std::string>> flows; // value = flow condition
    std::set<Vcc> vccs;

    friend bool operator==(const ConfigurableProcessModel&,
                           const ConfigurableProcessModel&) = default;
};

using Model = ConfigurableProcessModel;

// ---------------------------------------------------------------------------
// Lookup helpers
// ---------------------------------------------------------------------------

const Activity* find_activity(const Model& model, const std::string& id);
const Resource* find_resource(const Model& model, const std::string& id);
const DataObject* find_data(const Model& model, const std::string& id);

std::optional<ElementKind> element_kind(const Model& model, const std::string& id);
const VariabilityRole* role_of(const Model& model, const std::string& id);

// True when any element, or the start/end node, already uses this id.
bool id_in_use(const Model& model, const std::string& id);

// Ids of variants attached to the given variation point, same element kind,
// sorted. Empty when the id is unknown.
std::vector<std::string> variant_ids_of(const Model& model, const std::string& vp_id);

// Variation point ids across all element kinds, sorted.
std::vector<std::string> variation_point_ids(const Model& model);

// Variant ids across all element kinds, sorted.
std::vector<std::string> variant_ids(const Model& model);

// A resource's effective functionality set: its own for plain resources and
// variants, the union over its variants for a variation point.
std::set<std::string> effective_functionalities(const Model& model, const std::string& resource_id);

// Activities that sit in the sequence flow: plain activities and variation
// points. Variants hang off their variation point and are excluded.
int flow_eligible_activity_count(const Model& model);

// Capacity gate shared by the activity insertion patterns.
bool capacity_reached(const Model& model);

// ---------------------------------------------------------------------------
// Primitive role change
// ---------------------------------------------------------------------------

// Marks a plain element (any kind) as a variation point. This is a building
// block used inside composite patterns; it does not validate the result.
// The surrounding pattern commits only validated models.
Model transform_to_variation_point(const Model& model, const std::string& element_id, VpType type);

} // namespace cpmx

#endif
