#include "cpmx/model.hpp"

#include <algorithm>

#include "cpmx/errors.hpp"

namespace cpmx {

std::optional<VpType> parse_vp_type(std::string_view label) {
    if (label == "optional") return VpType::optional;
    if (label == "alternative") return VpType::alternative;
    if (label == "optional-alternative") return VpType::optional_alternative;
    return std::nullopt;
}

std::string_view vp_type_label(VpType type) {
    switch (type) {
    case VpType::optional: return "optional";
    case VpType::alternative: return "alternative";
    case VpType::optional_alternative: return "optional-alternative";
    }
    return "optional";
}

bool is_plain(const VariabilityRole& role) {
    return std::holds_alternative<PlainRole>(role);
}

bool is_variation_point(const VariabilityRole& role) {
    return std::holds_alternative<VariationPointRole>(role);
}

bool is_variant(const VariabilityRole& role) {
    return std::holds_alternative<VariantRole>(role);
}

std::optional<std::string> annotation(const VariabilityRole& role) {
    if (const auto* vp = std::get_if<VariationPointRole>(&role)) {
        auto type = parse_vp_type(vp->type);
        if (!type) return std::nullopt; // illegal type label, flagged by W4
        return *type == VpType::alternative ? std::string("«VarPoint»")
                                            : std::string("«Null»");
    }
    if (std::holds_alternative<VariantRole>(role)) return std::string("«Variant»");
    return std::nullopt;
}

std::string_view kind_label(ElementKind kind) {
    switch (kind) {
    case ElementKind::activity: return "activity";
    case ElementKind::resource: return "resource";
    case ElementKind::data: return "data";
    }
    return "activity";
}

std::string_view vcc_relation_label(VccRelation relation) {
    return relation == VccRelation::requires_presence ? "requires" : "excludes";
}

std::optional<VccRelation> parse_vcc_relation(std::string_view label) {
    if (label == "requires") return VccRelation::requires_presence;
    if (label == "excludes") return VccRelation::excludes_presence;
    return std::nullopt;
}

const Activity* find_activity(const Model& model, const std::string& id) {
    auto it = model.activities.find(id);
    return it == model.activities.end() ? nullptr : &it->second;
}

const Resource* find_resource(const Model& model, const std::string& id) {
    auto it = model.resources.find(id);
    return it == model.resources.end() ? nullptr : &it->second;
}

const DataObject* find_data(const Model& model, const std::string& id) {
    auto it = model.data_objects.find(id);
    return it == model.data_objects.end() ? nullptr : &it->second;
}

std::optional<ElementKind> element_kind(const Model& model, const std::string& id) {
    if (model.activities.count(id)) return ElementKind::activity;
    if (model.resources.count(id)) return ElementKind::resource;
    if (model.data_objects.count(id)) return ElementKind::data;
    return std::nullopt;
}

const VariabilityRole* role_of(const Model& model, const std::string& id) {
    if (const auto* a = find_activity(model, id)) return &a->role;
    if (const auto* r = find_resource(model, id)) return &r->role;
    if (const auto* d = find_data(model, id)) return &d->role;
    return nullptr;
}

bool id_in_use(const Model& model, const std::string& id) {
    return id == model.start_node || id == model.end_node || element_kind(model, id).has_value();
}

namespace {

template <typename Map>
void collect_variants_of(const Map& elements, const std::string& vp_id, std::vector<std::string>& out) {
    for (const auto& [id, element] : elements) {
        if (const auto* v = std::get_if<VariantRole>(&element.role); v && v->parent == vp_id)
            out.push_back(id);
    }
}

} // namespace

std::vector<std::string> variant_ids_of(const Model& model, const std::string& vp_id) {
    std::vector<std::string> out;
    auto kind = element_kind(model, vp_id);
    if (!kind) return out;
    switch (*kind) {
    case ElementKind::activity: collect_variants_of(model.activities, vp_id, out); break;
    case ElementKind::resource: collect_variants_of(model.resources, vp_id, out); break;
    case ElementKind::data: collect_variants_of(model.data_objects, vp_id, out); break;
    }
    return out; // map iteration is already sorted by id
}

std::vector<std::string> variation_point_ids(const Model& model) {
    std::vector<std::string> out;
    for (const auto& [id, a] : model.activities)
        if (is_variation_point(a.role)) out.push_back(id);
    for (const auto& [id, r] : model.resources)
        if (is_variation_point(r.role)) out.push_back(id);
    for (const auto& [id, d] : model.data_objects)
        if (is_variation_point(d.role)) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> variant_ids(const Model& model) {
    std::vector<std::string> out;
    for (const auto& [id, a] : model.activities)
        if (is_variant(a.role)) out.push_back(id);
    for (const auto& [id, r] : model.resources)
        if (is_variant(r.role)) out.push_back(id);
    for (const auto& [id, d] : model.data_objects)
        if (is_variant(d.role)) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
}

std::set<std::string> effective_functionalities(const Model& model, const std::string& resource_id) {
    std::set<std::string> out;
    const Resource* resource = find_resource(model, resource_id);
    if (!resource) return out;
    if (is_variation_point(resource->role)) {
        for (const auto& variant_id : variant_ids_of(model, resource_id)) {
            const Resource* variant = find_resource(model, variant_id);
            if (variant) out.insert(variant->functionalities.begin(), variant->functionalities.end());
        }
        return out;
    }
    return resource->functionalities;
}

int flow_eligible_activity_count(const Model& model) {
    int count = 0;
    for (const auto& [id, a] : model.activities)
        if (!is_variant(a.role)) ++count;
    return count;
}

bool capacity_reached(const Model& model) {
    return flow_eligible_activity_count(model) >= model.max_activities;
}

Model transform_to_variation_point(const Model& model, const std::string& element_id, VpType type) {
    auto kind = element_kind(model, element_id);
    if (!kind) fail(Errc::element_not_found, "no element with id '" + element_id + "'", {element_id});

    Model out = model;
    VariabilityRole* role = nullptr;
    switch (*kind) {
    case ElementKind::activity: role = &out.activities.at(element_id).role; break;
    case ElementKind::resource: role = &out.resources.at(element_id).role; break;
    case ElementKind::data: role = &out.data_objects.at(element_id).role; break;
    }
    if (!is_plain(*role))
        fail(Errc::already_variable, "element '" + element_id + "' already carries a variability role",
             {element_id});
    *role = VariationPointRole{std::string(vp_type_label(type))};
    return out;
}

} // namespace cpmx
