#include "cpmx/secondary.hpp"

#include <algorithm>

#include "cpmx/errors.hpp"
#include "internal.hpp"

namespace cpmx {

using namespace internal;

namespace {

std::string pattern_id(ElementKind kind, const char* suffix) {
    return std::string("v") + (kind == ElementKind::resource ? "r" : "d") + suffix;
}

std::string vp_pattern_id(ElementKind kind, const char* suffix) {
    return std::string("vp") + (kind == ElementKind::resource ? "r" : "d") + suffix;
}

void require_secondary_kind(ElementKind kind) {
    if (kind == ElementKind::activity)
        fail(Errc::unknown_pattern, "activity evolution has its own patterns");
}

const VariabilityRole* role_of_kind(const Model& model, ElementKind kind, const std::string& id) {
    if (element_kind(model, id) != kind) return nullptr;
    return role_of(model, id);
}

// Ids of activities referencing the element (assignment or data reference).
std::vector<std::string> referencing_activities(const Model& model, const std::string& id) {
    std::vector<std::string> out;
    for (const auto& [activity_id, activity] : model.activities) {
        if ((activity.resource && *activity.resource == id) || activity.data_refs.count(id))
            out.push_back(activity_id);
    }
    return out;
}

void clear_references(Model& model, const std::string& id) {
    for (auto& [activity_id, activity] : model.activities) {
        if (activity.resource && *activity.resource == id) activity.resource.reset();
        activity.data_refs.erase(id);
    }
}

} // namespace

ApplyResult vp_insert(const Model& model, ElementKind kind, const VpElementSpec& spec) {
    require_secondary_kind(kind);
    Model work = model;
    if (kind == ElementKind::resource)
        insert_vp_resource(work, spec);
    else
        insert_vp_data(work, spec);

    ensure_valid(work, "variation point " + std::string(kind_label(kind)) + " insertion");
    return {work, make_entry(vp_pattern_id(kind, "i"), to_json(spec), model, work)};
}

ApplyResult variant_insert(const Model& model, ElementKind kind, const SecondaryVariantInsert& params) {
    require_secondary_kind(kind);
    Model work = model;

    const VariabilityRole* role = role_of_kind(work, kind, params.vp_id);
    if (!role)
        fail(Errc::no_variation_point,
             "no " + std::string(kind_label(kind)) + " '" + params.vp_id + "'", {params.vp_id});
    if (is_variant(*role))
        fail(Errc::no_variation_point, "'" + params.vp_id + "' is a variant, not a variation point",
             {params.vp_id});
    if (is_plain(*role)) {
        if (!params.transform)
            fail(Errc::no_variation_point,
                 "'" + params.vp_id + "' is plain; a variant needs a variation point or a transformation",
                 {params.vp_id});
        work = transform_to_variation_point(work, params.vp_id, *params.transform);
    }

    if (kind == ElementKind::resource)
        insert_variant_resource(work, params.vp_id, params.variant);
    else
        insert_variant_data(work, params.vp_id, params.variant);

    ensure_valid(work, "variant " + std::string(kind_label(kind)) + " insertion");
    return {work, make_entry(pattern_id(kind, "i"), to_json(params), model, work)};
}

ApplyResult vp_substitute(const Model& model, ElementKind kind, const SecondaryVpSubstitution& params) {
    require_secondary_kind(kind);
    Model work = model;
    substitute_vp_element(work, kind, params.old_id, params.replacement, params.dispositions);

    ensure_valid(work, "variation point " + std::string(kind_label(kind)) + " substitution");
    return {work, make_entry(vp_pattern_id(kind, "s"), to_json(params), model, work)};
}

ApplyResult variant_substitute(const Model& model, ElementKind kind, const std::string& variant_id,
                               const VariantElementSpec& spec) {
    require_secondary_kind(kind);
    const VariabilityRole* role = role_of_kind(model, kind, variant_id);
    if (!role || !is_variant(*role))
        fail(Errc::not_a_variant,
             "'" + variant_id + "' is not a " + std::string(kind_label(kind)) + " variant", {variant_id});
    const std::string parent = std::get<VariantRole>(*role).parent;

    Model work = model;
    if (kind == ElementKind::resource)
        substitute_variant_resource(work, variant_id, spec, parent);
    else
        substitute_variant_data(work, variant_id, spec, parent);

    if (kind == ElementKind::resource) {
        // replacing a variant may shrink what assigned activities rely on
        for (const auto& [activity_id, activity] : work.activities) {
            if (!activity.resource) continue;
            std::set<std::string> provided = effective_functionalities(work, *activity.resource);
            for (const std::string& needed : activity.req_f)
                if (!provided.count(needed))
                    fail(Errc::coverage_violation,
                         "substituting '" + variant_id + "' uncovers '" + needed + "' required by '" +
                             activity_id + "'",
                         {activity_id, *activity.resource});
        }
    }

    ensure_valid(work, "variant " + std::string(kind_label(kind)) + " substitution");
    nlohmann::json params{{"variant_id", variant_id}, {"with", to_json(spec)}};
    return {work, make_entry(pattern_id(kind, "s"), std::move(params), model, work)};
}

ApplyResult vp_delete(const Model& model, ElementKind kind, const std::string& vp_id, bool cascade) {
    require_secondary_kind(kind);
    const VariabilityRole* role = role_of_kind(model, kind, vp_id);
    if (!role || !is_variation_point(*role))
        fail(Errc::not_a_variation_point,
             "'" + vp_id + "' is not a " + std::string(kind_label(kind)) + " variation point", {vp_id});

    const std::vector<std::string> variants = variant_ids_of(model, vp_id);
    std::set<std::string> removed(variants.begin(), variants.end());

    auto dependents = requiring_survivors(model, removed);
    if (!dependents.empty())
        fail(Errc::dependent_variant, "variants of '" + vp_id + "' are required by surviving variants",
             dependents);

    std::vector<std::string> in_use = referencing_activities(model, vp_id);
    for (const std::string& variant_id : removed)
        for (const std::string& activity_id : referencing_activities(model, variant_id))
            in_use.push_back(activity_id);
    if (!in_use.empty() && !cascade) {
        std::sort(in_use.begin(), in_use.end());
        in_use.erase(std::unique(in_use.begin(), in_use.end()), in_use.end());
        fail(Errc::element_in_use, "'" + vp_id + "' is still referenced; pass cascade to clear references",
             in_use);
    }

    Model work = model;
    for (const std::string& variant_id : removed) {
        erase_vccs_touching(work, variant_id);
        clear_references(work, variant_id);
        work.resources.erase(variant_id);
        work.data_objects.erase(variant_id);
    }
    clear_references(work, vp_id);
    work.resources.erase(vp_id);
    work.data_objects.erase(vp_id);

    ensure_valid(work, "variation point " + std::string(kind_label(kind)) + " deletion");
    nlohmann::json params{{"vp_id", vp_id}, {"cascade", cascade}};
    return {work, make_entry(vp_pattern_id(kind, "d"), std::move(params), model, work)};
}

ApplyResult variant_delete(const Model& model, ElementKind kind, const std::string& variant_id,
                           bool cascade) {
    require_secondary_kind(kind);
    const VariabilityRole* role = role_of_kind(model, kind, variant_id);
    if (!role || !is_variant(*role))
        fail(Errc::not_a_variant,
             "'" + variant_id + "' is not a " + std::string(kind_label(kind)) + " variant", {variant_id});
    const std::string parent = std::get<VariantRole>(*role).parent;
    if (variant_ids_of(model, parent).size() <= 1)
        fail(Errc::last_variant,
             "'" + variant_id + "' is the last variant of '" + parent + "'; delete the variation point instead",
             {variant_id, parent});
    auto dependents = requiring_survivors(model, {variant_id});
    if (!dependents.empty())
        fail(Errc::dependent_variant, "'" + variant_id + "' is required by surviving variants", dependents);

    std::vector<std::string> in_use = referencing_activities(model, variant_id);
    if (!in_use.empty() && !cascade)
        fail(Errc::element_in_use,
             "'" + variant_id + "' is still referenced; pass cascade to clear references", in_use);

    Model work = model;
    erase_vccs_touching(work, variant_id);
    clear_references(work, variant_id);
    work.resources.erase(variant_id);
    work.data_objects.erase(variant_id);

    ensure_valid(work, "variant " + std::string(kind_label(kind)) + " deletion");
    nlohmann::json params{{"variant_id", variant_id}, {"cascade", cascade}};
    return {work, make_entry(pattern_id(kind, "d"), std::move(params), model, work)};
}

} // namespace cpmx
