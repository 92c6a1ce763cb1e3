#include "cpmx/evolution.hpp"

#include <algorithm>

#include "cpmx/errors.hpp"
#include "internal.hpp"

namespace cpmx {

using namespace internal;

namespace {

const Activity& require_vp_activity(const Model& model, const std::string& id, Errc code) {
    const Activity* activity = find_activity(model, id);
    if (!activity) fail(code, "no activity '" + id + "'", {id});
    if (!is_variation_point(activity->role))
        fail(code, "activity '" + id + "' is not a variation point", {id});
    return *activity;
}

// Steps 5 and 8 of the insertion: assign a covering resource, extend it with
// a variant resource (transforming a plain candidate first), or fall back to
// inserting a new variation point resource.
void resolve_resource(Model& work, const std::string& vp_id, const std::set<std::string>& req_f,
                      const VpaiResourcePlan& plan) {
    bool assigned = false;
    if (plan.candidate) {
        const Resource* candidate = find_resource(work, *plan.candidate);
        if (!candidate)
            fail(Errc::element_not_found, "no resource '" + *plan.candidate + "'", {*plan.candidate});
        std::set<std::string> provided = effective_functionalities(work, *plan.candidate);
        bool covers = std::includes(provided.begin(), provided.end(), req_f.begin(), req_f.end());
        if (covers) {
            if (is_variation_point(candidate->role)) {
                if (plan.variant_insert) insert_variant_resource(work, *plan.candidate, *plan.variant_insert);
            } else if (plan.variant_insert) {
                work = transform_to_variation_point(
                    work, *plan.candidate, plan.transform_candidate.value_or(VpType::alternative));
                insert_variant_resource(work, *plan.candidate, *plan.variant_insert);
            }
            assign_resource(work, vp_id, *plan.candidate);
            assigned = true;
        }
    }
    if (!assigned) {
        if (!plan.fallback) {
            if (plan.candidate)
                fail(Errc::missing_resource_coverage,
                     "resource '" + *plan.candidate +
                         "' does not cover the required functionalities and no fallback was supplied",
                     {*plan.candidate, vp_id});
            return; // empty plan: nothing to resolve
        }
        insert_vp_resource(work, *plan.fallback);
        std::set<std::string> provided = effective_functionalities(work, plan.fallback->id);
        if (!std::includes(provided.begin(), provided.end(), req_f.begin(), req_f.end()))
            fail(Errc::missing_resource_coverage,
                 "fallback resource '" + plan.fallback->id + "' does not cover the required functionalities",
                 {plan.fallback->id, vp_id});
        assign_resource(work, vp_id, plan.fallback->id);
    }
}

void insert_plain_data(Model& work, const DataInsertSpec& spec, const std::string& default_target) {
    ensure_fresh_id(work, spec.id);
    DataObject data;
    data.id = spec.id;
    data.name = spec.name.empty() ? spec.id : spec.name;
    data.role = PlainRole{};
    data.data_type = spec.data_type;
    work.data_objects.emplace(data.id, std::move(data));
    if (spec.attach_to.empty()) {
        if (!default_target.empty()) attach_data(work, default_target, spec.id);
    } else {
        for (const std::string& activity_id : spec.attach_to) attach_data(work, activity_id, spec.id);
    }
}

} // namespace

ApplyResult vpai(const Model& model, const VpaiParams& params) {
    if (capacity_reached(model))
        fail(Errc::capacity_exceeded,
             "activity capacity " + std::to_string(model.max_activities) + " is already reached");
    if (params.variants.empty())
        fail(Errc::empty_resulting_variant_set, "a variation point needs at least one variant");

    Model work = model;
    std::string vp_id;

    if (params.transform_existing) {
        vp_id = *params.transform_existing;
        if (!find_activity(work, vp_id))
            fail(Errc::element_not_found, "no activity '" + vp_id + "' to transform", {vp_id});
        work = transform_to_variation_point(work, vp_id, params.vp_type);
        work.activities.at(vp_id).req_f = params.req_f;
        if (params.flow_condition) {
            for (auto& [key, condition] : work.flows)
                if (key.target == vp_id) condition = params.flow_condition;
        }
    } else {
        const NodeSpec& node = *params.new_vp;
        vp_id = node.id;
        ensure_fresh_id(work, vp_id);
        if (!params.position) fail(Errc::position_not_found, "a new variation point needs a position");
        const FlowKey& position = *params.position;

        auto spliced = work.flows.find(position);
        std::optional<std::string> outgoing_condition;
        if (spliced != work.flows.end()) {
            outgoing_condition = spliced->second;
            work.flows.erase(spliced);
        } else if (position.source != work.start_node) {
            fail(Errc::position_not_found,
                 "no flow " + position.source + " -> " + position.target + " to splice into",
                 {position.source, position.target});
        } else {
            // anchoring at the start without an existing flow still needs a
            // real flow node to land on
            const Activity* successor = find_activity(work, position.target);
            bool landable = position.target == work.end_node ||
                            (successor && !is_variant(successor->role));
            if (!landable)
                fail(Errc::position_not_found,
                     "'" + position.target + "' cannot follow the new variation point",
                     {position.target});
        }

        Activity activity;
        activity.id = vp_id;
        activity.name = node.name.empty() ? vp_id : node.name;
        activity.role = VariationPointRole{std::string(vp_type_label(params.vp_type))};
        activity.req_f = params.req_f;
        work.activities.emplace(vp_id, std::move(activity));

        work.flows[FlowKey{position.source, vp_id}] = params.flow_condition;
        work.flows[FlowKey{vp_id, position.target}] = outgoing_condition;
    }

    for (const VariantActivitySpec& variant : params.variants)
        insert_variant_activity(work, vp_id, variant);
    for (const VariantActivitySpec& variant : params.variants) add_vccs_checked(work, variant.vccs);

    if (params.resource) resolve_resource(work, vp_id, params.req_f, *params.resource);
    if (params.data_insert) insert_plain_data(work, *params.data_insert, vp_id);
    if (params.data_insert_vp) {
        insert_vp_data(work, *params.data_insert_vp);
        if (params.data_insert_vp->attach_to.empty()) attach_data(work, vp_id, params.data_insert_vp->id);
    }

    ensure_valid(work, "variation point activity insertion");
    return {work, make_entry("vpai", to_json(params), model, work)};
}

ApplyResult variant_activity_insert(const Model& model, const VaiParams& params) {
    if (capacity_reached(model))
        fail(Errc::capacity_exceeded,
             "activity capacity " + std::to_string(model.max_activities) + " is already reached");

    Model work = model;
    const Activity* target = find_activity(work, params.vp_id);
    if (!target)
        fail(Errc::no_variation_point, "no activity '" + params.vp_id + "'", {params.vp_id});
    if (is_variant(target->role))
        fail(Errc::no_variation_point, "'" + params.vp_id + "' is a variant, not a variation point",
             {params.vp_id});
    if (is_plain(target->role)) {
        if (!params.transform)
            fail(Errc::no_variation_point,
                 "'" + params.vp_id + "' is plain; a variant needs a variation point or a transformation",
                 {params.vp_id});
        work = transform_to_variation_point(work, params.vp_id, *params.transform);
    }

    insert_variant_activity(work, params.vp_id, params.variant);
    add_vccs_checked(work, params.variant.vccs);

    ensure_valid(work, "variant activity insertion");
    return {work, make_entry("vai", to_json(params), model, work)};
}

ApplyResult vpas(const Model& model, const VpasParams& params) {
    require_vp_activity(model, params.old_vp_id, Errc::not_a_variation_point);
    if (!params.substitute_new && !params.substitute_existing)
        fail(Errc::parse_error, "substitution needs a new node or an existing activity");

    const std::vector<std::string> old_variants = variant_ids_of(model, params.old_vp_id);
    for (const auto& [variant_id, disposition] : params.dispositions) {
        if (std::find(old_variants.begin(), old_variants.end(), variant_id) == old_variants.end())
            fail(Errc::not_a_variant,
                 "disposition target '" + variant_id + "' is not a variant of '" + params.old_vp_id + "'",
                 {variant_id});
    }

    Model work = model;
    std::string substitute_id;

    const Activity old_vp = work.activities.at(params.old_vp_id);
    if (params.substitute_existing) {
        substitute_id = *params.substitute_existing;
        const Activity* existing = find_activity(work, substitute_id);
        if (!existing)
            fail(Errc::element_not_found, "no activity '" + substitute_id + "'", {substitute_id});
        if (!is_plain(existing->role))
            fail(Errc::already_variable, "'" + substitute_id + "' already carries a variability role",
                 {substitute_id});
        // lift the substitute out of its own flow position, then move it into
        // the old variation point's position
        bridge_and_remove_flow_node(work, substitute_id);
        replace_flow_node(work, params.old_vp_id, substitute_id);
        Activity& substitute = work.activities.at(substitute_id);
        substitute.role = VariationPointRole{std::string(vp_type_label(params.vp_type))};
        substitute.req_f = params.req_f;
        if (old_vp.resource) substitute.resource = old_vp.resource;
        substitute.data_refs.insert(old_vp.data_refs.begin(), old_vp.data_refs.end());
        work.activities.erase(params.old_vp_id);
    } else {
        substitute_id = params.substitute_new->id;
        if (substitute_id != params.old_vp_id) ensure_fresh_id(work, substitute_id);
        Activity substitute;
        substitute.id = substitute_id;
        substitute.name =
            params.substitute_new->name.empty() ? substitute_id : params.substitute_new->name;
        substitute.role = VariationPointRole{std::string(vp_type_label(params.vp_type))};
        substitute.req_f = params.req_f;
        substitute.resource = old_vp.resource; // role takeover
        substitute.data_refs = old_vp.data_refs;
        if (substitute_id != params.old_vp_id) replace_flow_node(work, params.old_vp_id, substitute_id);
        work.activities.erase(params.old_vp_id);
        work.activities.emplace(substitute_id, std::move(substitute));
    }

    // Variant dispositions: explicit ones win, the rest follow the
    // functionality subset test (compatible variants are conserved).
    std::vector<std::string> to_delete;
    std::vector<std::pair<std::string, VariantActivitySpec>> to_substitute;
    for (const std::string& variant_id : old_variants) {
        const Activity& variant = work.activities.at(variant_id);
        VariantDisposition disposition;
        auto it = params.dispositions.find(variant_id);
        if (it != params.dispositions.end()) {
            disposition = it->second;
        } else {
            bool compatible = std::includes(params.req_f.begin(), params.req_f.end(),
                                            variant.req_f.begin(), variant.req_f.end());
            disposition.action = compatible ? DispositionAction::keep : DispositionAction::remove;
        }
        switch (disposition.action) {
        case DispositionAction::keep: {
            Activity& kept = work.activities.at(variant_id);
            auto vsc = std::get<VariantRole>(kept.role).vsc;
            kept.role = VariantRole{substitute_id, vsc};
            break;
        }
        case DispositionAction::remove:
            to_delete.push_back(variant_id);
            break;
        case DispositionAction::substitute:
            if (!disposition.replacement)
                fail(Errc::parse_error, "substitute disposition for '" + variant_id + "' lacks a spec");
            to_substitute.emplace_back(variant_id, *disposition.replacement);
            break;
        }
    }
    for (const auto& [variant_id, spec] : to_substitute)
        substitute_variant_activity(work, variant_id, spec, substitute_id);
    for (const VariantActivitySpec& variant : params.new_variants)
        insert_variant_activity(work, substitute_id, variant);
    for (const VariantActivitySpec& variant : params.new_variants) add_vccs_checked(work, variant.vccs);
    for (const std::string& variant_id : to_delete) {
        auto dependents = requiring_survivors(work, {variant_id});
        if (!dependents.empty())
            fail(Errc::dependent_variant, "variant '" + variant_id + "' is required by surviving variants",
                 dependents);
        erase_vccs_touching(work, variant_id);
        work.activities.erase(variant_id);
    }
    if (variant_ids_of(work, substitute_id).empty())
        fail(Errc::empty_resulting_variant_set,
             "substitution would leave '" + substitute_id + "' without variants", {substitute_id});

    if (params.data_substitution) {
        const DataSubstitutionSpec& ds = *params.data_substitution;
        const DataObject* old_data = find_data(work, ds.old_id);
        if (!old_data) fail(Errc::element_not_found, "no data object '" + ds.old_id + "'", {ds.old_id});
        if (ds.replacement.id != ds.old_id) ensure_fresh_id(work, ds.replacement.id);
        DataObject next;
        next.id = ds.replacement.id;
        next.name = ds.replacement.name.empty() ? next.id : ds.replacement.name;
        next.role = old_data->role;
        next.data_type = ds.replacement.data_type;
        work.data_objects.erase(ds.old_id);
        work.data_objects.emplace(next.id, std::move(next));
        for (auto& [id, activity] : work.activities) {
            if (activity.data_refs.erase(ds.old_id)) activity.data_refs.insert(ds.replacement.id);
        }
        // variants of a replaced variation point follow the new id
        for (auto& [id, data] : work.data_objects) {
            if (auto* variant = std::get_if<VariantRole>(&data.role); variant && variant->parent == ds.old_id)
                variant->parent = ds.replacement.id;
        }
        for (const std::string& activity_id : ds.replacement.attach_to)
            attach_data(work, activity_id, ds.replacement.id);
    }
    if (params.data_insert) insert_plain_data(work, *params.data_insert, substitute_id);

    if (params.condition) {
        // label inequality counts as incompatible: the old condition is
        // substituted; a missing one is inserted
        for (auto& [key, condition] : work.flows)
            if (key.target == substitute_id) condition = params.condition;
    }

    if (params.resource) {
        const VpasResourcePlan& plan = *params.resource;
        if (plan.substitute_old && plan.substitute_with)
            substitute_vp_element(work, ElementKind::resource, *plan.substitute_old,
                                  *plan.substitute_with, {});
        if (plan.assign) {
            if (!find_resource(work, *plan.assign))
                fail(Errc::element_not_found, "no resource '" + *plan.assign + "'", {*plan.assign});
            assign_resource(work, substitute_id, *plan.assign);
        }
        if (plan.variant_insert) {
            std::string parent =
                plan.assign ? *plan.assign
                            : work.activities.at(substitute_id).resource.value_or(std::string{});
            const Resource* parent_resource = parent.empty() ? nullptr : find_resource(work, parent);
            if (!parent_resource || !is_variation_point(parent_resource->role))
                fail(Errc::no_variation_point,
                     "variant resource insertion needs a variation point resource to extend", {parent});
            insert_variant_resource(work, parent, *plan.variant_insert);
        }
    }

    ensure_valid(work, "variation point activity substitution");
    return {work, make_entry("vpas", to_json(params), model, work)};
}

ApplyResult variant_activity_substitute(const Model& model, const VasParams& params) {
    const Activity* variant = find_activity(model, params.variant_id);
    if (!variant || !is_variant(variant->role))
        fail(Errc::not_a_variant, "'" + params.variant_id + "' is not a variant activity",
             {params.variant_id});
    const std::string parent = std::get<VariantRole>(variant->role).parent;

    Model work = model;
    substitute_variant_activity(work, params.variant_id, params.replacement, parent);

    ensure_valid(work, "variant activity substitution");
    return {work, make_entry("vas", to_json(params), model, work)};
}

ApplyResult vp_activity_delete(const Model& model, const std::string& vp_id) {
    require_vp_activity(model, vp_id, Errc::not_a_variation_point);

    const std::vector<std::string> variants = variant_ids_of(model, vp_id);
    std::set<std::string> removed(variants.begin(), variants.end());
    auto dependents = requiring_survivors(model, removed);
    if (!dependents.empty())
        fail(Errc::dependent_variant,
             "variants of '" + vp_id + "' are required by surviving variants", dependents);

    Model work = model;

    std::set<std::string> sweep_candidates;
    auto collect_references = [&](const Activity& activity) {
        if (activity.resource) sweep_candidates.insert(*activity.resource);
        sweep_candidates.insert(activity.data_refs.begin(), activity.data_refs.end());
    };
    collect_references(work.activities.at(vp_id));
    for (const std::string& variant_id : removed) collect_references(work.activities.at(variant_id));

    bridge_and_remove_flow_node(work, vp_id);
    for (const std::string& variant_id : removed) {
        erase_vccs_touching(work, variant_id);
        work.activities.erase(variant_id);
    }
    erase_vccs_touching(work, vp_id);
    work.activities.erase(vp_id);

    sweep_exclusive_references(work, std::move(sweep_candidates));

    ensure_valid(work, "variation point activity deletion");
    return {work, make_entry("vpad", nlohmann::json{{"vp_id", vp_id}}, model, work)};
}

ApplyResult variant_activity_delete(const Model& model, const std::string& variant_id) {
    const Activity* variant = find_activity(model, variant_id);
    if (!variant || !is_variant(variant->role))
        fail(Errc::not_a_variant, "'" + variant_id + "' is not a variant activity", {variant_id});
    const std::string parent = std::get<VariantRole>(variant->role).parent;
    if (variant_ids_of(model, parent).size() <= 1)
        fail(Errc::last_variant,
             "'" + variant_id + "' is the last variant of '" + parent + "'; delete the variation point instead",
             {variant_id, parent});
    auto dependents = requiring_survivors(model, {variant_id});
    if (!dependents.empty())
        fail(Errc::dependent_variant, "'" + variant_id + "' is required by surviving variants", dependents);

    Model work = model;
    erase_vccs_touching(work, variant_id); // excludes aimed at it become vacuous and go too
    work.activities.erase(variant_id);

    ensure_valid(work, "variant activity deletion");
    return {work, make_entry("vad", nlohmann::json{{"variant_id", variant_id}}, model, work)};
}

} // namespace cpmx
