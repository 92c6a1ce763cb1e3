#include "internal.hpp"

#include <algorithm>
#include <sstream>

#include "cpmx/diff.hpp"
#include "cpmx/errors.hpp"
#include "cpmx/io.hpp"
#include "cpmx/validate.hpp"

namespace cpmx::internal {

void ensure_fresh_id(const Model& model, const std::string& id) {
    if (id.empty()) fail(Errc::parse_error, "element ids must be non-empty");
    if (id_in_use(model, id)) fail(Errc::duplicate_id, "id '" + id + "' is already in use", {id});
}

void add_vcc_checked(Model& model, const Vcc& vcc) {
    if (vcc.subject == vcc.object)
        fail(Errc::invalid_vcc, "constraint relates '" + vcc.subject + "' to itself", {vcc.subject});
    for (const std::string& endpoint : {vcc.subject, vcc.object}) {
        const VariabilityRole* role = role_of(model, endpoint);
        if (!role)
            fail(Errc::invalid_vcc, "constraint endpoint '" + endpoint + "' does not exist", {endpoint});
        if (!is_variant(*role))
            fail(Errc::invalid_vcc, "constraint endpoint '" + endpoint + "' is not a variant", {endpoint});
    }
    Vcc opposite = vcc;
    opposite.relation = vcc.relation == VccRelation::requires_presence
                            ? VccRelation::excludes_presence
                            : VccRelation::requires_presence;
    if (model.vccs.count(opposite))
        fail(Errc::invalid_vcc,
             "constraint contradicts an existing one between '" + vcc.subject + "' and '" + vcc.object + "'",
             {vcc.subject, vcc.object});
    model.vccs.insert(vcc);
}

void add_vccs_checked(Model& model, const std::vector<Vcc>& vccs) {
    for (const Vcc& vcc : vccs) add_vcc_checked(model, vcc);
}

std::vector<std::string> requiring_survivors(const Model& model, const std::set<std::string>& removed) {
    std::set<std::string> out;
    for (const Vcc& vcc : model.vccs) {
        if (vcc.relation != VccRelation::requires_presence) continue;
        if (removed.count(vcc.object) && !removed.count(vcc.subject)) out.insert(vcc.subject);
    }
    return {out.begin(), out.end()};
}

void erase_vccs_touching(Model& model, const std::string& id) {
    std::erase_if(model.vccs, [&](const Vcc& vcc) { return vcc.subject == id || vcc.object == id; });
}

void bridge_and_remove_flow_node(Model& model, const std::string& node_id) {
    std::vector<std::pair<std::string, std::optional<std::string>>> predecessors, successors;
    for (auto it = model.flows.begin(); it != model.flows.end();) {
        if (it->first.target == node_id) {
            predecessors.emplace_back(it->first.source, it->second);
            it = model.flows.erase(it);
        } else if (it->first.source == node_id) {
            successors.emplace_back(it->first.target, it->second);
            it = model.flows.erase(it);
        } else {
            ++it;
        }
    }
    for (const auto& [pred, pred_condition] : predecessors) {
        for (const auto& [succ, succ_condition] : successors) {
            if (pred == succ) continue;
            FlowKey key{pred, succ};
            if (!model.flows.count(key)) model.flows.emplace(std::move(key), pred_condition);
        }
    }
}

void replace_flow_node(Model& model, const std::string& old_id, const std::string& new_id) {
    std::vector<std::pair<std::string, std::optional<std::string>>> incoming, outgoing;
    for (auto it = model.flows.begin(); it != model.flows.end();) {
        if (it->first.target == old_id) {
            incoming.emplace_back(it->first.source, it->second);
            it = model.flows.erase(it);
        } else if (it->first.source == old_id) {
            outgoing.emplace_back(it->first.target, it->second);
            it = model.flows.erase(it);
        } else {
            ++it;
        }
    }
    for (const auto& [source, condition] : incoming) {
        if (source == new_id) continue;
        FlowKey key{source, new_id};
        if (!model.flows.count(key)) model.flows.emplace(std::move(key), condition);
    }
    for (const auto& [target, condition] : outgoing) {
        if (target == new_id) continue;
        FlowKey key{new_id, target};
        if (!model.flows.count(key)) model.flows.emplace(std::move(key), condition);
    }
}

void insert_variant_activity(Model& model, const std::string& vp_id, const VariantActivitySpec& spec) {
    ensure_fresh_id(model, spec.id);
    Activity activity;
    activity.id = spec.id;
    activity.name = spec.name.empty() ? spec.id : spec.name;
    activity.role = VariantRole{vp_id, spec.vsc};
    activity.req_f = spec.req_f;
    model.activities.emplace(activity.id, std::move(activity));
}

void insert_variant_resource(Model& model, const std::string& vp_id, const VariantElementSpec& spec) {
    ensure_fresh_id(model, spec.id);
    Resource resource;
    resource.id = spec.id;
    resource.name = spec.name.empty() ? spec.id : spec.name;
    resource.role = VariantRole{vp_id, spec.vsc};
    resource.functionalities = spec.functionalities;
    model.resources.emplace(resource.id, std::move(resource));
    for (const std::string& activity_id : spec.attach_to) assign_resource(model, activity_id, spec.id);
    add_vccs_checked(model, spec.vccs);
}

void insert_variant_data(Model& model, const std::string& vp_id, const VariantElementSpec& spec) {
    ensure_fresh_id(model, spec.id);
    DataObject data;
    data.id = spec.id;
    data.name = spec.name.empty() ? spec.id : spec.name;
    data.role = VariantRole{vp_id, spec.vsc};
    data.data_type = spec.data_type;
    model.data_objects.emplace(data.id, std::move(data));
    for (const std::string& activity_id : spec.attach_to) attach_data(model, activity_id, spec.id);
    add_vccs_checked(model, spec.vccs);
}

void insert_vp_resource(Model& model, const VpElementSpec& spec) {
    if (spec.variants.empty())
        fail(Errc::empty_resulting_variant_set,
             "variation point resource '" + spec.id + "' needs at least one variant", {spec.id});
    ensure_fresh_id(model, spec.id);
    Resource resource;
    resource.id = spec.id;
    resource.name = spec.name.empty() ? spec.id : spec.name;
    resource.role = VariationPointRole{std::string(vp_type_label(spec.type))};
    resource.functionalities = spec.functionalities;
    model.resources.emplace(resource.id, std::move(resource));
    for (const VariantElementSpec& variant : spec.variants) insert_variant_resource(model, spec.id, variant);
    for (const std::string& activity_id : spec.attach_to) assign_resource(model, activity_id, spec.id);
}

void insert_vp_data(Model& model, const VpElementSpec& spec) {
    if (spec.variants.empty())
        fail(Errc::empty_resulting_variant_set,
             "variation point data object '" + spec.id + "' needs at least one variant", {spec.id});
    ensure_fresh_id(model, spec.id);
    DataObject data;
    data.id = spec.id;
    data.name = spec.name.empty() ? spec.id : spec.name;
    data.role = VariationPointRole{std::string(vp_type_label(spec.type))};
    data.data_type = spec.data_type;
    model.data_objects.emplace(data.id, std::move(data));
    for (const VariantElementSpec& variant : spec.variants) insert_variant_data(model, spec.id, variant);
    for (const std::string& activity_id : spec.attach_to) attach_data(model, activity_id, spec.id);
}

void assign_resource(Model& model, const std::string& activity_id, const std::string& resource_id) {
    auto it = model.activities.find(activity_id);
    if (it == model.activities.end())
        fail(Errc::target_activity_not_found, "no activity '" + activity_id + "' to assign to",
             {activity_id});
    std::set<std::string> provided = effective_functionalities(model, resource_id);
    for (const std::string& needed : it->second.req_f) {
        if (!provided.count(needed))
            fail(Errc::coverage_violation,
                 "resource '" + resource_id + "' does not cover '" + needed + "' required by '" +
                     activity_id + "'",
                 {activity_id, resource_id});
    }
    it->second.resource = resource_id;
}

void attach_data(Model& model, const std::string& activity_id, const std::string& data_id) {
    auto it = model.activities.find(activity_id);
    if (it == model.activities.end())
        fail(Errc::target_activity_not_found, "no activity '" + activity_id + "' to attach data to",
             {activity_id});
    it->second.data_refs.insert(data_id);
}

namespace {

// Renames constraint endpoints after a variant replacement. Constraints held
// by the old variant are kept (renamed) only when the spec supplies none.
void rewrite_vccs_for_substitution(Model& model, const std::string& old_id, const std::string& new_id,
                                   bool replace_own) {
    std::set<Vcc> rewritten;
    for (Vcc vcc : model.vccs) {
        if (vcc.subject == old_id) {
            if (replace_own) continue;
            vcc.subject = new_id;
        }
        if (vcc.object == old_id) vcc.object = new_id;
        rewritten.insert(std::move(vcc));
    }
    model.vccs = std::move(rewritten);
}

} // namespace

void substitute_variant_activity(Model& model, const std::string& old_variant_id,
                                 const VariantActivitySpec& spec, const std::string& parent_id) {
    const Activity old_activity = model.activities.at(old_variant_id);
    if (spec.id != old_variant_id) ensure_fresh_id(model, spec.id);

    Activity next;
    next.id = spec.id;
    next.name = spec.name.empty() ? spec.id : spec.name;
    next.role = VariantRole{parent_id, spec.vsc};
    next.req_f = spec.req_f;
    next.resource = old_activity.resource;
    next.data_refs = old_activity.data_refs;

    model.activities.erase(old_variant_id);
    model.activities.emplace(next.id, std::move(next));
    rewrite_vccs_for_substitution(model, old_variant_id, spec.id, !spec.vccs.empty());
    add_vccs_checked(model, spec.vccs);
}

void substitute_variant_resource(Model& model, const std::string& old_variant_id,
                                 const VariantElementSpec& spec, const std::string& parent_id) {
    if (spec.id != old_variant_id) ensure_fresh_id(model, spec.id);

    Resource next;
    next.id = spec.id;
    next.name = spec.name.empty() ? spec.id : spec.name;
    next.role = VariantRole{parent_id, spec.vsc};
    next.functionalities = spec.functionalities;

    model.resources.erase(old_variant_id);
    model.resources.emplace(next.id, std::move(next));
    // assignments follow the replacement
    for (auto& [id, activity] : model.activities) {
        if (activity.resource && *activity.resource == old_variant_id) activity.resource = spec.id;
    }
    rewrite_vccs_for_substitution(model, old_variant_id, spec.id, !spec.vccs.empty());
    add_vccs_checked(model, spec.vccs);
    for (const std::string& activity_id : spec.attach_to) assign_resource(model, activity_id, spec.id);
}

void substitute_variant_data(Model& model, const std::string& old_variant_id,
                             const VariantElementSpec& spec, const std::string& parent_id) {
    if (spec.id != old_variant_id) ensure_fresh_id(model, spec.id);

    DataObject next;
    next.id = spec.id;
    next.name = spec.name.empty() ? spec.id : spec.name;
    next.role = VariantRole{parent_id, spec.vsc};
    next.data_type = spec.data_type;

    model.data_objects.erase(old_variant_id);
    model.data_objects.emplace(next.id, std::move(next));
    for (auto& [id, activity] : model.activities) {
        if (activity.data_refs.erase(old_variant_id)) activity.data_refs.insert(spec.id);
    }
    rewrite_vccs_for_substitution(model, old_variant_id, spec.id, !spec.vccs.empty());
    add_vccs_checked(model, spec.vccs);
    for (const std::string& activity_id : spec.attach_to) attach_data(model, activity_id, spec.id);
}

void sweep_exclusive_references(Model& model, std::set<std::string> candidates) {
    auto referenced = [&](const std::string& id) {
        for (const auto& [activity_id, activity] : model.activities) {
            if (activity.resource && *activity.resource == id) return true;
            if (activity.data_refs.count(id)) return true;
        }
        return false;
    };
    auto required_by_survivor = [&](const std::string& id) {
        for (const Vcc& vcc : model.vccs)
            if (vcc.relation == VccRelation::requires_presence && vcc.object == id) return true;
        return false;
    };
    auto erase_element = [&](const std::string& id) {
        erase_vccs_touching(model, id);
        model.resources.erase(id);
        model.data_objects.erase(id);
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (const std::string& id : std::vector<std::string>(candidates.begin(), candidates.end())) {
            const VariabilityRole* role = role_of(model, id);
            if (!role || model.activities.count(id)) {
                candidates.erase(id);
                continue;
            }
            if (referenced(id) || required_by_survivor(id)) continue;
            if (is_variation_point(*role)) {
                // only the whole subtree goes: every variant must itself be sweepable
                auto children = variant_ids_of(model, id);
                bool subtree_ok = true;
                for (const std::string& child : children) {
                    if (!candidates.count(child) || referenced(child) || required_by_survivor(child)) {
                        subtree_ok = false;
                        break;
                    }
                }
                if (!subtree_ok) continue;
                for (const std::string& child : children) {
                    erase_element(child);
                    candidates.erase(child);
                }
                erase_element(id);
                candidates.erase(id);
                changed = true;
            } else if (is_variant(*role)) {
                const std::string parent = std::get<VariantRole>(*role).parent;
                if (variant_ids_of(model, parent).size() <= 1) continue; // keep the parent's last variant
                erase_element(id);
                candidates.erase(id);
                changed = true;
            } else {
                erase_element(id);
                candidates.erase(id);
                changed = true;
            }
        }
    }
}

void substitute_vp_element(Model& model, ElementKind kind, const std::string& old_id,
                           const VpElementSpec& replacement,
                           const std::map<std::string, SecondaryDisposition>& dispositions) {
    const VariabilityRole* old_role = role_of(model, old_id);
    auto old_kind = element_kind(model, old_id);
    if (!old_role || old_kind != kind || !is_variation_point(*old_role))
        fail(Errc::not_a_variation_point,
             "'" + old_id + "' is not a " + std::string(kind_label(kind)) + " variation point", {old_id});

    const std::vector<std::string> old_variants = variant_ids_of(model, old_id);
    for (const auto& [variant_id, disposition] : dispositions) {
        if (std::find(old_variants.begin(), old_variants.end(), variant_id) == old_variants.end())
            fail(Errc::not_a_variant,
                 "disposition target '" + variant_id + "' is not a variant of '" + old_id + "'",
                 {variant_id});
    }

    const bool in_place = replacement.id == old_id;
    if (!in_place) ensure_fresh_id(model, replacement.id);

    if (kind == ElementKind::resource) {
        Resource next;
        next.id = replacement.id;
        next.name = replacement.name.empty() ? replacement.id : replacement.name;
        next.role = VariationPointRole{std::string(vp_type_label(replacement.type))};
        next.functionalities = replacement.functionalities;
        model.resources.erase(old_id);
        model.resources.emplace(next.id, std::move(next));
        for (auto& [id, activity] : model.activities)
            if (activity.resource && *activity.resource == old_id) activity.resource = replacement.id;
    } else {
        DataObject next;
        next.id = replacement.id;
        next.name = replacement.name.empty() ? replacement.id : replacement.name;
        next.role = VariationPointRole{std::string(vp_type_label(replacement.type))};
        next.data_type = replacement.data_type;
        model.data_objects.erase(old_id);
        model.data_objects.emplace(next.id, std::move(next));
        for (auto& [id, activity] : model.activities)
            if (activity.data_refs.erase(old_id)) activity.data_refs.insert(replacement.id);
    }

    std::vector<std::string> to_delete;
    std::vector<std::pair<std::string, VariantElementSpec>> to_substitute;
    for (const std::string& variant_id : old_variants) {
        SecondaryDisposition disposition;
        auto it = dispositions.find(variant_id);
        if (it != dispositions.end()) {
            disposition = it->second;
        } else if (kind == ElementKind::resource) {
            const Resource& variant = model.resources.at(variant_id);
            bool compatible =
                std::includes(replacement.functionalities.begin(), replacement.functionalities.end(),
                              variant.functionalities.begin(), variant.functionalities.end());
            disposition.action = compatible ? DispositionAction::keep : DispositionAction::remove;
        } else {
            const DataObject& variant = model.data_objects.at(variant_id);
            bool compatible = variant.data_type == replacement.data_type;
            disposition.action = compatible ? DispositionAction::keep : DispositionAction::remove;
        }
        switch (disposition.action) {
        case DispositionAction::keep: {
            VariabilityRole* role = nullptr;
            if (kind == ElementKind::resource) role = &model.resources.at(variant_id).role;
            else role = &model.data_objects.at(variant_id).role;
            auto vsc = std::get<VariantRole>(*role).vsc;
            *role = VariantRole{replacement.id, vsc};
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
    for (const auto& [variant_id, spec] : to_substitute) {
        if (kind == ElementKind::resource)
            substitute_variant_resource(model, variant_id, spec, replacement.id);
        else
            substitute_variant_data(model, variant_id, spec, replacement.id);
    }
    for (const VariantElementSpec& variant : replacement.variants) {
        if (kind == ElementKind::resource)
            insert_variant_resource(model, replacement.id, variant);
        else
            insert_variant_data(model, replacement.id, variant);
    }
    for (const std::string& variant_id : to_delete) {
        auto dependents = requiring_survivors(model, {variant_id});
        if (!dependents.empty())
            fail(Errc::dependent_variant,
                 "variant '" + variant_id + "' is required by surviving variants", dependents);
        erase_vccs_touching(model, variant_id);
        model.resources.erase(variant_id);
        model.data_objects.erase(variant_id);
        // references to a dropped variant are cleared
        for (auto& [id, activity] : model.activities) {
            if (activity.resource && *activity.resource == variant_id) activity.resource.reset();
            activity.data_refs.erase(variant_id);
        }
    }
    if (variant_ids_of(model, replacement.id).empty())
        fail(Errc::empty_resulting_variant_set,
             "substitution would leave '" + replacement.id + "' without variants", {replacement.id});

    if (kind == ElementKind::resource) {
        std::set<std::string> provided = effective_functionalities(model, replacement.id);
        for (const auto& [id, activity] : model.activities) {
            if (!activity.resource || *activity.resource != replacement.id) continue;
            for (const std::string& needed : activity.req_f)
                if (!provided.count(needed))
                    fail(Errc::coverage_violation,
                         "substituting '" + old_id + "' uncovers '" + needed + "' required by '" + id + "'",
                         {id, replacement.id});
        }
    }
    for (const std::string& activity_id : replacement.attach_to) {
        if (kind == ElementKind::resource)
            assign_resource(model, activity_id, replacement.id);
        else
            attach_data(model, activity_id, replacement.id);
    }
}

void ensure_valid(const Model& model, const std::string& context) {
    ValidationReport report = validate_model(model);
    if (report.ok()) return;
    std::ostringstream message;
    message << context << " would leave the model ill-formed:";
    std::vector<std::string> ids;
    for (const Violation& violation : report.violations) {
        message << " [" << violation.rule << "] " << violation.message << ";";
        ids.insert(ids.end(), violation.ids.begin(), violation.ids.end());
    }
    fail(Errc::model_invalid, message.str(), ids);
}

TraceEntry make_entry(const std::string& pattern, nlohmann::json params, const Model& before,
                      const Model& after) {
    TraceEntry entry;
    entry.pattern = pattern;
    entry.params = std::move(params);
    entry.edits = model_diff(before, after);
    entry.pre_hash = canonical_hash(before);
    entry.post_hash = canonical_hash(after);
    entry.timestamp = iso8601_utc_now();
    return entry;
}

} // namespace cpmx::internal
