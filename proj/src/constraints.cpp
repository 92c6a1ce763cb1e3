#include "cpmx/constraints.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <deque>
#include <map>

#include "cpmx/errors.hpp"
#include "cpmx/evolution.hpp"
#include "cpmx/specs.hpp"
#include "internal.hpp"

namespace cpmx {

using nlohmann::json;

std::string_view ec_status_label(EcStatus status) {
    switch (status) {
    case EcStatus::satisfied: return "satisfied";
    case EcStatus::violated: return "violated";
    case EcStatus::not_applicable: return "not_applicable";
    }
    return "not_applicable";
}

namespace {

enum class PatternShape { vp_insert, variant_insert, vp_substitute, variant_substitute, vp_delete, variant_delete };

struct PatternInfo {
    PatternShape shape;
    ElementKind kind;
};

PatternInfo classify(const std::string& pattern_id) {
    static const std::map<std::string, PatternInfo> table = {
        {"vpai", {PatternShape::vp_insert, ElementKind::activity}},
        {"vai", {PatternShape::variant_insert, ElementKind::activity}},
        {"vpas", {PatternShape::vp_substitute, ElementKind::activity}},
        {"vas", {PatternShape::variant_substitute, ElementKind::activity}},
        {"vpad", {PatternShape::vp_delete, ElementKind::activity}},
        {"vad", {PatternShape::variant_delete, ElementKind::activity}},
        {"vpri", {PatternShape::vp_insert, ElementKind::resource}},
        {"vri", {PatternShape::variant_insert, ElementKind::resource}},
        {"vprs", {PatternShape::vp_substitute, ElementKind::resource}},
        {"vrs", {PatternShape::variant_substitute, ElementKind::resource}},
        {"vprd", {PatternShape::vp_delete, ElementKind::resource}},
        {"vrd", {PatternShape::variant_delete, ElementKind::resource}},
        {"vpdi", {PatternShape::vp_insert, ElementKind::data}},
        {"vdi", {PatternShape::variant_insert, ElementKind::data}},
        {"vpds", {PatternShape::vp_substitute, ElementKind::data}},
        {"vds", {PatternShape::variant_substitute, ElementKind::data}},
        {"vpdd", {PatternShape::vp_delete, ElementKind::data}},
        {"vdd", {PatternShape::variant_delete, ElementKind::data}},
    };
    std::string lowered = pattern_id;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto it = table.find(lowered);
    if (it == table.end()) fail(Errc::unknown_pattern, "unknown pattern id '" + pattern_id + "'");
    return it->second;
}

std::string param_string(const json& params, const char* key) {
    if (!params.is_object() || !params.contains(key) || !params[key].is_string()) return {};
    return params[key].get<std::string>();
}

bool is_vp_of_kind(const Model& model, ElementKind kind, const std::string& id) {
    if (element_kind(model, id) != kind) return false;
    const VariabilityRole* role = role_of(model, id);
    return role && is_variation_point(*role);
}

} // namespace

EvolutionConstraintReport check_evolution_constraints(const Model& model,
                                                      const std::string& pattern_id,
                                                      const json& params) {
    PatternInfo info = classify(pattern_id);

    EvolutionConstraintReport report;
    const char* names[5] = {"EC1", "EC2", "EC3", "EC4", "EC5"};
    for (int i = 0; i < 5; ++i) report.items[i].id = names[i];
    auto& [ec1, ec2, ec3, ec4, ec5] = report.items;

    switch (info.shape) {
    case PatternShape::vp_insert: {
        std::size_t variant_count = 0;
        std::string vp_id;
        if (info.kind == ElementKind::activity) {
            VpaiParams p = vpai_params_from_json(params);
            variant_count = p.variants.size();
            vp_id = p.new_vp ? p.new_vp->id : p.transform_existing.value_or("");
        } else {
            VpElementSpec spec = vp_element_spec_from_json(params);
            variant_count = spec.variants.size();
            vp_id = spec.id;
        }
        if (variant_count > 0) {
            ec1.status = EcStatus::satisfied;
            ec1.message = "the inserted variation point brings " + std::to_string(variant_count) +
                          " variant(s) along";
        } else {
            ec1.status = EcStatus::violated;
            ec1.offenders = {vp_id};
            ec1.message = "inserting variation point '" + vp_id + "' without any variant";
        }
        break;
    }
    case PatternShape::variant_insert: {
        std::string vp_id;
        bool transform_requested = false;
        if (info.kind == ElementKind::activity) {
            VaiParams p = vai_params_from_json(params);
            vp_id = p.vp_id;
            transform_requested = p.transform.has_value();
        } else {
            SecondaryVariantInsert p = secondary_variant_insert_from_json(params);
            vp_id = p.vp_id;
            transform_requested = p.transform.has_value();
        }
        const VariabilityRole* role =
            element_kind(model, vp_id) == info.kind ? role_of(model, vp_id) : nullptr;
        bool ok = role && (is_variation_point(*role) || (is_plain(*role) && transform_requested));
        if (ok) {
            ec2.status = EcStatus::satisfied;
            ec2.message = is_variation_point(*role)
                              ? "'" + vp_id + "' is a variation point"
                              : "'" + vp_id + "' will be transformed into a variation point";
        } else {
            ec2.status = EcStatus::violated;
            ec2.offenders = {vp_id};
            ec2.message = "'" + vp_id + "' is neither a variation point nor transformed into one";
        }
        break;
    }
    case PatternShape::vp_substitute: {
        std::string old_id;
        std::set<std::string> dispositioned;
        std::set<std::string> explicitly_removed;
        std::size_t incoming = 0;
        std::function<bool(const std::string&)> derived_keep;
        if (info.kind == ElementKind::activity) {
            VpasParams p = vpas_params_from_json(params);
            old_id = p.old_vp_id;
            for (const auto& [variant_id, d] : p.dispositions) {
                dispositioned.insert(variant_id);
                if (d.action == DispositionAction::remove) explicitly_removed.insert(variant_id);
            }
            incoming = p.new_variants.size();
            std::set<std::string> req_f = p.req_f;
            derived_keep = [&model, req_f](const std::string& variant_id) {
                const Activity* variant = find_activity(model, variant_id);
                return variant && std::includes(req_f.begin(), req_f.end(),
                                                variant->req_f.begin(), variant->req_f.end());
            };
        } else {
            SecondaryVpSubstitution p = secondary_vp_substitution_from_json(params);
            old_id = p.old_id;
            for (const auto& [variant_id, d] : p.dispositions) {
                dispositioned.insert(variant_id);
                if (d.action == DispositionAction::remove) explicitly_removed.insert(variant_id);
            }
            incoming = p.replacement.variants.size();
            if (info.kind == ElementKind::resource) {
                std::set<std::string> provided = p.replacement.functionalities;
                derived_keep = [&model, provided](const std::string& variant_id) {
                    const Resource* variant = find_resource(model, variant_id);
                    return variant && std::includes(provided.begin(), provided.end(),
                                                    variant->functionalities.begin(),
                                                    variant->functionalities.end());
                };
            } else {
                std::string type = p.replacement.data_type;
                derived_keep = [&model, type](const std::string& variant_id) {
                    const DataObject* variant = find_data(model, variant_id);
                    return variant && variant->data_type == type;
                };
            }
        }
        if (!is_vp_of_kind(model, info.kind, old_id)) {
            ec3.status = EcStatus::violated;
            ec3.offenders = {old_id};
            ec3.message = "'" + old_id + "' is not a variation point to substitute";
            break;
        }
        std::vector<std::string> old_variants = variant_ids_of(model, old_id);
        std::vector<std::string> strays;
        for (const std::string& id : dispositioned)
            if (std::find(old_variants.begin(), old_variants.end(), id) == old_variants.end())
                strays.push_back(id);
        // replay the plan the engine would run: explicit dispositions win,
        // the rest follow the compatibility test
        std::size_t survivors = incoming;
        for (const std::string& variant_id : old_variants) {
            bool removed = dispositioned.count(variant_id) ? explicitly_removed.count(variant_id) > 0
                                                           : !derived_keep(variant_id);
            if (!removed) ++survivors;
        }
        if (!strays.empty()) {
            ec3.status = EcStatus::violated;
            ec3.offenders = strays;
            ec3.message = "dispositions name elements that are not variants of '" + old_id + "'";
        } else if (survivors == 0) {
            ec3.status = EcStatus::violated;
            ec3.offenders = old_variants;
            ec3.message = "the plan removes every variant of '" + old_id + "' and supplies none";
        } else {
            ec3.status = EcStatus::satisfied;
            ec3.message = "every variant of '" + old_id + "' is kept, substituted, or deleted";
        }
        break;
    }
    case PatternShape::vp_delete: {
        std::string vp_id = param_string(params, "vp_id");
        if (!is_vp_of_kind(model, info.kind, vp_id)) {
            ec4.status = EcStatus::violated;
            ec4.offenders = {vp_id};
            ec4.message = "'" + vp_id + "' is not a variation point to delete";
            break;
        }
        auto variants = variant_ids_of(model, vp_id);
        std::set<std::string> removed(variants.begin(), variants.end());
        auto dependents = internal::requiring_survivors(model, removed);
        if (!dependents.empty()) {
            ec4.status = EcStatus::violated;
            ec4.offenders = dependents;
            ec4.message = "deleting '" + vp_id + "' would strand variants that require its variants";
        } else {
            ec4.status = EcStatus::satisfied;
            ec4.message = "deletion of '" + vp_id + "' cascades over " +
                          std::to_string(removed.size()) + " variant(s) cleanly";
        }
        break;
    }
    case PatternShape::variant_substitute:
        // replacing a variant touches none of the five constraints: the
        // variation point keeps a variant and constraints follow the new id
        break;
    case PatternShape::variant_delete: {
        std::string variant_id = param_string(params, "variant_id");
        const VariabilityRole* role =
            element_kind(model, variant_id) == info.kind ? role_of(model, variant_id) : nullptr;
        if (!role || !is_variant(*role)) {
            ec5.status = EcStatus::violated;
            ec5.offenders = {variant_id};
            ec5.message = "'" + variant_id + "' is not a variant to delete";
            break;
        }
        auto dependents = internal::requiring_survivors(model, {variant_id});
        if (!dependents.empty()) {
            ec5.status = EcStatus::violated;
            ec5.offenders = dependents;
            ec5.message = "'" + variant_id + "' is required by other variants";
        } else {
            ec5.status = EcStatus::satisfied;
            ec5.message = "no other variant requires '" + variant_id + "'";
        }
        break;
    }
    }

    return report;
}

namespace {

// requires-closure of a variant (including itself)
std::set<std::string> requires_closure(const Model& model, const std::string& origin) {
    std::set<std::string> closure{origin};
    std::deque<std::string> queue{origin};
    while (!queue.empty()) {
        std::string current = queue.front();
        queue.pop_front();
        for (const Vcc& vcc : model.vccs) {
            if (vcc.relation != VccRelation::requires_presence || vcc.subject != current) continue;
            if (closure.insert(vcc.object).second) queue.push_back(vcc.object);
        }
    }
    return closure;
}

} // namespace

std::vector<VccConflict> check_vcc_consistency(const Model& model, std::uint64_t bound) {
    std::vector<VccConflict> conflicts;

    // (a) contradictions on the same ordered pair
    for (const Vcc& vcc : model.vccs) {
        if (vcc.relation != VccRelation::requires_presence) continue;
        if (model.vccs.count(Vcc{vcc.subject, VccRelation::excludes_presence, vcc.object}))
            conflicts.push_back({"contradiction",
                                 {vcc.subject, vcc.object},
                                 "'" + vcc.subject + "' both requires and excludes '" + vcc.object + "'"});
    }

    // (b) requires edges between variants of one variation point: only one of
    // them can ever be chosen
    for (const Vcc& vcc : model.vccs) {
        if (vcc.relation != VccRelation::requires_presence) continue;
        const VariabilityRole* subject_role = role_of(model, vcc.subject);
        const VariabilityRole* object_role = role_of(model, vcc.object);
        if (!subject_role || !object_role) continue;
        if (!is_variant(*subject_role) || !is_variant(*object_role)) continue;
        if (std::get<VariantRole>(*subject_role).parent == std::get<VariantRole>(*object_role).parent)
            conflicts.push_back({"self_competition",
                                 {vcc.subject, vcc.object},
                                 "'" + vcc.subject + "' requires its sibling '" + vcc.object +
                                     "' under the same variation point"});
    }

    // (c) unselectable variants, established by enumeration at desk scale
    if (configuration_space_size(model) <= bound) {
        std::set<std::string> selectable_ids;
        for (const Configuration& config : enumerate_configurations(model, bound))
            for (const auto& [vp, choice] : config.selection)
                if (choice) selectable_ids.insert(*choice);
        for (const std::string& variant_id : variant_ids(model)) {
            if (selectable_ids.count(variant_id)) continue;
            // name the requires-chain running into an exclusion when one exists
            std::set<std::string> closure = requires_closure(model, variant_id);
            std::string cause;
            for (const Vcc& vcc : model.vccs) {
                if (vcc.relation != VccRelation::excludes_presence) continue;
                if (closure.count(vcc.subject) && closure.count(vcc.object)) {
                    cause = " (its requirements run into '" + vcc.subject + "' excludes '" +
                            vcc.object + "')";
                    break;
                }
            }
            conflicts.push_back({"unselectable",
                                 {variant_id},
                                 "no valid configuration can select '" + variant_id + "'" + cause});
        }
    }

    return conflicts;
}

std::set<std::string> variant_dependents(const Model& model, const std::string& variant_id,
                                         bool transitive) {
    const VariabilityRole* role = role_of(model, variant_id);
    if (!role || !is_variant(*role))
        fail(Errc::not_a_variant, "'" + variant_id + "' is not a variant", {variant_id});

    std::set<std::string> dependents;
    std::deque<std::string> frontier{variant_id};
    while (!frontier.empty()) {
        std::string current = frontier.front();
        frontier.pop_front();
        for (const Vcc& vcc : model.vccs) {
            if (vcc.relation != VccRelation::requires_presence || vcc.object != current) continue;
            if (dependents.insert(vcc.subject).second && transitive) frontier.push_back(vcc.subject);
        }
    }
    return dependents;
}

json report_to_json(const EvolutionConstraintReport& report) {
    json items = json::array();
    for (const auto& item : report.items) {
        items.push_back(json{{"id", item.id},
                             {"status", std::string(ec_status_label(item.status))},
                             {"offenders", item.offenders},
                             {"message", item.message}});
    }
    return json{{"evolution_constraints", items}};
}

json conflicts_to_json(const std::vector<VccConflict>& conflicts) {
    json out = json::array();
    for (const VccConflict& conflict : conflicts)
        out.push_back(json{{"kind", conflict.kind}, {"ids", conflict.ids}, {"message", conflict.message}});
    return out;
}

} // namespace cpmx
