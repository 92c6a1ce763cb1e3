#include "cpmx/validate.hpp"

#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace cpmx {

namespace {

void add(ValidationReport& report, std::string rule, std::vector<std::string> ids, std::string message) {
    report.violations.push_back({std::move(rule), std::move(ids), std::move(message)});
}

bool is_flow_capable(const Model& model, const std::string& id) {
    if (id == model.start_node || id == model.end_node) return true;
    return model.activities.count(id) > 0;
}

std::set<std::string> reachable(const Model& model, const std::string& origin, bool forward) {
    std::set<std::string> seen{origin};
    std::deque<std::string> queue{origin};
    while (!queue.empty()) {
        std::string node = queue.front();
        queue.pop_front();
        for (const auto& [key, condition] : model.flows) {
            const std::string& from = forward ? key.source : key.target;
            const std::string& to = forward ? key.target : key.source;
            if (from == node && seen.insert(to).second) queue.push_back(to);
        }
    }
    return seen;
}

template <typename Map>
void check_variant_parents(const Model& model, const Map& elements, ElementKind kind,
                           ValidationReport& report) {
    for (const auto& [id, element] : elements) {
        const auto* variant = std::get_if<VariantRole>(&element.role);
        if (!variant) continue;
        auto parent_kind = element_kind(model, variant->parent);
        if (!parent_kind) {
            add(report, "W2", {id, variant->parent},
                "variant '" + id + "' names a missing parent '" + variant->parent + "'");
            continue;
        }
        if (*parent_kind != kind) {
            add(report, "W2", {id, variant->parent},
                "variant '" + id + "' has a parent of a different element kind");
            continue;
        }
        const VariabilityRole* parent_role = role_of(model, variant->parent);
        if (!parent_role || !is_variation_point(*parent_role))
            add(report, "W2", {id, variant->parent},
                "variant '" + id + "' hangs off '" + variant->parent + "', which is not a variation point");
    }
}

template <typename Map>
void check_vp_types(const Map& elements, ValidationReport& report) {
    for (const auto& [id, element] : elements) {
        const auto* vp = std::get_if<VariationPointRole>(&element.role);
        if (vp && !parse_vp_type(vp->type))
            add(report, "W4", {id}, "variation point '" + id + "' has illegal type '" + vp->type + "'");
    }
}

std::string join(const std::set<std::string>& items) {
    std::ostringstream out;
    bool first = true;
    for (const auto& item : items) {
        if (!first) out << ", ";
        out << item;
        first = false;
    }
    return out.str();
}

} // namespace

ValidationReport validate_model(const Model& model) {
    ValidationReport report;

    // W1: flow endpoints exist and are flow-capable; no self-loops.
    for (const auto& [key, condition] : model.flows) {
        if (key.source == key.target) {
            add(report, "W1", {key.source}, "flow forms a self-loop on '" + key.source + "'");
            continue;
        }
        for (const std::string& endpoint : {key.source, key.target}) {
            if (!is_flow_capable(model, endpoint))
                add(report, "W1", {endpoint},
                    "flow " + key.source + " -> " + key.target + " references '" + endpoint +
                        "', which is not a flow node");
        }
    }

    // W2: variant parents exist, match kinds, and are variation points.
    check_variant_parents(model, model.activities, ElementKind::activity, report);
    check_variant_parents(model, model.resources, ElementKind::resource, report);
    check_variant_parents(model, model.data_objects, ElementKind::data, report);

    // W3: no empty variation points.
    for (const auto& vp_id : variation_point_ids(model)) {
        if (variant_ids_of(model, vp_id).empty())
            add(report, "W3", {vp_id}, "variation point '" + vp_id + "' has no variants");
    }

    // W4: legal variation point type labels.
    check_vp_types(model.activities, report);
    check_vp_types(model.resources, report);
    check_vp_types(model.data_objects, report);

    // W5: required functionalities of assigned activities are covered.
    for (const auto& [id, activity] : model.activities) {
        if (!activity.resource) continue;
        if (!model.resources.count(*activity.resource)) {
            add(report, "W5", {id, *activity.resource},
                "activity '" + id + "' is assigned to missing resource '" + *activity.resource + "'");
            continue;
        }
        std::set<std::string> provided = effective_functionalities(model, *activity.resource);
        std::set<std::string> missing;
        for (const auto& needed : activity.req_f)
            if (!provided.count(needed)) missing.insert(needed);
        if (!missing.empty())
            add(report, "W5", {id, *activity.resource},
                "resource '" + *activity.resource + "' does not cover {" + join(missing) +
                    "} required by activity '" + id + "'");
    }

    // W6: constraint endpoints are distinct variants; no contradictory pair.
    std::set<std::pair<std::string, std::string>> requires_pairs;
    std::set<std::pair<std::string, std::string>> excludes_pairs;
    for (const auto& vcc : model.vccs) {
        bool endpoints_ok = true;
        for (const std::string& endpoint : {vcc.subject, vcc.object}) {
            const VariabilityRole* role = role_of(model, endpoint);
            if (!role) {
                add(report, "W6", {endpoint}, "constraint endpoint '" + endpoint + "' does not exist");
                endpoints_ok = false;
            } else if (!is_variant(*role)) {
                add(report, "W6", {endpoint}, "constraint endpoint '" + endpoint + "' is not a variant");
                endpoints_ok = false;
            }
        }
        if (vcc.subject == vcc.object) {
            add(report, "W6", {vcc.subject}, "constraint relates '" + vcc.subject + "' to itself");
            endpoints_ok = false;
        }
        if (!endpoints_ok) continue;
        auto pair = std::make_pair(vcc.subject, vcc.object);
        if (vcc.relation == VccRelation::requires_presence)
            requires_pairs.insert(pair);
        else
            excludes_pairs.insert(pair);
    }
    for (const auto& pair : requires_pairs) {
        if (excludes_pairs.count(pair))
            add(report, "W6", {pair.first, pair.second},
                "'" + pair.first + "' both requires and excludes '" + pair.second + "'");
    }

    // W7: data references resolve.
    for (const auto& [id, activity] : model.activities) {
        for (const auto& ref : activity.data_refs)
            if (!model.data_objects.count(ref))
                add(report, "W7", {id, ref},
                    "activity '" + id + "' references missing data object '" + ref + "'");
    }

    // W8: capacity.
    int count = flow_eligible_activity_count(model);
    if (count > model.max_activities)
        add(report, "W8", {model.id},
            "model holds " + std::to_string(count) + " flow-eligible activities, limit is " +
                std::to_string(model.max_activities));

    // W9: every flow-eligible activity lies on some start-to-end path.
    std::set<std::string> from_start = reachable(model, model.start_node, true);
    std::set<std::string> to_end = reachable(model, model.end_node, false);
    for (const auto& [id, activity] : model.activities) {
        if (is_variant(activity.role)) continue;
        if (!from_start.count(id) || !to_end.count(id))
            add(report, "W9", {id}, "activity '" + id + "' is not on any start-to-end path");
    }

    // W10: variants stay out of the sequence flow.
    for (const auto& [key, condition] : model.flows) {
        for (const std::string& endpoint : {key.source, key.target}) {
            const VariabilityRole* role = role_of(model, endpoint);
            if (role && is_variant(*role))
                add(report, "W10", {endpoint},
                    "variant '" + endpoint + "' appears in flow " + key.source + " -> " + key.target);
        }
    }

    return report;
}

} // namespace cpmx
