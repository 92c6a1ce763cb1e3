#include "cpmx/configuration.hpp"

#include <algorithm>
#include <limits>

#include "cpmx/errors.hpp"
#include "internal.hpp"

namespace cpmx {

using nlohmann::json;

namespace {

// 0-or-1 choice for optional and optional-alternative, exactly one for
// alternative.
bool requires_exactly_one(VpType type) { return type == VpType::alternative; }

std::optional<VpType> vp_type_of(const Model& model, const std::string& vp_id) {
    const VariabilityRole* role = role_of(model, vp_id);
    if (!role || !is_variation_point(*role)) return std::nullopt;
    return parse_vp_type(std::get<VariationPointRole>(*role).type);
}

bool chosen(const Configuration& config, const std::string& variant_id, const Model& model) {
    const VariabilityRole* role = role_of(model, variant_id);
    if (!role || !is_variant(*role)) return false;
    const std::string& parent = std::get<VariantRole>(*role).parent;
    auto it = config.selection.find(parent);
    return it != config.selection.end() && it->second && *it->second == variant_id;
}

} // namespace

std::vector<SelectionIssue> check_selection(const Model& model, const Configuration& config) {
    std::vector<SelectionIssue> issues;
    auto push = [&](std::string code, std::vector<std::string> ids, std::string message) {
        issues.push_back({std::move(code), std::move(ids), std::move(message)});
    };

    const std::vector<std::string> vps = variation_point_ids(model);

    for (const auto& [vp_id, choice] : config.selection) {
        if (std::find(vps.begin(), vps.end(), vp_id) == vps.end()) {
            push("unknown_vp", {vp_id}, "'" + vp_id + "' is not a variation point of this model");
            continue;
        }
        if (!choice) continue;
        const VariabilityRole* role = role_of(model, *choice);
        if (!role || !is_variant(*role)) {
            push("not_a_variant", {*choice}, "'" + *choice + "' is not a variant");
        } else if (std::get<VariantRole>(*role).parent != vp_id) {
            push("wrong_parent", {vp_id, *choice},
                 "'" + *choice + "' is not a variant of '" + vp_id + "'");
        }
    }

    for (const std::string& vp_id : vps) {
        auto type = vp_type_of(model, vp_id);
        if (!type) {
            push("unknown_vp_type", {vp_id},
                 "variation point '" + vp_id + "' has an illegal type label");
            continue;
        }
        auto it = config.selection.find(vp_id);
        bool has_choice = it != config.selection.end() && it->second.has_value();
        if (requires_exactly_one(*type) && !has_choice)
            push("missing_choice", {vp_id},
                 "alternative variation point '" + vp_id + "' needs exactly one chosen variant");
    }

    for (const Vcc& vcc : model.vccs) {
        bool subject_chosen = chosen(config, vcc.subject, model);
        bool object_chosen = chosen(config, vcc.object, model);
        if (vcc.relation == VccRelation::requires_presence) {
            if (subject_chosen && !object_chosen)
                push("vcc", {vcc.subject, vcc.object},
                     "'" + vcc.subject + "' requires '" + vcc.object + "', which is not chosen");
        } else if (subject_chosen && object_chosen) {
            push("vcc", {vcc.subject, vcc.object},
                 "'" + vcc.subject + "' excludes '" + vcc.object + "', but both are chosen");
        }
    }

    return issues;
}

std::uint64_t configuration_space_size(const Model& model) {
    constexpr std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 1;
    for (const std::string& vp_id : variation_point_ids(model)) {
        auto type = vp_type_of(model, vp_id);
        std::uint64_t options = variant_ids_of(model, vp_id).size();
        if (!type || !requires_exactly_one(*type)) options += 1; // none is a choice
        if (options == 0) options = 1;
        if (total > cap / options) return cap;
        total *= options;
    }
    return total;
}

std::vector<Configuration> enumerate_configurations(const Model& model, std::uint64_t bound) {
    std::uint64_t space = configuration_space_size(model);
    if (space > bound)
        fail(Errc::space_too_large,
             "configuration space of " + std::to_string(space) + " exceeds the bound of " +
                 std::to_string(bound));

    const std::vector<std::string> vps = variation_point_ids(model);
    std::vector<Configuration> out;
    Configuration current;

    // depth-first in sorted order; none sorts before any variant id
    auto enumerate = [&](auto&& self, std::size_t index) -> void {
        if (index == vps.size()) {
            if (check_selection(model, current).empty()) out.push_back(current);
            return;
        }
        const std::string& vp_id = vps[index];
        auto type = vp_type_of(model, vp_id);
        if (!type || !requires_exactly_one(*type)) {
            current.selection[vp_id] = std::nullopt;
            self(self, index + 1);
        }
        for (const std::string& variant_id : variant_ids_of(model, vp_id)) {
            current.selection[vp_id] = variant_id;
            self(self, index + 1);
        }
        current.selection.erase(vp_id);
    };
    enumerate(enumerate, 0);
    return out;
}

Model derive_variant(const Model& model, const Configuration& config) {
    auto issues = check_selection(model, config);
    if (!issues.empty()) {
        std::vector<std::string> ids;
        std::string message = "configuration is not valid:";
        for (const SelectionIssue& issue : issues) {
            message += " " + issue.message + ";";
            ids.insert(ids.end(), issue.ids.begin(), issue.ids.end());
        }
        fail(Errc::invalid_selection, message, ids);
    }

    Model out = model;

    // resolve activity variation points in the flow
    for (const std::string& vp_id : variation_point_ids(model)) {
        if (element_kind(model, vp_id) != ElementKind::activity) continue;
        auto it = config.selection.find(vp_id);
        std::optional<std::string> choice =
            it != config.selection.end() ? it->second : std::nullopt;

        std::vector<std::string> variants = variant_ids_of(out, vp_id);
        if (choice) {
            Activity& winner = out.activities.at(*choice);
            auto vsc = std::get<VariantRole>(winner.role).vsc;
            winner.role = PlainRole{};
            internal::replace_flow_node(out, vp_id, *choice);
            // a selection condition becomes the guard on the variant's
            // incoming flows; otherwise the inherited condition stands
            if (vsc) {
                for (auto& [key, condition] : out.flows)
                    if (key.target == *choice) condition = vsc;
            }
        } else {
            internal::bridge_and_remove_flow_node(out, vp_id);
        }
        out.activities.erase(vp_id);
        for (const std::string& variant_id : variants) {
            if (choice && variant_id == *choice) continue;
            out.activities.erase(variant_id);
        }
    }

    // resolve resource and data variation points
    for (const std::string& vp_id : variation_point_ids(model)) {
        auto kind = element_kind(model, vp_id);
        if (kind == ElementKind::activity) continue;
        auto it = config.selection.find(vp_id);
        std::optional<std::string> choice =
            it != config.selection.end() ? it->second : std::nullopt;

        std::vector<std::string> variants = variant_ids_of(out, vp_id);
        for (const std::string& variant_id : variants) {
            if (choice && variant_id == *choice) {
                if (kind == ElementKind::resource) out.resources.at(variant_id).role = PlainRole{};
                else out.data_objects.at(variant_id).role = PlainRole{};
                continue;
            }
            out.resources.erase(variant_id);
            out.data_objects.erase(variant_id);
        }
        out.resources.erase(vp_id);
        out.data_objects.erase(vp_id);
        for (auto& [id, activity] : out.activities) {
            if (activity.resource && *activity.resource == vp_id) {
                // the chosen variant takes over the assignment, but only when
                // it covers what the activity needs on its own; otherwise the
                // activity is left unassigned in this process variant
                bool covered = false;
                if (choice) {
                    const std::set<std::string>& provided = out.resources.at(*choice).functionalities;
                    covered = std::includes(provided.begin(), provided.end(), activity.req_f.begin(),
                                            activity.req_f.end());
                }
                if (covered) activity.resource = *choice;
                else activity.resource.reset();
            }
            if (activity.data_refs.erase(vp_id) && choice) activity.data_refs.insert(*choice);
        }
    }

    // references to unchosen variants (now gone) are dropped
    for (auto& [id, activity] : out.activities) {
        if (activity.resource && !out.resources.count(*activity.resource)) activity.resource.reset();
        std::erase_if(activity.data_refs,
                      [&](const std::string& ref) { return !out.data_objects.count(ref); });
    }

    out.vccs.clear(); // variability is resolved; constraints have no endpoints left
    return out;
}

json configuration_to_json(const Configuration& config) {
    json out = json::object();
    for (const auto& [vp_id, choice] : config.selection)
        out[vp_id] = choice ? json(*choice) : json(nullptr);
    return out;
}

Configuration configuration_from_json(const json& value) {
    if (!value.is_object()) fail(Errc::parse_error, "configuration must be a JSON object");
    Configuration config;
    for (const auto& [vp_id, choice] : value.items()) {
        if (choice.is_null()) config.selection[vp_id] = std::nullopt;
        else if (choice.is_string()) config.selection[vp_id] = choice.get<std::string>();
        else fail(Errc::parse_error, "configuration values must be variant ids or null");
    }
    return config;
}

} // namespace cpmx
