#include "cpmx/specs.hpp"

#include "cpmx/errors.hpp"

namespace cpmx {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { fail(Errc::parse_error, "params: " + what); }

std::string get_string(const json& object, const char* key) {
    if (!object.contains(key) || !object[key].is_string())
        bad(std::string("missing or non-string '") + key + "'");
    return object[key].get<std::string>();
}

std::string get_name(const json& object, const std::string& fallback) {
    return object.contains("name") ? object["name"].get<std::string>() : fallback;
}

std::set<std::string> get_string_set(const json& object, const char* key) {
    std::set<std::string> out;
    if (!object.contains(key)) return out;
    if (!object[key].is_array()) bad(std::string("'") + key + "' must be an array of strings");
    for (const auto& item : object[key]) {
        if (!item.is_string()) bad(std::string("'") + key + "' must be an array of strings");
        out.insert(item.get<std::string>());
    }
    return out;
}

// resources are assigned, data objects attached; both spellings land in the
// same field
std::vector<std::string> get_targets(const json& object) {
    auto targets = get_string_set(object, "attach_to");
    auto assigned = get_string_set(object, "assign_to");
    targets.insert(assigned.begin(), assigned.end());
    return {targets.begin(), targets.end()};
}

VpType get_vp_type(const json& object, const char* key) {
    auto parsed = parse_vp_type(get_string(object, key));
    if (!parsed) bad(std::string("'") + key + "' must be optional, alternative, or optional-alternative");
    return *parsed;
}

std::vector<Vcc> get_vccs(const json& object) {
    std::vector<Vcc> out;
    if (!object.contains("vccs")) return out;
    if (!object["vccs"].is_array()) bad("'vccs' must be an array");
    for (const auto& entry : object["vccs"]) {
        auto relation = parse_vcc_relation(get_string(entry, "relation"));
        if (!relation) bad("constraint relation must be 'requires' or 'excludes'");
        out.push_back(Vcc{get_string(entry, "subject"), *relation, get_string(entry, "object")});
    }
    return out;
}

json vccs_to_json(const std::vector<Vcc>& vccs) {
    json out = json::array();
    for (const auto& vcc : vccs)
        out.push_back(json{{"subject", vcc.subject},
                           {"relation", std::string(vcc_relation_label(vcc.relation))},
                           {"object", vcc.object}});
    return out;
}

std::optional<std::string> get_optional_string(const json& object, const char* key) {
    if (!object.contains(key) || object[key].is_null()) return std::nullopt;
    if (!object[key].is_string()) bad(std::string("'") + key + "' must be a string");
    return object[key].get<std::string>();
}

DataInsertSpec data_insert_from_json(const json& value) {
    DataInsertSpec spec;
    spec.id = get_string(value, "id");
    spec.name = get_name(value, spec.id);
    spec.data_type = value.contains("data_type") ? get_string(value, "data_type") : "";
    spec.attach_to = get_targets(value);
    return spec;
}

json data_insert_to_json(const DataInsertSpec& spec) {
    json out{{"id", spec.id}, {"name", spec.name}, {"data_type", spec.data_type}};
    if (!spec.attach_to.empty()) out["attach_to"] = spec.attach_to;
    return out;
}

} // namespace

json to_json(const VariantActivitySpec& spec) {
    json out{{"id", spec.id}, {"name", spec.name}};
    if (spec.vsc) out["vsc"] = *spec.vsc;
    if (!spec.req_f.empty()) out["req_f"] = spec.req_f;
    if (!spec.vccs.empty()) out["vccs"] = vccs_to_json(spec.vccs);
    return out;
}

VariantActivitySpec variant_activity_spec_from_json(const json& value) {
    VariantActivitySpec spec;
    spec.id = get_string(value, "id");
    spec.name = get_name(value, spec.id);
    spec.vsc = get_optional_string(value, "vsc");
    spec.req_f = get_string_set(value, "req_f");
    spec.vccs = get_vccs(value);
    return spec;
}

json to_json(const VariantElementSpec& spec) {
    json out{{"id", spec.id}, {"name", spec.name}};
    if (spec.vsc) out["vsc"] = *spec.vsc;
    if (!spec.functionalities.empty()) out["functionalities"] = spec.functionalities;
    if (!spec.data_type.empty()) out["data_type"] = spec.data_type;
    if (!spec.attach_to.empty()) out["attach_to"] = spec.attach_to;
    if (!spec.vccs.empty()) out["vccs"] = vccs_to_json(spec.vccs);
    return out;
}

VariantElementSpec variant_element_spec_from_json(const json& value) {
    VariantElementSpec spec;
    spec.id = get_string(value, "id");
    spec.name = get_name(value, spec.id);
    spec.vsc = get_optional_string(value, "vsc");
    spec.functionalities = get_string_set(value, "functionalities");
    spec.data_type = value.contains("data_type") ? get_string(value, "data_type") : "";
    spec.attach_to = get_targets(value);
    spec.vccs = get_vccs(value);
    return spec;
}

json to_json(const VpElementSpec& spec) {
    json variants = json::array();
    for (const auto& variant : spec.variants) variants.push_back(to_json(variant));
    json out{{"id", spec.id},
             {"name", spec.name},
             {"vp_type", std::string(vp_type_label(spec.type))},
             {"variants", variants}};
    if (!spec.functionalities.empty()) out["functionalities"] = spec.functionalities;
    if (!spec.data_type.empty()) out["data_type"] = spec.data_type;
    if (!spec.attach_to.empty()) out["attach_to"] = spec.attach_to;
    return out;
}

VpElementSpec vp_element_spec_from_json(const json& value) {
    VpElementSpec spec;
    spec.id = get_string(value, "id");
    spec.name = get_name(value, spec.id);
    spec.type = get_vp_type(value, "vp_type");
    spec.functionalities = get_string_set(value, "functionalities");
    spec.data_type = value.contains("data_type") ? get_string(value, "data_type") : "";
    spec.attach_to = get_targets(value);
    if (value.contains("variants")) {
        if (!value["variants"].is_array()) bad("'variants' must be an array");
        for (const auto& entry : value["variants"])
            spec.variants.push_back(variant_element_spec_from_json(entry));
    }
    return spec;
}

json to_json(const VpaiParams& params) {
    json out;
    if (params.new_vp) out["vp"] = json{{"id", params.new_vp->id}, {"name", params.new_vp->name}};
    if (params.transform_existing) out["transform"] = *params.transform_existing;
    if (params.position)
        out["position"] = json{{"predecessor", params.position->source},
                               {"successor", params.position->target}};
    out["vp_type"] = std::string(vp_type_label(params.vp_type));
    if (!params.req_f.empty()) out["req_f"] = params.req_f;
    json variants = json::array();
    for (const auto& variant : params.variants) variants.push_back(to_json(variant));
    out["variants"] = variants;
    if (params.flow_condition) out["flow_condition"] = *params.flow_condition;
    if (params.resource) {
        json plan;
        if (params.resource->candidate) plan["candidate"] = *params.resource->candidate;
        if (params.resource->transform_candidate)
            plan["transform_vp_type"] = std::string(vp_type_label(*params.resource->transform_candidate));
        if (params.resource->variant_insert)
            plan["variant_insert"] = to_json(*params.resource->variant_insert);
        if (params.resource->fallback) plan["fallback"] = to_json(*params.resource->fallback);
        out["resource"] = plan;
    }
    if (params.data_insert) out["data_insert"] = data_insert_to_json(*params.data_insert);
    if (params.data_insert_vp) out["data_insert_vp"] = to_json(*params.data_insert_vp);
    return out;
}

VpaiParams vpai_params_from_json(const json& value) {
    if (!value.is_object()) bad("expected a JSON object");
    VpaiParams params;
    if (value.contains("vp")) {
        NodeSpec node;
        node.id = get_string(value["vp"], "id");
        node.name = get_name(value["vp"], node.id);
        params.new_vp = node;
    }
    if (value.contains("transform")) params.transform_existing = get_string(value, "transform");
    if (params.new_vp && params.transform_existing) bad("'vp' and 'transform' are mutually exclusive");
    if (!params.new_vp && !params.transform_existing) bad("one of 'vp' or 'transform' is required");
    if (value.contains("position")) {
        params.position = FlowKey{get_string(value["position"], "predecessor"),
                                  get_string(value["position"], "successor")};
    }
    params.vp_type = get_vp_type(value, "vp_type");
    params.req_f = get_string_set(value, "req_f");
    if (value.contains("variants")) {
        if (!value["variants"].is_array()) bad("'variants' must be an array");
        for (const auto& entry : value["variants"])
            params.variants.push_back(variant_activity_spec_from_json(entry));
    }
    params.flow_condition = get_optional_string(value, "flow_condition");
    if (value.contains("resource")) {
        const json& plan = value["resource"];
        VpaiResourcePlan resource;
        resource.candidate = get_optional_string(plan, "candidate");
        if (plan.contains("transform_vp_type"))
            resource.transform_candidate = get_vp_type(plan, "transform_vp_type");
        if (plan.contains("variant_insert"))
            resource.variant_insert = variant_element_spec_from_json(plan["variant_insert"]);
        if (plan.contains("fallback")) resource.fallback = vp_element_spec_from_json(plan["fallback"]);
        params.resource = resource;
    }
    if (value.contains("data_insert")) params.data_insert = data_insert_from_json(value["data_insert"]);
    if (value.contains("data_insert_vp"))
        params.data_insert_vp = vp_element_spec_from_json(value["data_insert_vp"]);
    return params;
}

json to_json(const VaiParams& params) {
    json out{{"vp_id", params.vp_id}, {"variant", to_json(params.variant)}};
    if (params.transform) out["transform"] = std::string(vp_type_label(*params.transform));
    return out;
}

VaiParams vai_params_from_json(const json& value) {
    if (!value.is_object()) bad("expected a JSON object");
    VaiParams params;
    params.vp_id = get_string(value, "vp_id");
    if (value.contains("transform")) params.transform = get_vp_type(value, "transform");
    if (!value.contains("variant")) bad("missing 'variant'");
    params.variant = variant_activity_spec_from_json(value["variant"]);
    return params;
}

namespace {

const char* disposition_label(DispositionAction action) {
    switch (action) {
    case DispositionAction::keep: return "keep";
    case DispositionAction::remove: return "delete";
    case DispositionAction::substitute: return "substitute";
    }
    return "keep";
}

DispositionAction disposition_from_label(const std::string& label) {
    if (label == "keep") return DispositionAction::keep;
    if (label == "delete") return DispositionAction::remove;
    if (label == "substitute") return DispositionAction::substitute;
    bad("disposition action must be keep, delete, or substitute");
}

} // namespace

json to_json(const VpasParams& params) {
    json out{{"old_vp", params.old_vp_id}};
    if (params.substitute_new)
        out["substitute"] =
            json{{"new", json{{"id", params.substitute_new->id}, {"name", params.substitute_new->name}}}};
    if (params.substitute_existing) out["substitute"] = json{{"existing", *params.substitute_existing}};
    out["vp_type"] = std::string(vp_type_label(params.vp_type));
    if (!params.req_f.empty()) out["req_f"] = params.req_f;
    if (!params.dispositions.empty()) {
        json dispositions;
        for (const auto& [variant_id, disposition] : params.dispositions) {
            json entry{{"action", std::string(disposition_label(disposition.action))}};
            if (disposition.replacement) entry["with"] = to_json(*disposition.replacement);
            dispositions[variant_id] = entry;
        }
        out["dispositions"] = dispositions;
    }
    if (!params.new_variants.empty()) {
        json variants = json::array();
        for (const auto& variant : params.new_variants) variants.push_back(to_json(variant));
        out["new_variants"] = variants;
    }
    if (params.data_substitution)
        out["data_substitution"] = json{{"old", params.data_substitution->old_id},
                                        {"new", data_insert_to_json(params.data_substitution->replacement)}};
    if (params.data_insert) out["data_insert"] = data_insert_to_json(*params.data_insert);
    if (params.condition) out["condition"] = *params.condition;
    if (params.resource) {
        json plan;
        if (params.resource->assign) plan["assign"] = *params.resource->assign;
        if (params.resource->variant_insert)
            plan["variant_insert"] = to_json(*params.resource->variant_insert);
        if (params.resource->substitute_old && params.resource->substitute_with)
            plan["substitute"] = json{{"old", *params.resource->substitute_old},
                                      {"new", to_json(*params.resource->substitute_with)}};
        out["resource"] = plan;
    }
    return out;
}

VpasParams vpas_params_from_json(const json& value) {
    if (!value.is_object()) bad("expected a JSON object");
    VpasParams params;
    params.old_vp_id = get_string(value, "old_vp");
    if (!value.contains("substitute") || !value["substitute"].is_object())
        bad("missing 'substitute' object");
    const json& substitute = value["substitute"];
    if (substitute.contains("new")) {
        NodeSpec node;
        node.id = get_string(substitute["new"], "id");
        node.name = get_name(substitute["new"], node.id);
        params.substitute_new = node;
    } else if (substitute.contains("existing")) {
        params.substitute_existing = get_string(substitute, "existing");
    } else {
        bad("'substitute' needs 'new' or 'existing'");
    }
    params.vp_type = get_vp_type(value, "vp_type");
    params.req_f = get_string_set(value, "req_f");
    if (value.contains("dispositions")) {
        if (!value["dispositions"].is_object()) bad("'dispositions' must be an object");
        for (const auto& [variant_id, entry] : value["dispositions"].items()) {
            VariantDisposition disposition;
            disposition.action = disposition_from_label(get_string(entry, "action"));
            if (disposition.action == DispositionAction::substitute) {
                if (!entry.contains("with")) bad("substitute disposition needs 'with'");
                disposition.replacement = variant_activity_spec_from_json(entry["with"]);
            }
            params.dispositions.emplace(variant_id, std::move(disposition));
        }
    }
    if (value.contains("new_variants")) {
        if (!value["new_variants"].is_array()) bad("'new_variants' must be an array");
        for (const auto& entry : value["new_variants"])
            params.new_variants.push_back(variant_activity_spec_from_json(entry));
    }
    if (value.contains("data_substitution")) {
        const json& ds = value["data_substitution"];
        DataSubstitutionSpec spec;
        spec.old_id = get_string(ds, "old");
        if (!ds.contains("new")) bad("'data_substitution' needs 'new'");
        spec.replacement = data_insert_from_json(ds["new"]);
        params.data_substitution = spec;
    }
    if (value.contains("data_insert")) params.data_insert = data_insert_from_json(value["data_insert"]);
    params.condition = get_optional_string(value, "condition");
    if (value.contains("resource")) {
        const json& plan = value["resource"];
        VpasResourcePlan resource;
        resource.assign = get_optional_string(plan, "assign");
        if (plan.contains("variant_insert"))
            resource.variant_insert = variant_element_spec_from_json(plan["variant_insert"]);
        if (plan.contains("substitute")) {
            resource.substitute_old = get_string(plan["substitute"], "old");
            if (!plan["substitute"].contains("new")) bad("resource substitution needs 'new'");
            resource.substitute_with = vp_element_spec_from_json(plan["substitute"]["new"]);
        }
        params.resource = resource;
    }
    return params;
}

json to_json(const VasParams& params) {
    return json{{"variant_id", params.variant_id}, {"with", to_json(params.replacement)}};
}

VasParams vas_params_from_json(const json& value) {
    if (!value.is_object()) bad("expected a JSON object");
    VasParams params;
    params.variant_id = get_string(value, "variant_id");
    if (!value.contains("with")) bad("missing 'with'");
    params.replacement = variant_activity_spec_from_json(value["with"]);
    return params;
}

json to_json(const SecondaryVariantInsert& params) {
    json out{{"vp_id", params.vp_id}, {"variant", to_json(params.variant)}};
    if (params.transform) out["transform"] = std::string(vp_type_label(*params.transform));
    return out;
}

SecondaryVariantInsert secondary_variant_insert_from_json(const json& value) {
    if (!value.is_object()) bad("expected a JSON object");
    SecondaryVariantInsert params;
    params.vp_id = get_string(value, "vp_id");
    if (value.contains("transform")) params.transform = get_vp_type(value, "transform");
    if (!value.contains("variant")) bad("missing 'variant'");
    params.variant = variant_element_spec_from_json(value["variant"]);
    return params;
}

json to_json(const SecondaryVpSubstitution& params) {
    json out{{"old_id", params.old_id}, {"replacement", to_json(params.replacement)}};
    if (!params.dispositions.empty()) {
        json dispositions;
        for (const auto& [variant_id, disposition] : params.dispositions) {
            json entry{{"action", std::string(disposition_label(disposition.action))}};
            if (disposition.replacement) entry["with"] = to_json(*disposition.replacement);
            dispositions[variant_id] = entry;
        }
        out["dispositions"] = dispositions;
    }
    return out;
}

SecondaryVpSubstitution secondary_vp_substitution_from_json(const json& value) {
    if (!value.is_object()) bad("expected a JSON object");
    SecondaryVpSubstitution params;
    params.old_id = get_string(value, "old_id");
    if (!value.contains("replacement")) bad("missing 'replacement'");
    params.replacement = vp_element_spec_from_json(value["replacement"]);
    if (value.contains("dispositions")) {
        if (!value["dispositions"].is_object()) bad("'dispositions' must be an object");
        for (const auto& [variant_id, entry] : value["dispositions"].items()) {
            SecondaryDisposition disposition;
            disposition.action = disposition_from_label(get_string(entry, "action"));
            if (disposition.action == DispositionAction::substitute) {
                if (!entry.contains("with")) bad("substitute disposition needs 'with'");
                disposition.replacement = variant_element_spec_from_json(entry["with"]);
            }
            params.dispositions.emplace(variant_id, std::move(disposition));
        }
    }
    return params;
}

} // namespace cpmx
