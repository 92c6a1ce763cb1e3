#include "cpmx/io.hpp"

#include <cstdint>
#include <sstream>

#include "cpmx/errors.hpp"

namespace cpmx {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
    fail(Errc::parse_error, where + ": " + what);
}

std::string require_string(const json& object, const char* key, const std::string& where) {
    if (!object.contains(key) || !object[key].is_string())
        parse_fail(where, std::string("missing or non-string '") + key + "'");
    return object[key].get<std::string>();
}

std::set<std::string> string_set(const json& object, const char* key, const std::string& where) {
    std::set<std::string> out;
    if (!object.contains(key)) return out;
    if (!object[key].is_array()) parse_fail(where, std::string("'") + key + "' must be an array");
    for (const auto& item : object[key]) {
        if (!item.is_string()) parse_fail(where, std::string("'") + key + "' must hold strings");
        out.insert(item.get<std::string>());
    }
    return out;
}

void check_fresh_id(const Model& model, const std::string& id) {
    if (id_in_use(model, id)) parse_fail("model", "duplicate identifier '" + id + "'");
}

} // namespace

json role_to_json(const VariabilityRole& role) {
    if (is_plain(role)) return json("plain");
    if (const auto* vp = std::get_if<VariationPointRole>(&role)) return json{{"vp", vp->type}};
    const auto& variant = std::get<VariantRole>(role);
    json out{{"variant_of", variant.parent}};
    if (variant.vsc) out["vsc"] = *variant.vsc;
    return out;
}

VariabilityRole role_from_json(const json& value) {
    if (value.is_string()) {
        if (value.get<std::string>() != "plain") parse_fail("role", "unknown role '" + value.get<std::string>() + "'");
        return PlainRole{};
    }
    if (!value.is_object()) parse_fail("role", "role must be \"plain\" or an object");
    if (value.contains("vp")) {
        if (!value["vp"].is_string()) parse_fail("role", "'vp' must be a string");
        return VariationPointRole{value["vp"].get<std::string>()};
    }
    if (value.contains("variant_of")) {
        if (!value["variant_of"].is_string()) parse_fail("role", "'variant_of' must be a string");
        VariantRole variant{value["variant_of"].get<std::string>(), std::nullopt};
        if (value.contains("vsc")) {
            if (!value["vsc"].is_string()) parse_fail("role", "'vsc' must be a string");
            variant.vsc = value["vsc"].get<std::string>();
        }
        return variant;
    }
    parse_fail("role", "expected 'vp' or 'variant_of'");
}

json activity_to_json(const Activity& activity) {
    json entry{{"id", activity.id}, {"name", activity.name}, {"role", role_to_json(activity.role)}};
    if (!activity.req_f.empty()) entry["req_f"] = activity.req_f;
    if (activity.resource) entry["resource"] = *activity.resource;
    if (!activity.data_refs.empty()) entry["data"] = activity.data_refs;
    return entry;
}

Activity activity_from_json(const json& entry) {
    Activity activity;
    activity.id = require_string(entry, "id", "activity");
    activity.name = entry.contains("name") ? require_string(entry, "name", "activity") : activity.id;
    if (!entry.contains("role")) parse_fail("activity '" + activity.id + "'", "missing 'role'");
    activity.role = role_from_json(entry["role"]);
    activity.req_f = string_set(entry, "req_f", "activity '" + activity.id + "'");
    if (entry.contains("resource")) activity.resource = require_string(entry, "resource", "activity");
    activity.data_refs = string_set(entry, "data", "activity '" + activity.id + "'");
    return activity;
}

json resource_to_json(const Resource& resource) {
    json entry{{"id", resource.id}, {"name", resource.name}, {"role", role_to_json(resource.role)}};
    entry["r_f"] = resource.functionalities;
    return entry;
}

Resource resource_from_json(const json& entry) {
    Resource resource;
    resource.id = require_string(entry, "id", "resource");
    resource.name = entry.contains("name") ? require_string(entry, "name", "resource") : resource.id;
    if (!entry.contains("role")) parse_fail("resource '" + resource.id + "'", "missing 'role'");
    resource.role = role_from_json(entry["role"]);
    resource.functionalities = string_set(entry, "r_f", "resource '" + resource.id + "'");
    return resource;
}

json data_to_json(const DataObject& data) {
    return json{{"id", data.id},
                {"name", data.name},
                {"role", role_to_json(data.role)},
                {"data_type", data.data_type}};
}

DataObject data_from_json(const json& entry) {
    DataObject data;
    data.id = require_string(entry, "id", "data object");
    data.name = entry.contains("name") ? require_string(entry, "name", "data object") : data.id;
    if (!entry.contains("role")) parse_fail("data object '" + data.id + "'", "missing 'role'");
    data.role = role_from_json(entry["role"]);
    data.data_type = entry.contains("data_type") ? require_string(entry, "data_type", "data object") : "";
    return data;
}

json model_to_json(const Model& model) {
    json activities = json::array();
    for (const auto& [id, activity] : model.activities) activities.push_back(activity_to_json(activity));

    json resources = json::array();
    for (const auto& [id, resource] : model.resources) resources.push_back(resource_to_json(resource));

    json data_objects = json::array();
    for (const auto& [id, data] : model.data_objects) data_objects.push_back(data_to_json(data));

    json flows = json::array();
    for (const auto& [key, condition] : model.flows) {
        json entry{{"source", key.source}, {"target", key.target}};
        if (condition) entry["condition"] = *condition;
        flows.push_back(entry);
    }

    json vccs = json::array();
    for (const auto& vcc : model.vccs) {
        vccs.push_back(json{{"subject", vcc.subject},
                            {"relation", std::string(vcc_relation_label(vcc.relation))},
                            {"object", vcc.object}});
    }

    return json{{"format_version", std::string(model_format_version)},
                {"id", model.id},
                {"max_activities", model.max_activities},
                {"start", model.start_node},
                {"end", model.end_node},
                {"activities", activities},
                {"resources", resources},
                {"data_objects", data_objects},
                {"flows", flows},
                {"vccs", vccs}};
}

Model model_from_json(const json& document) {
    if (!document.is_object()) parse_fail("model", "document is not a JSON object");

    if (document.contains("format_version")) {
        if (!document["format_version"].is_string())
            parse_fail("model", "'format_version' must be a string");
        std::string version = document["format_version"].get<std::string>();
        if (version != model_format_version)
            fail(Errc::unsupported_version, "format_version '" + version + "' is not supported");
    }

    Model model;
    model.id = require_string(document, "id", "model");
    model.start_node = require_string(document, "start", "model");
    model.end_node = require_string(document, "end", "model");
    if (!document.contains("max_activities") || !document["max_activities"].is_number_integer())
        parse_fail("model", "missing or non-integer 'max_activities'");
    model.max_activities = document["max_activities"].get<int>();
    if (model.max_activities <= 0) parse_fail("model", "'max_activities' must be positive");
    if (model.start_node == model.end_node)
        parse_fail("model", "start and end nodes must be distinct");

    auto element_array = [&](const char* key) -> const json& {
        static const json empty = json::array();
        if (!document.contains(key)) return empty;
        if (!document[key].is_array()) parse_fail("model", std::string("'") + key + "' must be an array");
        return document[key];
    };

    for (const auto& entry : element_array("activities")) {
        Activity activity = activity_from_json(entry);
        check_fresh_id(model, activity.id);
        model.activities.emplace(activity.id, std::move(activity));
    }

    for (const auto& entry : element_array("resources")) {
        Resource resource = resource_from_json(entry);
        check_fresh_id(model, resource.id);
        model.resources.emplace(resource.id, std::move(resource));
    }

    for (const auto& entry : element_array("data_objects")) {
        DataObject data = data_from_json(entry);
        check_fresh_id(model, data.id);
        model.data_objects.emplace(data.id, std::move(data));
    }

    for (const auto& entry : element_array("flows")) {
        FlowKey key{require_string(entry, "source", "flow"), require_string(entry, "target", "flow")};
        std::optional<std::string> condition;
        if (entry.contains("condition")) condition = require_string(entry, "condition", "flow");
        if (model.flows.count(key))
            parse_fail("model", "duplicate flow " + key.source + " -> " + key.target);
        model.flows.emplace(std::move(key), std::move(condition));
    }

    for (const auto& entry : element_array("vccs")) {
        Vcc vcc;
        vcc.subject = require_string(entry, "subject", "constraint");
        vcc.object = require_string(entry, "object", "constraint");
        auto relation = parse_vcc_relation(require_string(entry, "relation", "constraint"));
        if (!relation) parse_fail("constraint", "relation must be 'requires' or 'excludes'");
        vcc.relation = *relation;
        model.vccs.insert(std::move(vcc));
    }

    return model;
}

std::string save_model(const Model& model) {
    return model_to_json(model).dump(2) + "\n";
}

Model load_model(std::string_view bytes) {
    json document;
    try {
        document = json::parse(bytes);
    } catch (const json::exception& e) {
        fail(Errc::parse_error, e.what());
    }
    return model_from_json(document);
}

std::string canonical_hash(const Model& model) {
    const std::string bytes = save_model(model);
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char byte : bytes) {
        hash ^= byte;
        hash *= 1099511628211ull;
    }
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[hash & 0xf];
        hash >>= 4;
    }
    return out;
}

namespace {

std::string dot_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string dot_id(const std::string& id) { return "\"" + dot_escape(id) + "\""; }

// escaped label text; the stereotype goes on its own line
std::string node_label(const std::string& name, const VariabilityRole& role) {
    auto stereo = annotation(role);
    std::string label = dot_escape(name);
    if (stereo) label += "\\n" + *stereo;
    return label;
}

} // namespace

std::string export_dot(const Model& model) {
    std::ostringstream out;
    out << "digraph model {\n";
    out << "  rankdir=LR;\n";
    out << "  " << dot_id(model.start_node) << " [shape=circle];\n";
    out << "  " << dot_id(model.end_node) << " [shape=doublecircle];\n";

    for (const auto& [id, activity] : model.activities) {
        out << "  " << dot_id(id) << " [shape=box";
        if (is_variant(activity.role)) out << ", style=dashed";
        out << ", label=\"" << node_label(activity.name, activity.role) << "\"];\n";
    }
    for (const auto& [id, resource] : model.resources) {
        out << "  " << dot_id(id) << " [shape=ellipse, style=dotted, label=\""
            << node_label(resource.name, resource.role) << "\"];\n";
    }
    for (const auto& [id, data] : model.data_objects) {
        out << "  " << dot_id(id) << " [shape=note, label=\""
            << node_label(data.name, data.role) << "\"];\n";
    }

    for (const auto& [key, condition] : model.flows) {
        out << "  " << dot_id(key.source) << " -> " << dot_id(key.target);
        if (condition) out << " [label=\"" << dot_escape(*condition) << "\"]";
        out << ";\n";
    }

    // variant attachment edges
    auto emit_variant_edges = [&](const auto& elements) {
        for (const auto& [id, element] : elements) {
            if (const auto* variant = std::get_if<VariantRole>(&element.role))
                out << "  " << dot_id(variant->parent) << " -> " << dot_id(id)
                    << " [style=dashed, arrowhead=none];\n";
        }
    };
    emit_variant_edges(model.activities);
    emit_variant_edges(model.resources);
    emit_variant_edges(model.data_objects);

    for (const auto& [id, activity] : model.activities) {
        if (activity.resource)
            out << "  " << dot_id(id) << " -> " << dot_id(*activity.resource)
                << " [style=dotted, label=\"resource\"];\n";
        for (const auto& ref : activity.data_refs)
            out << "  " << dot_id(id) << " -> " << dot_id(ref) << " [style=dotted, label=\"data\"];\n";
    }

    for (const auto& vcc : model.vccs) {
        out << "  " << dot_id(vcc.subject) << " -> " << dot_id(vcc.object)
            << " [style=dotted, constraint=false, label=\"" << vcc_relation_label(vcc.relation)
            << "\"];\n";
    }

    out << "}\n";
    return out.str();
}

} // namespace cpmx
