#include "cpmx/diff.hpp"

#include <algorithm>

#include "cpmx/errors.hpp"
#include "cpmx/io.hpp"

namespace cpmx {

using nlohmann::json;

std::string_view edit_kind_label(EditKind kind) {
    switch (kind) {
    case EditKind::add_node: return "add_node";
    case EditKind::remove_node: return "remove_node";
    case EditKind::set_attribute: return "set_attribute";
    case EditKind::add_flow: return "add_flow";
    case EditKind::remove_flow: return "remove_flow";
    case EditKind::add_constraint: return "add_constraint";
    case EditKind::remove_constraint: return "remove_constraint";
    }
    return "add_node";
}

json edit_to_json(const Edit& edit) {
    json out = edit.data;
    out["op"] = std::string(edit_kind_label(edit.kind));
    return out;
}

Edit edit_from_json(const json& value) {
    if (!value.is_object() || !value.contains("op") || !value["op"].is_string())
        fail(Errc::parse_error, "edit entry lacks an 'op' field");
    std::string op = value["op"].get<std::string>();
    Edit edit;
    edit.data = value;
    edit.data.erase("op");
    if (op == "add_node") edit.kind = EditKind::add_node;
    else if (op == "remove_node") edit.kind = EditKind::remove_node;
    else if (op == "set_attribute") edit.kind = EditKind::set_attribute;
    else if (op == "add_flow") edit.kind = EditKind::add_flow;
    else if (op == "remove_flow") edit.kind = EditKind::remove_flow;
    else if (op == "add_constraint") edit.kind = EditKind::add_constraint;
    else if (op == "remove_constraint") edit.kind = EditKind::remove_constraint;
    else fail(Errc::parse_error, "unknown edit op '" + op + "'");
    return edit;
}

namespace {

json flow_payload(const FlowKey& key, const std::optional<std::string>& condition) {
    json out{{"source", key.source}, {"target", key.target}};
    if (condition) out["condition"] = *condition;
    return out;
}

json vcc_payload(const Vcc& vcc) {
    return json{{"subject", vcc.subject},
                {"relation", std::string(vcc_relation_label(vcc.relation))},
                {"object", vcc.object}};
}

Vcc vcc_from_payload(const json& data) {
    auto relation = parse_vcc_relation(data.at("relation").get<std::string>());
    if (!relation) fail(Errc::parse_error, "bad constraint relation in edit");
    return Vcc{data.at("subject").get<std::string>(), *relation, data.at("object").get<std::string>()};
}

json node_payload(ElementKind kind, const json& element) {
    return json{{"kind", std::string(kind_label(kind))}, {"element", element}};
}

Edit make(EditKind kind, json data) { return Edit{kind, std::move(data)}; }

// One set_attribute edit per differing field; payloads reuse the file-format
// value encodings so traces stay readable.
template <typename Element>
void diff_attributes(const std::string& kind, const Element& before, const json& before_json,
                     const json& after_json, std::vector<Edit>& out) {
    static const char* const keys[] = {"name", "role", "req_f", "resource", "data", "r_f", "data_type"};
    for (const char* key : keys) {
        json old_value = before_json.contains(key) ? before_json[key] : json();
        json new_value = after_json.contains(key) ? after_json[key] : json();
        if (old_value != new_value)
            out.push_back(make(EditKind::set_attribute, json{{"kind", kind},
                                                             {"id", before.id},
                                                             {"attr", std::string(key)},
                                                             {"old", old_value},
                                                             {"new", new_value}}));
    }
}

template <typename Map, typename ToJson>
void diff_elements(const Map& from, const Map& to, ElementKind kind, ToJson to_json,
                   std::vector<Edit>& removes, std::vector<Edit>& adds, std::vector<Edit>& sets) {
    for (const auto& [id, element] : from) {
        auto it = to.find(id);
        if (it == to.end())
            removes.push_back(make(EditKind::remove_node, node_payload(kind, to_json(element))));
        else if (!(element == it->second))
            diff_attributes(std::string(kind_label(kind)), element, to_json(element),
                            to_json(it->second), sets);
    }
    for (const auto& [id, element] : to) {
        if (!from.count(id))
            adds.push_back(make(EditKind::add_node, node_payload(kind, to_json(element))));
    }
}

void set_model_attribute(Model& model, const std::string& attr, const json& old_value,
                         const json& new_value) {
    auto check = [&](const json& current) {
        if (current != old_value)
            fail(Errc::edit_application_failed,
                 "stale model attribute '" + attr + "' (expected " + old_value.dump() + ", found " +
                     current.dump() + ")");
    };
    if (attr == "id") {
        check(json(model.id));
        model.id = new_value.get<std::string>();
    } else if (attr == "start") {
        check(json(model.start_node));
        model.start_node = new_value.get<std::string>();
    } else if (attr == "end") {
        check(json(model.end_node));
        model.end_node = new_value.get<std::string>();
    } else if (attr == "max_activities") {
        check(json(model.max_activities));
        model.max_activities = new_value.get<int>();
    } else {
        fail(Errc::edit_application_failed, "unknown model attribute '" + attr + "'");
    }
}

template <typename Element>
void set_element_attribute(Element& element, const std::string& attr, const json& old_value,
                           const json& new_value, const json& element_json) {
    json current = element_json.contains(attr) ? element_json[attr] : json();
    if (current != old_value)
        fail(Errc::edit_application_failed,
             "stale attribute '" + attr + "' on '" + element.id + "'");

    if (attr == "name") {
        element.name = new_value.get<std::string>();
        return;
    }
    if (attr == "role") {
        element.role = role_from_json(new_value);
        return;
    }
    if constexpr (std::is_same_v<Element, Activity>) {
        if (attr == "req_f") {
            element.req_f = new_value.is_null() ? std::set<std::string>{}
                                                : new_value.get<std::set<std::string>>();
            return;
        }
        if (attr == "resource") {
            if (new_value.is_null()) element.resource.reset();
            else element.resource = new_value.get<std::string>();
            return;
        }
        if (attr == "data") {
            element.data_refs = new_value.is_null() ? std::set<std::string>{}
                                                    : new_value.get<std::set<std::string>>();
            return;
        }
    }
    if constexpr (std::is_same_v<Element, Resource>) {
        if (attr == "r_f") {
            element.functionalities = new_value.is_null() ? std::set<std::string>{}
                                                          : new_value.get<std::set<std::string>>();
            return;
        }
    }
    if constexpr (std::is_same_v<Element, DataObject>) {
        if (attr == "data_type") {
            element.data_type = new_value.is_null() ? std::string{} : new_value.get<std::string>();
            return;
        }
    }
    fail(Errc::edit_application_failed, "attribute '" + attr + "' does not apply to this element");
}

void apply_one(Model& model, const Edit& edit) {
    const json& data = edit.data;
    switch (edit.kind) {
    case EditKind::add_node: {
        std::string kind = data.at("kind").get<std::string>();
        const json& element = data.at("element");
        std::string id = element.at("id").get<std::string>();
        if (id_in_use(model, id))
            fail(Errc::edit_application_failed, "add_node: id '" + id + "' already in use", {id});
        if (kind == "activity") model.activities.emplace(id, activity_from_json(element));
        else if (kind == "resource") model.resources.emplace(id, resource_from_json(element));
        else if (kind == "data") model.data_objects.emplace(id, data_from_json(element));
        else fail(Errc::edit_application_failed, "add_node: unknown kind '" + kind + "'");
        break;
    }
    case EditKind::remove_node: {
        std::string kind = data.at("kind").get<std::string>();
        const json& element = data.at("element");
        std::string id = element.at("id").get<std::string>();
        auto check = [&](const json& current) {
            if (current != element)
                fail(Errc::edit_application_failed, "remove_node: '" + id + "' does not match payload",
                     {id});
        };
        if (kind == "activity") {
            auto it = model.activities.find(id);
            if (it == model.activities.end())
                fail(Errc::edit_application_failed, "remove_node: no activity '" + id + "'", {id});
            check(activity_to_json(it->second));
            model.activities.erase(it);
        } else if (kind == "resource") {
            auto it = model.resources.find(id);
            if (it == model.resources.end())
                fail(Errc::edit_application_failed, "remove_node: no resource '" + id + "'", {id});
            check(resource_to_json(it->second));
            model.resources.erase(it);
        } else if (kind == "data") {
            auto it = model.data_objects.find(id);
            if (it == model.data_objects.end())
                fail(Errc::edit_application_failed, "remove_node: no data object '" + id + "'", {id});
            check(data_to_json(it->second));
            model.data_objects.erase(it);
        } else {
            fail(Errc::edit_application_failed, "remove_node: unknown kind '" + kind + "'");
        }
        break;
    }
    case EditKind::set_attribute: {
        std::string kind = data.at("kind").get<std::string>();
        std::string attr = data.at("attr").get<std::string>();
        const json& old_value = data.at("old");
        const json& new_value = data.at("new");
        if (kind == "model") {
            set_model_attribute(model, attr, old_value, new_value);
            break;
        }
        std::string id = data.at("id").get<std::string>();
        if (kind == "activity") {
            auto it = model.activities.find(id);
            if (it == model.activities.end())
                fail(Errc::edit_application_failed, "set_attribute: no activity '" + id + "'", {id});
            set_element_attribute(it->second, attr, old_value, new_value, activity_to_json(it->second));
        } else if (kind == "resource") {
            auto it = model.resources.find(id);
            if (it == model.resources.end())
                fail(Errc::edit_application_failed, "set_attribute: no resource '" + id + "'", {id});
            set_element_attribute(it->second, attr, old_value, new_value, resource_to_json(it->second));
        } else if (kind == "data") {
            auto it = model.data_objects.find(id);
            if (it == model.data_objects.end())
                fail(Errc::edit_application_failed, "set_attribute: no data object '" + id + "'", {id});
            set_element_attribute(it->second, attr, old_value, new_value, data_to_json(it->second));
        } else {
            fail(Errc::edit_application_failed, "set_attribute: unknown kind '" + kind + "'");
        }
        break;
    }
    case EditKind::add_flow: {
        FlowKey key{data.at("source").get<std::string>(), data.at("target").get<std::string>()};
        if (model.flows.count(key))
            fail(Errc::edit_application_failed,
                 "add_flow: " + key.source + " -> " + key.target + " already present");
        std::optional<std::string> condition;
        if (data.contains("condition") && !data["condition"].is_null())
            condition = data["condition"].get<std::string>();
        model.flows.emplace(std::move(key), std::move(condition));
        break;
    }
    case EditKind::remove_flow: {
        FlowKey key{data.at("source").get<std::string>(), data.at("target").get<std::string>()};
        auto it = model.flows.find(key);
        if (it == model.flows.end())
            fail(Errc::edit_application_failed,
                 "remove_flow: " + key.source + " -> " + key.target + " not present");
        std::optional<std::string> condition;
        if (data.contains("condition") && !data["condition"].is_null())
            condition = data["condition"].get<std::string>();
        if (it->second != condition)
            fail(Errc::edit_application_failed,
                 "remove_flow: condition mismatch on " + key.source + " -> " + key.target);
        model.flows.erase(it);
        break;
    }
    case EditKind::add_constraint: {
        Vcc vcc = vcc_from_payload(data);
        if (!model.vccs.insert(vcc).second)
            fail(Errc::edit_application_failed, "add_constraint: constraint already present");
        break;
    }
    case EditKind::remove_constraint: {
        Vcc vcc = vcc_from_payload(data);
        if (model.vccs.erase(vcc) == 0)
            fail(Errc::edit_application_failed, "remove_constraint: constraint not present");
        break;
    }
    }
}

} // namespace

std::vector<Edit> model_diff(const Model& from, const Model& to) {
    std::vector<Edit> model_sets, removes_c, removes_f, removes_n, adds_n, sets, adds_f, adds_c;

    auto model_attr = [&](const char* attr, json old_value, json new_value) {
        if (old_value != new_value)
            model_sets.push_back(make(EditKind::set_attribute,
                                      json{{"kind", "model"},
                                           {"id", from.id},
                                           {"attr", std::string(attr)},
                                           {"old", std::move(old_value)},
                                           {"new", std::move(new_value)}}));
    };
    model_attr("id", json(from.id), json(to.id));
    model_attr("start", json(from.start_node), json(to.start_node));
    model_attr("end", json(from.end_node), json(to.end_node));
    model_attr("max_activities", json(from.max_activities), json(to.max_activities));

    for (const auto& vcc : from.vccs)
        if (!to.vccs.count(vcc)) removes_c.push_back(make(EditKind::remove_constraint, vcc_payload(vcc)));
    for (const auto& vcc : to.vccs)
        if (!from.vccs.count(vcc)) adds_c.push_back(make(EditKind::add_constraint, vcc_payload(vcc)));

    for (const auto& [key, condition] : from.flows) {
        auto it = to.flows.find(key);
        if (it == to.flows.end() || it->second != condition)
            removes_f.push_back(make(EditKind::remove_flow, flow_payload(key, condition)));
    }
    for (const auto& [key, condition] : to.flows) {
        auto it = from.flows.find(key);
        if (it == from.flows.end() || it->second != condition)
            adds_f.push_back(make(EditKind::add_flow, flow_payload(key, condition)));
    }

    diff_elements(from.activities, to.activities, ElementKind::activity,
                  [](const Activity& a) { return activity_to_json(a); }, removes_n, adds_n, sets);
    diff_elements(from.resources, to.resources, ElementKind::resource,
                  [](const Resource& r) { return resource_to_json(r); }, removes_n, adds_n, sets);
    diff_elements(from.data_objects, to.data_objects, ElementKind::data,
                  [](const DataObject& d) { return data_to_json(d); }, removes_n, adds_n, sets);

    std::vector<Edit> out;
    for (auto* group : {&model_sets, &removes_c, &removes_f, &removes_n, &adds_n, &sets, &adds_f, &adds_c})
        out.insert(out.end(), group->begin(), group->end());
    return out;
}

Model apply_edits(const Model& model, const std::vector<Edit>& edits) {
    Model out = model;
    for (const Edit& edit : edits) apply_one(out, edit);
    return out;
}

Edit invert(const Edit& edit) {
    switch (edit.kind) {
    case EditKind::add_node: return Edit{EditKind::remove_node, edit.data};
    case EditKind::remove_node: return Edit{EditKind::add_node, edit.data};
    case EditKind::add_flow: return Edit{EditKind::remove_flow, edit.data};
    case EditKind::remove_flow: return Edit{EditKind::add_flow, edit.data};
    case EditKind::add_constraint: return Edit{EditKind::remove_constraint, edit.data};
    case EditKind::remove_constraint: return Edit{EditKind::add_constraint, edit.data};
    case EditKind::set_attribute: {
        Edit out{EditKind::set_attribute, edit.data};
        std::swap(out.data["old"], out.data["new"]);
        return out;
    }
    }
    return edit;
}

} // namespace cpmx
