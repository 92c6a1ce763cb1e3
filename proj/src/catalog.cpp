#include "cpmx/catalog.hpp"

#include <algorithm>
#include <sstream>

#include "cpmx/errors.hpp"
#include "internal.hpp"

namespace cpmx {

namespace {

PatternDescriptor abstract_pattern(std::string id, std::string name, ElementKind kind,
                                   std::vector<std::string> classification, std::string problem) {
    PatternDescriptor d;
    d.id = std::move(id);
    d.name = std::move(name);
    d.is_abstract = true;
    d.kind = kind;
    d.classification = std::move(classification);
    d.problem = std::move(problem);
    d.force = "Groups the concrete patterns refining it and anchors the refinement hierarchy.";
    return d;
}

PatternDescriptor concrete_pattern(std::string id, std::string name, std::string op_id,
                                   ElementKind kind, std::vector<std::string> classification,
                                   std::vector<std::string> context, std::string problem,
                                   std::string force, std::string refines,
                                   std::vector<std::string> uses) {
    PatternDescriptor d;
    d.id = std::move(id);
    d.name = std::move(name);
    d.op_id = std::move(op_id);
    d.kind = kind;
    d.classification = std::move(classification);
    d.context = std::move(context);
    d.problem = std::move(problem);
    d.force = std::move(force);
    d.refines = std::move(refines);
    d.uses = std::move(uses);
    return d;
}

std::vector<PatternDescriptor> build_catalog() {
    std::vector<PatternDescriptor> catalog;
    const auto activity = ElementKind::activity;
    const auto resource = ElementKind::resource;
    const auto data = ElementKind::data;

    // activity sub-system
    catalog.push_back(abstract_pattern("AI", "Activity Insertion", activity,
                                       {"activity", "insertion"},
                                       "Add an activity to the configurable process model."));
    catalog.push_back(concrete_pattern(
        "VPAI", "Variation Point Activity Insertion", "vpai", activity,
        {"variant activity", "configurable process model"}, {"VAI", "DI", "RI"},
        "Insert an activity that acts as a variation point into the configurable process model.",
        "Checks the evolution constraints before a variation point activity enters the model.",
        "AI", {"VAI", "DI", "RI"}));
    catalog.push_back(concrete_pattern(
        "VAI", "Variant Activity Insertion", "vai", activity,
        {"variant activity", "insertion", "configurable process model"}, {"VPAI"},
        "Attach a new variant activity to a variation point.",
        "Guarantees the variant hangs off an existing variation point, transforming a plain "
        "activity first when needed.",
        "AI", {}));

    catalog.push_back(abstract_pattern("AS", "Activity Substitution", activity,
                                       {"activity", "substitution"},
                                       "Replace an activity of the configurable process model."));
    catalog.push_back(concrete_pattern(
        "VPAS", "Variation Point Activity Substitution", "vpas", activity,
        {"variation point activity", "substitution", "configurable process model"},
        {"DS", "RS", "VAS", "VAI", "VAD"},
        "Substitute a variation point activity of the configurable process model.",
        "Checks variant compatibility so existing variants are conserved, substituted, or deleted "
        "rather than orphaned.",
        "AS", {"DS", "RS", "VAS", "VAI", "VAD"}));
    catalog.push_back(concrete_pattern(
        "VAS", "Variant Activity Substitution", "vas", activity,
        {"variant activity", "substitution", "configurable process model"}, {"VPAS"},
        "Replace a variant activity under its variation point.",
        "Re-points configuration constraints so no dangling references survive the exchange.",
        "AS", {}));

    catalog.push_back(abstract_pattern("AD", "Activity Deletion", activity,
                                       {"activity", "deletion"},
                                       "Remove an activity from the configurable process model."));
    catalog.push_back(concrete_pattern(
        "VPAD", "Variation Point Activity Deletion", "vpad", activity,
        {"variation point activity", "deletion", "configurable process model"}, {"VAD"},
        "Delete a variation point activity together with its variants.",
        "Cascades over the related variants and refuses to strand variants that other variants require.",
        "AD", {"VAD"}));
    catalog.push_back(concrete_pattern(
        "VAD", "Variant Activity Deletion", "vad", activity,
        {"variant activity", "deletion", "configurable process model"}, {"VPAD"},
        "Delete a variant activity from its variation point.",
        "Checks the configuration constraints of the other variants so no required variant disappears.",
        "AD", {}));

    // resource sub-system
    catalog.push_back(abstract_pattern("RI", "Resource Insertion", resource,
                                       {"resource", "insertion"},
                                       "Add a resource to the configurable process model."));
    catalog.push_back(concrete_pattern(
        "VPRI", "Variation Point Resource Insertion", "vpri", resource,
        {"variation point resource", "insertion", "configurable process model"}, {"VRI"},
        "Insert a resource that acts as a variation point.",
        "Brings at least one variant resource along so the variation point is never empty.",
        "RI", {"VRI"}));
    catalog.push_back(concrete_pattern(
        "VRI", "Variant Resource Insertion", "vri", resource,
        {"variant resource", "insertion", "configurable process model"}, {"VPRI"},
        "Attach a new variant resource to a variation point resource.",
        "Checks functionality coverage for every activity the variant is assigned to.",
        "RI", {}));
    catalog.push_back(abstract_pattern("RS", "Resource Substitution", resource,
                                       {"resource", "substitution"},
                                       "Replace a resource of the configurable process model."));
    catalog.push_back(concrete_pattern(
        "VPRS", "Variation Point Resource Substitution", "vprs", resource,
        {"variation point resource", "substitution", "configurable process model"},
        {"VRS", "VRI", "VRD"},
        "Substitute a variation point resource.",
        "Keeps variants whose functionalities the substitute covers and re-points assignments.",
        "RS", {"VRS", "VRI", "VRD"}));
    catalog.push_back(concrete_pattern(
        "VRS", "Variant Resource Substitution", "vrs", resource,
        {"variant resource", "substitution", "configurable process model"}, {"VPRS"},
        "Replace a variant resource under its variation point.",
        "Preserves functionality coverage for the activities the variant performs.",
        "RS", {}));
    catalog.push_back(abstract_pattern("RD", "Resource Deletion", resource,
                                       {"resource", "deletion"},
                                       "Remove a resource from the configurable process model."));
    catalog.push_back(concrete_pattern(
        "VPRD", "Variation Point Resource Deletion", "vprd", resource,
        {"variation point resource", "deletion", "configurable process model"}, {"VRD"},
        "Delete a variation point resource together with its variants.",
        "Refuses to delete while assignments remain, unless the cascade clears them.",
        "RD", {"VRD"}));
    catalog.push_back(concrete_pattern(
        "VRD", "Variant Resource Deletion", "vrd", resource,
        {"variant resource", "deletion", "configurable process model"}, {"VPRD"},
        "Delete a variant resource from its variation point.",
        "Checks assignments and the configuration constraints of the other variants first.",
        "RD", {}));

    // data sub-system
    catalog.push_back(abstract_pattern("DI", "Data Insertion", data, {"data", "insertion"},
                                       "Add a data object to the configurable process model."));
    catalog.push_back(concrete_pattern(
        "VPDI", "Variation Point Data Insertion", "vpdi", data,
        {"variation point data", "insertion", "configurable process model"}, {"VDI"},
        "Insert a data object that acts as a variation point.",
        "Brings at least one variant data object along so the variation point is never empty.",
        "DI", {"VDI"}));
    catalog.push_back(concrete_pattern(
        "VDI", "Variant Data Insertion", "vdi", data,
        {"variant data", "insertion", "configurable process model"}, {"VPDI"},
        "Attach a new variant data object to a variation point data object.",
        "Guarantees the variant hangs off an existing variation point of the data kind.",
        "DI", {}));
    catalog.push_back(abstract_pattern("DS", "Data Substitution", data, {"data", "substitution"},
                                       "Replace a data object of the configurable process model."));
    catalog.push_back(concrete_pattern(
        "VPDS", "Variation Point Data Substitution", "vpds", data,
        {"variation point data", "substitution", "configurable process model"},
        {"VDS", "VDI", "VDD"},
        "Substitute a variation point data object.",
        "Keeps variants whose data type matches the substitute and re-points references.",
        "DS", {"VDS", "VDI", "VDD"}));
    catalog.push_back(concrete_pattern(
        "VDS", "Variant Data Substitution", "vds", data,
        {"variant data", "substitution", "configurable process model"}, {"VPDS"},
        "Replace a variant data object under its variation point.",
        "Re-points references and configuration constraints to the replacement.",
        "DS", {}));
    catalog.push_back(abstract_pattern("DD", "Data Deletion", data, {"data", "deletion"},
                                       "Remove a data object from the configurable process model."));
    catalog.push_back(concrete_pattern(
        "VPDD", "Variation Point Data Deletion", "vpdd", data,
        {"variation point data", "deletion", "configurable process model"}, {"VDD"},
        "Delete a variation point data object together with its variants.",
        "Refuses to delete while references remain, unless the cascade clears them.",
        "DD", {"VDD"}));
    catalog.push_back(concrete_pattern(
        "VDD", "Variant Data Deletion", "vdd", data,
        {"variant data", "deletion", "configurable process model"}, {"VPDD"},
        "Delete a variant data object from its variation point.",
        "Checks references and the configuration constraints of the other variants first.",
        "DD", {}));

    return catalog;
}

} // namespace

const std::vector<PatternDescriptor>& list_patterns() {
    static const std::vector<PatternDescriptor> catalog = build_catalog();
    return catalog;
}

const PatternDescriptor* find_pattern(const std::string& id) {
    for (const PatternDescriptor& descriptor : list_patterns())
        if (descriptor.id == id || (!descriptor.op_id.empty() && descriptor.op_id == id))
            return &descriptor;
    return nullptr;
}

RelationGraph pattern_relations() {
    RelationGraph graph;
    for (const PatternDescriptor& descriptor : list_patterns()) {
        if (descriptor.refines) graph.refines_edges.emplace_back(descriptor.id, *descriptor.refines);
        for (const std::string& used : descriptor.uses) graph.uses_edges.emplace_back(descriptor.id, used);
    }
    return graph;
}

std::string relations_dot() {
    RelationGraph graph = pattern_relations();
    std::ostringstream out;
    out << "digraph patterns {\n";
    out << "  rankdir=BT;\n";
    for (const PatternDescriptor& descriptor : list_patterns()) {
        out << "  \"" << descriptor.id << "\" [shape=box"
            << (descriptor.is_abstract ? ", style=dashed" : "") << "];\n";
    }
    for (const auto& [child, parent] : graph.refines_edges)
        out << "  \"" << child << "\" -> \"" << parent << "\" [label=\"refines\"];\n";
    for (const auto& [user, used] : graph.uses_edges)
        out << "  \"" << user << "\" -> \"" << used << "\" [style=dashed, label=\"uses\"];\n";
    out << "}\n";
    return out.str();
}

namespace {

struct Verdict {
    std::vector<std::string> reasons;
    void block(std::string reason) { reasons.push_back(std::move(reason)); }
};

bool role_is(const Model& model, ElementKind kind, const std::string& id,
             bool (*predicate)(const VariabilityRole&)) {
    if (element_kind(model, id) != kind) return false;
    const VariabilityRole* role = role_of(model, id);
    return role && predicate(*role);
}

bool vp_deletable(const Model& model, const std::string& vp_id) {
    auto variants = variant_ids_of(model, vp_id);
    std::set<std::string> removed(variants.begin(), variants.end());
    return internal::requiring_survivors(model, removed).empty();
}

bool variant_deletable(const Model& model, const std::string& variant_id) {
    const VariabilityRole* role = role_of(model, variant_id);
    const std::string parent = std::get<VariantRole>(*role).parent;
    if (variant_ids_of(model, parent).size() <= 1) return false;
    return internal::requiring_survivors(model, {variant_id}).empty();
}

template <typename Pred>
bool any_element(const Model& model, ElementKind kind, Pred predicate) {
    auto scan = [&](const auto& elements) {
        for (const auto& [id, element] : elements)
            if (predicate(id, element.role)) return true;
        return false;
    };
    switch (kind) {
    case ElementKind::activity: return scan(model.activities);
    case ElementKind::resource: return scan(model.resources);
    case ElementKind::data: return scan(model.data_objects);
    }
    return false;
}

std::string kind_word(ElementKind kind) {
    return kind == ElementKind::activity ? "an activity"
                                         : (kind == ElementKind::resource ? "a resource" : "a data");
}

// Insertion of a fresh variation point element: parameters are free, so the
// verdict only depends on the environment (capacity for activities).
void judge_vp_insert(const Model& model, ElementKind kind, Verdict& v) {
    if (kind == ElementKind::activity && capacity_reached(model)) v.block("capacity");
}

void judge_variant_insert(const Model& model, ElementKind kind,
                          const std::optional<std::string>& target, Verdict& v) {
    if (kind == ElementKind::activity && capacity_reached(model)) v.block("capacity");
    if (target) {
        bool eligible = role_is(model, kind, *target, is_variation_point) ||
                        role_is(model, kind, *target, is_plain);
        if (!eligible) v.block("target is not " + kind_word(kind) + " variation point");
    } else {
        bool exists = any_element(model, kind, [&](const std::string&, const VariabilityRole& role) {
            return is_variation_point(role) || is_plain(role);
        });
        if (!exists) v.block("no eligible " + std::string(kind_label(kind)) + " variation point");
    }
}

void judge_vp_substitute(const Model& model, ElementKind kind,
                         const std::optional<std::string>& target, Verdict& v) {
    if (target) {
        if (!role_is(model, kind, *target, is_variation_point))
            v.block("target is not " + kind_word(kind) + " variation point");
    } else if (!any_element(model, kind, [&](const std::string&, const VariabilityRole& role) {
                   return is_variation_point(role);
               })) {
        v.block("no " + std::string(kind_label(kind)) + " variation point");
    }
}

void judge_variant_substitute(const Model& model, ElementKind kind,
                              const std::optional<std::string>& target, Verdict& v) {
    if (target) {
        if (!role_is(model, kind, *target, is_variant))
            v.block("target is not a variant");
    } else if (!any_element(model, kind, [&](const std::string&, const VariabilityRole& role) {
                   return is_variant(role);
               })) {
        v.block("no " + std::string(kind_label(kind)) + " variant");
    }
}

void judge_vp_delete(const Model& model, ElementKind kind, const std::optional<std::string>& target,
                     Verdict& v) {
    if (target) {
        if (!role_is(model, kind, *target, is_variation_point)) {
            v.block("target is not " + kind_word(kind) + " variation point");
            return;
        }
        if (!vp_deletable(model, *target)) v.block("dependent variant");
    } else if (!any_element(model, kind, [&](const std::string& id, const VariabilityRole& role) {
                   return is_variation_point(role) && vp_deletable(model, id);
               })) {
        v.block("no deletable " + std::string(kind_label(kind)) + " variation point");
    }
}

void judge_variant_delete(const Model& model, ElementKind kind,
                          const std::optional<std::string>& target, Verdict& v) {
    if (target) {
        if (!role_is(model, kind, *target, is_variant)) {
            v.block("target is not a variant");
            return;
        }
        const std::string parent = std::get<VariantRole>(*role_of(model, *target)).parent;
        if (variant_ids_of(model, parent).size() <= 1) v.block("last variant");
        else if (!internal::requiring_survivors(model, {*target}).empty()) v.block("dependent variant");
    } else if (!any_element(model, kind, [&](const std::string& id, const VariabilityRole& role) {
                   return is_variant(role) && variant_deletable(model, id);
               })) {
        v.block("no deletable " + std::string(kind_label(kind)) + " variant");
    }
}

} // namespace

std::vector<ApplicabilityVerdict> applicable_patterns(const Model& model,
                                                      const std::optional<std::string>& target) {
    if (target && !element_kind(model, *target))
        fail(Errc::element_not_found, "no element with id '" + *target + "'", {*target});

    std::vector<ApplicabilityVerdict> out;
    for (const PatternDescriptor& descriptor : list_patterns()) {
        if (descriptor.is_abstract) continue;
        Verdict v;
        const ElementKind kind = descriptor.kind;
        const std::string& op = descriptor.op_id;

        if (op == "vpai") {
            if (capacity_reached(model)) v.block("capacity");
            if (target && !role_is(model, ElementKind::activity, *target, is_plain))
                v.block("target is not a plain activity");
        } else if (op == "vai") {
            judge_variant_insert(model, ElementKind::activity, target, v);
        } else if (op == "vpas") {
            judge_vp_substitute(model, ElementKind::activity, target, v);
        } else if (op == "vas") {
            judge_variant_substitute(model, ElementKind::activity, target, v);
        } else if (op == "vpad") {
            judge_vp_delete(model, ElementKind::activity, target, v);
        } else if (op == "vad") {
            judge_variant_delete(model, ElementKind::activity, target, v);
        } else if (op == "vpri" || op == "vpdi") {
            judge_vp_insert(model, kind, v); // fresh element: target-free
        } else if (op == "vri" || op == "vdi") {
            judge_variant_insert(model, kind, target, v);
        } else if (op == "vprs" || op == "vpds") {
            judge_vp_substitute(model, kind, target, v);
        } else if (op == "vrs" || op == "vds") {
            judge_variant_substitute(model, kind, target, v);
        } else if (op == "vprd" || op == "vpdd") {
            judge_vp_delete(model, kind, target, v);
        } else if (op == "vrd" || op == "vdd") {
            judge_variant_delete(model, kind, target, v);
        }

        ApplicabilityVerdict verdict;
        verdict.pattern = descriptor.id;
        verdict.target = target;
        verdict.blocking_reasons = std::move(v.reasons);
        verdict.applicable = verdict.blocking_reasons.empty();
        out.push_back(std::move(verdict));
    }
    return out;
}

nlohmann::json verdicts_to_json(const std::vector<ApplicabilityVerdict>& verdicts) {
    nlohmann::json out = nlohmann::json::array();
    for (const ApplicabilityVerdict& verdict : verdicts) {
        nlohmann::json entry{{"pattern", verdict.pattern},
                             {"applicable", verdict.applicable},
                             {"blocking_reasons", verdict.blocking_reasons}};
        if (verdict.target) entry["target"] = *verdict.target;
        out.push_back(std::move(entry));
    }
    return out;
}

nlohmann::json catalog_to_json() {
    nlohmann::json out = nlohmann::json::array();
    for (const PatternDescriptor& descriptor : list_patterns()) {
        nlohmann::json entry{{"id", descriptor.id},
                             {"name", descriptor.name},
                             {"abstract", descriptor.is_abstract},
                             {"kind", std::string(kind_label(descriptor.kind))},
                             {"classification", descriptor.classification},
                             {"context", descriptor.context},
                             {"problem", descriptor.problem},
                             {"force", descriptor.force},
                             {"uses", descriptor.uses}};
        if (!descriptor.op_id.empty()) entry["op"] = descriptor.op_id;
        if (descriptor.refines) entry["refines"] = *descriptor.refines;
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace cpmx
