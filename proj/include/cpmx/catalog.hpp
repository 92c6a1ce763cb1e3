#ifndef CPMX_CATALOG_HPP
#define CPMX_CATALOG_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpmx/model.hpp"

namespace cpmx {

// P-SIGMA style descriptor: interface (identification, classification,
// context, problem, force) plus relations (refines, uses). Abstract patterns
// (AI, AS, AD and the resource/data parents) group the catalog and anchor
// the refinement forest; they are not directly invokable.
struct PatternDescriptor {
    std::string id;                           // "VPAI"
    std::string name;                         // "Variation Point Activity Insertion"
    std::string op_id;                        // CLI id ("vpai"); empty for abstract patterns
    bool is_abstract = false;
    ElementKind kind = ElementKind::activity;
    std::vector<std::string> classification;
    std::vector<std::string> context;         // patterns usable alongside
    std::string problem;
    std::string force;
    std::optional<std::string> refines;
    std::vector<std::string> uses;
};

// The full catalog, stable order: the three sub-systems (activity, resource,
// data), abstract parents first.
const std::vector<PatternDescriptor>& list_patterns();

const PatternDescriptor* find_pattern(const std::string& id);

struct RelationGraph {
    std::vector<std::pair<std::string, std::string>> refines_edges; // child -> parent
    std::vector<std::pair<std::string, std::string>> uses_edges;    // user -> used
};

RelationGraph pattern_relations();

// DOT rendering of the relation graph: refines edges solid, uses edges dashed.
std::string relations_dot();

struct ApplicabilityVerdict {
    std::string pattern;                 // catalog id
    std::optional<std::string> target;
    bool applicable = false;
    std::vector<std::string> blocking_reasons;
};

// Evaluates every concrete pattern's preconditions against the model (and
// target, when given) without mutating anything. A verdict is applicable
// exactly when some admissible parameter set would make the pattern succeed.
std::vector<ApplicabilityVerdict> applicable_patterns(const Model& model,
                                                      const std::optional<std::string>& target);

nlohmann::json verdicts_to_json(const std::vector<ApplicabilityVerdict>& verdicts);
nlohmann::json catalog_to_json();

} // namespace cpmx

#endif
