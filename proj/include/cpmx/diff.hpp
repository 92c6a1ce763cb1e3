#ifndef CPMX_DIFF_HPP
#define CPMX_DIFF_HPP

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cpmx/model.hpp"

namespace cpmx {

// Primitive edit vocabulary. Every pattern application is recorded as a
// sequence of these, and each kind has an exact inverse, which is what makes
// traces replayable and undoable.
enum class EditKind {
    add_node,
    remove_node,
    set_attribute,
    add_flow,
    remove_flow,
    add_constraint,
    remove_constraint,
};

std::string_view edit_kind_label(EditKind kind);

struct Edit {
    EditKind kind;
    nlohmann::json data;

    friend bool operator==(const Edit&, const Edit&) = default;
};

nlohmann::json edit_to_json(const Edit& edit);
Edit edit_from_json(const nlohmann::json& value);

// Edits that, applied to `from`, produce a model canonically equal to `to`.
// Purely structural: neither input has to be well-formed.
std::vector<Edit> model_diff(const Model& from, const Model& to);

// Applies edits in order. Throws EditApplicationFailed when an edit does not
// fit the model it is applied to (missing node, duplicate flow, stale value).
Model apply_edits(const Model& model, const std::vector<Edit>& edits);

// inverse(edit) applied after edit restores the original model.
Edit invert(const Edit& edit);

} // namespace cpmx

#endif
