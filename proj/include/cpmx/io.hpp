#ifndef CPMX_IO_HPP
#define CPMX_IO_HPP

#include <string>
#include <string_view>

#include <json.hpp>

#include "cpmx/model.hpp"

namespace cpmx {

inline constexpr std::string_view model_format_version = "1";

nlohmann::json role_to_json(const VariabilityRole& role);
VariabilityRole role_from_json(const nlohmann::json& value);

nlohmann::json activity_to_json(const Activity& activity);
Activity activity_from_json(const nlohmann::json& entry);
nlohmann::json resource_to_json(const Resource& resource);
Resource resource_from_json(const nlohmann::json& entry);
nlohmann::json data_to_json(const DataObject& data);
DataObject data_from_json(const nlohmann::json& entry);

nlohmann::json model_to_json(const Model& model);
Model model_from_json(const nlohmann::json& document);

// Canonical byte form: sorted object keys, element arrays sorted by id,
// two-space indentation, UTF-8, LF line endings, trailing newline.
// Equal models serialize to identical bytes.
std::string save_model(const Model& model);

// Structural parse only; well-formedness is validate_model's job.
// Throws ParseError / UnsupportedVersion.
Model load_model(std::string_view bytes);

// FNV-1a 64-bit digest of the canonical byte form, as 16 hex characters.
std::string canonical_hash(const Model& model);

// GraphViz rendering: flows as solid edges, variants as dashed children of
// their variation point, constraints as labeled dotted edges, resources and
// data objects as attached notes.
std::string export_dot(const Model& model);

} // namespace cpmx

#endif
