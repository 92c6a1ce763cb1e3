#ifndef CPMX_CONFIGURATION_HPP
#define CPMX_CONFIGURATION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpmx/model.hpp"

namespace cpmx {

// One decision per variation point (of any element kind): the chosen variant
// or, for optional variation points, none.
struct Configuration {
    std::map<std::string, std::optional<std::string>> selection;

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct SelectionIssue {
    std::string code; // "unknown_vp", "not_a_variant", "wrong_parent", "missing_choice", "vcc"
    std::vector<std::string> ids;
    std::string message;
};

// Evaluates the configuration rules: alternative variation points need
// exactly one chosen variant, optional ones zero or one, chosen variants
// belong to their variation point, and every requires/excludes constraint is
// satisfied. Variation points with an unparsable type are reported too.
std::vector<SelectionIssue> check_selection(const Model& model, const Configuration& config);

inline constexpr std::uint64_t default_enumeration_bound = 1'000'000;

// Size of the raw choice space (before constraints), saturating at the
// numeric limit.
std::uint64_t configuration_space_size(const Model& model);

// All valid configurations, ordered by variation point id, then variant id
// (none sorts before any variant). Throws SpaceTooLarge when the raw space
// exceeds the bound.
std::vector<Configuration> enumerate_configurations(const Model& model,
                                                    std::uint64_t bound = default_enumeration_bound);

// Flattens the model under a valid configuration: chosen activity variants
// take their variation point's place in the flow, unchosen variants vanish,
// optional variation points without a choice are excised with flow bridging,
// and resource/data references resolve to the chosen variants. The result
// carries no variability and validates as a plain model.
Model derive_variant(const Model& model, const Configuration& config);

nlohmann::json configuration_to_json(const Configuration& config);
Configuration configuration_from_json(const nlohmann::json& value);

} // namespace cpmx

#endif
