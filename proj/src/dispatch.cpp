#include <array>

#include "cpmx/errors.hpp"
#include "cpmx/evolution.hpp"
#include "cpmx/secondary.hpp"

namespace cpmx {

using nlohmann::json;

namespace {

std::string get_required(const json& params, const char* key) {
    if (!params.is_object() || !params.contains(key) || !params[key].is_string())
        fail(Errc::parse_error, std::string("params: missing or non-string '") + key + "'");
    return params[key].get<std::string>();
}

bool get_cascade(const json& params) {
    if (!params.is_object() || !params.contains("cascade")) return false;
    if (!params["cascade"].is_boolean()) fail(Errc::parse_error, "params: 'cascade' must be a boolean");
    return params["cascade"].get<bool>();
}

constexpr std::array known_ids = {"vpai", "vai", "vpas", "vas", "vpad", "vad",
                                  "vpri", "vri", "vprs", "vrs", "vprd", "vrd",
                                  "vpdi", "vdi", "vpds", "vds", "vpdd", "vdd"};

} // namespace

bool is_known_pattern_id(const std::string& pattern_id) {
    for (const char* id : known_ids)
        if (pattern_id == id) return true;
    return false;
}

ApplyResult apply_pattern(const Model& model, const std::string& pattern_id, const json& params) {
    ApplyResult result = [&]() -> ApplyResult {
        if (pattern_id == "vpai") return vpai(model, vpai_params_from_json(params));
        if (pattern_id == "vai") return variant_activity_insert(model, vai_params_from_json(params));
        if (pattern_id == "vpas") return vpas(model, vpas_params_from_json(params));
        if (pattern_id == "vas") return variant_activity_substitute(model, vas_params_from_json(params));
        if (pattern_id == "vpad") return vp_activity_delete(model, get_required(params, "vp_id"));
        if (pattern_id == "vad") return variant_activity_delete(model, get_required(params, "variant_id"));

        ElementKind kind;
        if (pattern_id == "vpri" || pattern_id == "vri" || pattern_id == "vprs" ||
            pattern_id == "vrs" || pattern_id == "vprd" || pattern_id == "vrd")
            kind = ElementKind::resource;
        else if (pattern_id == "vpdi" || pattern_id == "vdi" || pattern_id == "vpds" ||
                 pattern_id == "vds" || pattern_id == "vpdd" || pattern_id == "vdd")
            kind = ElementKind::data;
        else
            fail(Errc::unknown_pattern, "unknown pattern id '" + pattern_id + "'");

        if (pattern_id == "vpri" || pattern_id == "vpdi")
            return vp_insert(model, kind, vp_element_spec_from_json(params));
        if (pattern_id == "vri" || pattern_id == "vdi")
            return variant_insert(model, kind, secondary_variant_insert_from_json(params));
        if (pattern_id == "vprs" || pattern_id == "vpds")
            return vp_substitute(model, kind, secondary_vp_substitution_from_json(params));
        if (pattern_id == "vrs" || pattern_id == "vds") {
            if (!params.contains("with")) fail(Errc::parse_error, "params: missing 'with'");
            return variant_substitute(model, kind, get_required(params, "variant_id"),
                                      variant_element_spec_from_json(params["with"]));
        }
        if (pattern_id == "vprd" || pattern_id == "vpdd")
            return vp_delete(model, kind, get_required(params, "vp_id"), get_cascade(params));
        return variant_delete(model, kind, get_required(params, "variant_id"), get_cascade(params));
    }();
    result.entry.params = params; // keep the payload exactly as supplied
    return result;
}

} // namespace cpmx
