#ifndef CPMX_ERRORS_HPP
#define CPMX_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cpmx {

// Stable error taxonomy. Names (errc_name) are part of the CLI contract:
// they appear verbatim in machine-readable diagnostics.
enum class Errc {
    element_not_found,
    already_variable,
    capacity_exceeded,
    position_not_found,
    missing_resource_coverage,
    duplicate_id,
    no_variation_point,
    invalid_vcc,
    not_a_variation_point,
    not_a_variant,
    dependent_variant,
    last_variant,
    empty_resulting_variant_set,
    element_in_use,
    coverage_violation,
    target_activity_not_found,
    model_invalid,
    unknown_pattern,
    invalid_selection,
    space_too_large,
    hash_chain_broken,
    empty_trace,
    edit_application_failed,
    parse_error,
    unsupported_version,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message, std::vector<std::string> ids = {});

    Errc code() const { return code_; }
    const std::vector<std::string>& ids() const { return ids_; }

private:
    Errc code_;
    std::vector<std::string> ids_;
};

[[noreturn]] void fail(Errc code, std::string message, std::vector<std::string> ids = {});

} // namespace cpmx

#endif
