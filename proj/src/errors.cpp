#include "cpmx/errors.hpp"

namespace cpmx {

std::string_view errc_name(Errc code) {
    switch (code) {
    case Errc::element_not_found: return "ElementNotFound";
    case Errc::already_variable: return "AlreadyVariable";
    case Errc::capacity_exceeded: return "CapacityExceeded";
    case Errc::position_not_found: return "PositionNotFound";
    case Errc::missing_resource_coverage: return "MissingResourceCoverage";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::no_variation_point: return "NoVariationPoint";
    case Errc::invalid_vcc: return "InvalidVcc";
    case Errc::not_a_variation_point: return "NotAVariationPoint";
    case Errc::not_a_variant: return "NotAVariant";
    case Errc::dependent_variant: return "DependentVariant";
    case Errc::last_variant: return "LastVariant";
    case Errc::empty_resulting_variant_set: return "EmptyResultingVariantSet";
    case Errc::element_in_use: return "ElementInUse";
    case Errc::coverage_violation: return "CoverageViolation";
    case Errc::target_activity_not_found: return "TargetActivityNotFound";
    case Errc::model_invalid: return "ModelInvalid";
    case Errc::unknown_pattern: return "UnknownPattern";
    case Errc::invalid_selection: return "InvalidSelection";
    case Errc::space_too_large: return "SpaceTooLarge";
    case Errc::hash_chain_broken: return "HashChainBroken";
    case Errc::empty_trace: return "EmptyTrace";
    case Errc::edit_application_failed: return "EditApplicationFailed";
    case Errc::parse_error: return "ParseError";
    case Errc::unsupported_version: return "UnsupportedVersion";
    }
    return "UnknownError";
}

Error::Error(Errc code, std::string message, std::vector<std::string> ids)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code),
      ids_(std::move(ids)) {}

void fail(Errc code, std::string message, std::vector<std::string> ids) {
    throw Error(code, std::move(message), std::move(ids));
}

} // namespace cpmx
