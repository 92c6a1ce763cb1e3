#ifndef CPMX_VALIDATE_HPP
#define CPMX_VALIDATE_HPP

#include <string>
#include <vector>

#include "cpmx/model.hpp"

namespace cpmx {

struct Violation {
    std::string rule;              // "W1" .. "W10"
    std::vector<std::string> ids;  // offending element ids
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

// Checks the well-formedness rules on any candidate model. Violations are
// data, not failures:
//   W1  flows reference existing, flow-capable nodes and have no self-loops
//   W2  every variant has a same-kind variation point parent
//   W3  every variation point has at least one variant
//   W4  variation point type labels are legal
//   W5  required functionalities of assigned activities are covered
//   W6  constraint endpoints are distinct variants, with no requires/excludes
//       contradiction on the same ordered pair
//   W7  data references resolve
//   W8  flow-eligible activity count stays within max_activities
//   W9  every flow-eligible activity lies on some start-to-end path
//   W10 variants never appear in the sequence flow
ValidationReport validate_model(const Model& model);

} // namespace cpmx

#endif
