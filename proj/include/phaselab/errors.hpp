#pragma once

#include <stdexcept>

namespace phaselab {

// resource/limit violations (table limits, loop budgets) -> CLI exit 3
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// argument outside a supported domain -> CLI exit 3
struct range_error : std::out_of_range {
    using std::out_of_range::out_of_range;
};

}  // namespace phaselab
