#pragma once

#include "famrep/cli/json_io.hpp"

#include <cstdint>

namespace famrep::cli {

struct SelftestReport {
    Json document;
    bool passed = false;
};

/// Seeded randomized invariant suites over every module, each checked by
/// exact substitution. Takes a few seconds.
SelftestReport run_selftest(std::uint64_t seed);

}  // namespace famrep::cli
