#pragma once

#include <array>
#include <string_view>

#include "sst/manifest.hpp"
#include "sst/report.hpp"

namespace sst::cli {

inline constexpr std::array<std::string_view, 7> kCommands = {
    "curvature", "killing-check", "killing-classify", "energy",
    "classify",  "geodesic",      "full-report"};

// Executes one command against a loaded manifest.  Missing manifest
// prerequisites (no candidate for killing-classify, no [geodesic] section for
// geodesic, ...) throw ValidationError; numeric outcomes are encoded in the
// report's check statuses and its exit_code().
report::Document run(std::string_view command, const manifest::Manifest& m);

} // namespace sst::cli
