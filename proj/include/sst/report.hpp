#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"
#include "sst/manifest.hpp"

namespace sst::report {

using json = nlohmann::ordered_json;

enum class Status { Pass, Fail, Inconclusive, Info };
std::string_view to_string(Status s);

// One machine-readable report document.  Keys keep insertion order, so a
// fixed sequence of add() calls renders byte-identically; the wall-clock
// field is always last and is the only nondeterministic part.
class Document {
public:
    Document(std::string command, const manifest::Manifest& m);

    // Appends a check record and returns its payload object for extra keys.
    // The reference is valid until the next add().
    json& add(std::string name, Status s);

    // 0 all passing, 1 any fail, 2 no fail but any inconclusive.
    int exit_code() const;

    json render(bool include_wall_clock = true) const;
    void write(std::ostream& out, bool include_wall_clock = true) const;

private:
    std::string command_;
    json header_;
    json checks_ = json::array();
    int pass_ = 0, fail_ = 0, inconclusive_ = 0, info_ = 0;
    std::chrono::steady_clock::time_point t0_;
};

// Hex-tagged FNV-1a digest of the manifest source text.
std::string manifest_digest(std::string_view source);

// Extended-real endpoint: finite values stay numbers, ±∞ become "-inf"/"inf".
json extended_real(double v);

} // namespace sst::report
