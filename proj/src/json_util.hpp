#pragma once

// Internal helpers shared by the library translation units.

#include <algorithm>
#include <charconv>
#include <initializer_list>
#include <string>
#include <system_error>

#include "json.hpp"

#include "coalnet/errors.hpp"

namespace coalnet::detail {

// Strict object parsing: every listed key required, nothing else allowed.
inline void expect_keys(const nlohmann::json& j, std::initializer_list<const char*> keys,
                        const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected a JSON object");
  for (const char* k : keys) {
    if (!j.contains(k)) throw ParseError(where + ": missing key \"" + k + "\"");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(keys.begin(), keys.end(),
                     [&](const char* k) { return it.key() == k; }) == keys.end()) {
      throw ParseError(where + ": unknown key \"" + it.key() + "\"");
    }
  }
}

// Shortest round-trip decimal form, matching the JSON emitter; used for CSV
// so text outputs are deterministic and parse back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace coalnet::detail
