#pragma once

#include <iosfwd>
#include <string>

#include "tzeta/toric.hpp"

namespace tzeta {

/// Fan from the JSON layout {"dim", "rays", "max_cones", "complete"}, validated.
Fan parse_fan_json(const std::string& text);
Fan parse_fan_file(const std::string& path);
std::string fan_to_json(const Fan& fan);

/// Runs one command; reports go to out, and failures print a JSON error
/// object {"error": {"kind", "message"}} to out with a nonzero return.
int run_cli(int argc, const char* const* argv, std::ostream& out);

}  // namespace tzeta
