#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace champagne {

// Exit codes: 0 ok, 1 usage, 2 invalid input or failed validation,
// 3 timeout cap exceeded, 4 failed verification checks.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace champagne
