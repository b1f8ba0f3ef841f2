#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "transproj/backend.h"
#include "transproj/http_backend.h"

namespace transproj::cli {

enum ExitCode : int {
  kOk = 0,
  kViolations = 1,  // validate found scheme violations
  kConfigError = 2,
  kParseError = 3,
  kStrictAbort = 4,
  kIoError = 5,
};

// Builds a backend from "identity", "dict:<path>", "scramble:<seed>",
// "scramble:reverse", "scramble:rotate:<k>" or "http:<url>". Throws
// std::invalid_argument on a bad spec.
std::unique_ptr<Backend> make_backend(std::string_view spec, const HttpOptions& http = {});

// Runs one invocation; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace transproj::cli
