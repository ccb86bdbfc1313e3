#pragma once

#include <functional>
#include <memory>
#include <ostream>
#include <vector>

#include "cli/cli.hpp"
#include "cli/common.hpp"

namespace ndde::cli {

struct Command {
  CLI::App* app = nullptr;
  std::unique_ptr<ConfigOptions> options;
  std::function<int(const json&, std::ostream&, std::ostream&)> execute;
};

void register_commands(CLI::App& app, std::vector<std::unique_ptr<Command>>& commands);

}  // namespace ndde::cli
