#pragma once

#include <string>
#include <vector>

#include "bitalloc/config.hpp"

namespace bitalloc {

// Shipped fixture names, demo order. The same configurations exist as JSON
// files under fixtures/; a test keeps file and builtin in sync.
const std::vector<std::string>& fixture_names();

bool is_fixture(const std::string& name);

// Built-in copy of a shipped fixture configuration.
ExperimentConfig fixture_config(const std::string& name);

}  // namespace bitalloc
