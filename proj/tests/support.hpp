#pragma once

#include <string>

#include "hont/system.hpp"

namespace testing_support {

inline std::string fixture_path(const std::string& name) { return std::string(HONT_FIXTURES) + "/" + name; }

inline hont::PushdownSystem fixture(const std::string& name) { return hont::load_system(fixture_path(name)); }

inline hont::Run run_of(const hont::PushdownSystem& sys, const std::string& steps) {
  auto s = hont::parse_steps(steps);
  return hont::Run::replay(sys, sys.initial_configuration(), s);
}

}  // namespace testing_support
