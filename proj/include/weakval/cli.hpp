// Copyright 2026 The weakval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace weakval {

/// Entry point shared by the weakval binary and the test suite.
/// args excludes the program name. Returns 0 on success, 2 on configuration
/// errors (unknown flag/key, invalid preset, unreadable file), 3 on runtime
/// errors such as a divergent post-selection requested from `predict`.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace weakval
