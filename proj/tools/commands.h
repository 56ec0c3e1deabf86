// Copyright 2026 The tcq Authors
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

#ifndef TCQ_TOOLS_COMMANDS_H
#define TCQ_TOOLS_COMMANDS_H

#include <iosfwd>
#include <string>
#include <vector>

namespace tcq::cli {

/// Entry point shared by the executable and the tests. Returns the process
/// exit code: 0 on success, 1 on a runtime failure, 2 on a configuration
/// error. Every option can also be set through an environment variable named
/// LD_ followed by the upper-case flag name (LD_SEED, LD_TRIALS, ...).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tcq::cli

#endif  // TCQ_TOOLS_COMMANDS_H
