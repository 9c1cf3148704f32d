// Copyright 2026 The kitsfuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command line front end: preprocess, resample, fuse, evaluate, phantom.
//
// Exit codes: 0 success, 2 usage error, 3 I/O error, 4 validation error.
// Failures print exactly one line to the error stream:
//   kitsfuse: error code=<name> [case=<id>] message="<text>"

#ifndef KITSFUSE_TOOLS_CLI_HPP_
#define KITSFUSE_TOOLS_CLI_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace kitsfuse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitValidation = 4;

/// One manifest record: `<id> <path> [<path> ...]`.
struct ManifestEntry {
  std::string id;
  std::vector<std::filesystem::path> paths;
};

/// Whitespace-separated records, one per line; blank lines and lines
/// starting with '#' are skipped. Relative paths resolve against the
/// manifest's directory. Ids must be unique and every record must have
/// `min_paths` to `max_paths` paths.
std::vector<ManifestEntry> parse_manifest(std::string_view text,
                                          const std::filesystem::path& base_dir,
                                          std::size_t min_paths,
                                          std::size_t max_paths);
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path,
                                         std::size_t min_paths,
                                         std::size_t max_paths);

/// Runs the tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace kitsfuse::cli

#endif  // KITSFUSE_TOOLS_CLI_HPP_
