// Copyright 2026 The qcal authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qcal::detail {

/// Shortest decimal that round-trips the exact double value.
std::string format_double(double v);

/// Like format_double but guaranteed to reparse as floating point (appends
/// ".0" to integral-looking output).
std::string format_double_typed(double v);

/// Full-string parses; underscores between digits are allowed.
std::optional<std::int64_t> try_parse_int(std::string_view s);
std::optional<double> try_parse_double(std::string_view s);

/// Current UTC time as "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string iso8601_now();

int levenshtein(std::string_view a, std::string_view b);

/// Names from `candidates` closest to `name`, nearest first, ties
/// alphabetical; at most `limit` entries.
std::vector<std::string> nearest_names(const std::string& name,
                                       const std::vector<std::string>& candidates,
                                       std::size_t limit = 3);

/// Hex-encoded SHA-256 of a byte buffer.
std::string sha256_hex(std::string_view bytes);

std::string html_escape(std::string_view s);

/// Version strings of linked dependencies, recorded in run metadata.
std::string httplib_version_string();  // defined in archive.cpp
std::string zlib_version_string();     // defined in tar_gz.cpp

}  // namespace qcal::detail
