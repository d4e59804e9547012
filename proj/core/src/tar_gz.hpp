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

#include <map>
#include <string>
#include <string_view>

namespace qcal::detail {

/// Packs files (relative path -> bytes) into a gzipped ustar archive.
/// Output is deterministic: entries sorted by path, zeroed timestamps and
/// owners, fixed compression settings.
std::string tar_gz_pack(const std::map<std::string, std::string>& files);

/// Unpacks a gzipped ustar archive; rejects absolute paths and ".."
/// components. Throws FormatError on malformed input.
std::map<std::string, std::string> tar_gz_unpack(std::string_view bytes);

std::string gzip_compress(std::string_view data);
std::string gzip_decompress(std::string_view data);  // throws FormatError

std::string zlib_version_string();

}  // namespace qcal::detail
