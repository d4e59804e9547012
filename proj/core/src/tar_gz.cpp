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

#include "tar_gz.hpp"

#include <cstdio>
#include <cstring>

#include <zlib.h>

#include "qcal/errors.hpp"

namespace qcal::detail {
namespace {

constexpr std::size_t kBlock = 512;

void write_octal(char* field, std::size_t width, unsigned long long value) {
  // Zero-padded octal, NUL terminated (ustar convention).
  std::snprintf(field, width, "%0*llo", static_cast<int>(width - 1), value);
}

std::string tar_header(const std::string& name, std::size_t size) {
  if (name.size() > 99)
    throw FormatError("tar entry name too long: " + name);
  char h[kBlock];
  std::memset(h, 0, kBlock);
  std::memcpy(h, name.data(), name.size());
  write_octal(h + 100, 8, 0644);  // mode
  write_octal(h + 108, 8, 0);     // uid
  write_octal(h + 116, 8, 0);     // gid
  write_octal(h + 124, 12, size);
  write_octal(h + 136, 12, 0);    // mtime pinned for reproducible archives
  std::memset(h + 148, ' ', 8);   // checksum placeholder
  h[156] = '0';                   // regular file
  std::memcpy(h + 257, "ustar", 6);
  h[263] = '0';
  h[264] = '0';
  unsigned sum = 0;
  for (std::size_t i = 0; i < kBlock; ++i)
    sum += static_cast<unsigned char>(h[i]);
  std::snprintf(h + 148, 8, "%06o", sum);
  h[154] = '\0';
  h[155] = ' ';
  return std::string(h, kBlock);
}

bool path_is_safe(const std::string& name) {
  if (name.empty() || name.front() == '/') return false;
  std::size_t pos = 0;
  while (pos <= name.size()) {
    std::size_t sep = name.find('/', pos);
    if (sep == std::string::npos) sep = name.size();
    std::string_view part(name.data() + pos, sep - pos);
    if (part == "..") return false;
    pos = sep + 1;
  }
  return true;
}

unsigned long long parse_octal(const char* field, std::size_t width) {
  unsigned long long v = 0;
  for (std::size_t i = 0; i < width; ++i) {
    char c = field[i];
    if (c == '\0' || c == ' ') break;
    if (c < '0' || c > '7') throw FormatError("bad octal field in tar header");
    v = v * 8 + static_cast<unsigned long long>(c - '0');
  }
  return v;
}

}  // namespace

std::string gzip_compress(std::string_view data) {
  z_stream strm{};
  if (deflateInit2(&strm, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK)
    throw IoError("deflateInit2 failed");
  std::string out;
  out.resize(deflateBound(&strm, data.size()) + 32);
  strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  strm.avail_in = static_cast<uInt>(data.size());
  strm.next_out = reinterpret_cast<Bytef*>(out.data());
  strm.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&strm, Z_FINISH);
  deflateEnd(&strm);
  if (rc != Z_STREAM_END) throw IoError("deflate failed");
  out.resize(out.size() - strm.avail_out);
  return out;
}

std::string gzip_decompress(std::string_view data) {
  z_stream strm{};
  if (inflateInit2(&strm, 15 + 32) != Z_OK)
    throw FormatError("inflateInit2 failed");
  std::string out;
  out.resize(std::max<std::size_t>(data.size() * 4, 1 << 16));
  strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  strm.avail_in = static_cast<uInt>(data.size());
  std::size_t written = 0;
  int rc = Z_OK;
  do {
    if (written == out.size()) out.resize(out.size() * 2);
    strm.next_out = reinterpret_cast<Bytef*>(out.data() + written);
    strm.avail_out = static_cast<uInt>(out.size() - written);
    rc = inflate(&strm, Z_NO_FLUSH);
    written = out.size() - strm.avail_out;
    if (rc == Z_STREAM_END) break;
    if (rc != Z_OK) {
      inflateEnd(&strm);
      throw FormatError("corrupt gzip stream");
    }
  } while (true);
  inflateEnd(&strm);
  out.resize(written);
  return out;
}

std::string tar_gz_pack(const std::map<std::string, std::string>& files) {
  std::string tar;
  for (const auto& [name, bytes] : files) {  // std::map iterates sorted
    tar += tar_header(name, bytes.size());
    tar += bytes;
    std::size_t pad = (kBlock - bytes.size() % kBlock) % kBlock;
    tar.append(pad, '\0');
  }
  tar.append(2 * kBlock, '\0');
  return gzip_compress(tar);
}

std::map<std::string, std::string> tar_gz_unpack(std::string_view bytes) {
  std::string tar = gzip_decompress(bytes);
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (pos + kBlock <= tar.size()) {
    const char* h = tar.data() + pos;
    bool all_zero = true;
    for (std::size_t i = 0; i < kBlock; ++i)
      if (h[i] != '\0') {
        all_zero = false;
        break;
      }
    if (all_zero) break;  // end-of-archive marker

    if (std::memcmp(h + 257, "ustar", 5) != 0)
      throw FormatError("not a ustar archive");
    std::string name(h, strnlen(h, 100));
    std::size_t size =
        static_cast<std::size_t>(parse_octal(h + 124, 12));
    char type = h[156];
    pos += kBlock;
    if (pos + size > tar.size())
      throw FormatError("truncated tar entry '" + name + "'");
    if (type == '0' || type == '\0') {
      if (!path_is_safe(name))
        throw FormatError("unsafe path in archive: " + name);
      out[name] = tar.substr(pos, size);
    } else if (type != '5') {
      throw FormatError("unsupported tar entry type for '" + name + "'");
    }
    pos += (size + kBlock - 1) / kBlock * kBlock;
  }
  if (out.empty()) throw FormatError("archive contains no files");
  return out;
}

std::string zlib_version_string() { return zlibVersion(); }

}  // namespace qcal::detail
