// SPDX-License-Identifier: Apache-2.0
#include "adascale/pfm.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "adascale/error.hpp"

namespace adascale {

namespace {

std::uint32_t byteswap32(std::uint32_t v) {
  return (v >> 24) | ((v >> 8) & 0x0000ff00u) | ((v << 8) & 0x00ff0000u) | (v << 24);
}

bool host_is_little() { return std::endian::native == std::endian::little; }

}  // namespace

std::string encode_pfm(const FloatMap& m) {
  std::ostringstream header;
  header << "Pf\n" << m.width() << ' ' << m.height() << "\n-1.0\n";
  std::string out = header.str();
  const std::size_t offset = out.size();
  out.resize(offset + 4 * m.size());
  char* dst = out.data() + offset;
  for (int row = m.height() - 1; row >= 0; --row) {
    for (int x = 0; x < m.width(); ++x) {
      std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(m(x, row)));
      if (!host_is_little()) bits = byteswap32(bits);
      std::memcpy(dst, &bits, 4);
      dst += 4;
    }
  }
  return out;
}

FloatMap decode_pfm(const std::string& bytes, const std::string& source) {
  std::size_t pos = 0;
  auto token = [&]() {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return bytes.substr(start, pos - start);
  };
  const std::string magic = token();
  if (magic == "PF") throw InputError(source + ": 3-channel PFM is not supported, expected \"Pf\"");
  if (magic != "Pf") throw InputError(source + ": not a PFM file (bad magic)");
  int width = 0, height = 0;
  double scale = 0.0;
  try {
    width = std::stoi(token());
    height = std::stoi(token());
    scale = std::stod(token());
  } catch (const std::exception&) {
    throw InputError(source + ": malformed PFM header");
  }
  if (width <= 0 || height <= 0 || scale == 0.0 || !std::isfinite(scale)) {
    throw InputError(source + ": invalid PFM header values");
  }
  // Exactly one whitespace byte separates the header from the raster.
  ++pos;
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < pos + 4 * count) throw InputError(source + ": PFM raster is truncated");
  const bool file_little = scale < 0;
  std::vector<double> data(count);
  const char* src = bytes.data() + pos;
  for (int row = height - 1; row >= 0; --row) {
    for (int x = 0; x < width; ++x) {
      std::uint32_t bits;
      std::memcpy(&bits, src, 4);
      src += 4;
      if (file_little != host_is_little()) bits = byteswap32(bits);
      const float v = std::bit_cast<float>(bits);
      if (!std::isfinite(v)) {
        throw InputError(source + ": non-finite value at (" + std::to_string(x) + ", " + std::to_string(row) + ")");
      }
      data[static_cast<std::size_t>(row) * width + x] = v;
    }
  }
  return FloatMap(width, height, std::move(data));
}

void write_pfm(const std::filesystem::path& path, const FloatMap& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  const std::string bytes = encode_pfm(m);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing " + path.string());
}

FloatMap read_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_pfm(buf.str(), path.string());
}

}  // namespace adascale
