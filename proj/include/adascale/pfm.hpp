// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "adascale/maps.hpp"

namespace adascale {

// Single-channel portable float map ("Pf"). Writes little-endian (scale
// -1.0) float32 rows bottom to top; reads either byte order. Values are
// narrowed to float32 on write.

std::string encode_pfm(const FloatMap& m);
FloatMap decode_pfm(const std::string& bytes, const std::string& source = "<memory>");

void write_pfm(const std::filesystem::path& path, const FloatMap& m);
/// Throws InputError on a missing file, bad header, short data or
/// non-finite values.
FloatMap read_pfm(const std::filesystem::path& path);

}  // namespace adascale
