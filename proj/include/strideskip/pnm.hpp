#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "strideskip/image.hpp"

namespace strideskip {

/// Decodes a binary P6 or P5 (maxval 255) image. P5 is replicated to RGB.
Frame decode_pnm(const std::vector<std::uint8_t>& bytes, const std::string& name = "<memory>");
Frame read_pnm(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_ppm(const Frame& f);

/// Writes a P6 file via a temporary sibling and rename.
void write_ppm(const std::filesystem::path& path, const Frame& f);

/// Atomic text/binary file write (temp file then rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);

}  // namespace strideskip
