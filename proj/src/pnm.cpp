#include "strideskip/pnm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>

#include "strideskip/errors.hpp"

namespace strideskip {

namespace fs = std::filesystem;

namespace {

class HeaderReader {
 public:
  HeaderReader(const std::vector<std::uint8_t>& bytes, const std::string& name)
      : bytes_(bytes), name_(name) {}

  int next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw InputError(name_ + ": malformed PNM header");
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > 1'000'000) throw InputError(name_ + ": PNM header value out of range");
    }
    return static_cast<int>(value);
  }

  // The raster begins after exactly one whitespace byte following maxval.
  std::size_t raster_start() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw InputError(name_ + ": malformed PNM header");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  const std::string& name_;
  std::size_t pos_ = 2;
};

}  // namespace

Frame decode_pnm(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '5')) {
    throw InputError(name + ": unsupported format magic (expected binary P6 or P5)");
  }
  const bool color = bytes[1] == '6';
  HeaderReader header(bytes, name);
  const int width = header.next_int();
  const int height = header.next_int();
  const int maxval = header.next_int();
  if (maxval != 255) throw InputError(name + ": only maxval 255 is supported");
  if (width <= 0 || height <= 0) throw InputError(name + ": invalid image size");
  const std::size_t start = header.raster_start();
  const std::size_t pixels = static_cast<std::size_t>(width) * height;
  const std::size_t expected = pixels * (color ? 3 : 1);
  if (bytes.size() - start < expected) throw InputError(name + ": truncated raster");

  Frame f(width, height);
  if (color) {
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(start), expected, f.data.begin());
  } else {
    for (std::size_t i = 0; i < pixels; ++i) {
      const std::uint8_t v = bytes[start + i];
      f.data[i * 3] = f.data[i * 3 + 1] = f.data[i * 3 + 2] = v;
    }
  }
  return f;
}

std::vector<std::uint8_t> read_binary_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Frame read_pnm(const fs::path& path) { return decode_pnm(read_binary_file(path), path.string()); }

std::vector<std::uint8_t> encode_ppm(const Frame& f) {
  const std::string header =
      "P6\n" + std::to_string(f.width) + " " + std::to_string(f.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), f.data.begin(), f.data.end());
  return out;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_ppm(const fs::path& path, const Frame& f) {
  const auto bytes = encode_ppm(f);
  write_file_atomic(path, std::string(bytes.begin(), bytes.end()));
}

}  // namespace strideskip
