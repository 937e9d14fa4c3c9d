#include "strideskip/frame_source.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "strideskip/errors.hpp"
#include "strideskip/pnm.hpp"

namespace strideskip {

namespace fs = std::filesystem;

FrameRange parse_frame_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("range must look like A:B, got '" + text + "'");
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    FrameRange r{std::stoi(a, &used_a), std::stoi(b, &used_b)};
    if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument(text);
    if (r.first < 0 || r.last < r.first) throw InputError("range " + text + " is empty or negative");
    return r;
  } catch (const std::logic_error&) {
    throw InputError("range must look like A:B, got '" + text + "'");
  }
}

namespace {

std::optional<long> trailing_number(const std::string& stem) {
  auto end = stem.find_last_of("0123456789");
  if (end == std::string::npos) return std::nullopt;
  auto begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(stem[begin - 1]))) --begin;
  return std::stol(stem.substr(begin, end - begin + 1));
}

bool is_pnm_extension(std::string ext) {
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

std::string read_line(std::istream& in) {
  std::string line;
  char c;
  while (in.get(c) && c != '\n') line.push_back(c);
  return line;
}

}  // namespace

void ycbcr_to_rgb(int y, int cb, int cr, std::uint8_t* rgb) {
  const double yy = 1.164383 * (y - 16);
  const double u = cb - 128, v = cr - 128;
  const double r = yy + 1.596027 * v;
  const double g = yy - 0.391762 * u - 0.812968 * v;
  const double b = yy + 2.017232 * u;
  auto clamp8 = [](double x) { return static_cast<std::uint8_t>(std::clamp(std::lround(x), 0L, 255L)); };
  rgb[0] = clamp8(r);
  rgb[1] = clamp8(g);
  rgb[2] = clamp8(b);
}

FrameSource FrameSource::open(const fs::path& path, std::optional<FrameRange> range) {
  FrameSource src;
  src.path_ = path;
  if (!fs::exists(path)) throw InputError("input path does not exist: " + path.string());

  if (fs::is_directory(path)) {
    src.kind_ = Kind::directory;
    std::map<long, fs::path> numbered;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (!entry.is_regular_file() || !is_pnm_extension(entry.path().extension().string())) continue;
      const auto number = trailing_number(entry.path().stem().string());
      if (!number) throw InputError("frame file has no frame number: " + entry.path().string());
      if (!numbered.emplace(*number, entry.path()).second) {
        throw InputError("duplicate frame number " + std::to_string(*number) + " in " + path.string());
      }
    }
    if (numbered.empty()) throw InputError("no PPM/PGM frames found in " + path.string());
    long expected = numbered.begin()->first;
    for (const auto& [number, file] : numbered) {
      if (number != expected) throw InputError("non-contiguous frame numbering at " + file.string());
      ++expected;
      src.files_.push_back(file);
    }
    src.stream_length_ = static_cast<int>(src.files_.size());
  } else {
    src.kind_ = Kind::y4m;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    const std::string header = read_line(in);
    std::istringstream tags(header);
    std::string magic;
    tags >> magic;
    if (magic != "YUV4MPEG2") throw InputError(path.string() + ": unsupported format magic");
    std::string chroma = "420";
    for (std::string tag; tags >> tag;) {
      if (tag[0] == 'W') src.y4m_.width = std::stoi(tag.substr(1));
      else if (tag[0] == 'H') src.y4m_.height = std::stoi(tag.substr(1));
      else if (tag[0] == 'C') chroma = tag.substr(1);
    }
    if (src.y4m_.width <= 0 || src.y4m_.height <= 0) throw InputError(path.string() + ": missing W/H");
    if (chroma.rfind("mono", 0) == 0) src.y4m_.mono = true;
    else if (chroma.rfind("420", 0) != 0) throw InputError(path.string() + ": unsupported chroma C" + chroma);

    const std::size_t w = src.y4m_.width, h = src.y4m_.height;
    const std::size_t payload = w * h + (src.y4m_.mono ? 0 : 2 * ((w + 1) / 2) * ((h + 1) / 2));
    in.seekg(0, std::ios::end);
    const std::size_t file_size = static_cast<std::size_t>(in.tellg());
    in.seekg(static_cast<std::streamoff>(header.size() + 1));
    while (in.peek() != EOF) {
      const std::string frame_line = read_line(in);
      if (frame_line.rfind("FRAME", 0) != 0) throw InputError(path.string() + ": missing FRAME marker");
      const std::size_t offset = static_cast<std::size_t>(in.tellg());
      if (offset + payload > file_size) throw InputError(path.string() + ": truncated frame");
      src.y4m_.offsets.push_back(offset);
      in.seekg(static_cast<std::streamoff>(offset + payload));
    }
    src.stream_length_ = static_cast<int>(src.y4m_.offsets.size());
    if (src.stream_length_ == 0) throw InputError(path.string() + ": no frames");
  }

  src.first_ = 0;
  src.last_ = src.stream_length_ - 1;
  if (range) {
    if (range->first < 0 || range->last >= src.stream_length_ || range->first > range->last) {
      throw InputError("range " + std::to_string(range->first) + ":" + std::to_string(range->last) +
                       " is outside the stream of " + std::to_string(src.stream_length_) + " frames");
    }
    src.first_ = range->first;
    src.last_ = range->last;
  }
  src.cursor_ = src.first_;
  return src;
}

fs::path FrameSource::file_for(int index) const {
  if (kind_ != Kind::directory) return {};
  return files_.at(static_cast<std::size_t>(index));
}

Frame FrameSource::read(int index) const {
  if (index < first_ || index > last_) {
    throw InputError("frame " + std::to_string(index) + " is outside the selected range");
  }
  Frame f;
  if (kind_ == Kind::directory) {
    f = read_pnm(files_[static_cast<std::size_t>(index)]);
  } else {
    const int w = y4m_.width, h = y4m_.height;
    const int cw = (w + 1) / 2, ch = (h + 1) / 2;
    const std::size_t luma = static_cast<std::size_t>(w) * h;
    const std::size_t chroma = y4m_.mono ? 0 : static_cast<std::size_t>(cw) * ch;
    std::vector<std::uint8_t> buf(luma + 2 * chroma);
    std::ifstream in(path_, std::ios::binary);
    in.seekg(static_cast<std::streamoff>(y4m_.offsets[static_cast<std::size_t>(index)]));
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!in) throw InputError(path_.string() + ": read failed");
    f = Frame(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int yv = buf[static_cast<std::size_t>(y) * w + x];
        int cb = 128, cr = 128;
        if (!y4m_.mono) {
          const std::size_t ci = static_cast<std::size_t>(y / 2) * cw + x / 2;
          cb = buf[luma + ci];
          cr = buf[luma + chroma + ci];
        }
        ycbcr_to_rgb(yv, cb, cr, f.pixel(x, y));
      }
    }
  }
  f.index = index;
  validate_frame(f);
  return f;
}

std::optional<Frame> FrameSource::next() {
  if (cursor_ > last_) return std::nullopt;
  return read(cursor_++);
}

}  // namespace strideskip
