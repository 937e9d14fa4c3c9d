#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "strideskip/image.hpp"

namespace strideskip {

/// Inclusive [first, last] frame index range.
struct FrameRange {
  int first = 0;
  int last = 0;
};

/// Parses "A:B" into an inclusive range.
FrameRange parse_frame_range(const std::string& text);

/// Ordered, lazily decoded stream of frames from a PPM/PGM directory or a Y4M file.
///
/// Directory entries are ordered by the last run of digits in their file
/// stem, and those numbers must be contiguous. Frame indices are 0-based
/// positions in the full stream; a range restricts which ones are yielded
/// without renumbering them.
class FrameSource {
 public:
  static FrameSource open(const std::filesystem::path& path,
                          std::optional<FrameRange> range = std::nullopt);

  int size() const { return last_ - first_ + 1; }
  int first_index() const { return first_; }
  int last_index() const { return last_; }
  int stream_length() const { return stream_length_; }

  /// Decodes frame `index` (a stream index within the selected range).
  Frame read(int index) const;

  /// Next frame in ascending order, or nullopt at the end.
  std::optional<Frame> next();
  void rewind() { cursor_ = first_; }

  /// Source file for a directory-backed frame (empty for Y4M).
  std::filesystem::path file_for(int index) const;

 private:
  enum class Kind { directory, y4m };
  struct Y4mLayout {
    int width = 0;
    int height = 0;
    bool mono = false;
    std::vector<std::size_t> offsets;  // byte offset of each frame payload
  };

  Kind kind_ = Kind::directory;
  std::filesystem::path path_;
  std::vector<std::filesystem::path> files_;
  Y4mLayout y4m_;
  int first_ = 0;
  int last_ = -1;
  int stream_length_ = 0;
  int cursor_ = 0;
};

/// Converts a limited-range BT.601 YCbCr sample to RGB.
void ycbcr_to_rgb(int y, int cb, int cr, std::uint8_t* rgb);

}  // namespace strideskip
