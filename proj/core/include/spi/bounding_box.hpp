#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace spi {

/// Axis-aligned pixel box, inclusive-exclusive: x0 <= col < x1, y0 <= row < y1.
struct BoundingBox {
  long x0 = 0;
  long y0 = 0;
  long x1 = 0;
  long y1 = 0;
  std::string label;

  bool contains(long row, long col) const { return col >= x0 && col < x1 && row >= y0 && row < y1; }
  long area() const { return (x1 - x0) * (y1 - y0); }
  /// Throws a config error unless 0 <= x0 < x1 <= side and likewise for y.
  void validate(std::size_t side) const;

  bool operator==(const BoundingBox&) const = default;
};

/// True when (row, col) lies in any of the boxes.
bool inside_any(const std::vector<BoundingBox>& boxes, long row, long col);

/// Per-pixel membership of the union of boxes (row-major, side*side).
std::vector<bool> box_union_mask(const std::vector<BoundingBox>& boxes, std::size_t side);

/// One box per line: `label x0 y0 x1 y1`. Blank lines and lines starting with
/// '#' are skipped; the label is everything before the last four fields.
std::vector<BoundingBox> parse_boxes(std::istream& in);
std::vector<BoundingBox> load_boxes(const std::filesystem::path& path);
void write_boxes(std::ostream& out, const std::vector<BoundingBox>& boxes);

}  // namespace spi
