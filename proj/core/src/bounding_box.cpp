#include "spi/bounding_box.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "spi/error.hpp"

namespace spi {

void BoundingBox::validate(std::size_t side) const {
  const long s = static_cast<long>(side);
  if (!(0 <= x0 && x0 < x1 && x1 <= s && 0 <= y0 && y0 < y1 && y1 <= s)) {
    std::ostringstream msg;
    msg << "bounding box '" << label << "' (" << x0 << ' ' << y0 << ' ' << x1 << ' ' << y1
        << ") is outside a " << side << "x" << side << " image";
    fail(ErrorKind::Config, msg.str());
  }
}

bool inside_any(const std::vector<BoundingBox>& boxes, long row, long col) {
  for (const auto& b : boxes)
    if (b.contains(row, col)) return true;
  return false;
}

std::vector<bool> box_union_mask(const std::vector<BoundingBox>& boxes, std::size_t side) {
  std::vector<bool> mask(side * side, false);
  for (const auto& b : boxes)
    for (long r = std::max(0L, b.y0); r < std::min<long>(b.y1, side); ++r)
      for (long c = std::max(0L, b.x0); c < std::min<long>(b.x1, side); ++c)
        mask[r * side + c] = true;
  return mask;
}

std::vector<BoundingBox> parse_boxes(std::istream& in) {
  std::vector<BoundingBox> boxes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty() || tokens.front().starts_with('#')) continue;
    if (tokens.size() < 5)
      fail(ErrorKind::Format, "box line " + std::to_string(line_no) +
                                  ": expected 'label x0 y0 x1 y1'");
    BoundingBox box;
    const std::size_t first = tokens.size() - 4;
    for (std::size_t t = 0; t < first; ++t) box.label += (t ? " " : "") + tokens[t];
    try {
      box.x0 = std::stol(tokens[first]);
      box.y0 = std::stol(tokens[first + 1]);
      box.x1 = std::stol(tokens[first + 2]);
      box.y1 = std::stol(tokens[first + 3]);
    } catch (const std::exception&) {
      fail(ErrorKind::Format, "box line " + std::to_string(line_no) + ": coordinates must be integers");
    }
    boxes.push_back(std::move(box));
  }
  return boxes;
}

std::vector<BoundingBox> load_boxes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open box file " + path.string());
  return parse_boxes(in);
}

void write_boxes(std::ostream& out, const std::vector<BoundingBox>& boxes) {
  for (const auto& b : boxes)
    out << (b.label.empty() ? "target" : b.label) << ' ' << b.x0 << ' ' << b.y0 << ' ' << b.x1
        << ' ' << b.y1 << '\n';
}

}  // namespace spi
