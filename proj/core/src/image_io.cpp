#include "spi/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "spi/error.hpp"

namespace spi {

namespace {

class PnmParser {
public:
  PnmParser(std::vector<unsigned char> bytes, std::string name)
      : bytes_(std::move(bytes)), name_(std::move(name)) {}

  std::string token() {
    skip_space();
    std::string t;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) t += static_cast<char>(bytes_[pos_++]);
    if (t.empty()) fail(ErrorKind::Truncated, name_ + ": header ends early");
    return t;
  }

  unsigned long number() {
    const std::string t = token();
    if (!std::all_of(t.begin(), t.end(), [](unsigned char ch) { return std::isdigit(ch); }))
      fail(ErrorKind::Format, name_ + ": expected a number in header, got '" + t + "'");
    return std::stoul(t);
  }

  /// Binary rasters start after exactly one whitespace byte.
  void end_header() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      fail(ErrorKind::Format, name_ + ": malformed header");
    ++pos_;
  }

  unsigned long binary_sample(bool wide) {
    const std::size_t width = wide ? 2 : 1;
    if (pos_ + width > bytes_.size()) fail(ErrorKind::Truncated, name_ + ": raster data ends early");
    unsigned long v = bytes_[pos_++];
    if (wide) v = (v << 8) | bytes_[pos_++];
    return v;
  }

private:
  void skip_space() {
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

  std::vector<unsigned char> bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

}  // namespace

Image load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open image " + path.string());
  std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (bytes.size() < 2 || bytes[0] != 'P')
    fail(ErrorKind::Format, path.string() + ": unsupported image format (expected PGM or PPM)");
  const char kind = static_cast<char>(bytes[1]);
  if (kind != '2' && kind != '3' && kind != '5' && kind != '6')
    fail(ErrorKind::Format, path.string() + ": unsupported PNM variant P" + std::string(1, kind));

  PnmParser parser(std::move(bytes), path.string());
  parser.token();
  const unsigned long width = parser.number();
  const unsigned long height = parser.number();
  const unsigned long maxval = parser.number();
  if (width == 0 || width != height)
    fail(ErrorKind::Format, path.string() + ": image must be square, got " + std::to_string(width) +
                                "x" + std::to_string(height));
  if (maxval == 0 || maxval > 65535) fail(ErrorKind::Format, path.string() + ": invalid maxval");

  const bool color = kind == '3' || kind == '6';
  const bool binary = kind == '5' || kind == '6';
  const std::size_t channels = color ? 3 : 1;
  Image image(width, channels);
  if (binary) parser.end_header();
  for (std::size_t r = 0; r < height; ++r)
    for (std::size_t c = 0; c < width; ++c)
      for (std::size_t ch = 0; ch < channels; ++ch) {
        const unsigned long v = binary ? parser.binary_sample(maxval > 255) : parser.number();
        if (v > maxval) fail(ErrorKind::Format, path.string() + ": sample exceeds maxval");
        image.at(r, c, ch) = static_cast<double>(v) / static_cast<double>(maxval);
      }
  return image;
}

Image load_image(const std::filesystem::path& path, ChannelMode mode) {
  Image image = load_image(path);
  if (mode == ChannelMode::Mono) return to_luminance(image);
  if (image.channels() == 3) return image;
  Image rgb(image.side(), 3);
  for (std::size_t c = 0; c < 3; ++c) std::ranges::copy(image.plane(0), rgb.plane(c).begin());
  return rgb;
}

void save_image(const Image& image, const std::filesystem::path& path) {
  if (image.channels() != 1 && image.channels() != 3)
    fail(ErrorKind::Config, "only 1- or 3-channel images can be saved");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << (image.channels() == 1 ? "P5" : "P6") << '\n'
      << image.side() << ' ' << image.side() << "\n255\n";
  std::vector<char> raster;
  raster.reserve(image.pixels() * image.channels());
  for (std::size_t r = 0; r < image.side(); ++r)
    for (std::size_t c = 0; c < image.side(); ++c)
      for (std::size_t ch = 0; ch < image.channels(); ++ch) {
        const double v = std::clamp(image.at(r, c, ch), 0.0, 1.0);
        raster.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
      }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
  if (!out) fail(ErrorKind::Io, "failed writing " + path.string());
}

}  // namespace spi
