#include "spi/bundle.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

#include "spi/error.hpp"

namespace spi {

namespace {

constexpr std::array<std::uint8_t, 8> kMagic = {0x89, 'S', 'P', 'I', 'B', 0x0D, 0x0A, 0x1A};

class Writer {
public:
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void u64(std::uint64_t v) {
    for (int k = 0; k < 8; ++k) out_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::vector<std::uint8_t>& buffer() { return out_; }

private:
  std::vector<std::uint8_t> out_;
};

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::span<const std::uint8_t> bytes(std::size_t count, const char* what) {
    need(count, what);
    auto out = in_.subspan(pos_, count);
    pos_ += count;
    return out;
  }
  std::uint32_t u32(const char* what) {
    const auto b = bytes(4, what);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(b[k]) << (8 * k);
    return v;
  }
  std::uint64_t u64(const char* what) {
    const auto b = bytes(8, what);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
    return v;
  }
  double f64(const char* what) { return std::bit_cast<double>(u64(what)); }
  void need(std::size_t count, const char* what) const {
    if (count > in_.size() - pos_)
      fail(ErrorKind::Truncated, std::string("bundle ends inside ") + what + " (offset " +
                                     std::to_string(pos_) + " of " + std::to_string(in_.size()) +
                                     " bytes)");
  }
  std::size_t position() const { return pos_; }

private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks for very large bundles.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
    const std::size_t len = std::min(kChunk, bytes.size() - off);
    crc = crc32(crc, bytes.data() + off, static_cast<uInt>(len));
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::size_t MeasurementBundle::recorded_acquisitions() const {
  const std::size_t stride = block_count() * channels();
  return stride ? records.size() / stride : 0;
}

SamplingWeight MeasurementBundle::weight_for(std::size_t i) const {
  const FeedbackEvent* latest = nullptr;
  for (const auto& e : events)
    if (e.index < i) latest = &e;
  if (!latest) return SamplingWeight::ones(config.pixels());
  return {latest->weight, latest->index};
}

AperturePattern MeasurementBundle::pattern(std::size_t i, const BlockGrid& g) const {
  return synthesize_pattern(weight_for(i), g, pattern_source(), i);
}

void MeasurementBundle::validate() const {
  config.validate();
  const std::size_t expected = config.acquisitions() * block_count() * channels();
  if (records.size() != expected)
    fail(ErrorKind::Format, "bundle holds " + std::to_string(records.size()) +
                                " records, expected M' * N_b * channels = " + std::to_string(expected));
  std::size_t previous = 0;
  for (const auto& e : events) {
    if (e.index <= previous || e.index >= config.acquisitions())
      fail(ErrorKind::Format, "feedback event indices must be ascending within [1, M')");
    if (e.weight.size() != config.pixels())
      fail(ErrorKind::Format, "feedback event weight has wrong length");
    if (!std::all_of(e.weight.begin(), e.weight.end(), [](double v) { return v >= 0.0 && v <= 1.0; }))
      fail(ErrorKind::Format, "feedback event weight outside [0,1]");
    previous = e.index;
  }
}

std::vector<std::uint8_t> encode_bundle(const MeasurementBundle& bundle) {
  bundle.validate();
  const CaptureConfig& c = bundle.config;
  Writer w;
  w.bytes(kMagic);
  w.u32(MeasurementBundle::kFormatVersion);
  const std::string text = to_text(c);
  w.u32(static_cast<std::uint32_t>(text.size()));
  w.bytes({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  w.u64(c.seed);
  w.u32(static_cast<std::uint32_t>(c.image_size));
  w.u32(static_cast<std::uint32_t>(c.block_size));
  w.u32(static_cast<std::uint32_t>(c.acquisitions()));
  w.u32(static_cast<std::uint32_t>(c.block_count()));
  w.u32(static_cast<std::uint32_t>(c.channels()));
  w.u32(static_cast<std::uint32_t>(bundle.events.size()));
  for (const auto& e : bundle.events) {
    w.u32(static_cast<std::uint32_t>(e.index));
    w.u32(static_cast<std::uint32_t>(e.weight.size()));
    for (double v : e.weight) w.f64(v);
  }
  w.u64(bundle.records.size());
  for (double v : bundle.records) w.f64(v);
  w.u32(crc32_of(w.buffer()));
  return std::move(w.buffer());
}

MeasurementBundle decode_bundle(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const auto magic = r.bytes(kMagic.size(), "magic");
  if (!std::equal(magic.begin(), magic.end(), kMagic.begin()))
    fail(ErrorKind::Format, "not a measurement bundle (bad magic)");
  const std::uint32_t version = r.u32("version");
  if (version != MeasurementBundle::kFormatVersion)
    fail(ErrorKind::Version, "bundle format version " + std::to_string(version) +
                                 " is not supported (expected " +
                                 std::to_string(MeasurementBundle::kFormatVersion) + ")");

  MeasurementBundle bundle;
  const std::uint32_t text_length = r.u32("config length");
  const auto text = r.bytes(text_length, "config block");
  const std::uint64_t seed = r.u64("seed");
  const std::uint32_t image_size = r.u32("image size");
  const std::uint32_t block_size = r.u32("block size");
  const std::uint32_t acquisitions = r.u32("acquisition count");
  const std::uint32_t block_count = r.u32("block count");
  const std::uint32_t channels = r.u32("channel count");

  const std::uint32_t event_count = r.u32("event count");
  for (std::uint32_t k = 0; k < event_count; ++k) {
    FeedbackEvent e;
    e.index = r.u32("event index");
    const std::uint32_t length = r.u32("event length");
    r.need(std::size_t{length} * 8, "event weights");
    e.weight.resize(length);
    for (double& v : e.weight) v = r.f64("event weights");
    bundle.events.push_back(std::move(e));
  }
  const std::uint64_t record_count = r.u64("record count");
  if (record_count > (bytes.size() - r.position()) / 8)
    fail(ErrorKind::Truncated, "bundle ends inside measurement table (" +
                                   std::to_string(record_count) + " records declared)");
  bundle.records.resize(record_count);
  for (double& v : bundle.records) v = r.f64("measurement table");

  const std::size_t payload = r.position();
  const std::uint32_t stored_crc = r.u32("checksum");
  if (r.position() != bytes.size())
    fail(ErrorKind::Format, std::to_string(bytes.size() - r.position()) +
                                " unexpected trailing bytes after checksum");
  if (crc32_of(bytes.first(payload)) != stored_crc)
    fail(ErrorKind::Checksum, "bundle checksum mismatch");

  bundle.config = parse_config({reinterpret_cast<const char*>(text.data()), text.size()});
  const CaptureConfig& c = bundle.config;
  if (seed != c.seed || image_size != c.image_size || block_size != c.block_size ||
      acquisitions != c.acquisitions() || block_count != c.block_count() || channels != c.channels())
    fail(ErrorKind::Format, "bundle header disagrees with its config block");
  bundle.validate();
  return bundle;
}

void write_bundle(const MeasurementBundle& bundle, std::ostream& sink) {
  const auto bytes = encode_bundle(bundle);
  sink.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!sink) fail(ErrorKind::Io, "failed writing bundle");
}

MeasurementBundle read_bundle(std::istream& source) {
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(source),
                                  std::istreambuf_iterator<char>()};
  return decode_bundle(bytes);
}

void save_bundle(const MeasurementBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  write_bundle(bundle, out);
}

MeasurementBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open bundle " + path.string());
  return read_bundle(in);
}

}  // namespace spi
