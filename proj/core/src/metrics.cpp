#include "spi/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "spi/error.hpp"

namespace spi {

namespace {

void check_shapes(const Image& a, const Image& b) {
  if (a.side() != b.side() || a.channels() != b.channels())
    fail(ErrorKind::Dimension, "images differ in shape: " + std::to_string(a.side()) + "x" +
                                   std::to_string(a.side()) + "x" + std::to_string(a.channels()) +
                                   " vs " + std::to_string(b.side()) + "x" +
                                   std::to_string(b.side()) + "x" + std::to_string(b.channels()));
}

/// Mean squared error over the pixels where select(mask[p]) holds.
double masked_mse(const Image& a, const Image& b, const std::vector<bool>& mask, bool inside,
                  std::size_t& count) {
  double sum = 0.0;
  count = 0;
  for (std::size_t c = 0; c < a.channels(); ++c) {
    const auto pa = a.plane(c), pb = b.plane(c);
    for (std::size_t p = 0; p < pa.size(); ++p) {
      if (mask[p] != inside) continue;
      const double d = pa[p] - pb[p];
      sum += d * d;
      ++count;
    }
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

std::size_t reflect(long i, long size) {
  if (i < 0) i = -i;
  if (i >= size) i = 2 * size - 2 - i;
  return static_cast<std::size_t>(i);
}

}  // namespace

double mse(const Image& reference, const Image& estimate) {
  check_shapes(reference, estimate);
  const auto a = reference.samples(), b = estimate.samples();
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += (a[k] - b[k]) * (a[k] - b[k]);
  return a.empty() ? 0.0 : sum / static_cast<double>(a.size());
}

double psnr_masked(const Image& reference, const Image& estimate,
                   const std::vector<BoundingBox>& exclude) {
  check_shapes(reference, estimate);
  const auto mask = box_union_mask(exclude, reference.side());
  std::size_t count = 0;
  const double err = masked_mse(reference, estimate, mask, false, count);
  if (count == 0) fail(ErrorKind::Config, "excluded boxes cover every pixel; PSNR is undefined");
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / err);
}

double region_mse(const Image& reference, const Image& estimate,
                  const std::vector<BoundingBox>& boxes) {
  check_shapes(reference, estimate);
  if (boxes.empty()) fail(ErrorKind::Config, "region MSE needs at least one box");
  for (const auto& b : boxes) b.validate(reference.side());
  std::size_t count = 0;
  return masked_mse(reference, estimate, box_union_mask(boxes, reference.side()), true, count);
}

double anonymity_adjustment(double d) {
  constexpr double kSameIdentity = 1.1;
  return d < kSameIdentity ? -(d - kSameIdentity) : -0.01 * (d - kSameIdentity);
}

std::vector<double> gaussian_kernel_1d(std::size_t size, double sigma) {
  if (size % 2 == 0 || sigma <= 0.0)
    fail(ErrorKind::Config, "gaussian kernel needs odd size and sigma > 0");
  const long radius = static_cast<long>(size / 2);
  std::vector<double> k(size);
  double sum = 0.0;
  for (long t = -radius; t <= radius; ++t) {
    k[t + radius] = std::exp(-static_cast<double>(t * t) / (2.0 * sigma * sigma));
    sum += k[t + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

std::vector<double> defocus_kernel() {
  const auto g = gaussian_kernel_1d(kDefocusKernelSize, kDefocusSigma);
  std::vector<double> k(g.size() * g.size());
  for (std::size_t r = 0; r < g.size(); ++r)
    for (std::size_t c = 0; c < g.size(); ++c) k[r * g.size() + c] = g[r] * g[c];
  return k;
}

Image defocus_baseline(const Image& x) {
  if (x.side() < kDefocusKernelSize)
    fail(ErrorKind::Config, "defocus baseline needs an image of at least 31x31, got " +
                                std::to_string(x.side()));
  const auto g = gaussian_kernel_1d(kDefocusKernelSize, kDefocusSigma);
  const long radius = static_cast<long>(g.size() / 2);
  const long side = static_cast<long>(x.side());
  Image tmp(x.side(), x.channels()), out(x.side(), x.channels());
  for (std::size_t c = 0; c < x.channels(); ++c) {
    for (long r = 0; r < side; ++r)
      for (long col = 0; col < side; ++col) {
        double sum = 0.0;
        for (long t = -radius; t <= radius; ++t)
          sum += g[t + radius] * x.at(r, reflect(col + t, side), c);
        tmp.at(r, col, c) = sum;
      }
    for (long r = 0; r < side; ++r)
      for (long col = 0; col < side; ++col) {
        double sum = 0.0;
        for (long t = -radius; t <= radius; ++t)
          sum += g[t + radius] * tmp.at(reflect(r + t, side), col, c);
        out.at(r, col, c) = sum;
      }
  }
  return out;
}

EvalRow evaluate_one(const Image& original, const std::string& method, const Image& candidate,
                     const std::vector<BoundingBox>& boxes, double alpha) {
  EvalRow row;
  row.method = method;
  row.psnr_outside_db = psnr_masked(original, candidate, boxes);
  row.mse_inside = region_mse(original, candidate, boxes);
  row.mse_overall = mse(original, candidate);
  row.combined = alpha * row.mse_overall + (1.0 - alpha) * (-row.mse_inside);
  return row;
}

EvalReport evaluate(const Image& original,
                    const std::vector<std::pair<std::string, Image>>& candidates,
                    const std::vector<BoundingBox>& boxes, double alpha) {
  EvalReport report;
  report.alpha = alpha;
  for (const auto& [name, image] : candidates)
    report.rows.push_back(evaluate_one(original, name, image, boxes, alpha));
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json doc;
  doc["alpha"] = report.alpha;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    r["method"] = row.method;
    if (std::isinf(row.psnr_outside_db)) r["psnr_outside_db"] = "inf";
    else r["psnr_outside_db"] = row.psnr_outside_db;
    r["mse_inside"] = row.mse_inside;
    r["mse_overall"] = row.mse_overall;
    r["combined"] = row.combined;
    doc["rows"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "method,psnr_outside_db,mse_inside,mse_overall,combined\n";
  for (const auto& row : report.rows) {
    out << row.method << ',';
    if (std::isinf(row.psnr_outside_db)) out << "inf";
    else out << row.psnr_outside_db;
    out << ',' << row.mse_inside << ',' << row.mse_overall << ',' << row.combined << '\n';
  }
  return out.str();
}

}  // namespace spi
