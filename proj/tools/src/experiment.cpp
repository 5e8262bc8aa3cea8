#include "spi_tools/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "spi/bundle.hpp"
#include "spi/capture.hpp"
#include "spi/image_io.hpp"
#include "spi/schedule.hpp"
#include "spi/version.hpp"

namespace spi::tools {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Dimension:
      return kExitConfig;
    case ErrorKind::Io:
    case ErrorKind::Format:
    case ErrorKind::Truncated:
    case ErrorKind::Version:
    case ErrorKind::Checksum:
      return kExitIo;
  }
  return kExitFailure;
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Original: return "original";
    case Method::Defocus: return "defocus";
    case Method::OursPassthrough: return "ours-passthrough";
    case Method::OursOracle: return "ours-oracle";
    case Method::OursSilhouette: return "ours-silhouette";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::Original, Method::Defocus, Method::OursPassthrough, Method::OursOracle,
                   Method::OursSilhouette})
    if (to_string(m) == name) return m;
  fail(ErrorKind::Config, "unknown method '" + std::string(name) + "'");
}

namespace {

std::string number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, end};
}

json finite_or_string(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

}  // namespace

std::string sweep_label(SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::None: return "base";
    case SweepAxis::FeedbackBase: return "k" + number(value);
    case SweepAxis::SamplingRate: return "r" + number(value);
  }
  return "base";
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string_view item = text.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
      fail(ErrorKind::Config, "bad number '" + std::string(item) + "' in list");
    values.push_back(v);
    start = comma + 1;
  }
  return values;
}

std::size_t worker_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SPI_WORKERS")) {
    std::size_t n = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc{} || ptr != s.data() + s.size() || n == 0)
      fail(ErrorKind::Config, "SPI_WORKERS must be a positive integer");
    return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void ExperimentSpec::validate() const {
  if (images.empty()) fail(ErrorKind::Config, "no input images");
  if (methods.empty()) fail(ErrorKind::Config, "no methods selected");
  if (sweep != SweepAxis::None && sweep_values.empty())
    fail(ErrorKind::Config, "sweep axis given without values");
  std::set<std::string> stems;
  for (const auto& p : images)
    if (!stems.insert(p.stem().string()).second)
      fail(ErrorKind::Config, "two inputs share the name '" + p.stem().string() + "'");
  config.validate();
}

namespace {

struct Input {
  std::string name;
  fs::path path;
  Image image;
  std::vector<BoundingBox> boxes;
};

struct SweepPoint {
  std::string label;
  CaptureConfig config;
};

struct Cell {
  std::size_t input;
  std::size_t sweep;
  Method method;
};

std::vector<SweepPoint> sweep_points(const ExperimentSpec& spec) {
  if (spec.sweep == SweepAxis::None) return {{"base", spec.config}};
  std::vector<SweepPoint> points;
  std::set<std::string> seen;
  for (double v : spec.sweep_values) {
    CaptureConfig c = spec.config;
    if (spec.sweep == SweepAxis::FeedbackBase)
      c.feedback_base = v;
    else
      c.sampling_rate = v;
    c.validate();
    std::string label = sweep_label(spec.sweep, v);
    if (seen.insert(label).second) points.push_back({std::move(label), c});
  }
  return points;
}

Input load_input(const fs::path& path, const ExperimentSpec& spec) {
  Input in;
  in.name = path.stem().string();
  in.path = path;
  in.image = load_image(path, spec.config.channel_mode);
  if (in.image.side() != spec.config.image_size)
    fail(ErrorKind::Dimension, path.string() + " is " + std::to_string(in.image.side()) +
                                   " px wide but image_size is " +
                                   std::to_string(spec.config.image_size));
  fs::path box_path = spec.boxes ? *spec.boxes : fs::path(path).replace_extension(".boxes");
  if (!fs::exists(box_path))
    fail(ErrorKind::Io, "no box file for " + path.string() + " (looked for " + box_path.string() + ")");
  in.boxes = load_boxes(box_path);
  if (in.boxes.empty()) fail(ErrorKind::Config, box_path.string() + " lists no boxes");
  for (const auto& b : in.boxes) b.validate(in.image.side());
  return in;
}

std::string image_file(const Image& img) {
  return img.channels() == 3 ? "estimate.ppm" : "estimate.pgm";
}

Image weight_image(const SamplingWeight& w, std::size_t side) {
  Image img(side, 1);
  std::copy(w.values.begin(), w.values.end(), img.plane(0).begin());
  return img;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

json solver_json(const ReconstructionResult& r) {
  return {{"iterations", r.iterations},
          {"converged", r.converged},
          {"primal_residual", r.primal_residual},
          {"dual_residual", r.dual_residual},
          {"final_rho", r.final_rho},
          {"data_residual", r.data_residual}};
}

json row_json(const EvalRow& row) {
  return {{"psnr_outside_db", finite_or_string(row.psnr_outside_db)},
          {"mse_inside", row.mse_inside},
          {"mse_overall", row.mse_overall},
          {"combined", row.combined}};
}

MaskKind mask_for(Method m) {
  switch (m) {
    case Method::OursOracle: return MaskKind::Oracle;
    case Method::OursSilhouette: return MaskKind::Silhouette;
    default: return MaskKind::Passthrough;
  }
}

CellResult run_cell(const Input& in, const SweepPoint& point, Method method,
                    const ExperimentSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  CellResult result;
  result.image = in.name;
  result.sweep = point.label;
  result.feedback_base = point.config.feedback_base;
  result.sampling_rate = point.config.sampling_rate;
  result.directory = spec.out / in.name / point.label / std::string(to_string(method));
  fs::create_directories(result.directory);

  json manifest;
  manifest["version"] = kVersion;
  manifest["image"] = in.path.string();
  manifest["sweep"] = point.label;
  manifest["method"] = to_string(method);
  manifest["seed"] = point.config.seed;
  manifest["config"] = to_text(point.config);
  json boxes = json::array();
  for (const auto& b : in.boxes)
    boxes.push_back({{"label", b.label}, {"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}});
  manifest["boxes"] = boxes;

  Image estimate;
  if (method == Method::Original) {
    estimate = in.image;
  } else if (method == Method::Defocus) {
    estimate = defocus_baseline(in.image);
  } else {
    CaptureConfig c = point.config;
    c.mask.kind = mask_for(method);
    const auto trace = capture(in.image, in.boxes, c);
    const fs::path bundle_path = result.directory / "bundle.spib";
    save_bundle(trace.bundle, bundle_path);

    // The attacker only sees the bundle on disk.
    const auto attack_start = std::chrono::steady_clock::now();
    const auto attack = replay_attack_result(load_bundle(bundle_path), c.solver);
    const double attack_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - attack_start).count();
    estimate = attack.estimate;

    result.acquisitions = c.acquisitions();
    result.n_feedbacks = trace.feedback_count;
    result.converged = attack.converged;
    manifest["acquisitions"] = c.acquisitions();
    manifest["schedule"] = trace.schedule;
    manifest["n_feedbacks"] = trace.feedback_count;
    manifest["timings"] = {{"acquisition_seconds", trace.timings.acquisition_seconds},
                           {"provisional_seconds", trace.timings.provisional_seconds},
                           {"mask_seconds", trace.timings.mask_seconds},
                           {"final_seconds", trace.timings.final_seconds},
                           {"attack_seconds", attack_seconds}};
    json provisional = json::array();
    for (const auto& snap : trace.snapshots) {
      provisional.push_back({{"index", snap.index},
                             {"iterations", snap.solver.iterations},
                             {"converged", snap.solver.converged},
                             {"primal_residual", snap.solver.primal_residual},
                             {"dual_residual", snap.solver.dual_residual}});
      if (spec.snapshots) {
        const std::string tag = std::to_string(snap.index);
        save_image(snap.provisional, result.directory / ("provisional_" + tag + ".pgm"));
        save_image(weight_image(snap.weight, c.image_size), result.directory / ("weight_" + tag + ".pgm"));
      }
    }
    manifest["provisional"] = provisional;
    manifest["solver"] = solver_json(attack);
    manifest["bundle"] = "bundle.spib";
  }
  save_image(estimate, result.directory / image_file(estimate));
  manifest["estimate"] = image_file(estimate);

  result.row = evaluate_one(in.image, std::string(to_string(method)), estimate, in.boxes);
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest["metrics"] = row_json(result.row);
  manifest["seconds"] = result.seconds;
  write_text(result.directory / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

std::string report_json(const ExperimentSpec& spec, const std::vector<CellResult>& cells) {
  json doc;
  doc["version"] = kVersion;
  doc["alpha"] = EvalReport{}.alpha;
  doc["seed"] = spec.config.seed;
  json rows = json::array();
  for (const auto& c : cells) {
    json row = {{"image", c.image},
                {"sweep", c.sweep},
                {"method", c.row.method},
                {"feedback_base", c.feedback_base},
                {"sampling_rate", c.sampling_rate},
                {"acquisitions", c.acquisitions},
                {"n_feedbacks", c.n_feedbacks}};
    row.update(row_json(c.row));
    row["converged"] = c.converged;
    row["seconds"] = c.seconds;
    row["directory"] = fs::relative(c.directory, spec.out).generic_string();
    rows.push_back(std::move(row));
  }
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

std::string report_csv(const std::vector<CellResult>& cells) {
  std::ostringstream out;
  out << "image,sweep,method,feedback_base,sampling_rate,acquisitions,n_feedbacks,"
         "psnr_outside_db,mse_inside,mse_overall,combined,converged,seconds\n";
  for (const auto& c : cells) {
    const double p = c.row.psnr_outside_db;
    out << c.image << ',' << c.sweep << ',' << c.row.method << ',' << number(c.feedback_base) << ','
        << number(c.sampling_rate) << ',' << c.acquisitions << ',' << c.n_feedbacks << ','
        << (std::isinf(p) ? std::string("inf") : number(p)) << ',' << number(c.row.mse_inside) << ','
        << number(c.row.mse_overall) << ',' << number(c.row.combined) << ','
        << (c.converged ? 1 : 0) << ',' << number(c.seconds) << '\n';
  }
  return out.str();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  ExperimentResult result;
  try {
    spec.validate();
    const auto points = sweep_points(spec);
    std::vector<Input> inputs;
    for (const auto& p : spec.images) inputs.push_back(load_input(p, spec));

    std::vector<Cell> cells;
    for (std::size_t i = 0; i < inputs.size(); ++i)
      for (std::size_t s = 0; s < points.size(); ++s)
        for (Method m : spec.methods) cells.push_back({i, s, m});

    fs::create_directories(spec.out);
    std::vector<std::optional<CellResult>> done(cells.size());
    std::vector<std::exception_ptr> errors(cells.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t k = next++; k < cells.size(); k = next++) {
        try {
          const Cell& c = cells[k];
          done[k] = run_cell(inputs[c.input], points[c.sweep], c.method, spec);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    };
    const std::size_t workers = std::min(worker_count(spec.workers), cells.size());
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();

    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (auto& d : done) result.cells.push_back(std::move(*d));

    write_text(spec.out / "report.json", report_json(spec, result.cells));
    write_text(spec.out / "report.csv", report_csv(result.cells));

    if (spec.strict) {
      for (const auto& c : result.cells)
        if (!c.converged) {
          result.exit_code = kExitNotConverged;
          result.message = "solver did not converge for " + c.image + "/" + c.sweep + "/" + c.row.method;
          return result;
        }
    }
  } catch (const Error& e) {
    result.exit_code = exit_code_for(e.kind());
    result.message = e.what();
  } catch (const fs::filesystem_error& e) {
    result.exit_code = kExitIo;
    result.message = e.what();
  } catch (const std::exception& e) {
    result.exit_code = kExitFailure;
    result.message = e.what();
  }
  return result;
}

}  // namespace spi::tools
