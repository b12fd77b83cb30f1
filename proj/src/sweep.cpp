#include "duality/sweep.hpp"

#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace duality {

namespace {

constexpr std::string_view kCsvHeader = "phi,V,D_geo,D_lik,E,duality_sum";

enum Stream : std::uint64_t { kJointNoise = 0, kJointShots = 1, kFringeNoise = 2, kFringeShots = 3 };

std::uint64_t stream_seed(std::uint64_t seed, std::size_t index, Stream stream) {
  return derive_seed(seed, 4 * static_cast<std::uint64_t>(index) + stream);
}

std::optional<NoiseModel> seeded(const std::optional<NoiseModel>& noise, std::uint64_t seed) {
  if (!noise) {
    return std::nullopt;
  }
  NoiseModel copy = *noise;
  copy.rng_seed = seed;
  return copy;
}

double parse_double(std::string_view field) {
  double value = 0.0;
  auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size()) {
    throw std::runtime_error("malformed number '" + std::string(field) + "'");
  }
  return value;
}

double rounded(double value) { return parse_double(format_value(value)); }

} // namespace

std::vector<double> PhiRange::points() const {
  if (!(step > 0.0) || !(end >= start)) {
    throw std::invalid_argument("phi range needs step > 0 and end >= start");
  }
  const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = start + static_cast<double>(k) * step;
  }
  return out;
}

void SweepConfig::validate() const {
  if (!std::isfinite(phi_plus)) {
    throw std::invalid_argument("phi_plus must be finite");
  }
  phi_range.points();
  if (phase_grid_points < 8) {
    throw std::invalid_argument("phase grid needs at least 8 points");
  }
  if (workers == 0) {
    throw std::invalid_argument("worker count must be positive");
  }
  if (shots && *shots == 0) {
    throw std::invalid_argument("shot count must be positive");
  }
  if (noise) {
    noise->validate();
  }
}

DualityRecord evaluate_point(const SweepConfig& config, std::size_t index, double phi) {
  const MarkerPair markers = MarkerPair::from_marker_angle(config.phi_plus, phi);

  const JointProbs jp = joint_probabilities(markers, seeded(config.noise, stream_seed(config.seed, index, kJointNoise)),
                                            ReadoutOptions{config.shots, stream_seed(config.seed, index, kJointShots)});

  const std::vector<double> grid = uniform_phase_grid(config.phase_grid_points);
  const std::vector<FringeSample> fringe =
      simulate_fringe(markers, grid, seeded(config.noise, stream_seed(config.seed, index, kFringeNoise)),
                      ReadoutOptions{config.shots, stream_seed(config.seed, index, kFringeShots)});

  DualityRecord row;
  row.phi = phi;
  row.V = visibility_from_fringe(fringe, config.estimator);
  row.D_geo = distinguishability_geometric(jp);
  row.D_lik = distinguishability_likelihood(likelihood(jp));
  row.E = entanglement(markers);
  row.duality_sum = duality_sum(row.V, row.D_geo);
  return row;
}

std::vector<DualityRecord> compute_sweep(const SweepConfig& config) {
  config.validate();
  const std::vector<double> phis = config.phi_range.points();
  std::vector<DualityRecord> rows(phis.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t k = next++; k < phis.size(); k = next++) {
      try {
        rows[k] = evaluate_point(config, k, phis[k]);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };

  const unsigned threads = std::min<std::size_t>(config.workers, phis.size());
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(work);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return rows;
}

std::vector<DualityRecord> run_sweep(const SweepConfig& config) {
  std::vector<DualityRecord> rows = compute_sweep(config);
  if (!config.output_path.empty()) {
    write_file_atomically(config.output_path, format_records(rows, config.format));
  }
  return rows;
}

std::string format_value(double value) {
  if (value == 0.0) {
    value = 0.0; // drops the sign of -0
  }
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 9);
  return std::string(buf.data(), end);
}

std::string format_records(const std::vector<DualityRecord>& records, OutputFormat format) {
  if (format == OutputFormat::Json) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : records) {
      rows.push_back({{"phi", rounded(r.phi)},
                      {"V", rounded(r.V)},
                      {"D_geo", rounded(r.D_geo)},
                      {"D_lik", rounded(r.D_lik)},
                      {"E", rounded(r.E)},
                      {"duality_sum", rounded(r.duality_sum)}});
    }
    return rows.dump(2) + "\n";
  }

  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += format_value(r.phi) + ',' + format_value(r.V) + ',' + format_value(r.D_geo) + ',' +
           format_value(r.D_lik) + ',' + format_value(r.E) + ',' + format_value(r.duality_sum) + '\n';
  }
  return out;
}

std::vector<DualityRecord> parse_records_csv(std::string_view text) {
  std::vector<DualityRecord> records;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("missing or unexpected CSV header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::array<double, 6> fields{};
    std::size_t pos = 0;
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const std::size_t comma = line.find(',', pos);
      const bool last = f + 1 == fields.size();
      if (last != (comma == std::string::npos)) {
        throw std::runtime_error("CSV row must have 6 fields: " + line);
      }
      fields[f] = parse_double(std::string_view(line).substr(pos, last ? std::string::npos : comma - pos));
      pos = comma + 1;
    }
    records.push_back({fields[0], fields[1], fields[2], fields[3], fields[4], fields[5]});
  }
  return records;
}

FringeResult run_fringe(const FringeConfig& config) {
  if (config.phase_grid_points < 8) {
    throw std::invalid_argument("phase grid needs at least 8 points");
  }
  const std::vector<double> grid = uniform_phase_grid(config.phase_grid_points);
  FringeResult result;
  result.samples = simulate_fringe(config.markers, grid, seeded(config.noise, derive_seed(config.seed, kFringeNoise)),
                                   ReadoutOptions{config.shots, derive_seed(config.seed, kFringeShots)});
  result.visibility = visibility_from_fringe(result.samples, config.estimator);
  if (!config.output_path.empty()) {
    write_file_atomically(config.output_path, format_fringe(result));
  }
  return result;
}

std::string format_fringe(const FringeResult& result) {
  std::string out = "phase,population\n";
  for (const auto& s : result.samples) {
    out += format_value(s.phase) + ',' + format_value(s.population) + '\n';
  }
  out += "# V=" + format_value(result.visibility) + '\n';
  return out;
}

CompileReport compile_sequence(std::string_view program_text, const Bindings& bindings, Reference reference) {
  PulseSequence seq = parse_program(program_text);
  seq.params = bindings;

  auto require = [&](const char* name) {
    const auto it = seq.params.find(name);
    if (it == seq.params.end()) {
      throw CompileError(std::string("reference needs parameter '") + name + "'");
    }
    return it->second;
  };

  if (const auto it = seq.params.find("phase"); it != seq.params.end()) {
    const PulseSequence derived = programs::phase_shift_merge(it->second);
    for (const char* name : {"theta1", "theta2"}) {
      seq.params.try_emplace(name, derived.params.at(name));
    }
  }
  if (const auto missing = seq.unbound(); !missing.empty()) {
    throw CompileError("unbound parameter '" + *missing.begin() + "'");
  }

  CompileReport report{compile(seq), std::nullopt};
  switch (reference) {
  case Reference::None:
    break;
  case Reference::MarkedState: {
    const MarkerPair markers{require("phi_p"), require("phi_m")};
    report.score = phase_aligned_fidelity(apply(report.unitary, StateVector::basis(0, 0)), psi1(markers));
    break;
  }
  case Reference::Merge:
    report.score =
        equivalent_up_to_phase(report.unitary, tensor(u2(PhaseSetting{require("phase")}), pauli::identity()));
    break;
  }
  return report;
}

std::string format_matrix(const Unitary4& u) {
  // Keeps roundoff from printing as -0.000000000.
  auto clean = [](double x) { return std::abs(x) < 5e-10 ? 0.0 : x; };
  std::string out;
  for (int row = 0; row < 4; ++row) {
    for (int col = 0; col < 4; ++col) {
      const Complex z = u(row, col);
      std::array<char, 64> buf{};
      std::snprintf(buf.data(), buf.size(), "%s%+.9f%+.9fi", col == 0 ? "" : "  ", clean(z.real()), clean(z.imag()));
      out += buf.data();
    }
    out += '\n';
  }
  return out;
}

void write_file_atomically(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw std::runtime_error("failed writing '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at '" + path.string() + "'");
  }
}

} // namespace duality
