#include "discordkit/mcstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "discordkit/parallel.hpp"
#include "discordkit/randstate.hpp"

namespace discordkit::mcstats {

void SurveyConfig::validate() const {
  if (rank < 1 || rank > 4) throw Error(ErrorCode::InvalidConfig, "rank must be in 1..4");
  if (n_samples < 1) throw Error(ErrorCode::InvalidConfig, "n_samples must be positive");
  if (workers < 1) throw Error(ErrorCode::InvalidConfig, "workers must be positive");
  if (optimizer.grid < 4 || optimizer.grid > 1024) throw Error(ErrorCode::InvalidConfig, "grid must be in 4..1024");
  if (optimizer.starts < 1 || optimizer.max_iterations < 1)
    throw Error(ErrorCode::InvalidConfig, "optimizer starts and iterations must be positive");
  if (!(optimizer.tolerance > 0.0 && optimizer.tolerance < 1e-3))
    throw Error(ErrorCode::InvalidConfig, "optimizer tolerance must be in (0, 1e-3)");
}

std::string SurveyConfig::echo() const {
  std::ostringstream os;
  os << "# rank=" << rank << " n=" << n_samples << " seed=" << master_seed;
  return os.str();
}

SurveyResult run_survey(const SurveyConfig& config) {
  config.validate();
  std::vector<std::optional<CorrelationRecord>> slots(config.n_samples);
  parallel_for(config.n_samples, config.workers, [&](std::size_t i) {
    SeededGenerator gen(config.master_seed, i);
    const TwoQubitState rho = random_density(config.rank, gen);
    try {
      slots[i] = correlation_record(rho, config.optimizer);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OptimizationFailed) throw;
    }
  });

  SurveyResult result;
  result.config = config;
  result.records.reserve(config.n_samples);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) {
      result.records.push_back(*slots[i]);
    } else {
      result.failed_samples.push_back(i);
    }
  }
  const double failure_fraction = static_cast<double>(result.failed_samples.size()) / config.n_samples;
  if (failure_fraction >= kMaxFailureFraction && !result.failed_samples.empty()) {
    throw Error(ErrorCode::OptimizationFailed, std::to_string(result.failed_samples.size()) + " of " +
                                                   std::to_string(config.n_samples) + " samples failed");
  }
  return result;
}

Fraction fraction_delta_exceeds_j(std::span<const CorrelationRecord> records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records");
  Fraction f;
  f.total = records.size();
  f.hits = static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return r.delta_ab > r.classical_j; }));
  f.value = static_cast<double>(f.hits) / f.total;
  f.std_error = std::sqrt(f.value * (1.0 - f.value) / f.total);
  return f;
}

std::string_view quantity_name(Quantity q) {
  switch (q) {
    case Quantity::Delta: return "delta";
    case Quantity::J: return "J";
    case Quantity::E: return "E";
    case Quantity::I: return "I";
    case Quantity::Purity: return "purity";
  }
  return "?";
}

Quantity parse_quantity(std::string_view name) {
  for (Quantity q : {Quantity::Delta, Quantity::J, Quantity::E, Quantity::I, Quantity::Purity})
    if (name == quantity_name(q)) return q;
  throw Error(ErrorCode::InvalidConfig, "unknown quantity '" + std::string(name) + "'");
}

double value_of(const CorrelationRecord& r, Quantity q) {
  switch (q) {
    case Quantity::Delta: return r.delta_ab;
    case Quantity::J: return r.classical_j;
    case Quantity::E: return r.concurrence;
    case Quantity::I: return r.mutual_i;
    case Quantity::Purity: return r.purity;
  }
  return 0.0;
}

std::pair<double, double> quantity_range(Quantity q) {
  return q == Quantity::I ? std::make_pair(0.0, 2.0) : std::make_pair(0.0, 1.0);
}

namespace {

std::vector<double> uniform_edges(std::pair<double, double> range, int bins) {
  std::vector<double> edges(bins + 1);
  for (int i = 0; i <= bins; ++i) edges[i] = range.first + (range.second - range.first) * i / bins;
  return edges;
}

std::size_t bin_index(double v, std::pair<double, double> range, std::size_t bins) {
  const double t = (v - range.first) / (range.second - range.first);
  const double scaled = std::floor(t * static_cast<double>(bins));
  if (!(scaled > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(scaled), bins - 1);
}

}  // namespace

double Histogram1D::mass() const {
  double m = 0.0;
  for (double d : density) m += d * bin_width();
  return m;
}

Histogram1D histogram(std::span<const CorrelationRecord> records, Quantity q, int n_bins) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records");
  if (n_bins < 2) throw Error(ErrorCode::InvalidConfig, "at least two bins are required");
  const auto range = quantity_range(q);
  Histogram1D h;
  h.quantity = q;
  h.edges = uniform_edges(range, n_bins);
  h.counts.assign(n_bins, 0);
  for (const auto& r : records) ++h.counts[bin_index(value_of(r, q), range, n_bins)];
  const double norm = 1.0 / (static_cast<double>(records.size()) * h.bin_width());
  h.density.resize(n_bins);
  for (int i = 0; i < n_bins; ++i) h.density[i] = h.counts[i] * norm;
  return h;
}

std::size_t DensityGrid2D::total() const {
  std::size_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

DensityGrid2D density_grid(std::span<const CorrelationRecord> records, Quantity y, int nx, int ny) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records");
  if (y != Quantity::Delta && y != Quantity::E)
    throw Error(ErrorCode::InvalidConfig, "grid y quantity must be delta or E");
  if (nx < 2 || ny < 2) throw Error(ErrorCode::InvalidConfig, "grid needs at least 2x2 cells");
  DensityGrid2D g;
  g.x_quantity = Quantity::J;
  g.y_quantity = y;
  const auto xr = quantity_range(Quantity::J);
  const auto yr = quantity_range(y);
  g.x_edges = uniform_edges(xr, nx);
  g.y_edges = uniform_edges(yr, ny);
  g.counts.assign(static_cast<std::size_t>(nx) * ny, 0);
  for (const auto& r : records) {
    const std::size_t ix = bin_index(r.classical_j, xr, nx);
    const std::size_t iy = bin_index(value_of(r, y), yr, ny);
    ++g.counts[ix * ny + iy];
  }
  return g;
}

double mean(std::span<const CorrelationRecord> records, Quantity q) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records");
  double s = 0.0;
  for (const auto& r : records) s += value_of(r, q);
  return s / records.size();
}

std::size_t count_above_curve(std::span<const CorrelationRecord> records, const mdms::MdmsCurve& curve,
                              double slack) {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [&](const auto& r) {
    return r.delta_ab > curve.delta_bound(r.classical_j) + slack;
  }));
}

double fraction_near_curve(std::span<const CorrelationRecord> records, const mdms::MdmsCurve& curve,
                           double distance) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records");
  const auto near = std::count_if(records.begin(), records.end(), [&](const auto& r) {
    return curve.distance(r.classical_j, r.delta_ab) <= distance;
  });
  return static_cast<double>(near) / records.size();
}

std::size_t cells_above_curve(const DensityGrid2D& grid, const mdms::MdmsCurve& curve, double slack) {
  std::size_t above = 0;
  for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
    const double x_lo = grid.x_edges[ix];
    const double x_hi = grid.x_edges[ix + 1];
    const double bound = std::max({curve.delta_bound(x_lo), curve.delta_bound(0.5 * (x_lo + x_hi)),
                                   curve.delta_bound(x_hi)});
    for (std::size_t iy = 0; iy < grid.ny(); ++iy)
      if (grid.at(ix, iy) > 0 && grid.y_edges[iy] > bound + slack) ++above;
  }
  return above;
}

void write_records_csv(std::ostream& os, std::span<const CorrelationRecord> records, const std::string& echo) {
  if (!echo.empty()) os << echo << '\n';
  os << record_csv_header() << '\n';
  for (const auto& r : records) os << record_csv_row(r) << '\n';
}

std::vector<CorrelationRecord> read_records_csv(std::istream& is, std::string* echo) {
  std::vector<CorrelationRecord> out;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (echo && echo->empty()) *echo = line;
      continue;
    }
    if (!header_seen) {
      if (line != record_csv_header())
        throw Error(ErrorCode::SchemaError, "expected header '" + record_csv_header() + "' at line " +
                                                std::to_string(line_no));
      header_seen = true;
      continue;
    }
    CorrelationRecord r;
    int consumed = 0;
    const int fields = std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%d%n", &r.delta_ab, &r.delta_ba,
                                   &r.classical_j, &r.mutual_i, &r.concurrence, &r.purity, &r.rank, &consumed);
    if (fields != 7 || static_cast<std::size_t>(consumed) != line.size())
      throw Error(ErrorCode::SchemaError, "malformed record at line " + std::to_string(line_no));
    out.push_back(r);
  }
  if (!header_seen) throw Error(ErrorCode::SchemaError, "missing records header");
  return out;
}

void write_histogram_csv(std::ostream& os, const Histogram1D& h, const std::string& echo) {
  if (!echo.empty()) os << echo << " quantity=" << quantity_name(h.quantity) << '\n';
  os << "bin_lo,bin_hi,density\n";
  char buf[128];
  for (std::size_t i = 0; i < h.density.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", h.edges[i], h.edges[i + 1], h.density[i]);
    os << buf;
  }
}

void write_grid_csv(std::ostream& os, const DensityGrid2D& g, const std::string& echo) {
  if (!echo.empty()) os << echo << " x=" << quantity_name(g.x_quantity) << " y=" << quantity_name(g.y_quantity) << '\n';
  os << "x_lo,x_hi,y_lo,y_hi,count\n";
  char buf[160];
  for (std::size_t ix = 0; ix < g.nx(); ++ix) {
    for (std::size_t iy = 0; iy < g.ny(); ++iy) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%zu\n", g.x_edges[ix], g.x_edges[ix + 1],
                    g.y_edges[iy], g.y_edges[iy + 1], g.at(ix, iy));
      os << buf;
    }
  }
}

}  // namespace discordkit::mcstats
