#include "fairrec/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "fairrec/rng.hpp"

namespace fairrec {

namespace {

constexpr double kEarthRadiusKm = 6371.0;
constexpr double kMinDistanceKm = 0.1;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::IoError, "cannot open " + path.string() +
                                          " for writing");
  return out;
}

void expect_header(std::ifstream& in, const std::filesystem::path& path,
                   const std::string& expected) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != expected) {
    raise(ErrorCode::ParseError,
          path.string() + " line 1: expected header `" + expected + "`");
  }
}

std::uint32_t intern(const std::string& id,
                     std::unordered_map<std::string, std::uint32_t>& map,
                     std::vector<std::string>& ids) {
  auto [it, inserted] = map.try_emplace(id, static_cast<std::uint32_t>(ids.size()));
  if (inserted) ids.push_back(id);
  return it->second;
}

}  // namespace

LoadedInstance load_relevance_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  expect_header(in, path, "customer_id,producer_id,score");

  std::unordered_map<std::string, std::uint32_t> customer_map;
  std::unordered_map<std::string, std::uint32_t> producer_map;
  LoadedInstance loaded;
  loaded.manifest.source = DatasetManifest::Source::kDenseMatrix;
  loaded.manifest.origin = path.string();

  struct Triple {
    std::uint32_t u, p;
    double score;
  };
  std::vector<Triple> triples;
  std::unordered_set<std::uint64_t> seen_pairs;

  std::string line;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) {
      raise(ErrorCode::ParseError, path.string() + " line " +
                                       std::to_string(line_number) +
                                       ": expected 3 fields, got " +
                                       std::to_string(fields.size()));
    }
    double score = 0.0;
    if (!parse_double(fields[2], score) || !std::isfinite(score)) {
      raise(ErrorCode::ParseError, path.string() + " line " +
                                       std::to_string(line_number) +
                                       ": bad score `" + fields[2] + "`");
    }
    if (score < 0.0) {
      raise(ErrorCode::NegativeScore, path.string() + " line " +
                                          std::to_string(line_number) +
                                          ": score " + fields[2]);
    }
    const std::uint32_t u =
        intern(fields[0], customer_map, loaded.manifest.customer_ids);
    const std::uint32_t p =
        intern(fields[1], producer_map, loaded.manifest.producer_ids);
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | p;
    if (!seen_pairs.insert(key).second) {
      raise(ErrorCode::DuplicatePair,
            path.string() + " line " + std::to_string(line_number) +
                ": pair (" + fields[0] + "," + fields[1] + ") repeats");
    }
    triples.push_back({u, p, score});
  }

  Instance& inst = loaded.instance;
  inst.customers = loaded.manifest.customer_ids.size();
  inst.producers = loaded.manifest.producer_ids.size();
  inst.relevance.assign(inst.customers * inst.producers, 0.0);
  for (const auto& t : triples) {
    inst.relevance[static_cast<std::size_t>(t.u) * inst.producers + t.p] =
        t.score;
  }
  return loaded;
}

void write_instance_csv(const LoadedInstance& loaded,
                        const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "customer_id,producer_id,score\n";
  const Instance& inst = loaded.instance;
  char buffer[64];
  for (std::size_t u = 0; u < inst.customers; ++u) {
    for (std::size_t p = 0; p < inst.producers; ++p) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", inst.score(u, p));
      out << loaded.manifest.customer_ids[u] << ','
          << loaded.manifest.producer_ids[p] << ',' << buffer << '\n';
    }
  }
  if (!out) raise(ErrorCode::IoError, "write failed: " + path.string());
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  const double to_rad = std::numbers::pi / 180.0;
  const double phi1 = lat1 * to_rad;
  const double phi2 = lat2 * to_rad;
  const double dphi = (lat2 - lat1) * to_rad;
  const double dlambda = (lon2 - lon1) * to_rad;
  const double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
                   std::cos(phi1) * std::cos(phi2) * std::sin(dlambda / 2) *
                       std::sin(dlambda / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

LoadedInstance build_gl_custom(std::span<const GeoProducer> producers,
                               std::span<const GeoCustomer> customers) {
  for (const auto& p : producers) {
    if (!std::isfinite(p.lat) || !std::isfinite(p.lon)) {
      raise(ErrorCode::MissingCoordinate, "producer " + p.id);
    }
  }
  for (const auto& c : customers) {
    if (!std::isfinite(c.lat) || !std::isfinite(c.lon)) {
      raise(ErrorCode::MissingCoordinate, "customer " + c.id);
    }
  }

  LoadedInstance loaded;
  loaded.manifest.source = DatasetManifest::Source::kRatingsGeo;
  loaded.manifest.origin = "gl-custom";
  for (const auto& c : customers) loaded.manifest.customer_ids.push_back(c.id);
  for (const auto& p : producers) loaded.manifest.producer_ids.push_back(p.id);

  Instance& inst = loaded.instance;
  inst.customers = customers.size();
  inst.producers = producers.size();
  inst.relevance.resize(inst.customers * inst.producers);
  for (std::size_t u = 0; u < customers.size(); ++u) {
    for (std::size_t p = 0; p < producers.size(); ++p) {
      const double distance =
          std::max(kMinDistanceKm,
                   haversine_km(customers[u].lat, customers[u].lon,
                                producers[p].lat, producers[p].lon));
      inst.relevance[u * inst.producers + p] = producers[p].rating / distance;
    }
  }
  return loaded;
}

LoadedInstance load_geo_csv(const std::filesystem::path& producers_path,
                            const std::filesystem::path& customers_path) {
  const auto parse_coord = [](const std::string& text,
                              const std::filesystem::path& path,
                              std::size_t line_number) {
    double value = 0.0;
    if (text.empty() || !parse_double(text, value) || !std::isfinite(value)) {
      raise(ErrorCode::MissingCoordinate,
            path.string() + " line " + std::to_string(line_number));
    }
    return value;
  };

  std::vector<GeoProducer> producers;
  {
    std::ifstream in = open_input(producers_path);
    expect_header(in, producers_path, "producer_id,rating,lat,lon");
    std::string line;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
      ++line_number;
      line = strip_cr(line);
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      if (fields.size() != 4) {
        raise(ErrorCode::ParseError,
              producers_path.string() + " line " +
                  std::to_string(line_number) + ": expected 4 fields");
      }
      GeoProducer p;
      p.id = fields[0];
      if (!parse_double(fields[1], p.rating) || !std::isfinite(p.rating) ||
          p.rating < 0.0) {
        raise(ErrorCode::ParseError, producers_path.string() + " line " +
                                         std::to_string(line_number) +
                                         ": bad rating `" + fields[1] + "`");
      }
      p.lat = parse_coord(fields[2], producers_path, line_number);
      p.lon = parse_coord(fields[3], producers_path, line_number);
      producers.push_back(std::move(p));
    }
  }

  std::vector<GeoCustomer> customers;
  {
    std::ifstream in = open_input(customers_path);
    expect_header(in, customers_path, "customer_id,lat,lon");
    std::string line;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
      ++line_number;
      line = strip_cr(line);
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      if (fields.size() != 3) {
        raise(ErrorCode::ParseError,
              customers_path.string() + " line " +
                  std::to_string(line_number) + ": expected 3 fields");
      }
      GeoCustomer c;
      c.id = fields[0];
      c.lat = parse_coord(fields[1], customers_path, line_number);
      c.lon = parse_coord(fields[2], customers_path, line_number);
      customers.push_back(std::move(c));
    }
  }

  LoadedInstance loaded = build_gl_custom(producers, customers);
  loaded.manifest.origin =
      producers_path.string() + "+" + customers_path.string();
  return loaded;
}

LoadedInstance generate_synthetic(const SyntheticSpec& spec) {
  if (spec.model == SyntheticSpec::Popularity::kZipf && spec.exponent <= 0.0) {
    throw std::invalid_argument("zipf exponent must be > 0");
  }
  if (spec.noise < 0.0) {
    throw std::invalid_argument("noise scale must be >= 0");
  }

  LoadedInstance loaded;
  loaded.manifest.source = DatasetManifest::Source::kSynthetic;
  {
    std::ostringstream origin;
    origin << "synthetic:"
           << (spec.model == SyntheticSpec::Popularity::kZipf ? "zipf"
                                                              : "uniform")
           << "(m=" << spec.customers << ",n=" << spec.producers
           << ",s=" << spec.exponent << ",noise=" << spec.noise
           << ",seed=" << spec.seed << ")";
    loaded.manifest.origin = origin.str();
  }
  loaded.manifest.customer_ids.reserve(spec.customers);
  for (std::size_t u = 0; u < spec.customers; ++u) {
    loaded.manifest.customer_ids.push_back("c" + std::to_string(u));
  }
  loaded.manifest.producer_ids.reserve(spec.producers);
  for (std::size_t p = 0; p < spec.producers; ++p) {
    loaded.manifest.producer_ids.push_back("p" + std::to_string(p));
  }

  std::vector<double> popularity(spec.producers, 1.0);
  if (spec.model == SyntheticSpec::Popularity::kZipf) {
    for (std::size_t p = 0; p < spec.producers; ++p) {
      popularity[p] = std::pow(static_cast<double>(p + 1), -spec.exponent);
    }
  }

  Instance& inst = loaded.instance;
  inst.customers = spec.customers;
  inst.producers = spec.producers;
  inst.relevance.resize(spec.customers * spec.producers);
  for (std::size_t u = 0; u < spec.customers; ++u) {
    Rng rng(derive_seed(spec.seed, StreamPurpose::kSyntheticNoise, u));
    double* row = inst.relevance.data() + u * spec.producers;
    for (std::size_t p = 0; p < spec.producers; ++p) {
      const double eps = spec.noise == 0.0 ? 0.0 : rng.symmetric_unit();
      row[p] = std::max(0.0, popularity[p] * (1.0 + spec.noise * eps));
    }
  }
  return loaded;
}

std::string format_sig6(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

namespace {

nlohmann::json report_to_json(const FairnessReport& r) {
  return nlohmann::json{{"strategy", r.strategy},
                        {"k", r.k},
                        {"alpha", r.alpha},
                        {"seed", r.seed},
                        {"H", r.H},
                        {"Z", r.Z},
                        {"L", r.L},
                        {"Y", r.Y},
                        {"mu_phi", r.mu_phi},
                        {"std_phi", r.std_phi},
                        {"exposure_guarantee_used", r.exposure_guarantee_used},
                        {"producers_satisfied", r.producers_satisfied}};
}

}  // namespace

void write_reports(std::span<const FairnessReport> reports,
                   const std::filesystem::path& path, OutputFormat format) {
  std::ofstream out = open_output(path);
  if (format == OutputFormat::kJson) {
    nlohmann::json array = nlohmann::json::array();
    for (const auto& r : reports) array.push_back(report_to_json(r));
    out << array.dump(2) << '\n';
  } else {
    out << "strategy,k,alpha,seed,H,Z,L,Y,mu_phi,std_phi\n";
    for (const auto& r : reports) {
      out << r.strategy << ',' << r.k << ',' << format_sig6(r.alpha) << ','
          << r.seed << ',' << format_sig6(r.H) << ',' << format_sig6(r.Z)
          << ',' << format_sig6(r.L) << ',' << format_sig6(r.Y) << ','
          << format_sig6(r.mu_phi) << ',' << format_sig6(r.std_phi) << '\n';
    }
  }
  if (!out) raise(ErrorCode::IoError, "write failed: " + path.string());
}

void write_lorenz_series(std::span<const std::pair<double, double>> series,
                         const std::filesystem::path& path,
                         OutputFormat format) {
  std::ofstream out = open_output(path);
  if (format == OutputFormat::kJson) {
    nlohmann::json array = nlohmann::json::array();
    for (const auto& [producers, exposure] : series) {
      array.push_back({{"producer_fraction", producers},
                       {"exposure_fraction", exposure}});
    }
    out << array.dump(2) << '\n';
  } else {
    out << "producer_fraction,exposure_fraction\n";
    for (const auto& [producers, exposure] : series) {
      out << format_sig6(producers) << ',' << format_sig6(exposure) << '\n';
    }
  }
  if (!out) raise(ErrorCode::IoError, "write failed: " + path.string());
}

void write_utility_series(std::span<const double> series,
                          const std::filesystem::path& path,
                          OutputFormat format) {
  std::ofstream out = open_output(path);
  if (format == OutputFormat::kJson) {
    nlohmann::json array = nlohmann::json::array();
    for (std::size_t i = 0; i < series.size(); ++i) {
      array.push_back({{"rank", i + 1}, {"utility", series[i]}});
    }
    out << array.dump(2) << '\n';
  } else {
    out << "rank,utility\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
      out << (i + 1) << ',' << format_sig6(series[i]) << '\n';
    }
  }
  if (!out) raise(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace fairrec
