#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairrec/core.hpp"
#include "fairrec/metrics.hpp"

namespace fairrec {

enum class OutputFormat { kCsv, kJson };

// Maps external string IDs to the dense 0-based indices of an Instance.
// Index assignment is by first appearance, so loading is deterministic.
struct DatasetManifest {
  enum class Source { kDenseMatrix, kRatingsGeo, kSynthetic };
  Source source = Source::kDenseMatrix;
  std::string origin;
  std::vector<std::string> customer_ids;  // index -> external id
  std::vector<std::string> producer_ids;
};

struct LoadedInstance {
  Instance instance;
  DatasetManifest manifest;
};

// CSV with header `customer_id,producer_id,score`; missing pairs default to
// 0. Throws ParseError (with the line number), NegativeScore or
// DuplicatePair.
LoadedInstance load_relevance_csv(const std::filesystem::path& path);

// Inverse of load_relevance_csv: every cell is written (so a reload
// reproduces the dense matrix exactly), scores at full double precision.
void write_instance_csv(const LoadedInstance& loaded,
                        const std::filesystem::path& path);

struct GeoProducer {
  std::string id;
  double rating = 0.0;
  double lat = 0.0;
  double lon = 0.0;
};

struct GeoCustomer {
  std::string id;
  double lat = 0.0;
  double lon = 0.0;
};

// Great-circle distance on the WGS84 mean radius (6371.0 km).
double haversine_km(double lat1, double lon1, double lat2, double lon2);

// relevance(u, p) = rating(p) / distance(u, p), with distances clamped to a
// 0.1 km floor so co-located pairs stay finite.
LoadedInstance build_gl_custom(std::span<const GeoProducer> producers,
                               std::span<const GeoCustomer> customers);

// Geo CSV pair: `producer_id,rating,lat,lon` and `customer_id,lat,lon`.
LoadedInstance load_geo_csv(const std::filesystem::path& producers_path,
                            const std::filesystem::path& customers_path);

// Desk-scale synthetic instances: per-product popularity (uniform or
// zipf rank^-s) times multiplicative noise, clamped nonnegative.
struct SyntheticSpec {
  std::size_t customers = 0;
  std::size_t producers = 0;
  enum class Popularity { kUniform, kZipf } model = Popularity::kZipf;
  double exponent = 1.0;  // s, required > 0 for zipf
  double noise = 0.0;     // entry = popularity * (1 + noise * eps), eps ~ U[-1,1)
  std::uint64_t seed = 0;
};

LoadedInstance generate_synthetic(const SyntheticSpec& spec);

// Report rows as CSV (fixed column order strategy,k,alpha,seed,H,Z,L,Y,
// mu_phi,std_phi, floats at 6 significant digits) or as a JSON array
// mirroring all FairnessReport fields.
void write_reports(std::span<const FairnessReport> reports,
                   const std::filesystem::path& path, OutputFormat format);

// Lorenz series: columns producer_fraction,exposure_fraction (n+1 rows).
void write_lorenz_series(std::span<const std::pair<double, double>> series,
                         const std::filesystem::path& path,
                         OutputFormat format);

// Sorted utility series: columns rank,utility.
void write_utility_series(std::span<const double> series,
                          const std::filesystem::path& path,
                          OutputFormat format);

// %.6g formatting used for every float that lands in a report or series.
std::string format_sig6(double value);

}  // namespace fairrec
