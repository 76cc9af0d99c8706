#pragma once
// Run artifacts: per-period simulation series and per-episode training
// diagnostics, plus their CSV schemas.

#include <filesystem>
#include <vector>

#include "growthlab/csvio.hpp"

namespace growthlab {

// One simulated period. Matches the series CSV column order.
struct SeriesRow {
  long t = 0;   // period index (global across episodes in training traces)
  double k = 0; // capital at the start of the period
  double z = 0; // shock level at the start of the period
  double s = 0; // total resources z * k^alpha
  double a = 0; // executed consumption share (post clip)
  double c = 0; // consumption a * s
  double r = 0; // reward (floored log utility)
};

// One training episode's summary line. Matches the diagnostics CSV columns.
struct DiagRow {
  long episode = 0;
  double critic_loss = 0; // mean pre-update loss over the episode's updates
  double neg_j = 0;       // mean -J over the episode's updates
  double mean_reward = 0;
  double sigma = 0;       // mean exploration scale over the episode
  double d_e = 0;         // policy distance to the analytical benchmark
};

struct RunArtifact {
  std::vector<SeriesRow> series;
  std::vector<DiagRow> diagnostics;
};

inline void write_series_csv(const std::vector<SeriesRow>& rows,
                             const std::filesystem::path& path) {
  CsvWriter w(path);
  w.row("t", "k", "z", "s", "a", "c", "r");
  for (const auto& r : rows) w.row(r.t, r.k, r.z, r.s, r.a, r.c, r.r);
}

inline void write_diagnostics_csv(const std::vector<DiagRow>& rows,
                                  const std::filesystem::path& path) {
  CsvWriter w(path);
  w.row("episode", "critic_loss", "neg_j", "mean_reward", "sigma", "d_e");
  for (const auto& r : rows) {
    w.row(r.episode, r.critic_loss, r.neg_j, r.mean_reward, r.sigma, r.d_e);
  }
}

inline std::vector<SeriesRow> read_series_csv(const std::filesystem::path& path) {
  CsvFile f = read_csv(path);
  const std::size_t ct = f.col("t"), ck = f.col("k"), cz = f.col("z"), cs = f.col("s");
  const std::size_t ca = f.col("a"), cc = f.col("c"), cr = f.col("r");
  std::vector<SeriesRow> rows;
  rows.reserve(f.rows.size());
  for (const auto& cells : f.rows) {
    SeriesRow r;
    r.t = static_cast<long>(parse_double(cells[ct], "series t"));
    r.k = parse_double(cells[ck], "series k");
    r.z = parse_double(cells[cz], "series z");
    r.s = parse_double(cells[cs], "series s");
    r.a = parse_double(cells[ca], "series a");
    r.c = parse_double(cells[cc], "series c");
    r.r = parse_double(cells[cr], "series r");
    rows.push_back(r);
  }
  return rows;
}

}  // namespace growthlab
