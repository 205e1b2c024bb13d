#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

namespace gibbs_tv::app {

/// Real-valued noisy observation y.
///
/// File layout: one line of JSON (terminated by '\n') holding
/// {"format": "gibbs-tv-observation", "version": 1, "dtype": "float64le",
///  "width": W, "height": H, "count": W*H, "sigma": s}, followed by exactly
/// count little-endian IEEE-754 doubles.
struct Observation {
  std::size_t width = 0;
  std::size_t height = 0;
  double sigma = 0.0;
  std::vector<double> y;
};

void write_observation(const std::filesystem::path& path, const Observation& obs);
Observation read_observation(const std::filesystem::path& path);

} // namespace gibbs_tv::app
