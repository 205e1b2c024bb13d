#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gibbs_tv::app {

/// Greyscale image with intensities in [0,1] (0 black, 1 white).
struct PgmImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> pixels; ///< row-major

  /// On-disk bytes: round(clamp(p, 0, 1) * 255).
  std::vector<std::uint8_t> quantized() const;
};

class PgmParseError : public std::runtime_error {
public:
  PgmParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), detail_(what),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }
  const std::string& detail() const { return detail_; }

private:
  std::string detail_;
  std::size_t offset_;
};

/// Accepts binary P5 (8- or 16-bit) and ASCII P2. Pixels are value / maxval.
PgmImage parse_pgm(std::span<const std::uint8_t> bytes);
PgmImage read_pgm(const std::filesystem::path& path);

/// Binary P5 with maxval 255.
std::vector<std::uint8_t> encode_pgm(const PgmImage& image);
void write_pgm(const std::filesystem::path& path, const PgmImage& image);

} // namespace gibbs_tv::app
