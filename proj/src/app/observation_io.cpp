#include "gibbs_tv/app/observation_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace gibbs_tv::app {

namespace {

constexpr const char* kFormat = "gibbs-tv-observation";

std::array<char, 8> to_le_bytes(double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> out{};
  for (auto& b : out) {
    b = static_cast<char>(bits & 0xffU);
    bits >>= 8;
  }
  return out;
}

double from_le_bytes(const std::array<char, 8>& in) {
  std::uint64_t bits = 0;
  for (int k = 7; k >= 0; --k) {
    bits = (bits << 8) | static_cast<std::uint8_t>(in[static_cast<std::size_t>(k)]);
  }
  return std::bit_cast<double>(bits);
}

} // namespace

void write_observation(const std::filesystem::path& path, const Observation& obs) {
  if (obs.y.size() != obs.width * obs.height) {
    throw std::invalid_argument("observation size does not match its dimensions");
  }
  const nlohmann::json header = {
      {"format", kFormat}, {"version", 1},         {"dtype", "float64le"},
      {"width", obs.width}, {"height", obs.height}, {"count", obs.y.size()},
      {"sigma", obs.sigma},
  };
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write observation " + path.string());
  }
  out << header.dump() << '\n';
  for (const double v : obs.y) {
    const auto bytes = to_le_bytes(v);
    out.write(bytes.data(), bytes.size());
  }
  if (!out) {
    throw std::runtime_error("write failed for observation " + path.string());
  }
}

Observation read_observation(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open observation " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path.string() + ": missing observation header");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": malformed observation header: " + e.what());
  }
  if (header.value("format", "") != kFormat || header.value("dtype", "") != "float64le") {
    throw std::runtime_error(path.string() + ": not a float64le observation file");
  }
  Observation obs;
  obs.width = header.at("width").get<std::size_t>();
  obs.height = header.at("height").get<std::size_t>();
  obs.sigma = header.value("sigma", 0.0);
  const auto count = header.at("count").get<std::size_t>();
  if (count != obs.width * obs.height) {
    throw std::runtime_error(path.string() + ": count does not match width*height");
  }
  obs.y.resize(count);
  std::array<char, 8> buf{};
  for (std::size_t k = 0; k < count; ++k) {
    if (!in.read(buf.data(), buf.size())) {
      throw std::runtime_error(path.string() + ": truncated after " + std::to_string(k) +
                               " of " + std::to_string(count) + " values");
    }
    obs.y[k] = from_le_bytes(buf);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error(path.string() + ": trailing bytes after observation data");
  }
  return obs;
}

} // namespace gibbs_tv::app
