#include "gibbs_tv/app/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

namespace gibbs_tv::app {

namespace {

class Cursor {
public:
  Cursor(std::span<const std::uint8_t> bytes, std::size_t start) : bytes_(bytes), pos_(start) {}

  std::size_t offset() const { return pos_; }
  bool done() const { return pos_ >= bytes_.size(); }

  void skip_space_and_comments() {
    while (!done()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (!done() && bytes_[pos_] != '\n') {
          ++pos_;
        }
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t read_uint(const char* what) {
    skip_space_and_comments();
    if (done() || !std::isdigit(bytes_[pos_])) {
      throw PgmParseError(std::string("expected ") + what, pos_);
    }
    std::size_t value = 0;
    while (!done() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000) {
        throw PgmParseError(std::string(what) + " is too large", pos_);
      }
      ++pos_;
    }
    return value;
  }

  void expect_single_whitespace() {
    if (done() || !std::isspace(bytes_[pos_])) {
      throw PgmParseError("expected whitespace before raster", pos_);
    }
    ++pos_;
  }

  std::uint8_t byte() {
    if (done()) {
      throw PgmParseError("unexpected end of raster", pos_);
    }
    return bytes_[pos_++];
  }

private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
};

} // namespace

std::vector<std::uint8_t> PgmImage::quantized() const {
  std::vector<std::uint8_t> out(pixels.size());
  std::transform(pixels.begin(), pixels.end(), out.begin(), [](double p) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(p, 0.0, 1.0) * 255.0));
  });
  return out;
}

PgmImage parse_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
    throw PgmParseError("missing P5/P2 magic number", 0);
  }
  const bool binary = bytes[1] == '5';
  Cursor cur(bytes, 2);

  PgmImage img;
  img.width = cur.read_uint("width");
  img.height = cur.read_uint("height");
  const std::size_t maxval = cur.read_uint("maxval");
  if (img.width == 0 || img.height == 0) {
    throw PgmParseError("image dimensions must be positive", cur.offset());
  }
  if (maxval == 0 || maxval > 65535) {
    throw PgmParseError("maxval must be in [1, 65535]", cur.offset());
  }
  const std::size_t count = img.width * img.height;
  const std::size_t sample_bytes = binary && maxval > 255 ? 2 : 1;
  if (binary) {
    cur.expect_single_whitespace();
  }
  // Every sample occupies at least one byte in either encoding.
  if (count / img.height != img.width || count > (bytes.size() - cur.offset()) / sample_bytes) {
    throw PgmParseError("raster shorter than " + std::to_string(img.width) + "x" +
                            std::to_string(img.height) + " samples",
                        bytes.size());
  }
  img.pixels.resize(count);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (binary) {
    for (std::size_t k = 0; k < count; ++k) {
      std::size_t v = cur.byte();
      if (sample_bytes == 2) {
        v = (v << 8) | cur.byte();
      }
      if (v > maxval) {
        throw PgmParseError("sample exceeds maxval", cur.offset() - sample_bytes);
      }
      img.pixels[k] = static_cast<double>(v) * scale;
    }
  } else {
    for (std::size_t k = 0; k < count; ++k) {
      cur.skip_space_and_comments();
      const std::size_t start = cur.offset();
      const std::size_t v = cur.read_uint("sample");
      if (v > maxval) {
        throw PgmParseError("sample exceeds maxval", start);
      }
      img.pixels[k] = static_cast<double>(v) * scale;
    }
  }
  return img;
}

PgmImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open image " + path.string());
  }
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  try {
    return parse_pgm(bytes);
  } catch (const PgmParseError& e) {
    throw PgmParseError(path.string() + ": " + e.detail(), e.offset());
  }
}

std::vector<std::uint8_t> encode_pgm(const PgmImage& image) {
  if (image.pixels.size() != image.width * image.height) {
    throw std::invalid_argument("PGM pixel count does not match dimensions");
  }
  const std::string header = "P5\n" + std::to_string(image.width) + " " +
                             std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto raster = image.quantized();
  out.insert(out.end(), raster.begin(), raster.end());
  return out;
}

void write_pgm(const std::filesystem::path& path, const PgmImage& image) {
  const auto bytes = encode_pgm(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write image " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

} // namespace gibbs_tv::app
