#include "gibbs_tv/app/pgm.hpp"
#include "gibbs_tv/rng.hpp"

#include <doctest.h>

#include <filesystem>
#include <string>

using namespace gibbs_tv;
using namespace gibbs_tv::app;

namespace {
std::vector<std::uint8_t> bytes(const std::string& s) { return {s.begin(), s.end()}; }

std::size_t error_offset(const std::vector<std::uint8_t>& b) {
  try {
    parse_pgm(b);
  } catch (const PgmParseError& e) {
    return e.offset();
  }
  FAIL("no parse error");
  return 0;
}
} // namespace

TEST_CASE("P5 round trip reproduces bytes exactly") {
  SeededStream rng(1, {StreamPurpose::Test, 0, 0});
  PgmImage img{13, 7, std::vector<double>(91)};
  for (auto& p : img.pixels) {
    p = static_cast<double>(rng.uniform_index(256)) / 255.0;
  }
  const auto encoded = encode_pgm(img);
  const auto back = parse_pgm(encoded);
  CHECK(back.width == 13);
  CHECK(back.height == 7);
  CHECK(back.quantized() == img.quantized());
  CHECK(encode_pgm(back) == encoded);

  const auto path = std::filesystem::temp_directory_path() / "gibbs_tv_roundtrip.pgm";
  write_pgm(path, img);
  CHECK(read_pgm(path).quantized() == img.quantized());
  std::filesystem::remove(path);
}

TEST_CASE("quantization clamps and rounds") {
  const PgmImage img{4, 1, {-0.3, 0.5, 1.7, 0.002}};
  CHECK(img.quantized() == std::vector<std::uint8_t>{0, 128, 255, 1});
  const auto enc = encode_pgm(img);
  CHECK(std::string(enc.begin(), enc.begin() + 11) == "P5\n4 1\n255\n");
}

TEST_CASE("ASCII P2 with comments and 16-bit P5") {
  const auto p2 = parse_pgm(bytes("P2\n# comment\n3 1 # trailing\n10\n0 5\n10\n"));
  CHECK(p2.pixels == std::vector<double>{0.0, 0.5, 1.0});
  std::string raw = "P5 2 1 65535\n";
  raw += std::string("\x00\x00\xff\xff", 4);
  const auto p16 = parse_pgm(bytes(raw));
  CHECK(p16.pixels == std::vector<double>{0.0, 1.0});
}

TEST_CASE("malformed images report byte offsets") {
  CHECK(error_offset(bytes("P6\n1 1\n255\nx")) == 0);
  CHECK_THROWS_AS(parse_pgm(bytes("P5\n0 4\n255\n")), PgmParseError);
  CHECK_THROWS_AS(parse_pgm(bytes("P5\n1 1\n0\n\x01")), PgmParseError);
  const auto shortr = bytes("P5\n4 4\n255\nab");
  CHECK(error_offset(shortr) == 13);
  CHECK(error_offset(bytes("P2\n2 1\n10\n3 11\n")) == 12);
  CHECK_THROWS_AS(parse_pgm(bytes("P5\n99999999999 99999999999\n255\n")), PgmParseError);
  try {
    parse_pgm(shortr);
  } catch (const PgmParseError& e) {
    CHECK(std::string(e.what()).find("at byte 13") != std::string::npos);
  }
  CHECK_THROWS(read_pgm("/nonexistent/image.pgm"));
}
