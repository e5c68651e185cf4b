#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>

#include "nch/error.hpp"
#include "nch/experiments.hpp"
#include "nch/io.hpp"

using namespace nch;
namespace fs = std::filesystem;

namespace {

const fs::path fixtures{NCH_FIXTURE_DIR};

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nch_test_io";
  fs::create_directories(dir);
  return dir / name;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

RunLog fixture_log() {
  RunLog log;
  for (std::size_t step = 0; step < 4; ++step) {
    const double s = static_cast<double>(step);
    log.records.push_back({step, s * 0.01, 1.0 / (1.0 + s), 0.0, 0.5 + 0.125 * s, 0.75 - 0.0625 * s, 0.1 / (2.0 + s)});
  }
  return log;
}

}  // namespace

TEST_CASE("run log CSV layout") {
  RunLog empty;
  CHECK(runlog_csv(empty) == "step,time,energy,mass,l2,linf,hm1\n");
  RunLog one;
  one.records.push_back({0, 0.0, 1.0, 0.0, 0.5, 0.5, 0.25});
  const std::string text = runlog_csv(one);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.back() == '\n');
}

TEST_CASE("run log CSV round trips bit-exactly") {
  RunLog log;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  log.records.push_back({0, 0.0, 1.0 / 3.0, -2.0 / 7.0, std::sqrt(2.0), 5e-324, nan});
  log.records.push_back({17, 0.1 + 0.2, 1e300, -0.0, 123456.789, 1e-17, 0.3183098861837907});
  const fs::path p = scratch("log.csv");
  write_runlog_csv(log, p);
  const RunLog back = read_runlog_csv(p);
  REQUIRE(back.records.size() == log.records.size());
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    const auto& a = log.records[i];
    const auto& b = back.records[i];
    CHECK(a.step == b.step);
    CHECK(same_bits(a.time, b.time));
    CHECK(same_bits(a.energy, b.energy));
    CHECK(same_bits(a.mass, b.mass));
    CHECK(same_bits(a.l2, b.l2));
    CHECK(same_bits(a.linf, b.linf));
    CHECK((std::isnan(a.hm1) ? std::isnan(b.hm1) : same_bits(a.hm1, b.hm1)));
  }
}

TEST_CASE("malformed run logs are rejected") {
  CHECK_THROWS_AS(parse_runlog_csv("time,energy\n"), IoError);
  CHECK_THROWS_AS(parse_runlog_csv("step,time,energy,mass,l2,linf,hm1\n1,2,3\n"), IoError);
  CHECK_THROWS_AS(parse_runlog_csv("step,time,energy,mass,l2,linf,hm1\nx,0,0,0,0,0,0\n"), IoError);
  CHECK_THROWS_AS(parse_runlog_csv("step,time,energy,mass,l2,linf,hm1\n1,0,zz,0,0,0,0\n"), IoError);
  CHECK_THROWS_AS(read_runlog_csv(scratch("does_not_exist.csv")), IoError);
}

TEST_CASE("writers reproduce the checked-in fixtures byte for byte") {
  CHECK(runlog_csv(fixture_log()) == read_text_file(fixtures / "runlog.csv"));

  const auto rows = rate_table({0.005, 0.0025, 0.00125}, {4e-5, 2e-5, 5e-6});
  CHECK(rate_table_csv(rows) == read_text_file(fixtures / "rates.csv"));

  PowerLawFit fit{-0.314, 21.08, 0.1, 1.0, 0.0, 12};
  CHECK(fit_csv(fit) == read_text_file(fixtures / "fit.csv"));

  const Grid g(2, {4, 6, 1}, {1.0, 1.5, 1.0});
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 0.25 * static_cast<double>(i) - 1.0;
  const auto bytes = encode_snapshot(f, 0.5);
  const std::string disk = read_text_file(fixtures / "snapshot_2d.nchs");
  REQUIRE(disk.size() == bytes.size());
  CHECK(std::memcmp(disk.data(), bytes.data(), bytes.size()) == 0);

  const Snapshot s = read_snapshot(fixtures / "snapshot_2d.nchs");
  CHECK(s.field.grid() == g);
  CHECK(s.time == 0.5);
  const RunLog parsed = read_runlog_csv(fixtures / "runlog.csv");
  CHECK(runlog_csv(parsed) == runlog_csv(fixture_log()));
}

TEST_CASE("snapshot round trip") {
  const Grid g(2, {8, 12, 1}, {1.0, 2.0, 1.0});
  const Field f = random_uniform_field(g, 3.0, 31);
  const fs::path p = scratch("field.nchs");
  write_snapshot(f, 12.5, p);
  CHECK(fs::file_size(p) == snapshot_header_bytes(2) + 8 * g.size());
  const Snapshot s = read_snapshot(p);
  CHECK(s.time == 12.5);
  CHECK(s.field.grid() == g);
  CHECK(std::memcmp(s.field.values().data(), f.values().data(), 8 * f.size()) == 0);
}

TEST_CASE("snapshot header sizes") {
  CHECK(snapshot_header_bytes(1) == 32);
  CHECK(snapshot_header_bytes(2) == 44);
  CHECK(snapshot_header_bytes(3) == 56);
  const Grid g = Grid::uniform(3, 80, 1.0);
  CHECK(encode_snapshot(Field(g), 0.0).size() == 56 + 8 * 80 * 80 * 80);
}

TEST_CASE("corrupt snapshots") {
  const Grid g = Grid::uniform(1, 8, 1.0);
  const auto good = encode_snapshot(Field(g, 1.0), 0.0);

  auto truncated = good;
  truncated.resize(good.size() - 3);
  CHECK_THROWS_AS(decode_snapshot(truncated), TruncatedPayload);
  auto header_only = good;
  header_only.resize(10);
  CHECK_THROWS_AS(decode_snapshot(header_only), TruncatedPayload);

  auto magic = good;
  magic[0] = 'X';
  CHECK_THROWS_AS(decode_snapshot(magic), BadMagic);

  auto version = good;
  version[4] = 2;
  CHECK_THROWS_AS(decode_snapshot(version), VersionMismatch);

  auto trailing = good;
  trailing.push_back(0);
  CHECK_THROWS_AS(decode_snapshot(trailing), IoError);

  auto odd = good;
  odd[12] = 7;  // n[0] = 7
  CHECK_THROWS_AS(decode_snapshot(odd), IoError);

  try {
    decode_snapshot(truncated);
  } catch (const Error& e) {
    CHECK(e.exit_code() == ExitCode::io);
  }
  CHECK_THROWS_AS(read_snapshot(scratch("missing.nchs")), IoError);
}
