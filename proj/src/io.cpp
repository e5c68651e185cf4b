#include "nch/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "nch/config.hpp"
#include "nch/error.hpp"

namespace nch {

namespace {

constexpr char magic[4] = {'N', 'C', 'H', 'S'};

template <typename T>
void put_le(std::vector<unsigned char>& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<unsigned char>(bits & 0xFFu));
    bits >>= 8;
  }
}

template <typename T>
T get_le(const std::vector<unsigned char>& in, std::size_t& pos) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  if (pos + sizeof(U) > in.size()) throw TruncatedPayload("snapshot header is truncated");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(in[pos + i]) << (8 * i);
  pos += sizeof(U);
  return std::bit_cast<T>(bits);
}

double parse_csv_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (s.empty() || r.ec != std::errc() || r.ptr != end) {
    throw IoError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string runlog_csv(const RunLog& log) {
  std::string s = runlog_header;
  s += '\n';
  for (const auto& r : log.records) {
    s += std::to_string(r.step);
    for (double v : {r.time, r.energy, r.mass, r.l2, r.linf, r.hm1}) {
      s += ',';
      s += format_double(v);
    }
    s += '\n';
  }
  return s;
}

void write_runlog_csv(const RunLog& log, const std::filesystem::path& path) {
  write_text_file(path, runlog_csv(log));
}

RunLog parse_runlog_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != runlog_header) {
    throw IoError("run log must start with the header '" + std::string(runlog_header) + "'");
  }
  RunLog log;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 7) throw IoError("csv line " + std::to_string(line_no) + ": expected 7 fields");
    DiagnosticsRecord r;
    std::size_t step = 0;
    const auto* end = cells[0].data() + cells[0].size();
    const auto res = std::from_chars(cells[0].data(), end, step);
    if (res.ec != std::errc() || res.ptr != end) {
      throw IoError("csv line " + std::to_string(line_no) + ": bad step '" + cells[0] + "'");
    }
    r.step = step;
    r.time = parse_csv_double(cells[1], line_no);
    r.energy = parse_csv_double(cells[2], line_no);
    r.mass = parse_csv_double(cells[3], line_no);
    r.l2 = parse_csv_double(cells[4], line_no);
    r.linf = parse_csv_double(cells[5], line_no);
    r.hm1 = parse_csv_double(cells[6], line_no);
    log.records.push_back(r);
  }
  return log;
}

RunLog read_runlog_csv(const std::filesystem::path& path) { return parse_runlog_csv(read_text_file(path)); }

std::string rate_table_csv(const std::vector<ConvergenceRow>& rows) {
  std::string s = rate_table_header;
  s += '\n';
  for (const auto& r : rows) {
    s += format_double(r.tau) + ',' + format_double(r.error_hm1) + ',';
    if (r.rate) s += format_double(*r.rate);
    s += '\n';
  }
  return s;
}

void write_rate_table_csv(const std::vector<ConvergenceRow>& rows, const std::filesystem::path& path) {
  write_text_file(path, rate_table_csv(rows));
}

std::string fit_csv(const PowerLawFit& f) {
  std::string s = fit_header;
  s += '\n';
  s += format_double(f.m_e) + ',' + format_double(f.b_e) + ',' + format_double(f.t_min) + ',' +
       format_double(f.t_max) + ',' + format_double(f.residual) + ',' + std::to_string(f.points) + '\n';
  return s;
}

void write_fit_csv(const PowerLawFit& fit, const std::filesystem::path& path) {
  write_text_file(path, fit_csv(fit));
}

std::size_t snapshot_header_bytes(int dim) {
  return sizeof magic + 4 + 4 + 4 * static_cast<std::size_t>(dim) + 8 * static_cast<std::size_t>(dim) + 8;
}

std::vector<unsigned char> encode_snapshot(const Field& field, double time) {
  const Grid& g = field.grid();
  std::vector<unsigned char> out;
  out.reserve(snapshot_header_bytes(g.dim()) + 8 * field.size());
  out.insert(out.end(), std::begin(magic), std::end(magic));
  put_le(out, snapshot_version);
  put_le(out, static_cast<std::uint32_t>(g.dim()));
  for (int a = 0; a < g.dim(); ++a) put_le(out, static_cast<std::uint32_t>(g.n(a)));
  for (int a = 0; a < g.dim(); ++a) put_le(out, g.half_width(a));
  put_le(out, time);
  for (double v : field.values()) put_le(out, v);
  return out;
}

Snapshot decode_snapshot(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < sizeof magic) throw TruncatedPayload("snapshot shorter than its magic");
  if (std::memcmp(bytes.data(), magic, sizeof magic) != 0) throw BadMagic("not an NCHS snapshot");
  std::size_t pos = sizeof magic;
  const auto version = get_le<std::uint32_t>(bytes, pos);
  if (version != snapshot_version) {
    throw VersionMismatch("snapshot version " + std::to_string(version) + ", expected " +
                          std::to_string(snapshot_version));
  }
  const auto dim = get_le<std::uint32_t>(bytes, pos);
  if (dim < 1 || dim > 3) throw IoError("snapshot dimension " + std::to_string(dim) + " out of range");
  std::array<std::size_t, 3> n{1, 1, 1};
  std::array<double, 3> x{1.0, 1.0, 1.0};
  for (std::uint32_t a = 0; a < dim; ++a) n[a] = get_le<std::uint32_t>(bytes, pos);
  for (std::uint32_t a = 0; a < dim; ++a) x[a] = get_le<double>(bytes, pos);
  const double time = get_le<double>(bytes, pos);
  Grid grid;
  try {
    grid = Grid(static_cast<int>(dim), n, x);
  } catch (const ValidationError& e) {
    throw IoError(std::string("snapshot grid: ") + e.what());
  }
  const std::size_t payload = 8 * grid.size();
  if (bytes.size() - pos < payload) {
    throw TruncatedPayload("snapshot payload has " + std::to_string(bytes.size() - pos) + " bytes, expected " +
                           std::to_string(payload));
  }
  if (bytes.size() - pos > payload) throw IoError("snapshot has trailing bytes");
  std::vector<double> values(grid.size());
  for (auto& v : values) v = get_le<double>(bytes, pos);
  return Snapshot{Field(grid, std::move(values)), time};
}

void write_snapshot(const Field& field, double time, const std::filesystem::path& path) {
  const auto bytes = encode_snapshot(field, time);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace nch
