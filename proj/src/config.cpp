#include "nch/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "nch/error.hpp"

namespace nch {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "scheme",       "dim",          "n",           "half_width",     "epsilon",      "epsilon2",
      "delta",        "delta2",       "kappa",       "tau",            "t_end",        "log_every",
      "snapshot_every", "out_dir",    "strict_gamma0", "dealias",      "kernel",       "kernel_file",
      "image_cutoff", "ladder_levels", "reference_tau", "steady_stop", "steady_tol", "init.kind",    "init.amplitude",
      "init.value",   "init.seed",    "init.path"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strips a trailing comment that is not inside quotes.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

[[noreturn]] void fail(const ConfigDocument::Entry& e, const std::string& key, const std::string& msg) {
  if (e.line > 0) throw ParseError(e.line, key + ": " + msg);
  throw ValidationError(key + ": " + msg);
}

class Reader {
 public:
  explicit Reader(const ConfigDocument& doc) : doc_(doc) {}

  bool has(const std::string& key) const { return doc_.contains(key); }
  const ConfigDocument::Entry& entry(const std::string& key) const { return doc_.entries().at(key); }

  std::string string(const std::string& key) const {
    const auto& e = entry(key);
    std::string v = e.raw;
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    if (v.find_first_of("\"[]") != std::string::npos) fail(e, key, "expected a string, got '" + v + "'");
    return v;
  }

  double number(const std::string& key) const { return parse_number(entry(key), key, entry(key).raw); }

  long long integer(const std::string& key) const { return parse_integer(entry(key), key, entry(key).raw); }

  std::uint64_t unsigned_integer(const std::string& key) const {
    const auto& e = entry(key);
    std::uint64_t v = 0;
    const auto* end = e.raw.data() + e.raw.size();
    const auto r = std::from_chars(e.raw.data(), end, v);
    if (r.ec != std::errc() || r.ptr != end) fail(e, key, "expected a non-negative integer, got '" + e.raw + "'");
    return v;
  }

  bool boolean(const std::string& key) const {
    const auto& e = entry(key);
    if (e.raw == "true") return true;
    if (e.raw == "false") return false;
    fail(e, key, "expected true or false, got '" + e.raw + "'");
  }

  std::vector<std::string> list(const std::string& key) const {
    const auto& e = entry(key);
    const std::string& v = e.raw;
    if (v.empty() || v.front() != '[') return {v};
    if (v.back() != ']') fail(e, key, "unterminated array");
    std::vector<std::string> items;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) fail(e, key, "empty array element");
      items.push_back(item);
    }
    if (items.empty()) fail(e, key, "empty array");
    return items;
  }

  double parse_number(const ConfigDocument::Entry& e, const std::string& key, const std::string& s) const {
    double v = 0.0;
    const char* begin = s.data();
    if (!s.empty() && s.front() == '+') ++begin;
    const auto* end = s.data() + s.size();
    const auto r = std::from_chars(begin, end, v);
    if (r.ec != std::errc() || r.ptr != end || s.empty()) fail(e, key, "expected a number, got '" + s + "'");
    return v;
  }

  long long parse_integer(const ConfigDocument::Entry& e, const std::string& key, const std::string& s) const {
    long long v = 0;
    const auto* end = s.data() + s.size();
    const auto r = std::from_chars(s.data(), end, v);
    if (r.ec != std::errc() || r.ptr != end || s.empty()) fail(e, key, "expected an integer, got '" + s + "'");
    return v;
  }

 private:
  const ConfigDocument& doc_;
};

void require(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ValidationError(field + ": " + msg);
}

bool safe_string(const std::string& s) { return s.find_first_of("\"\n\r#") == std::string::npos; }

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text) {
  ConfigDocument doc;
  std::istringstream in(text);
  std::string raw_line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw_line));
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      if (line.back() != ']') throw ParseError(line_no, "malformed table header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "init") throw ParseError(line_no, "unknown table [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key");
    if (value.empty()) throw ParseError(line_no, key + ": missing value");
    const std::string full = section.empty() ? key : section + "." + key;
    if (known_keys().count(full) == 0) throw ParseError(line_no, "unknown key '" + full + "'");
    if (doc.entries_.count(full) != 0) throw ParseError(line_no, "duplicate key '" + full + "'");
    doc.entries_[full] = Entry{value, line_no};
  }
  return doc;
}

void ConfigDocument::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ValidationError("override '" + assignment + "' is not key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void ConfigDocument::set(const std::string& key, const std::string& raw) {
  if (known_keys().count(key) == 0) throw ValidationError(key + ": unknown key");
  if (raw.empty()) throw ValidationError(key + ": missing value");
  entries_[key] = Entry{raw, 0};
}

Grid RunConfig::grid() const { return Grid(dim, n, half_width); }

ModelParams RunConfig::model_params() const {
  ModelParams p;
  p.epsilon = epsilon;
  p.kappa = kappa;
  p.kernel.kind = kernel;
  p.kernel.delta = delta;
  p.kernel.image_cutoff = image_cutoff;
  p.strict_gamma0 = strict_gamma0;
  p.dealias = dealias;
  return p;
}

std::size_t RunConfig::step_count(double step) const {
  const double ratio = t_end / step;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
    std::ostringstream os;
    os << "t_end: " << format_double(t_end) << " is not a positive integer multiple of tau = "
       << format_double(step);
    throw ValidationError(os.str());
  }
  return static_cast<std::size_t>(rounded);
}

RunConfig resolve_config(const ConfigDocument& doc) {
  const Reader r(doc);
  RunConfig c;

  if (r.has("scheme")) {
    const std::string s = r.string("scheme");
    if (s == "etd1") c.scheme = Scheme::etd1;
    else if (s == "etd2") c.scheme = Scheme::etd2;
    else fail(r.entry("scheme"), "scheme", "expected etd1 or etd2, got '" + s + "'");
  }
  if (r.has("dim")) c.dim = static_cast<int>(r.integer("dim"));
  require(c.dim >= 1 && c.dim <= 3, "dim", "must be 1, 2 or 3");

  if (r.has("n")) {
    const auto items = r.list("n");
    require(items.size() == 1 || items.size() == static_cast<std::size_t>(c.dim), "n",
            "needs one value or one per axis");
    for (int a = 0; a < 3; ++a) {
      const auto& s = items[items.size() == 1 ? 0 : static_cast<std::size_t>(std::min(a, c.dim - 1))];
      const long long v = r.parse_integer(r.entry("n"), "n", s);
      require(v >= 4 && v % 2 == 0, "n", "point counts must be even and >= 4");
      c.n[static_cast<std::size_t>(a)] = static_cast<std::size_t>(v);
    }
  }
  if (r.has("half_width")) {
    const auto items = r.list("half_width");
    require(items.size() == 1 || items.size() == static_cast<std::size_t>(c.dim), "half_width",
            "needs one value or one per axis");
    for (int a = 0; a < 3; ++a) {
      const auto& s = items[items.size() == 1 ? 0 : static_cast<std::size_t>(std::min(a, c.dim - 1))];
      const double v = r.parse_number(r.entry("half_width"), "half_width", s);
      require(v > 0.0 && std::isfinite(v), "half_width", "must be positive");
      c.half_width[static_cast<std::size_t>(a)] = v;
    }
  }
  // Unused axes take the Grid convention (1 point, half-width 1); used axes
  // left at that placeholder inherit axis 0.
  for (std::size_t a = 1; a < 3; ++a) {
    if (static_cast<int>(a) >= c.dim) {
      c.n[a] = 1;
      c.half_width[a] = 1.0;
    } else if (c.n[a] == 1) {
      c.n[a] = c.n[0];
      if (!r.has("half_width")) c.half_width[a] = c.half_width[0];
    }
  }

  require(!(r.has("epsilon") && r.has("epsilon2")), "epsilon", "give either epsilon or epsilon2, not both");
  require(!(r.has("delta") && r.has("delta2")), "delta", "give either delta or delta2, not both");
  if (r.has("epsilon")) c.epsilon = r.number("epsilon");
  if (r.has("epsilon2")) {
    const double e2 = r.number("epsilon2");
    require(e2 > 0.0, "epsilon2", "must be positive");
    c.epsilon = std::sqrt(e2);
  }
  require(c.epsilon > 0.0 && std::isfinite(c.epsilon), "epsilon", "must be positive");
  if (r.has("delta")) c.delta = r.number("delta");
  if (r.has("delta2")) {
    const double d2 = r.number("delta2");
    require(d2 > 0.0, "delta2", "must be positive");
    c.delta = std::sqrt(d2);
  }
  require(c.delta > 0.0 && std::isfinite(c.delta), "delta", "must be positive");

  c.kappa = r.has("kappa") ? r.number("kappa") : default_kappa(c.scheme);
  require(c.kappa >= 0.0 && std::isfinite(c.kappa), "kappa", "must be non-negative");

  if (r.has("tau")) c.tau = r.number("tau");
  require(c.tau > 0.0 && std::isfinite(c.tau), "tau", "must be positive");
  if (r.has("t_end")) c.t_end = r.number("t_end");
  require(c.t_end > 0.0 && std::isfinite(c.t_end), "t_end", "must be positive");

  if (r.has("log_every")) {
    const long long v = r.integer("log_every");
    require(v >= 1, "log_every", "must be >= 1");
    c.log_every = static_cast<std::size_t>(v);
  }
  if (r.has("snapshot_every")) {
    const long long v = r.integer("snapshot_every");
    require(v >= 0, "snapshot_every", "must be >= 0");
    c.snapshot_every = static_cast<std::size_t>(v);
  }
  if (r.has("out_dir")) c.out_dir = r.string("out_dir");
  require(!c.out_dir.empty() && safe_string(c.out_dir), "out_dir", "must be a non-empty plain path");
  if (r.has("strict_gamma0")) c.strict_gamma0 = r.boolean("strict_gamma0");
  if (r.has("dealias")) c.dealias = r.boolean("dealias");
  if (r.has("kernel")) {
    const std::string k = r.string("kernel");
    if (k == "gaussian") c.kernel = KernelKind::gaussian;
    else if (k == "tabulated") c.kernel = KernelKind::tabulated;
    else fail(r.entry("kernel"), "kernel", "expected gaussian or tabulated, got '" + k + "'");
  }
  if (r.has("kernel_file")) c.kernel_file = r.string("kernel_file");
  require(safe_string(c.kernel_file), "kernel_file", "must be a plain path");
  require(c.kernel != KernelKind::tabulated || !c.kernel_file.empty(), "kernel_file",
          "required for a tabulated kernel");
  if (r.has("image_cutoff")) c.image_cutoff = static_cast<int>(r.integer("image_cutoff"));
  require(c.image_cutoff >= -1, "image_cutoff", "must be -1 (auto) or >= 0");
  if (r.has("ladder_levels")) c.ladder_levels = static_cast<int>(r.integer("ladder_levels"));
  require(c.ladder_levels >= 1 && c.ladder_levels <= 30, "ladder_levels", "must be in 1..30");
  if (r.has("reference_tau")) c.reference_tau = r.number("reference_tau");
  require(c.reference_tau >= 0.0 && std::isfinite(c.reference_tau), "reference_tau",
          "must be 0 (successive pairs) or a positive step");
  if (r.has("steady_stop")) c.steady_stop = r.boolean("steady_stop");
  if (r.has("steady_tol")) c.steady_tol = r.number("steady_tol");
  require(c.steady_tol > 0.0, "steady_tol", "must be positive");

  c.init.kind = c.dim == 1 ? InitKind::sine1d : (c.dim == 2 ? InitKind::sine2d : InitKind::sine3d);
  if (r.has("init.kind")) {
    const std::string k = r.string("init.kind");
    if (k == "sine1d") c.init.kind = InitKind::sine1d;
    else if (k == "sine2d") c.init.kind = InitKind::sine2d;
    else if (k == "sine3d") c.init.kind = InitKind::sine3d;
    else if (k == "random_uniform") c.init.kind = InitKind::random_uniform;
    else if (k == "constant") c.init.kind = InitKind::constant;
    else if (k == "file") c.init.kind = InitKind::file;
    else fail(r.entry("init.kind"), "init.kind", "unknown initial condition '" + k + "'");
  }
  const int needed = c.init.kind == InitKind::sine1d ? 1 : c.init.kind == InitKind::sine2d ? 2 : c.init.kind == InitKind::sine3d ? 3 : 0;
  require(needed == 0 || needed == c.dim, "init.kind", "sine initial data does not match dim");
  if (r.has("init.amplitude")) c.init.amplitude = r.number("init.amplitude");
  require(c.init.amplitude >= 0.0 && std::isfinite(c.init.amplitude), "init.amplitude", "must be non-negative");
  if (r.has("init.value")) c.init.value = r.number("init.value");
  require(std::isfinite(c.init.value), "init.value", "must be finite");
  if (r.has("init.seed")) c.init.seed = r.unsigned_integer("init.seed");
  if (r.has("init.path")) c.init.path = r.string("init.path");
  require(safe_string(c.init.path), "init.path", "must be a plain path");
  require(c.init.kind != InitKind::file || !c.init.path.empty(), "init.path", "required for kind = file");
  return c;
}

RunConfig parse_config(const std::string& text) { return resolve_config(ConfigDocument::parse(text)); }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view init_kind_name(InitKind kind) {
  switch (kind) {
    case InitKind::sine1d: return "sine1d";
    case InitKind::sine2d: return "sine2d";
    case InitKind::sine3d: return "sine3d";
    case InitKind::random_uniform: return "random_uniform";
    case InitKind::constant: return "constant";
    case InitKind::file: return "file";
  }
  return "unknown";
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  auto axes = [&](auto get) {
    std::string s = "[";
    for (int a = 0; a < c.dim; ++a) {
      if (a) s += ", ";
      s += get(static_cast<std::size_t>(a));
    }
    return s + "]";
  };
  os << "scheme = \"" << scheme_name(c.scheme) << "\"\n";
  os << "dim = " << c.dim << '\n';
  os << "n = " << axes([&](std::size_t a) { return std::to_string(c.n[a]); }) << '\n';
  os << "half_width = " << axes([&](std::size_t a) { return format_double(c.half_width[a]); }) << '\n';
  os << "epsilon = " << format_double(c.epsilon) << '\n';
  os << "delta = " << format_double(c.delta) << '\n';
  os << "kappa = " << format_double(c.kappa) << '\n';
  os << "tau = " << format_double(c.tau) << '\n';
  os << "t_end = " << format_double(c.t_end) << '\n';
  os << "log_every = " << c.log_every << '\n';
  os << "snapshot_every = " << c.snapshot_every << '\n';
  os << "out_dir = \"" << c.out_dir << "\"\n";
  os << "strict_gamma0 = " << (c.strict_gamma0 ? "true" : "false") << '\n';
  os << "dealias = " << (c.dealias ? "true" : "false") << '\n';
  os << "kernel = \"" << (c.kernel == KernelKind::gaussian ? "gaussian" : "tabulated") << "\"\n";
  if (!c.kernel_file.empty()) os << "kernel_file = \"" << c.kernel_file << "\"\n";
  os << "image_cutoff = " << c.image_cutoff << '\n';
  os << "ladder_levels = " << c.ladder_levels << '\n';
  os << "reference_tau = " << format_double(c.reference_tau) << '\n';
  os << "steady_stop = " << (c.steady_stop ? "true" : "false") << '\n';
  os << "steady_tol = " << format_double(c.steady_tol) << '\n';
  os << "\n[init]\n";
  os << "kind = \"" << init_kind_name(c.init.kind) << "\"\n";
  os << "amplitude = " << format_double(c.init.amplitude) << '\n';
  os << "value = " << format_double(c.init.value) << '\n';
  os << "seed = " << c.init.seed << '\n';
  if (!c.init.path.empty()) os << "path = \"" << c.init.path << "\"\n";
  return os.str();
}

}  // namespace nch
