#include "reshape/io.hpp"

#include "reshape/error.hpp"
#include "reshape/waveform.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace reshape::io {

using nlohmann::json;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out)
    throw Error("write to '" + path.string() + "' failed");
}

std::string format_double(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

namespace {

double parse_double(const std::string& s) {
  if (s == "nan")
    return std::nan("");
  if (s == "inf")
    return INFINITY;
  if (s == "-inf")
    return -INFINITY;
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw Error("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path, const std::string& header) : path_(path) { text_ << header << '\n'; }

  template <class... T>
  void row(const T&... cells) {
    bool first = true;
    ((text_ << (first ? "" : ",") << cell(cells), first = false), ...);
    text_ << '\n';
  }

  void close() { write_text(path_, text_.str()); }

private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string& s) { return s; }

  std::filesystem::path path_;
  std::ostringstream text_;
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v, 16);
  return std::string(buf, r.ptr);
}

} // namespace

// ---------------------------------------------------------------------------
// Comb

std::string comb_to_string(const FrequencyComb& comb) {
  json j;
  j["schema"] = kCombSchema;
  j["carrier_nm"] = comb.carrier_nm();
  j["spacing_ghz"] = comb.spacing_ghz();
  j["lines"] = json::array();
  for (const auto& l : comb.lines())
    j["lines"].push_back({{"amplitude", l.amplitude}, {"phase", l.phase}});
  return j.dump(2) + "\n";
}

FrequencyComb comb_from_string(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.value("schema", std::string{}) != kCombSchema)
      throw Error(std::string("comb file: expected schema '") + kCombSchema + "'");
    std::vector<CombLine> lines;
    for (const auto& l : j.at("lines"))
      lines.push_back({l.at("amplitude").get<double>(), l.at("phase").get<double>()});
    return FrequencyComb(j.at("carrier_nm").get<double>(), j.at("spacing_ghz").get<double>(), std::move(lines));
  } catch (const json::exception& e) {
    throw Error(std::string("comb file: ") + e.what());
  }
}

void write_comb(const std::filesystem::path& path, const FrequencyComb& comb) { write_text(path, comb_to_string(comb)); }
FrequencyComb read_comb(const std::filesystem::path& path) { return comb_from_string(read_text(path)); }

// ---------------------------------------------------------------------------
// CSV

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name)
      return i;
  throw Error("csv: no column named '" + name + "'");
}

std::vector<double> CsvTable::numbers(const std::string& name) const {
  const auto c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows)
    out.push_back(parse_double(r.at(c)));
  return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  CsvTable t;
  std::string line;
  if (!std::getline(in, line))
    throw Error("csv '" + path.string() + "' is empty");
  t.header = split(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r")
      continue;
    auto cells = split(line);
    if (cells.size() != t.header.size())
      throw Error("csv '" + path.string() + "' line " + std::to_string(lineno) + ": expected " +
                  std::to_string(t.header.size()) + " cells");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

void write_envelope(const std::filesystem::path& path, const ComplexEnvelope& env, double squelch_threshold) {
  const TimeGrid& g = env.grid();
  if (squelch_threshold > 0.0) {
    const auto phase = squelch_phase(env, squelch_threshold);
    CsvWriter w(path, "t_ps,re,im,abs,phase_rad");
    for (std::size_t i = 0; i < env.size(); ++i)
      w.row(g.time(i), env[i].real(), env[i].imag(), std::abs(env[i]), phase[i]);
    w.close();
  } else {
    CsvWriter w(path, "t_ps,re,im");
    for (std::size_t i = 0; i < env.size(); ++i)
      w.row(g.time(i), env[i].real(), env[i].imag());
    w.close();
  }
}

ComplexEnvelope read_envelope(const std::filesystem::path& path, const TimeGrid& grid, double carrier_nm) {
  const auto t = read_csv(path);
  const auto ts = t.numbers("t_ps"), re = t.numbers("re"), im = t.numbers("im");
  if (ts.size() != grid.samples())
    throw Error("envelope '" + path.string() + "' has " + std::to_string(ts.size()) + " samples, grid has " +
                std::to_string(grid.samples()));
  std::vector<cplx> v(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (std::abs(ts[i] - grid.time(i)) > 1e-9 * grid.window())
      throw Error("envelope '" + path.string() + "' time column does not match the grid");
    v[i] = {re[i], im[i]};
  }
  return ComplexEnvelope(grid, std::move(v), carrier_nm);
}

void write_visibility_curve(const std::filesystem::path& path, const VisibilityCurve& curve) {
  CsvWriter w(path, "delay_ps,V");
  for (std::size_t i = 0; i < curve.delays.size(); ++i)
    w.row(curve.delays[i], curve.values[i]);
  w.close();
}

VisibilityCurve read_visibility_curve(const std::filesystem::path& path) {
  const auto t = read_csv(path);
  VisibilityCurve c;
  c.delays = t.numbers("delay_ps");
  c.values = t.numbers("V");
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    if (i == 0 || c.values[i] > c.v_max) {
      c.v_max = c.values[i];
      c.argmax_delay = c.delays[i];
    }
  }
  return c;
}

void write_trace(const std::filesystem::path& path, const OptimizationTrace& trace) {
  CsvWriter w(path, "iteration,objective,vmax_so_far,params_checksum,accepted");
  for (const auto& r : trace.records)
    w.row(r.iteration, r.objective, r.vmax_so_far, hex64(r.checksum), r.accepted ? 1 : 0);
  w.close();
}

std::vector<TraceRecord> read_trace(const std::filesystem::path& path) {
  const auto t = read_csv(path);
  const auto it = t.numbers("iteration"), obj = t.numbers("objective"), vm = t.numbers("vmax_so_far"),
             acc = t.numbers("accepted");
  const auto cs = t.column("params_checksum");
  std::vector<TraceRecord> out(t.rows.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& s = t.rows[i][cs];
    std::uint64_t sum = 0;
    if (std::from_chars(s.data(), s.data() + s.size(), sum, 16).ec != std::errc{})
      throw Error("trace '" + path.string() + "': bad checksum '" + s + "'");
    out[i] = {static_cast<int>(it[i]), obj[i], vm[i], sum, acc[i] != 0.0};
  }
  return out;
}

void write_scan(const std::filesystem::path& path, const std::vector<ScanPoint>& scan) {
  CsvWriter w(path, "pump_scale,delay_ps,v_max,eta_mm,eta_r");
  for (const auto& p : scan)
    w.row(p.pump_scale, p.delay_ps, p.v_max, p.eta_mm, p.eta_r);
  w.close();
}

std::vector<ScanPoint> read_scan(const std::filesystem::path& path) {
  const auto t = read_csv(path);
  const auto s = t.numbers("pump_scale"), d = t.numbers("delay_ps"), v = t.numbers("v_max"), m = t.numbers("eta_mm"),
             r = t.numbers("eta_r");
  std::vector<ScanPoint> out(s.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = {s[i], d[i], v[i], m[i], r[i]};
  return out;
}

} // namespace reshape::io
