#include "reshape/config.hpp"

#include "reshape/error.hpp"
#include "reshape/io.hpp"
#include "reshape/waveform.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <set>

namespace reshape {

using nlohmann::json;

std::vector<double> ScanAxis::values() const {
  std::vector<double> v;
  if (points < 1)
    return v;
  if (points == 1)
    return {from};
  v.resize(static_cast<std::size_t>(points));
  const double step = (to - from) / (points - 1);
  for (int i = 0; i < points; ++i)
    v[static_cast<std::size_t>(i)] = i + 1 == points ? to : from + step * i;
  return v;
}

ScenarioSpec make_scenario(ShapeTag input, ShapeTag target, double pump_scale) {
  ScenarioSpec s;
  s.name = std::string(to_string(input)) + "_to_" + std::string(to_string(target));
  s.input = input;
  s.target = target;
  s.pump_scale = pump_scale;
  if (target == ShapeTag::Se) {
    s.target_vmax = 0.97;
    s.target_eta_mm = 0.0;
  }
  return s;
}

ExperimentConfig ExperimentConfig::defaults() {
  constexpr double pi = std::numbers::pi;
  ExperimentConfig c;
  c.scenarios = {
      make_scenario(ShapeTag::S1, ShapeTag::S2, pi),
      make_scenario(ShapeTag::S2, ShapeTag::S1, pi),
      make_scenario(ShapeTag::Se, ShapeTag::S1, pi),
      make_scenario(ShapeTag::S1, ShapeTag::Se, 2.0 * pi),
  };
  c.scenarios[3].c0 = 0.1;
  return c;
}

const SignalShape& ExperimentConfig::shape(ShapeTag tag) const {
  switch (tag) {
  case ShapeTag::S1:
    return s1;
  case ShapeTag::S2:
    return s2;
  case ShapeTag::Se:
    return se;
  }
  return s1;
}

std::string Diagnostic::to_string() const {
  std::string s;
  if (line > 0)
    s += "line " + std::to_string(line) + ", column " + std::to_string(column) + ": ";
  if (!field.empty())
    s += field + ": ";
  return s + message;
}

// ---------------------------------------------------------------------------
// Reading

namespace {

class Reader {
public:
  explicit Reader(std::vector<Diagnostic>& diags) : diags_(diags) {}

  void error(const std::string& field, const std::string& msg) { diags_.push_back({field, msg}); }

  bool object(const json& parent, const std::string& key, const std::string& path, const json*& out) {
    out = nullptr;
    if (!parent.contains(key))
      return false;
    const auto& v = parent.at(key);
    if (!v.is_object()) {
      error(path, "expected an object");
      return false;
    }
    out = &v;
    return true;
  }

  void allowed(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
      if (!ok.contains(k))
        error(path + "/" + k, "unknown field");
  }

  void number(const json& obj, const std::string& path, const char* key, double& out) {
    if (!obj.contains(key))
      return;
    const auto& v = obj.at(key);
    if (!v.is_number())
      return error(path + "/" + key, "expected a number");
    out = v.get<double>();
  }

  template <class Int>
  void integer(const json& obj, const std::string& path, const char* key, Int& out) {
    if (!obj.contains(key))
      return;
    const auto& v = obj.at(key);
    if (!v.is_number_integer())
      return error(path + "/" + key, "expected an integer");
    if constexpr (std::is_unsigned_v<Int>) {
      if (v.is_number_unsigned() || v.get<long long>() >= 0)
        out = v.get<Int>();
      else
        error(path + "/" + key, "expected a non-negative integer");
    } else {
      out = v.get<Int>();
    }
  }

  void string(const json& obj, const std::string& path, const char* key, std::string& out) {
    if (!obj.contains(key))
      return;
    const auto& v = obj.at(key);
    if (!v.is_string())
      return error(path + "/" + key, "expected a string");
    out = v.get<std::string>();
  }

  template <class Enum, class ParseFn>
  void enumeration(const json& obj, const std::string& path, const char* key, Enum& out, ParseFn parse,
                   const char* choices) {
    std::string s;
    if (!obj.contains(key))
      return;
    string(obj, path, key, s);
    if (!obj.at(key).is_string())
      return;
    if (auto e = parse(s))
      out = *e;
    else
      error(path + "/" + key, "unknown value '" + s + "' (expected " + choices + ")");
  }

  void axis(const json& obj, const std::string& path, const char* key, ScanAxis& out) {
    const json* a = nullptr;
    if (!object(obj, key, path + "/" + key, a))
      return;
    const std::string p = path + "/" + key;
    allowed(*a, p, {"from", "to", "points"});
    number(*a, p, "from", out.from);
    number(*a, p, "to", out.to);
    integer(*a, p, "points", out.points);
  }

private:
  std::vector<Diagnostic>& diags_;
};

void read_shapes(Reader& r, const json& root, ExperimentConfig& c) {
  const json* shapes = nullptr;
  if (!r.object(root, "shapes", "/shapes", shapes))
    return;
  r.allowed(*shapes, "/shapes", {"S1", "S2", "Se"});
  const json* s = nullptr;
  if (r.object(*shapes, "S1", "/shapes/S1", s)) {
    r.allowed(*s, "/shapes/S1", {"mode_width_ps"});
    r.number(*s, "/shapes/S1", "mode_width_ps", c.s1.mode_width_ps);
  }
  if (r.object(*shapes, "S2", "/shapes/S2", s)) {
    r.allowed(*s, "/shapes/S2", {"mode_width_ps"});
    r.number(*s, "/shapes/S2", "mode_width_ps", c.s2.mode_width_ps);
  }
  if (r.object(*shapes, "Se", "/shapes/Se", s)) {
    r.allowed(*s, "/shapes/Se", {"rise_ps", "tau_ps", "onset_ps"});
    r.number(*s, "/shapes/Se", "rise_ps", c.se.rise_ps);
    r.number(*s, "/shapes/Se", "tau_ps", c.se.tau_ps);
    r.number(*s, "/shapes/Se", "onset_ps", c.se.onset_ps);
  }
}

void read_waveguide(Reader& r, const json& root, WaveguideModel& wg) {
  const json* w = nullptr;
  if (!r.object(root, "waveguide", "/waveguide", w))
    return;
  const std::string p = "/waveguide";
  r.allowed(*w, p,
            {"length", "kappa", "walkoff_signal_ps", "walkoff_sf_ps", "gvd_signal_ps2", "gvd_sf_ps2", "gvd_pump_ps2",
             "z_steps", "phase_mismatch", "splitting"});
  r.number(*w, p, "length", wg.length);
  r.number(*w, p, "kappa", wg.kappa);
  r.number(*w, p, "walkoff_signal_ps", wg.walkoff_signal_ps);
  r.number(*w, p, "walkoff_sf_ps", wg.walkoff_sf_ps);
  r.number(*w, p, "gvd_signal_ps2", wg.gvd_signal_ps2);
  r.number(*w, p, "gvd_sf_ps2", wg.gvd_sf_ps2);
  r.number(*w, p, "gvd_pump_ps2", wg.gvd_pump_ps2);
  r.integer(*w, p, "z_steps", wg.z_steps);
  r.number(*w, p, "phase_mismatch", wg.phase_mismatch);
  r.enumeration(*w, p, "splitting", wg.splitting, parse_splitting, "strang or yoshida4");
}

void read_optimizer(Reader& r, const json& root, ExperimentConfig& c) {
  const json* o = nullptr;
  if (!r.object(root, "optimizer", "/optimizer", o))
    return;
  const std::string p = "/optimizer";
  auto& cfg = c.optimizer;
  r.allowed(*o, p,
            {"mode", "max_iters", "max_evaluations", "a0", "A", "alpha", "c0", "gamma", "seed", "stall_window", "mask",
             "attempts"});
  r.enumeration(*o, p, "mode", cfg.mode, parse_optimizer_mode, "spsa_gradient or greedy_accept");
  r.integer(*o, p, "max_iters", cfg.max_iters);
  r.integer(*o, p, "max_evaluations", cfg.max_evaluations);
  r.number(*o, p, "a0", cfg.a0);
  r.number(*o, p, "A", cfg.A);
  r.number(*o, p, "alpha", cfg.alpha);
  r.number(*o, p, "c0", cfg.c0);
  r.number(*o, p, "gamma", cfg.gamma);
  r.integer(*o, p, "seed", cfg.seed);
  r.integer(*o, p, "stall_window", cfg.stall_window);
  r.enumeration(*o, p, "mask", cfg.mask, parse_coordinate_mask, "both, amplitudes or phases");
  r.integer(*o, p, "attempts", c.attempts);
}

void read_scenarios(Reader& r, const json& root, ExperimentConfig& c) {
  if (!root.contains("scenarios"))
    return;
  const auto& arr = root.at("scenarios");
  if (!arr.is_array())
    return r.error("/scenarios", "expected an array");
  c.scenarios.clear();
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = "/scenarios/" + std::to_string(i);
    const auto& s = arr[i];
    if (!s.is_object()) {
      r.error(p, "expected an object");
      continue;
    }
    r.allowed(s, p,
              {"name", "input", "target", "pump_scale", "target_vmax", "target_eta_mm", "scale_scan", "delay_scan_ps", "c0"});
    ShapeTag input = ShapeTag::S1, target = ShapeTag::S2;
    bool tags_ok = true;
    for (auto [key, tag] : {std::pair{"input", &input}, std::pair{"target", &target}}) {
      if (!s.contains(key)) {
        r.error(p + "/" + key, "missing shape tag");
        tags_ok = false;
        continue;
      }
      const auto& v = s.at(key);
      const auto parsed = v.is_string() ? parse_shape_tag(v.get<std::string>()) : std::nullopt;
      if (!parsed) {
        r.error(p + "/" + key, "shape tag must be one of S1, S2, Se");
        tags_ok = false;
      } else {
        *tag = *parsed;
      }
    }
    ScenarioSpec spec = make_scenario(input, target, std::numbers::pi);
    r.string(s, p, "name", spec.name);
    r.number(s, p, "pump_scale", spec.pump_scale);
    r.number(s, p, "target_vmax", spec.target_vmax);
    r.number(s, p, "target_eta_mm", spec.target_eta_mm);
    r.axis(s, p, "scale_scan", spec.scale_scan);
    r.axis(s, p, "delay_scan_ps", spec.delay_scan);
    if (s.contains("c0")) {
      double c0 = 0.0;
      r.number(s, p, "c0", c0);
      spec.c0 = c0;
    }
    if (tags_ok)
      c.scenarios.push_back(spec);
  }
}

void read_config(Reader& r, const json& root, ExperimentConfig& c) {
  if (!root.is_object())
    return r.error("", "config must be a JSON object");
  r.allowed(root, "",
            {"schema", "grid", "comb", "shapes", "waveguide", "optimizer", "metrics", "scenarios", "output_dir",
             "report"});
  if (!root.contains("schema"))
    r.error("/schema", std::string("missing schema field (expected '") + kExperimentSchema + "')");
  else if (!root.at("schema").is_string() || root.at("schema").get<std::string>() != kExperimentSchema)
    r.error("/schema", std::string("unsupported schema (expected '") + kExperimentSchema + "')");

  const json* o = nullptr;
  if (r.object(root, "grid", "/grid", o)) {
    r.allowed(*o, "/grid", {"window_ps", "samples"});
    r.number(*o, "/grid", "window_ps", c.window_ps);
    r.integer(*o, "/grid", "samples", c.samples);
  }
  if (r.object(root, "comb", "/comb", o)) {
    r.allowed(*o, "/comb", {"lines", "spacing_ghz", "pump_carrier_nm", "signal_carrier_nm"});
    r.integer(*o, "/comb", "lines", c.comb_lines);
    r.number(*o, "/comb", "spacing_ghz", c.spacing_ghz);
    r.number(*o, "/comb", "pump_carrier_nm", c.pump_carrier_nm);
    r.number(*o, "/comb", "signal_carrier_nm", c.signal_carrier_nm);
  }
  read_shapes(r, root, c);
  read_waveguide(r, root, c.waveguide);
  read_optimizer(r, root, c);
  if (r.object(root, "metrics", "/metrics", o)) {
    r.allowed(*o, "/metrics", {"visibility", "delay_range_ps", "coarse_steps"});
    r.enumeration(*o, "/metrics", "visibility", c.visibility_mode, parse_visibility_mode, "raw or balanced");
    if (o->contains("delay_range_ps")) {
      const auto& d = o->at("delay_range_ps");
      if (d.is_array() && d.size() == 2 && d[0].is_number() && d[1].is_number()) {
        c.visibility_scan.from_ps = d[0].get<double>();
        c.visibility_scan.to_ps = d[1].get<double>();
      } else {
        r.error("/metrics/delay_range_ps", "expected [from, to]");
      }
    }
    r.integer(*o, "/metrics", "coarse_steps", c.visibility_scan.steps);
  }
  read_scenarios(r, root, c);
  r.string(root, "", "output_dir", c.output_dir);
  if (r.object(root, "report", "/report", o)) {
    r.allowed(*o, "/report", {"phase_squelch"});
    r.number(*o, "/report", "phase_squelch", c.phase_squelch);
  }
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Runs a throwing check and converts a ConfigError into a diagnostic.
template <class Fn>
void expect(std::vector<Diagnostic>& d, const std::string& field, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    d.push_back({field, e.what()});
  }
}

} // namespace

// ---------------------------------------------------------------------------
// Checks

std::vector<Diagnostic> check_config(const ExperimentConfig& c) {
  std::vector<Diagnostic> d;
  auto fail = [&](const std::string& field, const std::string& msg) { d.push_back({field, msg}); };

  std::optional<TimeGrid> grid;
  expect(d, "/grid", [&] { grid = c.grid(); });

  if (c.comb_lines < 1)
    fail("/comb/lines", "comb needs at least one line");
  else if (c.comb_lines % 2 == 0)
    fail("/comb/lines", "comb line count must be odd");
  if (!(c.spacing_ghz > 0.0))
    fail("/comb/spacing_ghz", "must be positive");
  if (!(c.pump_carrier_nm > 0.0))
    fail("/comb/pump_carrier_nm", "must be positive");
  if (!(c.signal_carrier_nm > 0.0))
    fail("/comb/signal_carrier_nm", "must be positive");

  if (grid && c.spacing_ghz > 0.0) {
    const double period = 1e3 / c.spacing_ghz;
    if (std::abs(grid->window() - period) > 1e-9 * period)
      fail("/grid/window_ps", "window " + io::format_double(grid->window()) + " ps must equal the comb period " +
                                  io::format_double(period) + " ps");
    const double half_span_ghz = 0.5 * static_cast<double>(c.comb_lines > 0 ? c.comb_lines - 1 : 0) * c.spacing_ghz;
    if (!(half_span_ghz < grid->nyquist() * 1e3))
      fail("/comb/lines", "aliasing: comb half-span " + io::format_double(half_span_ghz) +
                              " GHz reaches the grid Nyquist frequency " + io::format_double(grid->nyquist() * 1e3) +
                              " GHz");
  }

  const std::pair<const char*, const SignalShape*> shapes[] = {
      {"/shapes/S1", &c.s1}, {"/shapes/S2", &c.s2}, {"/shapes/Se", &c.se}};
  for (const auto& [path, shape] : shapes) {
    const std::string p = path;
    if (shape->tag == ShapeTag::Se) {
      if (!(shape->rise_ps > 0.0))
        fail(p + "/rise_ps", "must be positive");
      if (!(shape->tau_ps > 0.0))
        fail(p + "/tau_ps", "must be positive");
      if (!std::isfinite(shape->onset_ps))
        fail(p + "/onset_ps", "must be finite");
    } else if (!(shape->mode_width_ps > 0.0)) {
      fail(p + "/mode_width_ps", "must be positive");
    }
    bool valid = true;
    try {
      shape->validate();
    } catch (const Error&) {
      valid = false;
    }
    if (valid && grid) {
      const double frac = outside_energy_fraction(*shape, *grid);
      if (frac > kTruncationTolerance)
        fail(p, "pulse does not fit the window (energy fraction outside " + io::format_double(frac) + ")");
    }
  }

  const auto& wg = c.waveguide;
  if (!(wg.kappa > 0.0))
    fail("/waveguide/kappa", "must be positive");
  if (!(wg.length > 0.0))
    fail("/waveguide/length", "must be positive");
  if (wg.z_steps < WaveguideModel::kMinZSteps)
    fail("/waveguide/z_steps", "must be >= " + std::to_string(WaveguideModel::kMinZSteps));

  expect(d, "/optimizer", [&] { c.optimizer.validate(); });
  if (c.attempts < 1)
    fail("/optimizer/attempts", "must be >= 1");

  if (c.visibility_scan.steps < 3)
    fail("/metrics/coarse_steps", "must be >= 3");
  if (!(c.visibility_scan.to_ps > c.visibility_scan.from_ps))
    fail("/metrics/delay_range_ps", "range must be ascending");

  std::set<std::string> names;
  for (std::size_t i = 0; i < c.scenarios.size(); ++i) {
    const auto& s = c.scenarios[i];
    const std::string p = "/scenarios/" + std::to_string(i);
    if (s.name.empty())
      fail(p + "/name", "must not be empty");
    else if (s.name.find_first_of("/\\") != std::string::npos || s.name == "." || s.name == "..")
      fail(p + "/name", "must be usable as a directory name");
    else if (!names.insert(s.name).second)
      fail(p + "/name", "duplicate scenario name '" + s.name + "'");
    if (!(s.pump_scale >= 0.0) || !std::isfinite(s.pump_scale))
      fail(p + "/pump_scale", "must be finite and >= 0");
    if (!(s.target_vmax > 0.0 && s.target_vmax <= 1.0))
      fail(p + "/target_vmax", "must lie in (0, 1]");
    if (!(s.target_eta_mm >= 0.0 && s.target_eta_mm <= 1.0))
      fail(p + "/target_eta_mm", "must lie in [0, 1]");
    for (auto [key, axis] : {std::pair{"scale_scan", &s.scale_scan}, std::pair{"delay_scan_ps", &s.delay_scan}}) {
      if (axis->points < 1)
        fail(p + "/" + key + "/points", "scan must have at least one point");
      else if (axis->points > 1 && !(axis->to > axis->from))
        fail(p + "/" + key, "scan range must be ascending");
      else if (axis->points == 1 && axis->to != axis->from)
        fail(p + "/" + key, "single-point scan needs from == to");
    }
    if (s.c0 && !(*s.c0 > 0.0))
      fail(p + "/c0", "must be positive");
    if (s.scale_scan.from < 0.0)
      fail(p + "/scale_scan/from", "pump scale factors must be >= 0");
  }

  if (!(c.phase_squelch > 0.0 && c.phase_squelch < 1.0))
    fail("/report/phase_squelch", "must lie in (0, 1)");
  if (c.output_dir.empty())
    fail("/output_dir", "must not be empty");
  return d;
}

ParseResult parse_config(const std::string& text) {
  ParseResult result;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    result.diagnostics.push_back({"", std::string("syntax error: ") + e.what(), line, col});
    return result;
  }
  ExperimentConfig c = ExperimentConfig::defaults();
  Reader reader(result.diagnostics);
  read_config(reader, root, c);
  if (!result.diagnostics.empty())
    return result;
  result.diagnostics = check_config(c);
  result.config = std::move(c);
  return result;
}

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  j["schema"] = kExperimentSchema;
  j["grid"] = {{"window_ps", c.window_ps}, {"samples", c.samples}};
  j["comb"] = {{"lines", c.comb_lines},
               {"spacing_ghz", c.spacing_ghz},
               {"pump_carrier_nm", c.pump_carrier_nm},
               {"signal_carrier_nm", c.signal_carrier_nm}};
  j["shapes"] = {{"S1", {{"mode_width_ps", c.s1.mode_width_ps}}},
                 {"S2", {{"mode_width_ps", c.s2.mode_width_ps}}},
                 {"Se", {{"rise_ps", c.se.rise_ps}, {"tau_ps", c.se.tau_ps}, {"onset_ps", c.se.onset_ps}}}};
  const auto& wg = c.waveguide;
  j["waveguide"] = {{"length", wg.length},
                    {"kappa", wg.kappa},
                    {"walkoff_signal_ps", wg.walkoff_signal_ps},
                    {"walkoff_sf_ps", wg.walkoff_sf_ps},
                    {"gvd_signal_ps2", wg.gvd_signal_ps2},
                    {"gvd_sf_ps2", wg.gvd_sf_ps2},
                    {"gvd_pump_ps2", wg.gvd_pump_ps2},
                    {"z_steps", wg.z_steps},
                    {"phase_mismatch", wg.phase_mismatch},
                    {"splitting", std::string(to_string(wg.splitting))}};
  const auto& o = c.optimizer;
  j["optimizer"] = {{"mode", std::string(to_string(o.mode))},
                    {"max_iters", o.max_iters},
                    {"max_evaluations", o.max_evaluations},
                    {"a0", o.a0},
                    {"A", o.A},
                    {"alpha", o.alpha},
                    {"c0", o.c0},
                    {"gamma", o.gamma},
                    {"seed", o.seed},
                    {"stall_window", o.stall_window},
                    {"mask", std::string(to_string(o.mask))},
                    {"attempts", c.attempts}};
  j["metrics"] = {{"visibility", std::string(to_string(c.visibility_mode))},
                  {"delay_range_ps", {c.visibility_scan.from_ps, c.visibility_scan.to_ps}},
                  {"coarse_steps", c.visibility_scan.steps}};
  j["scenarios"] = json::array();
  for (const auto& s : c.scenarios) {
    j["scenarios"].push_back({{"name", s.name},
                              {"input", std::string(to_string(s.input))},
                              {"target", std::string(to_string(s.target))},
                              {"pump_scale", s.pump_scale},
                              {"target_vmax", s.target_vmax},
                              {"target_eta_mm", s.target_eta_mm},
                              {"scale_scan", {{"from", s.scale_scan.from}, {"to", s.scale_scan.to}, {"points", s.scale_scan.points}}},
                              {"delay_scan_ps",
                               {{"from", s.delay_scan.from}, {"to", s.delay_scan.to}, {"points", s.delay_scan.points}}}});
    if (s.c0)
      j["scenarios"].back()["c0"] = *s.c0;
  }
  j["output_dir"] = c.output_dir;
  j["report"] = {{"phase_squelch", c.phase_squelch}};
  return j.dump(2) + "\n";
}

std::vector<Diagnostic> validate_config(const std::filesystem::path& path) {
  return parse_config(io::read_text(path)).diagnostics;
}

} // namespace reshape
