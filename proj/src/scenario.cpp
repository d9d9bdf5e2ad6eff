#include "dsoar/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dsoar/lie.hpp"

namespace dsoar {

using nlohmann::json;

namespace {

// Reads known keys from one JSON object and rejects anything else.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail_at(path_.empty() ? "<root>" : path_, "expected an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    const std::string where = qualified(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) fail_at(where, "expected a number");
        out = it->template get<double>();
      } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer()) fail_at(where, "expected an integer");
        if (std::is_unsigned_v<T> && !it->is_number_unsigned()) {
          fail_at(where, "expected a nonnegative integer");
        }
        out = it->template get<T>();
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) fail_at(where, "expected a string");
        out = it->template get<std::string>();
      } else {
        out = it->template get<T>();
      }
    } catch (const json::exception& e) {
      fail_at(where, e.what());
    }
  }

  /// Returns the nested object, or an empty one when absent.
  const json& child(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? empty() : *it;
  }

  const json* raw(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail_at(qualified(key), "unknown key");
    }
  }

  [[noreturn]] static void fail_at(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
  }

 private:
  static const json& empty() {
    static const json e = json::object();
    return e;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

WindCouplingSign read_sign(const json& v) {
  if (v.is_number_integer()) {
    const int s = v.get<int>();
    if (s == 1) return WindCouplingSign::kPositive;
    if (s == -1) return WindCouplingSign::kNegative;
  } else if (v.is_string()) {
    try {
      return parse_wind_coupling_sign(v.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  throw ConfigError("wind_sign: expected +1 or -1");
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t i = 0; i + 1 < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

void Scenario::validate() const {
  auto prefixed = [](const std::string& prefix, auto&& f) {
    try {
      f();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(prefix + e.what());
    }
  };
  prefixed("bird.", [&] {
    BirdWindParams b = bird;
    b.wind = WindParams{};
    b.validate();
  });
  prefixed("wind.", [&] { bird.wind.validate(); });
  prefixed("esc.", [&] { esc.validate(); });
  prefixed("initial_state.", [&] { initial_state.validate(); });
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end: must be > 0");
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("h: must be > 0");
  if (h > t_end) throw ConfigError("h: must not exceed t_end");
  if (output_dir.empty()) throw ConfigError("output_dir: must not be empty");
  if (!(phases.prominence > 0.0)) throw ConfigError("phases.prominence: must be > 0");
  if (!(phases.turn_window > 0.0)) throw ConfigError("phases.turn_window: must be > 0");

  static const char* kSystems[] = {"dynamic_soaring", "ground_robot", "example2", "driftless"};
  if (std::find(std::begin(kSystems), std::end(kSystems), larc.system) == std::end(kSystems)) {
    throw ConfigError("larc.system: unknown system '" + larc.system +
                      "' (expected dynamic_soaring, ground_robot, example2, driftless)");
  }
  const int controls = larc.system == "ground_robot" ? 2 : 1;
  for (const auto& b : larc.brackets) {
    prefixed("larc.brackets: ", [&] { (void)FormalBracket::parse(b, controls); });
  }
  if (!(larc.rank_tol > 0.0 && larc.rank_tol < 1.0)) {
    throw ConfigError("larc.rank_tol: must be in (0, 1)");
  }
  if (larc.max_w0 < 1) throw ConfigError("larc.max_w0: must be >= 1");
  if (larc.max_w < 1) throw ConfigError("larc.max_w: must be >= 1");

  if (!(demo_esc.omega > 0.0)) throw ConfigError("demo_esc.omega: must be > 0");
  if (!(demo_esc.t_end > 0.0)) throw ConfigError("demo_esc.t_end: must be > 0");
  if (!(demo_esc.h > 0.0)) throw ConfigError("demo_esc.h: must be > 0");
  if (!std::isfinite(demo_esc.x0)) throw ConfigError("demo_esc.x0: not finite");
  if (!std::isfinite(demo_esc.x_star)) throw ConfigError("demo_esc.x_star: not finite");

  if (!(demo_chenfliess.t_end > 0.0)) throw ConfigError("demo_chenfliess.t_end: must be > 0");
  if (demo_chenfliess.trials < 1) throw ConfigError("demo_chenfliess.trials: must be >= 1");
  if (demo_chenfliess.pieces < 1) throw ConfigError("demo_chenfliess.pieces: must be >= 1");
  if (!(demo_chenfliess.bound >= 0.0)) throw ConfigError("demo_chenfliess.bound: must be >= 0");
  if (!(demo_chenfliess.ode_h > 0.0)) throw ConfigError("demo_chenfliess.ode_h: must be > 0");
}

Scenario parse_scenario(std::string_view text, const std::string& source) {
  Scenario s;
  const bool blank = std::all_of(text.begin(), text.end(),
                                 [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  if (blank) {
    s.validate();
    return s;
  }

  json root;
  try {
    root = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte);
    std::string what = e.what();
    const auto pos = what.find("] ");
    if (pos != std::string::npos) what = what.substr(pos + 2);
    if (what.rfind("parse error at line", 0) == 0) {
      const auto colon = what.find(": ");
      if (colon != std::string::npos) what = what.substr(colon + 2);
    }
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": parse error: " + what);
  }

  Section top(root, "");

  Section bird(top.child("bird"), "bird");
  bird.read("mass", s.bird.mass);
  bird.read("wing_area", s.bird.wing_area);
  bird.read("cd0", s.bird.cd0);
  bird.read("k_induced", s.bird.k_induced);
  bird.read("rho", s.bird.rho);
  bird.read("g", s.bird.g);
  bird.read("cl_fixed", s.bird.cl_fixed);
  bird.finish();

  Section wind(top.child("wind"), "wind");
  wind.read("w0", s.bird.wind.w0);
  wind.read("delta", s.bird.wind.delta);
  wind.finish();

  Section esc(top.child("esc"), "esc");
  esc.read("a", s.esc.a);
  esc.read("b", s.esc.b);
  esc.read("omega", s.esc.omega);
  esc.read("mu", s.esc.mu);
  esc.finish();

  Section x0(top.child("initial_state"), "initial_state");
  x0.read("x", s.initial_state.x);
  x0.read("y", s.initial_state.y);
  x0.read("z", s.initial_state.z);
  x0.read("V", s.initial_state.v);
  x0.read("gamma", s.initial_state.gamma);
  x0.read("psi", s.initial_state.psi);
  x0.read("phi", s.initial_state.phi);
  x0.finish();

  top.read("t_end", s.t_end);
  top.read("h", s.h);
  if (const json* sign = top.raw("wind_sign")) s.wind_sign = read_sign(*sign);
  top.read("output_dir", s.output_dir);
  if (const json* ref = top.raw("reference")) {
    if (ref->is_null()) {
      s.reference.reset();
    } else if (ref->is_string()) {
      s.reference = ref->get<std::string>();
    } else {
      throw ConfigError("reference: expected a path string or null");
    }
  }

  Section phases(top.child("phases"), "phases");
  phases.read("prominence", s.phases.prominence);
  phases.read("turn_window", s.phases.turn_window);
  phases.finish();

  Section larc(top.child("larc"), "larc");
  larc.read("system", s.larc.system);
  if (const json* br = larc.raw("brackets")) {
    if (!br->is_array()) throw ConfigError("larc.brackets: expected an array of strings");
    for (const auto& b : *br) {
      if (!b.is_string()) throw ConfigError("larc.brackets: expected an array of strings");
      s.larc.brackets.push_back(b.get<std::string>());
    }
  }
  larc.read("rank_tol", s.larc.rank_tol);
  larc.read("max_w0", s.larc.max_w0);
  larc.read("max_w", s.larc.max_w);
  larc.finish();

  Section demo(top.child("demo_esc"), "demo_esc");
  demo.read("x0", s.demo_esc.x0);
  demo.read("x_star", s.demo_esc.x_star);
  demo.read("omega", s.demo_esc.omega);
  demo.read("t_end", s.demo_esc.t_end);
  demo.read("h", s.demo_esc.h);
  demo.finish();

  Section cf(top.child("demo_chenfliess"), "demo_chenfliess");
  cf.read("t_end", s.demo_chenfliess.t_end);
  cf.read("trials", s.demo_chenfliess.trials);
  cf.read("pieces", s.demo_chenfliess.pieces);
  cf.read("bound", s.demo_chenfliess.bound);
  cf.read("seed", s.demo_chenfliess.seed);
  cf.read("ode_h", s.demo_chenfliess.ode_h);
  cf.finish();

  top.finish();
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

json to_json(const Scenario& s) {
  json j;
  j["bird"] = {{"mass", s.bird.mass},           {"wing_area", s.bird.wing_area},
               {"cd0", s.bird.cd0},             {"k_induced", s.bird.k_induced},
               {"rho", s.bird.rho},             {"g", s.bird.g},
               {"cl_fixed", s.bird.cl_fixed}};
  j["wind"] = {{"w0", s.bird.wind.w0}, {"delta", s.bird.wind.delta}};
  j["esc"] = {{"a", s.esc.a}, {"b", s.esc.b}, {"omega", s.esc.omega}, {"mu", s.esc.mu}};
  j["initial_state"] = {{"x", s.initial_state.x},         {"y", s.initial_state.y},
                        {"z", s.initial_state.z},         {"V", s.initial_state.v},
                        {"gamma", s.initial_state.gamma}, {"psi", s.initial_state.psi},
                        {"phi", s.initial_state.phi}};
  j["t_end"] = s.t_end;
  j["h"] = s.h;
  j["wind_sign"] = static_cast<int>(s.wind_sign);
  j["output_dir"] = s.output_dir;
  j["reference"] = s.reference ? json(*s.reference) : json(nullptr);
  j["phases"] = {{"prominence", s.phases.prominence}, {"turn_window", s.phases.turn_window}};
  j["larc"] = {{"system", s.larc.system},
               {"brackets", s.larc.brackets},
               {"rank_tol", s.larc.rank_tol},
               {"max_w0", s.larc.max_w0},
               {"max_w", s.larc.max_w}};
  j["demo_esc"] = {{"x0", s.demo_esc.x0},
                   {"x_star", s.demo_esc.x_star},
                   {"omega", s.demo_esc.omega},
                   {"t_end", s.demo_esc.t_end},
                   {"h", s.demo_esc.h}};
  j["demo_chenfliess"] = {{"t_end", s.demo_chenfliess.t_end},
                          {"trials", s.demo_chenfliess.trials},
                          {"pieces", s.demo_chenfliess.pieces},
                          {"bound", s.demo_chenfliess.bound},
                          {"seed", s.demo_chenfliess.seed},
                          {"ode_h", s.demo_chenfliess.ode_h}};
  return j;
}

}  // namespace dsoar
