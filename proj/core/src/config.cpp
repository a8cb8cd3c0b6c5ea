#include "weylband/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "weylband/errors.hpp"

namespace weylband {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

double parse_number(const std::string& tok, int lineno) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(lineno) + ": expected a number, got '" +
                      tok + "'");
  }
}

std::vector<double> parse_array(const std::string& tok, int lineno) {
  std::vector<double> out;
  std::string inner = trim(tok.substr(1, tok.size() - 2));
  if (inner.empty()) return out;
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(trim(item), lineno));
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Value {
  enum Kind { number, string, boolean, array } kind;
  double num = 0.0;
  std::string str;
  bool b = false;
  std::vector<double> arr;
};

Value parse_value(const std::string& tok, int lineno) {
  Value v{Value::number, 0, "", false, {}};
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
    v.kind = Value::string;
    v.str = tok.substr(1, tok.size() - 2);
  } else if (tok == "true" || tok == "false") {
    v.kind = Value::boolean;
    v.b = tok == "true";
  } else if (!tok.empty() && tok.front() == '[') {
    if (tok.back() != ']')
      throw ConfigError("config line " + std::to_string(lineno) + ": unterminated array");
    v.kind = Value::array;
    v.arr = parse_array(tok, lineno);
  } else {
    v.kind = Value::number;
    v.num = parse_number(tok, lineno);
  }
  return v;
}

double need_number(const Value& v, const std::string& key, int lineno) {
  if (v.kind != Value::number)
    throw ConfigError("config line " + std::to_string(lineno) + ": key '" + key +
                      "' expects a number");
  return v.num;
}

}  // namespace

double eps_for(const BandSection& band, double h) {
  if (band.eps_is_exponent) return std::pow(h, band.eps_value);
  return band.eps_value;
}

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "surface" && section != "observable" && section != "band" &&
          section != "numerics" && section != "output" && section != "dampedwave")
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown section [" +
                          section + "]");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    Value val = parse_value(trim(line.substr(eq + 1)), lineno);

    auto unknown = [&]() {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                        "' in section [" + section + "]");
    };

    if (section == "surface") {
      if (key == "family") {
        if (val.kind != Value::string) throw ConfigError("surface.family expects a string");
        cfg.surface.family = val.str;
      } else {
        cfg.surface.params[key] = need_number(val, key, lineno);
      }
    } else if (section == "observable") {
      if (key == "kind") {
        if (val.kind != Value::string) throw ConfigError("observable.kind expects a string");
        cfg.observable.kind = val.str;
      } else {
        cfg.observable.params[key] = need_number(val, key, lineno);
      }
    } else if (section == "band") {
      if (key == "e2") cfg.band.e2 = need_number(val, key, lineno);
      else if (key == "e4") cfg.band.e4 = need_number(val, key, lineno);
      else if (key == "f3") cfg.band.f3 = need_number(val, key, lineno);
      else if (key == "f1") cfg.band.f1 = need_number(val, key, lineno);
      else if (key == "eps") {
        if (val.kind == Value::number) {
          cfg.band.eps_is_exponent = false;
          cfg.band.eps_value = val.num;
        } else if (val.kind == Value::string) {
          if (val.str.rfind("h^", 0) != 0)
            throw ConfigError("band.eps string must look like \"h^0.5\"");
          cfg.band.eps_is_exponent = true;
          cfg.band.eps_value = parse_number(val.str.substr(2), lineno);
        } else {
          throw ConfigError("band.eps expects a number or \"h^alpha\"");
        }
      } else {
        unknown();
      }
    } else if (section == "numerics") {
      if (key == "h_list") {
        if (val.kind == Value::array)
          cfg.numerics.h_list = val.arr;
        else
          cfg.numerics.h_list = {need_number(val, key, lineno)};
      } else if (key == "grid_n") {
        cfg.numerics.grid_n = static_cast<int>(need_number(val, key, lineno));
      } else if (key == "quad_tol") {
        cfg.numerics.quad_tol = need_number(val, key, lineno);
      } else if (key == "ode_tol") {
        cfg.numerics.ode_tol = need_number(val, key, lineno);
      } else if (key == "admissible_grid_n") {
        cfg.numerics.admissible_grid_n = static_cast<int>(need_number(val, key, lineno));
      } else if (key == "transversality_tol") {
        cfg.numerics.transversality_tol = need_number(val, key, lineno);
      } else if (key == "a_margin") {
        cfg.numerics.a_margin = need_number(val, key, lineno);
      } else if (key == "m_buffer") {
        cfg.numerics.m_buffer = static_cast<int>(need_number(val, key, lineno));
      } else if (key == "classical_a_grid") {
        cfg.numerics.classical_a_grid = static_cast<int>(need_number(val, key, lineno));
      } else if (key == "seed") {
        cfg.numerics.seed = static_cast<long long>(need_number(val, key, lineno));
      } else if (key == "mc_samples") {
        cfg.numerics.mc_samples = static_cast<long long>(need_number(val, key, lineno));
      } else {
        unknown();
      }
    } else if (section == "output") {
      if (key == "dir") {
        if (val.kind != Value::string) throw ConfigError("output.dir expects a string");
        cfg.output.dir = val.str;
      } else if (key == "svg") {
        if (val.kind != Value::boolean) throw ConfigError("output.svg expects a boolean");
        cfg.output.svg = val.b;
      } else {
        unknown();
      }
    } else if (section == "dampedwave") {
      if (key == "tau_lo") cfg.dampedwave.tau_lo = need_number(val, key, lineno);
      else if (key == "tau_hi") cfg.dampedwave.tau_hi = need_number(val, key, lineno);
      else if (key == "box_im_lo") cfg.dampedwave.box_im_lo = need_number(val, key, lineno);
      else if (key == "box_im_hi") cfg.dampedwave.box_im_hi = need_number(val, key, lineno);
      else if (key == "grid_n") cfg.dampedwave.grid_n = static_cast<int>(need_number(val, key, lineno));
      else if (key == "basis_margin") cfg.dampedwave.basis_margin = need_number(val, key, lineno);
      else unknown();
    } else {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": key outside of any section");
    }
  }
  if (cfg.numerics.h_list.empty()) throw ConfigError("numerics.h_list must not be empty");
  for (std::size_t i = 1; i < cfg.numerics.h_list.size(); ++i)
    if (!(cfg.numerics.h_list[i] < cfg.numerics.h_list[i - 1]))
      throw ConfigError("numerics.h_list must be strictly decreasing");
  for (double tol : {cfg.numerics.quad_tol, cfg.numerics.ode_tol})
    if (!(tol > 0.0)) throw ConfigError("numerics tolerances must be positive");
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string to_toml(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "[surface]\n";
  out << "family = \"" << cfg.surface.family << "\"\n";
  for (const auto& [k, v] : cfg.surface.params) out << k << " = " << format_double(v) << "\n";
  out << "\n[observable]\n";
  out << "kind = \"" << cfg.observable.kind << "\"\n";
  for (const auto& [k, v] : cfg.observable.params)
    out << k << " = " << format_double(v) << "\n";
  out << "\n[band]\n";
  out << "e2 = " << format_double(cfg.band.e2) << "\n";
  out << "e4 = " << format_double(cfg.band.e4) << "\n";
  out << "f3 = " << format_double(cfg.band.f3) << "\n";
  out << "f1 = " << format_double(cfg.band.f1) << "\n";
  if (cfg.band.eps_is_exponent)
    out << "eps = \"h^" << format_double(cfg.band.eps_value) << "\"\n";
  else
    out << "eps = " << format_double(cfg.band.eps_value) << "\n";
  out << "\n[numerics]\n";
  out << "h_list = [";
  for (std::size_t i = 0; i < cfg.numerics.h_list.size(); ++i) {
    if (i) out << ", ";
    out << format_double(cfg.numerics.h_list[i]);
  }
  out << "]\n";
  out << "grid_n = " << cfg.numerics.grid_n << "\n";
  out << "quad_tol = " << format_double(cfg.numerics.quad_tol) << "\n";
  out << "ode_tol = " << format_double(cfg.numerics.ode_tol) << "\n";
  out << "admissible_grid_n = " << cfg.numerics.admissible_grid_n << "\n";
  out << "transversality_tol = " << format_double(cfg.numerics.transversality_tol) << "\n";
  out << "a_margin = " << format_double(cfg.numerics.a_margin) << "\n";
  out << "m_buffer = " << cfg.numerics.m_buffer << "\n";
  out << "classical_a_grid = " << cfg.numerics.classical_a_grid << "\n";
  out << "seed = " << cfg.numerics.seed << "\n";
  out << "mc_samples = " << cfg.numerics.mc_samples << "\n";
  out << "\n[output]\n";
  out << "dir = \"" << cfg.output.dir << "\"\n";
  out << "svg = " << (cfg.output.svg ? "true" : "false") << "\n";
  out << "\n[dampedwave]\n";
  out << "tau_lo = " << format_double(cfg.dampedwave.tau_lo) << "\n";
  out << "tau_hi = " << format_double(cfg.dampedwave.tau_hi) << "\n";
  out << "box_im_lo = " << format_double(cfg.dampedwave.box_im_lo) << "\n";
  out << "box_im_hi = " << format_double(cfg.dampedwave.box_im_hi) << "\n";
  out << "grid_n = " << cfg.dampedwave.grid_n << "\n";
  out << "basis_margin = " << format_double(cfg.dampedwave.basis_margin) << "\n";
  return out.str();
}

}  // namespace weylband
