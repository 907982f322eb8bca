#include "sapg/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace sapg {

SolverConfig ExperimentConfig::solver(Algorithm algo) const {
  SolverConfig cfg;
  cfg.algorithm = algo;
  cfg.max_iters = run.iters;
  cfg.trace_every = run.stride;
  cfg.record_wall_time = run.record_wall_time;
  switch (algo) {
    case Algorithm::Sapg:
      cfg.mu0 = sapg_mu0;
      cfg.L = sapg_L;
      cfg.Lprime = sapg_Lprime;
      break;
    case Algorithm::Spg:
      cfg.mu0 = spg_mu0;
      cfg.L = spg_L;
      cfg.Lprime = spg_Lprime;
      cfg.spg_mu_exponent = spg_mu_exponent;
      break;
    case Algorithm::Subgrad:
      cfg.subgrad_step_c = subgrad_step_c;
      break;
  }
  return cfg;
}

namespace {

struct Cursor {
  std::string file;
  int line = 0;

  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError(file + ":" + std::to_string(line) + ": " + message, line);
  }
};

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
    ++b;
  }
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
    --e;
  }
  return s.substr(b, e - b);
}

double parse_double(const std::string& value, const Cursor& at) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) {
      at.fail("trailing characters in number '" + value + "'");
    }
    return v;
  } catch (const std::logic_error&) {
    at.fail("expected a number, got '" + value + "'");
  }
}

long long parse_int(const std::string& value, const Cursor& at) {
  long long v = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    at.fail("expected an integer, got '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& value, const Cursor& at) {
  if (value == "true" || value == "yes" || value == "on" || value == "1") {
    return true;
  }
  if (value == "false" || value == "no" || value == "off" || value == "0") {
    return false;
  }
  at.fail("expected a boolean, got '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& value, const Cursor& at) {
  std::vector<int> out;
  std::string piece;
  std::istringstream in(value);
  while (std::getline(in, piece, ',')) {
    std::istringstream words(piece);
    std::string word;
    while (words >> word) {
      out.push_back(static_cast<int>(parse_int(word, at)));
    }
  }
  return out;
}

SupportPattern parse_support(const std::string& value, const Cursor& at) {
  if (value == "left") {
    return SupportPattern::LeftEdge;
  }
  if (value == "right") {
    return SupportPattern::RightEdge;
  }
  if (value == "bottom") {
    return SupportPattern::BottomEdge;
  }
  if (value == "top") {
    return SupportPattern::TopEdge;
  }
  at.fail("expected left, right, bottom or top, got '" + value + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in, const std::string& name) {
  ExperimentConfig cfg;
  Cursor at{name, 0};
  std::string section;
  bool has_volume = false, has_xmin = false;

  std::string raw;
  while (std::getline(in, raw)) {
    ++at.line;
    const std::size_t comment = raw.find_first_of("#;");
    std::string line = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        at.fail("unterminated section header '" + line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "instance" && section != "sapg" && section != "spg" &&
          section != "subgrad" && section != "run") {
        at.fail("unknown section '" + section + "'");
      }
      cfg.sections_present.insert(section);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      at.fail("expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      at.fail("empty key");
    }
    if (section.empty()) {
      at.fail("key '" + key + "' before any [section]");
    }

    if (section == "instance") {
      if (key == "cols") {
        cfg.instance.cols = static_cast<int>(parse_int(value, at));
      } else if (key == "rows") {
        cfg.instance.rows = static_cast<int>(parse_int(value, at));
      } else if (key == "spacing") {
        cfg.instance.spacing = parse_double(value, at);
      } else if (key == "connectivity") {
        cfg.instance.connectivity = static_cast<int>(parse_int(value, at));
      } else if (key == "support") {
        cfg.instance.support = parse_support(value, at);
      } else if (key == "loaded_nodes") {
        cfg.instance.loaded_nodes = parse_int_list(value, at);
      } else if (key == "ellipse_horizontal") {
        cfg.instance.ellipse_horizontal = parse_double(value, at);
      } else if (key == "ellipse_vertical") {
        cfg.instance.ellipse_vertical = parse_double(value, at);
      } else if (key == "ellipse_interpretation") {
        if (value == "full_axis") {
          cfg.instance.ellipse_full_axis = true;
        } else if (value == "semi_axis") {
          cfg.instance.ellipse_full_axis = false;
        } else {
          at.fail("expected full_axis or semi_axis, got '" + value + "'");
        }
      } else if (key == "young_modulus") {
        cfg.instance.young_modulus = parse_double(value, at);
      } else if (key == "volume_budget") {
        cfg.instance.volume_budget = parse_double(value, at);
        has_volume = true;
      } else if (key == "x_min") {
        cfg.instance.x_min = parse_double(value, at);
        has_xmin = true;
      } else {
        at.fail("unknown key '" + key + "' in [instance]");
      }
    } else if (section == "sapg") {
      if (key == "mu0") {
        cfg.sapg_mu0 = parse_double(value, at);
      } else if (key == "L") {
        cfg.sapg_L = parse_double(value, at);
      } else if (key == "Lprime") {
        cfg.sapg_Lprime = parse_double(value, at);
      } else {
        at.fail("unknown key '" + key + "' in [sapg]");
      }
    } else if (section == "spg") {
      if (key == "mu0") {
        cfg.spg_mu0 = parse_double(value, at);
      } else if (key == "L") {
        cfg.spg_L = parse_double(value, at);
      } else if (key == "Lprime") {
        cfg.spg_Lprime = parse_double(value, at);
      } else if (key == "mu_exponent") {
        cfg.spg_mu_exponent = parse_double(value, at);
      } else {
        at.fail("unknown key '" + key + "' in [spg]");
      }
    } else if (section == "subgrad") {
      if (key == "step_c") {
        cfg.subgrad_step_c = parse_double(value, at);
      } else {
        at.fail("unknown key '" + key + "' in [subgrad]");
      }
    } else if (section == "run") {
      if (key == "iters") {
        cfg.run.iters = static_cast<int>(parse_int(value, at));
      } else if (key == "stride") {
        cfg.run.stride = static_cast<int>(parse_int(value, at));
      } else if (key == "seed") {
        cfg.run.seed = static_cast<std::uint64_t>(parse_int(value, at));
      } else if (key == "out") {
        cfg.run.out_dir = value;
      } else if (key == "timing") {
        if (value == "none") {
          cfg.run.record_wall_time = false;
        } else if (value == "wall") {
          cfg.run.record_wall_time = true;
        } else {
          at.fail("expected none or wall, got '" + value + "'");
        }
      } else if (key == "lyapunov") {
        cfg.run.lyapunov = parse_bool(value, at);
      } else if (key == "svg") {
        cfg.run.svg = parse_bool(value, at);
      } else if (key == "reference_f") {
        if (!value.empty()) {
          cfg.run.reference_f = parse_double(value, at);
        }
      } else if (key == "reference_factor") {
        cfg.run.reference_factor = static_cast<int>(parse_int(value, at));
      } else if (key == "polish_iters") {
        cfg.run.polish_iters = static_cast<int>(parse_int(value, at));
      } else if (key == "polish_mu") {
        cfg.run.polish_mu = parse_double(value, at);
      } else {
        at.fail("unknown key '" + key + "' in [run]");
      }
    }
  }

  if (!has_volume) {
    throw ConfigError(name + ": missing required key 'volume_budget' in [instance]");
  }
  if (!has_xmin) {
    throw ConfigError(name + ": missing required key 'x_min' in [instance]");
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  return parse_experiment_config(in, path);
}

}  // namespace sapg
