#pragma once

// Flat key = value run configuration. Every key is listed in config_keys()
// with its unit; anything else is rejected.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "qdm/errors.hpp"
#include "qdm/model.hpp"
#include "qdm/sweeps.hpp"

namespace qdm {

struct RunConfig {
  ModelKind kind = ModelKind::qdm;
  BandAlignment alignment = BandAlignment::reference;
  ModelParams params;
  double d = 2.0;  // nm; sets Te, Th unless they are given explicitly
  bool Te_explicit = false;
  bool Th_explicit = false;

  LogAxis gamma_grid{1e-6, 1e6, 200};
  LogAxis gamma_c_grid{1.0, 500.0, 40};
  LogAxis gamma_v_grid{1e-4, 20.0, 40};
  std::vector<double> distances = default_distances();
  std::vector<BandAlignment> alignments{kAllAlignments.begin(), kAllAlignments.end()};
  std::vector<double> phonon_rates{0.001, 0.01, 0.1};
  std::vector<double> phonon_distances{2.0, 10.0};
  double hbar_gamma_min = 1e-4;
  double hbar_gamma_max = 1e-2;
  int hbar_gamma_points = 9;

  std::string output = "-";
  std::uint64_t seed = 20240607;
  int random_sets = 100;

  // Physical parameters with distance and alignment applied.
  ModelParams resolved_params() const {
    ModelParams p = apply_band_alignment(params, alignment);
    const Tunneling t = tunneling_from_distance(d);
    if (!Te_explicit) p.Te = t.Te;
    if (!Th_explicit) p.Th = t.Th;
    return p;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("key '" + key + "': '" + std::string(v) + "' is not a number");
  }
  return out;
}

template <typename Int>
Int parse_int(const std::string& key, std::string_view v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("key '" + key + "': '" + std::string(v) + "' is not an integer");
  }
  return out;
}

inline std::vector<std::string> split_list(std::string_view v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const auto end = comma == std::string_view::npos ? v.size() : comma;
    std::string item = trim(v.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::vector<double> parse_double_list(const std::string& key, std::string_view v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F&& f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += f(v[i]);
  }
  return s;
}

}  // namespace detail

struct ConfigKey {
  std::string_view name;
  std::string_view unit;
  void (*set)(RunConfig&, const std::string& key, std::string_view value);
  std::string (*get)(const RunConfig&);
};

#define QDM_PARAM_KEY(field, unit)                                                             \
  ConfigKey {                                                                                  \
    #field, unit,                                                                              \
        [](RunConfig& c, const std::string& k, std::string_view v) {                           \
          c.params.field = detail::parse_double(k, v);                                         \
        },                                                                                     \
        [](const RunConfig& c) { return detail::format_double(c.params.field); }               \
  }

#define QDM_AXIS_KEYS(prefix, axis, unit)                                                      \
  ConfigKey{prefix "_min", unit,                                                               \
            [](RunConfig& c, const std::string& k, std::string_view v) {                       \
              c.axis.min = detail::parse_double(k, v);                                         \
            },                                                                                 \
            [](const RunConfig& c) { return detail::format_double(c.axis.min); }},             \
      ConfigKey{prefix "_max", unit,                                                           \
                [](RunConfig& c, const std::string& k, std::string_view v) {                   \
                  c.axis.max = detail::parse_double(k, v);                                     \
                },                                                                             \
                [](const RunConfig& c) { return detail::format_double(c.axis.max); }},         \
      ConfigKey {                                                                              \
    prefix "_points", "count",                                                                 \
        [](RunConfig& c, const std::string& k, std::string_view v) {                           \
          c.axis.points = detail::parse_int<int>(k, v);                                        \
        },                                                                                     \
        [](const RunConfig& c) { return std::to_string(c.axis.points); }                       \
  }

inline const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys{
      {"model", "qdm|sqd",
       [](RunConfig& c, const std::string&, std::string_view v) { c.kind = parse_model_kind(v); },
       [](const RunConfig& c) { return std::string(to_string(c.kind)); }},
      {"alignment", "0|A1|A2|B1|B2",
       [](RunConfig& c, const std::string&, std::string_view v) { c.alignment = parse_alignment(v); },
       [](const RunConfig& c) { return std::string(to_string(c.alignment)); }},
      {"d", "nm",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.d = detail::parse_double(k, v); },
       [](const RunConfig& c) { return detail::format_double(c.d); }},
      QDM_PARAM_KEY(E12, "meV"),
      QDM_PARAM_KEY(delta_e, "meV"),
      QDM_PARAM_KEY(delta_h, "meV"),
      QDM_PARAM_KEY(delta_c, "meV"),
      QDM_PARAM_KEY(delta_v, "meV"),
      {"Te", "meV or fit(d)",
       [](RunConfig& c, const std::string& k, std::string_view v) {
         c.Te_explicit = v != "fit(d)";
         if (c.Te_explicit) c.params.Te = detail::parse_double(k, v);
       },
       [](const RunConfig& c) {
         return c.Te_explicit ? detail::format_double(c.params.Te) : std::string("fit(d)");
       }},
      {"Th", "meV or fit(d)",
       [](RunConfig& c, const std::string& k, std::string_view v) {
         c.Th_explicit = v != "fit(d)";
         if (c.Th_explicit) c.params.Th = detail::parse_double(k, v);
       },
       [](const RunConfig& c) {
         return c.Th_explicit ? detail::format_double(c.params.Th) : std::string("fit(d)");
       }},
      QDM_PARAM_KEY(gamma1, "gamma"),
      QDM_PARAM_KEY(gamma2, "gamma"),
      QDM_PARAM_KEY(gamma_c, "gamma"),
      QDM_PARAM_KEY(gamma_v, "gamma"),
      QDM_PARAM_KEY(Gamma, "gamma"),
      QDM_PARAM_KEY(gamma_13, "gamma"),
      QDM_PARAM_KEY(gamma_24, "gamma"),
      QDM_PARAM_KEY(kTs, "meV"),
      QDM_PARAM_KEY(kTc, "meV"),
      QDM_PARAM_KEY(hbar_gamma, "meV"),
      QDM_AXIS_KEYS("Gamma", gamma_grid, "gamma"),
      QDM_AXIS_KEYS("gamma_c", gamma_c_grid, "gamma"),
      QDM_AXIS_KEYS("gamma_v", gamma_v_grid, "gamma"),
      {"distances", "nm list",
       [](RunConfig& c, const std::string& k, std::string_view v) {
         c.distances = detail::parse_double_list(k, v);
       },
       [](const RunConfig& c) { return detail::join(c.distances, detail::format_double); }},
      {"alignments", "list of 0|A1|A2|B1|B2",
       [](RunConfig& c, const std::string& k, std::string_view v) {
         c.alignments.clear();
         for (const auto& item : detail::split_list(v)) c.alignments.push_back(parse_alignment(item));
         if (c.alignments.empty()) throw ConfigError("key '" + k + "': empty list");
       },
       [](const RunConfig& c) {
         return detail::join(c.alignments, [](BandAlignment a) { return std::string(to_string(a)); });
       }},
      {"phonon_rates", "gamma list",
       [](RunConfig& c, const std::string& k, std::string_view v) {
         c.phonon_rates = detail::parse_double_list(k, v);
       },
       [](const RunConfig& c) { return detail::join(c.phonon_rates, detail::format_double); }},
      {"phonon_distances", "nm list",
       [](RunConfig& c, const std::string& k, std::string_view v) {
         c.phonon_distances = detail::parse_double_list(k, v);
       },
       [](const RunConfig& c) { return detail::join(c.phonon_distances, detail::format_double); }},
      {"hbar_gamma_min", "meV",
       [](RunConfig& c, const std::string& k, std::string_view v) {
         c.hbar_gamma_min = detail::parse_double(k, v);
       },
       [](const RunConfig& c) { return detail::format_double(c.hbar_gamma_min); }},
      {"hbar_gamma_max", "meV",
       [](RunConfig& c, const std::string& k, std::string_view v) {
         c.hbar_gamma_max = detail::parse_double(k, v);
       },
       [](const RunConfig& c) { return detail::format_double(c.hbar_gamma_max); }},
      {"hbar_gamma_points", "count",
       [](RunConfig& c, const std::string& k, std::string_view v) {
         c.hbar_gamma_points = detail::parse_int<int>(k, v);
       },
       [](const RunConfig& c) { return std::to_string(c.hbar_gamma_points); }},
      {"output", "path, - for stdout",
       [](RunConfig& c, const std::string&, std::string_view v) { c.output = std::string(v); },
       [](const RunConfig& c) { return c.output; }},
      {"seed", "integer",
       [](RunConfig& c, const std::string& k, std::string_view v) {
         c.seed = detail::parse_int<std::uint64_t>(k, v);
       },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"random_sets", "count",
       [](RunConfig& c, const std::string& k, std::string_view v) {
         c.random_sets = detail::parse_int<int>(k, v);
       },
       [](const RunConfig& c) { return std::to_string(c.random_sets); }},
  };
  return keys;
}

#undef QDM_PARAM_KEY
#undef QDM_AXIS_KEYS

inline void set_config_value(RunConfig& c, const std::string& key, std::string_view value) {
  for (const ConfigKey& k : config_keys()) {
    if (k.name == key) {
      k.set(c, key, detail::trim(value));
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

// Reads `key = value` lines; '#' starts a comment.
inline void apply_config_text(RunConfig& c, std::istream& in, const std::string& origin = "config") {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      set_config_value(c, detail::trim(std::string_view(t).substr(0, eq)),
                       std::string_view(t).substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

inline void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  apply_config_text(c, in, path);
}

// Accepts "--key=value" (or "key=value").
inline void apply_override(RunConfig& c, std::string_view arg) {
  if (arg.substr(0, 2) == "--") arg.remove_prefix(2);
  const auto eq = arg.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(arg) + "' must have the form --key=value");
  }
  set_config_value(c, std::string(arg.substr(0, eq)), arg.substr(eq + 1));
}

// Cross-field checks that do not belong to any single key.
inline void validate(const RunConfig& c) {
  try {
    const ModelParams p = c.resolved_params();
    p.validate();
    (void)derive_level_energies(p, c.kind);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const GeometryError& e) {
    throw ConfigError(e.what());
  }
  for (const LogAxis* a : {&c.gamma_grid, &c.gamma_c_grid, &c.gamma_v_grid}) {
    (void)log_space(a->min, a->max, a->points);
  }
  if (c.gamma_grid.points < kMinCurvePoints) {
    throw ConfigError("Gamma_points must be >= " + std::to_string(kMinCurvePoints));
  }
  for (double d : c.distances) {
    if (!(d > 0.0)) throw ConfigError("distances must be > 0 nm");
  }
  for (double d : c.phonon_distances) {
    if (!(d > 0.0)) throw ConfigError("phonon_distances must be > 0 nm");
  }
  for (double r : c.phonon_rates) {
    if (!(r >= 0.0)) throw ConfigError("phonon_rates must be >= 0");
  }
  if (!(c.hbar_gamma_min > 0.0) || !(c.hbar_gamma_max > c.hbar_gamma_min) || c.hbar_gamma_points < 2) {
    throw ConfigError("hbar_gamma scan needs 0 < min < max and at least 2 points");
  }
  if (c.random_sets < 1) throw ConfigError("random_sets must be >= 1");
}

// "key = value  # unit" for every key, in registry order.
inline std::vector<std::string> describe(const RunConfig& c) {
  std::vector<std::string> out;
  for (const ConfigKey& k : config_keys()) {
    out.push_back(std::string(k.name) + " = " + k.get(c) + "  # " + std::string(k.unit));
  }
  return out;
}

}  // namespace qdm
