#include "latspec/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "latspec/boundstates.hpp"
#include "latspec/core.hpp"
#include "latspec/duality.hpp"
#include "latspec/error.hpp"
#include "latspec/kronig_penney.hpp"
#include "latspec/oracle.hpp"

namespace latspec {

namespace {

using json = nlohmann::ordered_json;

enum class Type { integer, real, boolean, text };

struct Param {
  std::string key;
  Type type;
  json fallback;  // null: required (or optional when `optional` is set)
  bool optional = false;
  std::string help;
};

const std::vector<Param> kLabelParams = {
    {"k0", Type::real, nullptr, true, "reference energy scale K0, labels only"},
    {"ell", Type::real, nullptr, true, "lattice spacing, labels only"},
};

const std::map<std::string, std::vector<Param>>& schemas() {
  static const std::map<std::string, std::vector<Param>> table = {
      {"bound",
       {{"n0", Type::integer, nullptr, false, "step width in sites"},
        {"u", Type::real, nullptr, false, "step height U_I/K0 (negative: well)"},
        {"tol", Type::real, kDefaultRootTolerance, false, "root tolerance in E/K0"}}},
      {"spectrum",
       {{"n0", Type::integer, nullptr, false, "step width in sites"},
        {"u", Type::real, nullptr, false, "step height U_I/K0 (negative: well)"},
        {"tol", Type::real, kDefaultRootTolerance, false, "root tolerance in E/K0"},
        {"wavefunctions", Type::boolean, false, false, "include bound-state amplitudes"}}},
      {"duality-check",
       {{"n0", Type::integer, nullptr, false, "step width in sites"},
        {"u", Type::real, nullptr, false, "step height U_I/K0"},
        {"tol", Type::real, kDefaultRootTolerance, false, "root tolerance in E/K0"},
        {"sites", Type::integer, 256, false, "window for the matrix checks"},
        {"threshold", Type::real, 1e-9, false, "largest accepted mirror defect"}}},
      {"oracle",
       {{"n0", Type::integer, nullptr, true, "step width in sites"},
        {"u", Type::real, nullptr, true, "step height U_I/K0"},
        {"values", Type::text, nullptr, true, "comma-separated site potentials U/K0"},
        {"first", Type::integer, 1, false, "first site of --values"},
        {"sites", Type::integer, 2000, false, "window length for the wall+step potential"},
        {"hoppings", Type::text, "1:0.5", false, "range:amplitude list, e.g. 1:0.5,3:0.1"},
        {"ipr_threshold", Type::real, 0.0, false, "bound-state IPR cut (0: 10/N)"},
        {"all", Type::boolean, false, false, "emit every eigenpair, not only bound ones"}}},
      {"kp-bands",
       {{"upsilon", Type::real, nullptr, false, "dimensionless strength m V0 l^2 / hbar^2"},
        {"band", Type::integer, 0, false, "band index"},
        {"samples", Type::integer, 33, false, "Bloch-phase samples on [0, pi]"}}},
      {"kp-tune",
       {{"width", Type::real, 1.0, false, "target band width W"},
        {"upsilon", Type::real, nullptr, false, "dimensionless strength"},
        {"samples", Type::integer, 101, false, "Bloch-phase samples on [0, pi]"}}},
  };
  return table;
}

const std::vector<Param>& schema(const std::string& command) {
  const auto it = schemas().find(command);
  if (it == schemas().end()) throw ParseError("unknown command '" + command + "'");
  return it->second;
}

const char* summary(const std::string& command) {
  static const std::map<std::string, const char*> text = {
      {"spectrum", "continuous band plus discrete levels of a wall+step potential"},
      {"bound", "discrete levels of a wall+step potential"},
      {"duality-check", "verify the U -> -U spectral mirror analytically and numerically"},
      {"oracle", "diagonalise a truncated lattice Hamiltonian"},
      {"kp-bands", "Kronig-Penney band edges and Bloch-phase samples"},
      {"kp-tune", "tune a Kronig-Penney chain to a lattice band of width W"},
  };
  return text.at(command);
}

std::vector<Param> all_params(const std::string& command) {
  std::vector<Param> out = schema(command);
  out.insert(out.end(), kLabelParams.begin(), kLabelParams.end());
  return out;
}

std::string flag_name(const std::string& key) {
  std::string s = key;
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

json convert(const Param& p, const json& raw) {
  const std::string where = "parameter '" + p.key + "'";
  switch (p.type) {
    case Type::integer: {
      if (raw.is_number_integer()) return raw.get<long long>();
      if (raw.is_number_float()) {
        const double v = raw.get<double>();
        if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15)
          return static_cast<long long>(v);
      }
      if (raw.is_string()) {
        const std::string s = raw.get<std::string>();
        std::size_t used = 0;
        try {
          const long long v = std::stoll(s, &used);
          if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
      }
      throw ParseError(where + " must be an integer");
    }
    case Type::real: {
      if (raw.is_number()) return raw.get<double>();
      if (raw.is_string()) {
        const std::string s = raw.get<std::string>();
        std::size_t used = 0;
        try {
          const double v = std::stod(s, &used);
          if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
      }
      throw ParseError(where + " must be a real number");
    }
    case Type::boolean: {
      if (raw.is_boolean()) return raw.get<bool>();
      if (raw.is_string()) {
        const std::string s = raw.get<std::string>();
        if (s == "true" || s == "1") return true;
        if (s == "false" || s == "0") return false;
      }
      throw ParseError(where + " must be true or false");
    }
    case Type::text:
      if (raw.is_string()) return raw;
      throw ParseError(where + " must be a string");
  }
  throw ParseError(where + " has an unsupported type");
}

// Fills defaults, rejects unknown keys, converts types.
json resolve(const RunConfig& config) {
  const auto params = all_params(config.command);
  if (!config.parameters.is_object()) throw ParseError("parameters must be a key-value object");
  for (const auto& [key, value] : config.parameters.items()) {
    const bool known =
        std::any_of(params.begin(), params.end(), [&](const Param& p) { return p.key == key; });
    if (!known) throw ParseError("unknown key '" + key + "' for command '" + config.command + "'");
  }
  json resolved = json::object();
  resolved["command"] = config.command;
  for (const auto& p : params) {
    if (config.parameters.contains(p.key)) {
      resolved[p.key] = convert(p, config.parameters.at(p.key));
    } else if (!p.fallback.is_null()) {
      resolved[p.key] = p.fallback;
    } else if (!p.optional) {
      throw PreconditionError("missing-" + p.key, "parameter '" + p.key + "' is required");
    }
  }
  resolved["format"] = to_string(config.format);
  return resolved;
}

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw PreconditionError("invalid-" + key, message);
}

int get_int(const json& c, const char* key) { return static_cast<int>(c.at(key).get<long long>()); }
double get_real(const json& c, const char* key) { return c.at(key).get<double>(); }

void validate_step(const json& c) {
  require(get_int(c, "n0") >= 1, "n0", "n0 must be a positive integer");
  const double u = get_real(c, "u");
  require(std::isfinite(u) && u != 0.0, "u", "u must be finite and nonzero");
}

void validate_tol(const json& c) {
  const double tol = get_real(c, "tol");
  require(tol > 0.0 && tol <= 1e-3, "tol", "tol must lie in (0, 1e-3]");
}

void validate_labels(const json& c) {
  for (const char* key : {"k0", "ell"})
    if (c.contains(key)) {
      const double v = get_real(c, key);
      require(v > 0.0 && std::isfinite(v), key, std::string(key) + " must be positive");
    }
}

json units(const json& c, const char* energy_unit) {
  json u = json::object();
  u["energy"] = energy_unit;
  if (c.contains("k0")) u["k0"] = c.at("k0");
  if (c.contains("ell")) u["ell"] = c.at("ell");
  return u;
}

json band_json(const EnergyBand& b) {
  json j = json::object();
  j["lo"] = b.lo;
  j["hi"] = b.hi;
  return j;
}

std::vector<double> phase_grid(int samples) {
  std::vector<double> a(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i)
    a[i] = i == samples - 1 ? std::numbers::pi : std::numbers::pi * i / (samples - 1);
  return a;
}

struct StepSolve {
  QuantizationProblem problem;
  DiscreteSpectrum spectrum;
  json diagnostics;
};

StepSolve solve_step(const json& c) {
  validate_step(c);
  validate_tol(c);
  const WallStepPotential pot(get_int(c, "n0"), get_real(c, "u"));
  QuantizationProblem problem(pot);
  DiscreteSpectrum spectrum = discrete_spectrum(problem, get_real(c, "tol"));

  json d = json::object();
  d["branch"] = problem.branch() == Branch::well ? "well" : "barrier";
  d["continuous_band"] = band_json(kinetic_band(Dispersion{}));
  d["discrete_window"] = band_json(problem.window());
  d["gap"] = problem.u_abs() > 2.0;
  d["count"] = spectrum.count();
  try {
    d["threshold_count"] = count_bound_states(pot.n0, problem.u_abs());
  } catch (const PreconditionError&) {
    d["threshold_count"] = nullptr;
  }
  d["solver"] = {{"method", "uniform scan + bisection"},
                 {"grid_points", spectrum.grid_points},
                 {"window_inset", kWindowInset},
                 {"tolerance", get_real(c, "tol")}};
  return {problem, std::move(spectrum), std::move(d)};
}

Report run_bound(const json& c) {
  StepSolve s = solve_step(c);
  Report r;
  r.results.header = {"index", "energy_over_K0", "residual"};
  for (std::size_t i = 0; i < s.spectrum.count(); ++i)
    r.results.rows.push_back({static_cast<long long>(i + 1), s.spectrum.energies[i],
                              s.spectrum.residuals[i]});
  r.diagnostics = std::move(s.diagnostics);
  r.diagnostics["units"] = units(c, "K0");
  return r;
}

Report run_spectrum(const json& c) {
  StepSolve s = solve_step(c);
  Report r;
  r.results.header = {"kind", "index", "lo_over_K0", "hi_over_K0", "ipr"};
  const EnergyBand band = kinetic_band(Dispersion{});
  r.results.rows.push_back({std::string("continuous"), 0LL, band.lo, band.hi, 0.0});
  json waves = json::array();
  for (std::size_t i = 0; i < s.spectrum.count(); ++i) {
    const double e = s.spectrum.energies[i];
    const LatticeState psi = bound_state_wavefunction(s.problem, e);
    r.results.rows.push_back({std::string("discrete"), static_cast<long long>(i + 1), e, e,
                              psi.ipr()});
    if (c.at("wavefunctions").get<bool>()) {
      json w = json::object();
      w["index"] = i + 1;
      w["energy_over_K0"] = e;
      w["first"] = psi.first;
      json amps = json::array();
      for (const auto& a : psi.amplitudes) amps.push_back(a.real());
      w["amplitudes"] = std::move(amps);
      waves.push_back(std::move(w));
    }
  }
  r.diagnostics = std::move(s.diagnostics);
  if (c.at("wavefunctions").get<bool>()) r.diagnostics["wavefunctions"] = std::move(waves);
  r.diagnostics["units"] = units(c, "K0");
  return r;
}

Report run_duality_check(const json& c) {
  validate_step(c);
  validate_tol(c);
  const int sites = get_int(c, "sites");
  require(sites >= 3 && static_cast<std::size_t>(sites) <= kMaxDiagonalizeSites, "sites",
          "sites must lie in [3, " + std::to_string(kMaxDiagonalizeSites) + "]");
  const int n0 = get_int(c, "n0");
  require(n0 <= sites, "sites", "sites must be at least n0");
  const double threshold = get_real(c, "threshold");
  require(threshold > 0.0 && std::isfinite(threshold), "threshold", "threshold must be positive");

  const Dispersion d;
  const double shift = duality_shift(d);
  const WallStepPotential pot(n0, get_real(c, "u"));
  const WallStepPotential dual = dual_potential(pot);
  const double tol = get_real(c, "tol");

  const auto a = discrete_spectrum(QuantizationProblem(pot), tol).energies;
  const auto b = discrete_spectrum(QuantizationProblem(dual), tol).energies;
  double analytic = 0.0;
  const std::size_t common = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < common; ++i)
    analytic = std::max(analytic, std::abs(b[i] - (shift - a[a.size() - 1 - i])));

  const SitePotential v = SitePotential::embed(pot, sites);
  const SitePotential w = dual_potential(v);
  const auto h = build_hamiltonian(d, v);
  const auto hd = build_hamiltonian(d, w);
  double matrix = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) {
      const double sign = ((v.first + i) + (v.first + j)) % 2 == 0 ? 1.0 : -1.0;
      const double expected = -sign * h.entry(i, j) + (i == j ? shift : 0.0);
      matrix = std::max(matrix, std::abs(hd.entry(i, j) - expected));
    }

  const auto ev = diagonalize(h).eigenvalues;
  const auto evd = diagonalize(hd).eigenvalues;
  double oracle = 0.0;
  for (std::size_t k = 0; k < ev.size(); ++k)
    oracle = std::max(oracle, std::abs(evd[k] - (shift - ev[ev.size() - 1 - k])));

  Report r;
  r.results.header = {"check", "defect", "tolerance", "passed"};
  const double count_defect = std::abs(static_cast<double>(a.size()) - static_cast<double>(b.size()));
  auto row = [&](const char* name, double defect, double tolerance) {
    const bool ok = defect <= tolerance;
    r.passed = r.passed && ok;
    r.results.rows.push_back({std::string(name), defect, tolerance, ok});
  };
  row("analytic_count", count_defect, 0.0);
  row("analytic_mirror", analytic, threshold);
  row("matrix_identity", matrix, 1e-14);
  row("oracle_mirror", oracle, threshold);

  r.diagnostics["shift"] = shift;
  r.diagnostics["energies"] = a;
  r.diagnostics["dual_energies"] = b;
  r.diagnostics["sites"] = sites;
  r.diagnostics["units"] = units(c, "K0");
  return r;
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    try {
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0) throw ParseError("parameter '" + key + "' has a malformed entry '" + item + "'");
  }
  return out;
}

Dispersion parse_hoppings(const std::string& s) {
  std::vector<Hopping> hs;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ParseError("hopping '" + item + "' must be range:amplitude");
    try {
      hs.push_back({std::stoi(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw ParseError("hopping '" + item + "' must be range:amplitude");
    }
  }
  return Dispersion(std::move(hs));
}

Report run_oracle(const json& c) {
  const bool has_step = c.contains("n0") || c.contains("u");
  const bool has_values = c.contains("values");
  require(has_step != has_values, "potential", "give either n0 and u, or values");
  const Dispersion d = parse_hoppings(c.at("hoppings").get<std::string>());

  SitePotential v;
  std::optional<WallStepPotential> step;
  if (has_step) {
    require(c.contains("n0") && c.contains("u"), "potential", "n0 and u go together");
    require(get_int(c, "n0") >= 1, "n0", "n0 must be a positive integer");
    require(std::isfinite(get_real(c, "u")), "u", "u must be finite");
    const int sites = get_int(c, "sites");
    require(sites >= 3 && static_cast<std::size_t>(sites) <= kMaxDiagonalizeSites, "sites",
            "sites must lie in [3, " + std::to_string(kMaxDiagonalizeSites) + "]");
    step = WallStepPotential(get_int(c, "n0"), get_real(c, "u"));
    v = SitePotential::embed(*step, sites);
  } else {
    v = SitePotential(get_int(c, "first"), parse_list(c.at("values").get<std::string>(), "values"));
    require(v.size() >= 3 && v.size() <= kMaxDiagonalizeSites, "values",
            "values must hold between 3 and " + std::to_string(kMaxDiagonalizeSites) + " sites");
  }
  double ipr_threshold = get_real(c, "ipr_threshold");
  require(ipr_threshold >= 0.0 && ipr_threshold <= 1.0, "ipr_threshold",
          "ipr_threshold must lie in [0, 1]");
  if (ipr_threshold == 0.0) ipr_threshold = 10.0 / static_cast<double>(v.size());

  const auto h = build_hamiltonian(d, v);
  const auto eps = diagonalize(h);
  const EnergyBand band = kinetic_band(d);
  const auto cls = classify_bound(eps, band, ipr_threshold);
  const auto pos = positivity_check(eps, v, d);

  std::vector<bool> is_bound(eps.n, false);
  for (auto k : cls.bound) is_bound[k] = true;

  Report r;
  r.results.header = {"index", "energy_over_K0", "ipr", "positivity", "bound"};
  const bool all = c.at("all").get<bool>();
  for (std::size_t k = 0; k < eps.n; ++k)
    if (all || is_bound[k])
      r.results.rows.push_back({static_cast<long long>(k), eps.eigenvalues[k], eps.ipr[k], pos[k],
                                static_cast<bool>(is_bound[k])});

  auto& dg = r.diagnostics;
  dg["sites"] = v.size();
  dg["first"] = v.first;
  dg["bandwidth"] = h.bandwidth();
  dg["continuous_band"] = band_json(band);
  dg["ipr_threshold"] = ipr_threshold;
  dg["band_margin"] = kBandMargin;
  dg["bound_count"] = cls.bound.size();
  dg["min_positivity"] = *std::min_element(pos.begin(), pos.end());
  dg["max_residual"] = max_residual(h, eps);
  dg["residual_limit"] = 1e-9 * h.norm_bound();
  dg["solver"] = h.bandwidth() <= 1 ? "LAPACK dstevr" : "LAPACK dsbevd";
  if (step && d.is_default() && step->u != 0.0) {
    const auto analytic = discrete_spectrum(QuantizationProblem(*step)).energies;
    double worst = 0.0;
    for (double e : analytic) {
      double best = std::numeric_limits<double>::max();
      for (double x : eps.eigenvalues) best = std::min(best, std::abs(x - e));
      worst = std::max(worst, best);
    }
    dg["analytic_energies"] = analytic;
    dg["analytic_count"] = analytic.size();
    dg["max_analytic_deviation"] = worst;
  }
  dg["units"] = units(c, "K0");
  return r;
}

int validated_samples(const json& c) {
  const int samples = get_int(c, "samples");
  require(samples >= 2 && samples <= 100000, "samples", "samples must lie in [2, 100000]");
  return samples;
}

Report run_kp_bands(const json& c) {
  const double upsilon = get_real(c, "upsilon");
  require(upsilon > 0.0 && upsilon <= kMaxUpsilon, "upsilon", "upsilon must lie in (0, 700]");
  const int band = get_int(c, "band");
  require(band >= 0 && band <= 64, "band", "band must lie in [0, 64]");
  const int samples = validated_samples(c);

  const BandResult b = solve_band(upsilon, band);
  const auto grid = phase_grid(samples);
  Report r;
  r.results.header = {"alpha", "energy_over_V0"};
  for (const auto& s : sample_band(upsilon, band, grid)) r.results.rows.push_back({s.alpha, s.energy});

  auto& dg = r.diagnostics;
  dg["energy_reference"] = "V_r";
  dg["band"] = {{"index", b.band_index}, {"e_lo", b.e_lo}, {"e_hi", b.e_hi}, {"width", b.width}};
  const BandGap g = band_gap(upsilon);
  dg["lowest_band"] = {{"width", g.width},
                       {"gap_to_threshold", g.gap_to_threshold},
                       {"gap_to_next_band", g.gap_to_next_band},
                       {"delta", g.delta},
                       {"asymptotic_width", 4.0 * upsilon * std::exp(-upsilon)}};
  dg["units"] = units(c, "V0");
  return r;
}

Report run_kp_tune(const json& c) {
  const double width = get_real(c, "width");
  const double upsilon = get_real(c, "upsilon");
  const int samples = validated_samples(c);
  const KPModel model = tune_to_lattice(width, upsilon);
  const auto grid = phase_grid(samples);
  const auto band = effective_dispersion(model, grid);
  const Dispersion lattice;
  const double k0 = 0.5 * width;

  Report r;
  r.results.header = {"alpha", "energy", "energy_plus_half_width", "lattice_kinetic", "deviation"};
  double worst = 0.0;
  for (const auto& s : band) {
    const double shifted = s.energy + 0.5 * width;
    const double kinetic = k0 * kinetic_eigenvalue(lattice, s.alpha);
    worst = std::max(worst, std::abs(shifted - kinetic));
    r.results.rows.push_back({s.alpha, s.energy, shifted, kinetic, shifted - kinetic});
  }
  auto& dg = r.diagnostics;
  dg["model"] = {{"upsilon", model.upsilon}, {"v0", model.v0}, {"v_r", model.v_r}, {"ell", model.ell}};
  dg["lattice_k0"] = k0;
  dg["max_deviation"] = worst;
  dg["deviation_scale"] = width * std::exp(-upsilon);
  dg["units"] = units(c, "W");
  return r;
}

void write_error(std::ostream& err, int status, const std::string& kind, const std::string& message,
                 const RunConfig& config) {
  json rec = json::object();
  rec["error"] = {{"status", status}, {"kind", kind}, {"message", message}};
  json cfg = config.parameters.is_object() ? config.parameters : json::object();
  cfg["command"] = config.command;
  rec["config"] = std::move(cfg);
  err << rec.dump() << '\n';
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"spectrum",      "bound",    "duality-check",
                                                 "oracle",        "kp-bands", "kp-tune"};
  return names;
}

std::vector<std::string> parameter_keys(const std::string& command) {
  std::vector<std::string> keys;
  for (const auto& p : all_params(command)) keys.push_back(p.key);
  return keys;
}

RunConfig config_from_json(const json& doc) {
  const json& flat = doc.is_object() && doc.contains("config") ? doc.at("config") : doc;
  if (!flat.is_object()) throw ParseError("config must be a JSON object");
  if (!flat.contains("command") || !flat.at("command").is_string())
    throw ParseError("config needs a string 'command'");
  RunConfig cfg;
  cfg.command = flat.at("command").get<std::string>();
  schema(cfg.command);
  for (const auto& [key, value] : flat.items()) {
    if (key == "command") continue;
    if (key == "format") {
      if (!value.is_string()) throw ParseError("'format' must be a string");
      try {
        cfg.format = parse_format(value.get<std::string>());
      } catch (const PreconditionError& e) {
        throw ParseError(e.what());
      }
      continue;
    }
    if (key == "output") {
      if (!value.is_string()) throw ParseError("'output' must be a string");
      cfg.output = value.get<std::string>();
      continue;
    }
    cfg.parameters[key] = value;
  }
  return cfg;
}

Report execute(const RunConfig& config) {
  const json c = resolve(config);
  validate_labels(c);
  Report r;
  if (config.command == "bound") r = run_bound(c);
  else if (config.command == "spectrum") r = run_spectrum(c);
  else if (config.command == "duality-check") r = run_duality_check(c);
  else if (config.command == "oracle") r = run_oracle(c);
  else if (config.command == "kp-bands") r = run_kp_bands(c);
  else if (config.command == "kp-tune") r = run_kp_tune(c);
  else throw ParseError("unknown command '" + config.command + "'");
  r.config = c;
  return r;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Report report = execute(config);
    const std::string text = emit_report(report, config.format);
    if (config.output) {
      std::filesystem::path path = *config.output;
      if (path.is_relative())
        if (const char* dir = std::getenv("LATSPEC_OUTPUT_DIR"); dir && *dir) path = dir / path;
      std::ofstream file(path, std::ios::binary);
      if (!file) throw PreconditionError("unwritable-output", "cannot open " + path.string());
      file << text;
    } else {
      out << text;
    }
    if (!report.passed) {
      write_error(err, exit_status::numerical, "check-failed",
                  "one or more verification checks exceeded tolerance", config);
      return exit_status::numerical;
    }
    return exit_status::ok;
  } catch (const ParseError& e) {
    write_error(err, exit_status::parse_error, "parse-error", e.what(), config);
    return exit_status::parse_error;
  } catch (const PreconditionError& e) {
    write_error(err, exit_status::precondition, e.kind(), e.what(), config);
    return exit_status::precondition;
  } catch (const NumericalError& e) {
    write_error(err, exit_status::numerical, e.kind(), e.what(), config);
    return exit_status::numerical;
  } catch (const std::exception& e) {
    write_error(err, exit_status::numerical, "internal", e.what(), config);
    return exit_status::numerical;
  }
}

int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra of a particle on a one-dimensional lattice"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string format = "json";
  std::string output;
  app.add_option("--config", config_path, "JSON run configuration (flat, or a previous report)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", output, "write the report here instead of standard output");

  struct Sub {
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    std::map<std::string, bool> flags;
    std::string format = "json";
    std::string output;
  };
  std::map<std::string, Sub> subs;
  for (const auto& name : command_names()) {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, summary(name));
    for (const auto& p : all_params(name)) {
      const std::string flag = "--" + flag_name(p.key);
      if (p.type == Type::boolean)
        s.options[p.key] = s.app->add_flag(flag, s.flags[p.key], p.help);
      else
        s.options[p.key] = s.app->add_option(flag, s.values[p.key], p.help);
    }
    s.app->add_option("--format", s.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    s.app->add_option("--output", s.output, "write the report here instead of standard output");
  }

  RunConfig cfg;
  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_status::ok;
  } catch (const CLI::ParseError& e) {
    write_error(err, exit_status::parse_error, "parse-error", e.what(), cfg);
    return exit_status::parse_error;
  }

  const auto chosen = app.get_subcommands();
  try {
    if (!config_path.empty()) {
      if (!chosen.empty()) throw ParseError("--config cannot be combined with a subcommand");
      std::ifstream in(config_path);
      if (!in) throw ParseError("cannot read config file " + config_path);
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::exception& e) {
        throw ParseError(std::string("config file is not valid JSON: ") + e.what());
      }
      cfg = config_from_json(doc);
      if (app.count("--format")) cfg.format = parse_format(format);
      if (!output.empty()) cfg.output = output;
    } else {
      if (chosen.empty()) throw ParseError("a subcommand or --config is required");
      cfg.command = chosen.front()->get_name();
      Sub& s = subs.at(cfg.command);
      for (const auto& [key, opt] : s.options) {
        if (opt->count() == 0) continue;
        if (s.flags.count(key)) cfg.parameters[key] = s.flags.at(key);
        else cfg.parameters[key] = s.values.at(key);
      }
      cfg.format = parse_format(app.count("--format") ? format : s.format);
      if (!s.output.empty()) cfg.output = s.output;
      else if (!output.empty()) cfg.output = output;
    }
  } catch (const ParseError& e) {
    write_error(err, exit_status::parse_error, "parse-error", e.what(), cfg);
    return exit_status::parse_error;
  }
  return run(cfg, out, err);
}

}  // namespace latspec
