#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "CLI11.hpp"

#include "pbphase/error.hpp"
#include "pbphase/herald.hpp"
#include "pbphase/parallel.hpp"
#include "pbphase/pb_states.hpp"
#include "pbphase/phase_est.hpp"
#include "pbphase/serialize.hpp"
#include "pbphase/wigner.hpp"

namespace pbphase::cli {

namespace {

using Echo = std::vector<std::pair<std::string, std::string>>;

struct Common {
  std::string out = "-";
  std::string format = "csv";
  std::string config;
};

void add_common(CLI::App* sub, Common& c, bool csv_allowed = true) {
  sub->add_option("--out", c.out, "output path, - for stdout")->capture_default_str();
  if (csv_allowed) {
    sub->add_option("--format", c.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  } else {
    c.format = "json";
    sub->add_option("--format", c.format, "json only")->check(CLI::IsMember({"json"}))->capture_default_str();
  }
  sub->add_option("--config", c.config, "flat key=value file; flags given on the command line win");
}

void emit(const Common& c, const std::string& content, std::ostream& out) {
  if (c.out == "-") {
    out << content;
    out.flush();
  } else {
    write_atomic(c.out, content);
  }
}

void echo_comments(CsvWriter& w, const std::string& command, const Echo& echo) {
  w.comment("pbphase " + command);
  for (const auto& [k, v] : echo) w.comment(k + " = " + v);
}

json echo_json(const Echo& echo) {
  json j = json::object();
  for (const auto& [k, v] : echo) j[k] = v;
  return j;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> values;
  std::stringstream ss(text);
  std::string item;
  auto to_int = [&](const std::string& t) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size() || t.empty()) throw std::invalid_argument(std::string("bad ") + what + " '" + text + "'");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    const std::size_t dash = item.find('-', 1);
    if (dash == std::string::npos) {
      values.push_back(to_int(item));
    } else {
      const int a = to_int(item.substr(0, dash)), b = to_int(item.substr(dash + 1));
      if (b < a) throw std::invalid_argument(std::string("empty ") + what + " range '" + item + "'");
      for (int v = a; v <= b; ++v) values.push_back(v);
    }
  }
  return values;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty() || !std::isfinite(v))
      throw std::invalid_argument(std::string("bad ") + what + " '" + text + "'");
    values.push_back(v);
  }
  return values;
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s;
}

// Config files hold `key = value` lines and `#` comments. Their entries are
// spliced in ahead of the user's flags, and every option keeps its last value.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key.empty() || key == "config")
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": invalid key");
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

std::vector<std::string> splice_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;
  const auto tokens = config_tokens(path);
  args.insert(args.begin() + 1, tokens.begin(), tokens.end());
  return args;
}

// ---- wigner-grid ----

struct GridParams {
  Common common;
  int s = 11;
  int m = 0;
  double phi0 = 0.0;
  double extent = 5.0;
  int n = 201;
};

void cmd_wigner_grid(const GridParams& p, std::ostream& out) {
  const PbParams pb{p.s, p.m, p.phi0};
  pb.validate();
  if (!(p.extent > 0.0)) throw std::invalid_argument("--extent must be positive");
  if (p.n < 2) throw std::invalid_argument("--n must be >= 2");
  const GridSpec spec = GridSpec::square(p.extent, p.n);
  const WignerGrid grid = wigner_grid(FockDensity::pure(pb_eigenstate(pb)), spec);

  const Echo echo{{"s", std::to_string(p.s)},          {"m", std::to_string(p.m)},
                  {"phi0", format_double(p.phi0)},     {"extent", format_double(p.extent)},
                  {"n", std::to_string(p.n)},          {"format", p.common.format}};
  if (p.common.format == "json") {
    json q = json::array(), pp = json::array(), w = json::array();
    for (int i = 0; i < spec.nq; ++i) q.push_back(grid.q_at(i));
    for (int j = 0; j < spec.np; ++j) pp.push_back(grid.p_at(j));
    for (int i = 0; i < spec.nq; ++i) {
      json row = json::array();
      for (int j = 0; j < spec.np; ++j) row.push_back(grid.values(i, j));
      w.push_back(std::move(row));
    }
    const json doc = {{"command", "wigner-grid"}, {"config", echo_json(echo)}, {"q", q}, {"p", pp}, {"W", w}};
    emit(p.common, doc.dump(1) + "\n", out);
    return;
  }
  CsvWriter w;
  echo_comments(w, "wigner-grid", echo);
  write_grid_rows(w, grid);
  emit(p.common, w.str(), out);
}

// ---- negativity-sweep / radius-sweep ----

struct SweepParams {
  Common common;
  std::string s = "1-17";
  double phi0 = 0.0;
  bool reference = false;
};

std::string monotonic_summary(const std::vector<std::pair<int, double>>& rows) {
  bool inc = true;
  for (std::size_t i = 1; i < rows.size(); ++i) inc = inc && rows[i].second > rows[i - 1].second;
  return std::string("strictly increasing in s: ") + bool_str(inc);
}

void write_sweep(const SweepParams& p, const std::string& command, const Echo& echo,
                 const std::vector<std::pair<int, double>>& rows,
                 const std::vector<std::string>& reference, std::ostream& out) {
  if (p.common.format == "json") {
    json data = json::array();
    for (const auto& [s, v] : rows) data.push_back({{"s", s}, {"value", v}});
    json doc = {{"command", command}, {"config", echo_json(echo)}, {"rows", data},
                {"summary", monotonic_summary(rows)}};
    if (!reference.empty()) doc["reference"] = reference;
    emit(p.common, doc.dump(1) + "\n", out);
    return;
  }
  CsvWriter w;
  echo_comments(w, command, echo);
  for (const auto& r : reference) w.comment(r);
  write_sweep_rows(w, rows);
  w.comment(monotonic_summary(rows));
  emit(p.common, w.str(), out);
}

template <typename Fn>
std::vector<std::pair<int, double>> sweep_over_s(const std::vector<int>& s_values, Fn fn) {
  for (int s : s_values)
    if (s < 1) throw std::invalid_argument("every s must be >= 1");
  std::vector<std::pair<int, double>> rows(s_values.size());
  std::vector<std::string> errors(s_values.size());
  detail::parallel_for(s_values.size(), [&](std::size_t i) {
    rows[i].first = s_values[i];
    try {
      rows[i].second = fn(s_values[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty())
      throw NumericalError("s=" + std::to_string(s_values[i]) + ": " + errors[i]);
  return rows;
}

Echo sweep_echo(const SweepParams& p, const char* ref_key) {
  return {{"s", p.s}, {"phi0", format_double(p.phi0)}, {ref_key, bool_str(p.reference)},
          {"format", p.common.format}};
}

void cmd_negativity_sweep(const SweepParams& p, std::ostream& out) {
  const auto s_values = parse_int_list(p.s, "s range");
  const auto rows = sweep_over_s(s_values, [&](int s) {
    return negativity_volume(FockDensity::pure(pb_eigenstate({s, 0, p.phi0})));
  });
  std::vector<std::string> reference;
  if (p.reference) {
    const FockDensity one = FockDensity::pure(FockVector::basis({1, 1}, std::vector<int>{1}));
    reference.push_back("reference |1>: " + format_double(negativity_volume(one)) +
                        " (analytic 2exp(-1/2)-1 = " + format_double(2.0 * std::exp(-0.5) - 1.0) + ")");
  }
  write_sweep(p, "negativity-sweep", sweep_echo(p, "fock-reference"), rows, reference, out);
}

void cmd_radius_sweep(const SweepParams& p, std::ostream& out) {
  const auto s_values = parse_int_list(p.s, "s range");
  const auto rows = sweep_over_s(s_values, [&](int s) {
    return effective_radius(FockDensity::pure(pb_eigenstate({s, 0, p.phi0})));
  });
  std::vector<std::string> reference;
  if (p.reference) {
    const FockDensity vac = FockDensity::pure(FockVector::basis({1, 1}, std::vector<int>{0}));
    reference.push_back("reference vacuum: " + format_double(effective_radius(vac)) +
                        " (analytic sqrt(ln(2000/pi)/2) = " +
                        format_double(std::sqrt(std::log(2000.0 / std::numbers::pi) / 2.0)) + ")");
  }
  write_sweep(p, "radius-sweep", sweep_echo(p, "vacuum-reference"), rows, reference, out);
}

// ---- herald-sweep ----

struct HeraldParams {
  Common common;
  std::string s = "4";
  int m = 0;
  double r_min = 0.05;
  double r_max = 0.3;
  int r_steps = 11;
  std::string r_spacing = "log";
  std::string eta = "1,0.8,0.6";
  int cutoff = 5;
  int tmsv_terms = 6;
  int displacement_order = 5;
  bool skip_v = false;
};

std::vector<double> r_grid(const HeraldParams& p) {
  if (p.r_steps < 0) throw std::invalid_argument("--r-steps must be >= 0");
  if (!(p.r_min >= 0.0) || !(p.r_max >= p.r_min)) throw std::invalid_argument("need 0 <= r-min <= r-max");
  std::vector<double> r;
  if (p.r_steps == 0) return r;
  if (p.r_steps == 1) return {p.r_min};
  const bool log = p.r_spacing == "log";
  if (log && !(p.r_min > 0.0)) throw std::invalid_argument("log spacing needs r-min > 0");
  for (int i = 0; i < p.r_steps; ++i) {
    const double t = static_cast<double>(i) / (p.r_steps - 1);
    r.push_back(log ? p.r_min * std::pow(p.r_max / p.r_min, t) : p.r_min + t * (p.r_max - p.r_min));
  }
  r.back() = p.r_max;
  return r;
}

void cmd_herald_sweep(const HeraldParams& p, std::ostream& out) {
  const auto s_values = parse_int_list(p.s, "s list");
  const auto eta_values = parse_double_list(p.eta, "eta list");
  const auto r_values = r_grid(p);
  HeraldConfig base;
  base.m = p.m;
  base.cutoff = p.cutoff;
  base.tmsv_terms = p.tmsv_terms;
  base.displacement = DisplacementScheme::series(p.displacement_order);
  for (int s : s_values) {
    HeraldConfig c = base;
    c.s = s;
    for (double eta : eta_values) {
      c.eta = eta;
      c.validate();
    }
  }
  const auto rows = herald_sweep(base, s_values, r_values, eta_values, !p.skip_v);

  std::vector<std::string> footer;
  for (int s : s_values)
    for (double eta : eta_values) {
      std::vector<double> x, y;
      bool ok = true;
      for (const SweepRow& r : rows)
        if (r.s == s && r.eta == eta) {
          ok = ok && r.error.empty() && r.P > 0.0;
          x.push_back(r.r);
          y.push_back(r.P);
        }
      if (!ok || x.size() < 2) continue;
      footer.push_back("log10 P slope vs log10 r, s=" + std::to_string(s) + " eta=" + format_double(eta) +
                       ": " + format_double(loglog_slope(x, y)));
    }

  std::vector<std::string> r_text;
  for (double r : r_values) r_text.push_back(format_double(r));
  const Echo echo{{"s", p.s},
                  {"m", std::to_string(p.m)},
                  {"r", join(r_text)},
                  {"eta", p.eta},
                  {"cutoff", std::to_string(p.cutoff)},
                  {"tmsv-terms", std::to_string(p.tmsv_terms)},
                  {"displacement-order", std::to_string(p.displacement_order)},
                  {"skip-v", bool_str(p.skip_v)},
                  {"format", p.common.format}};
  if (p.common.format == "json") {
    const json doc = {{"command", "herald-sweep"}, {"config", echo_json(echo)},
                      {"rows", herald_rows_json(rows)}, {"slopes", footer}};
    emit(p.common, doc.dump(1) + "\n", out);
    return;
  }
  CsvWriter w;
  echo_comments(w, "herald-sweep", echo);
  write_herald_rows(w, rows);
  for (const auto& f : footer) w.comment(f);
  emit(p.common, w.str(), out);
}

// ---- phase-sim ----

struct PhaseSimParams {
  Common common;
  std::string mode = "montecarlo";
  std::string target = "phase";
  int s = 4;
  double phi_j = 0.0;
  double delta = 0.7;
  int settings = 2;
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  double coef_r = 0.6;
  double coef_theta = 1.2;
  std::string coefs;
};

std::vector<cplx> parse_coefs(const std::string& text) {
  std::vector<cplx> c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    const auto re = parse_double_list(item.substr(0, colon), "coefficient");
    const auto im = colon == std::string::npos ? std::vector<double>{0.0}
                                               : parse_double_list(item.substr(colon + 1), "coefficient");
    if (re.size() != 1 || im.size() != 1) throw std::invalid_argument("coefficients are re:im pairs");
    c.emplace_back(re[0], im[0]);
  }
  return c;
}

json coeffs_json(const SuperpositionCoeffs& c) {
  json arr = json::array();
  for (const cplx& x : c.c) arr.push_back({x.real(), x.imag()});
  return arr;
}

int cmd_phase_sim(const PhaseSimParams& p, std::ostream& out, std::ostream& err) {
  if (p.s < 1) throw std::invalid_argument("s must be >= 1");
  if (p.trials < 1) throw std::invalid_argument("--trials must be >= 1");
  const bool exact = p.mode == "exact";

  std::vector<double> phases;
  std::vector<OutcomeDistribution> dists;
  json truth;
  SuperpositionCoeffs coeffs;
  if (p.target == "phase") {
    if (p.settings != 1 && p.settings != 2) throw std::invalid_argument("--settings must be 1 or 2");
    const double phi_k = p.phi_j - p.delta;
    phases.push_back(p.phi_j);
    if (p.settings == 2) phases.push_back(p.phi_j + std::numbers::pi / 2.0);
    const FockVector unknown = phase_state(p.s, phi_k);
    for (double ph : phases) dists.push_back(interference_probs(phase_state(p.s, ph), unknown));
    truth = {{"phi_k", std::fmod(std::fmod(phi_k, 2 * std::numbers::pi) + 2 * std::numbers::pi,
                                 2 * std::numbers::pi)}};
  } else {
    if (p.s == 1 && p.coefs.empty()) {
      coeffs = SuperpositionCoeffs::qubit(p.coef_r, p.coef_theta);
    } else if (p.coefs.empty()) {
      coeffs = SuperpositionCoeffs::make(std::vector<cplx>(static_cast<std::size_t>(p.s) + 1, 1.0));
    } else {
      coeffs = SuperpositionCoeffs::make(parse_coefs(p.coefs));
      if (coeffs.s != p.s) throw std::invalid_argument("--coefs needs s+1 entries");
    }
    phases = p.s == 1 ? std::vector<double>{0.0} : reference_phases(p.s);
    for (double ph : phases) dists.push_back(superposition_probs(ph, coeffs));
    truth = {{"coefficients", coeffs_json(coeffs)}};
  }

  std::vector<ObservedFrequencies> observed;
  json settings = json::array();
  for (std::size_t i = 0; i < phases.size(); ++i) {
    json entry = {{"phi_j", phases[i]}, {"exact", to_json(dists[i])}};
    if (exact) {
      observed.push_back(ObservedFrequencies::exact(dists[i]));
    } else {
      const CountTable t = sample_outcomes(dists[i], p.trials, derive_seed(p.seed, i), phases[i]);
      entry["counts"] = to_json(t);
      observed.push_back(ObservedFrequencies::from(t));
    }
    settings.push_back(std::move(entry));
  }

  const Echo echo{{"mode", p.mode},
                  {"target", p.target},
                  {"s", std::to_string(p.s)},
                  {"phi-j", format_double(p.phi_j)},
                  {"delta", format_double(p.delta)},
                  {"settings", std::to_string(p.settings)},
                  {"trials", std::to_string(p.trials)},
                  {"seed", std::to_string(p.seed)},
                  {"coef-r", format_double(p.coef_r)},
                  {"coef-theta", format_double(p.coef_theta)},
                  {"coefs", p.coefs},
                  {"format", p.common.format}};
  json doc = {{"command", "phase-sim"}, {"config", echo_json(echo)}, {"seed", p.seed},
              {"settings", settings},   {"truth", truth},            {"estimate", nullptr}};
  try {
    if (p.target == "phase") {
      const PhaseEstimate e = phases.size() == 2
                                  ? estimate_phase(observed[0], phases[0], observed[1], phases[1], p.s)
                                  : estimate_phase(observed[0], phases[0], p.s);
      doc["estimate"] = to_json(e);
      double d = std::abs(e.phi_k - truth["phi_k"].get<double>());
      doc["abs_error"] = std::min(d, 2 * std::numbers::pi - d);
    } else {
      std::vector<CoefficientSetting> cs;
      for (std::size_t i = 0; i < phases.size(); ++i) cs.push_back({phases[i], observed[i]});
      const CoefficientEstimate e = estimate_coefficients(cs, p.s);
      doc["estimate"] = to_json(e);
      double worst = 0.0;
      for (std::size_t k = 0; k < coeffs.c.size(); ++k)
        worst = std::max(worst, std::abs(e.coeffs.c[k] - coeffs.c[k]));
      doc["max_abs_error"] = worst;
    }
  } catch (const LowInformation& e) {
    if (exact) throw;
    // a sampled table with no single-photon counts is a legitimate outcome;
    // report it with the stderr of a uniform phase
    doc["diagnostic"] = std::string(e.what());
    doc["estimate"] = {{"phi_k", nullptr}, {"stderr", std::numbers::pi / std::sqrt(3.0)}};
    err << "pbphase: " << e.what() << "\n";
  }
  emit(p.common, doc.dump(1) + "\n", out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pegg-Barnett phase states: Wigner functions, heralded generation, phase estimation", "pbphase"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  GridParams grid;
  auto* g = app.add_subcommand("wigner-grid", "W(q,p) of |phi_m>_s on a square lattice");
  g->add_option("--s", grid.s)->capture_default_str();
  g->add_option("--m", grid.m)->capture_default_str();
  g->add_option("--phi0", grid.phi0)->capture_default_str();
  g->add_option("--extent", grid.extent, "lattice half-width")->capture_default_str();
  g->add_option("--n", grid.n, "points per axis")->capture_default_str();
  add_common(g, grid.common);

  SweepParams neg;
  auto* ns = app.add_subcommand("negativity-sweep", "negativity volume of |phi_0>_s against s");
  ns->add_option("--s", neg.s, "list or range, e.g. 1-17 or 1,3,5")->capture_default_str();
  ns->add_option("--phi0", neg.phi0)->capture_default_str();
  ns->add_flag("--fock-reference", neg.reference, "add the |1> reference as a comment row");
  add_common(ns, neg.common);

  SweepParams rad;
  rad.s = "2-17";
  auto* rs = app.add_subcommand("radius-sweep", "effective radius of W(q,0) against s");
  rs->add_option("--s", rad.s, "list or range")->capture_default_str();
  rs->add_option("--phi0", rad.phi0)->capture_default_str();
  rs->add_flag("--vacuum-reference", rad.reference, "add the vacuum reference as a comment row");
  add_common(rs, rad.common);

  HeraldParams her;
  auto* hs = app.add_subcommand("herald-sweep", "click probability, fidelity and negativity of the heralded state");
  hs->add_option("--s", her.s, "list or range")->capture_default_str();
  hs->add_option("--m", her.m)->capture_default_str();
  hs->add_option("--r-min", her.r_min)->capture_default_str();
  hs->add_option("--r-max", her.r_max)->capture_default_str();
  hs->add_option("--r-steps", her.r_steps)->capture_default_str();
  hs->add_option("--r-spacing", her.r_spacing)->check(CLI::IsMember({"lin", "log"}))->capture_default_str();
  hs->add_option("--eta", her.eta, "comma-separated efficiencies")->capture_default_str();
  hs->add_option("--cutoff", her.cutoff)->capture_default_str();
  hs->add_option("--tmsv-terms", her.tmsv_terms)->capture_default_str();
  hs->add_option("--displacement-order", her.displacement_order)->capture_default_str();
  hs->add_flag("--skip-v", her.skip_v, "skip the negativity quadrature");
  add_common(hs, her.common);

  PhaseSimParams sim;
  auto* ps = app.add_subcommand("phase-sim", "simulated phase / coefficient estimation");
  ps->add_option("--mode", sim.mode)->check(CLI::IsMember({"exact", "montecarlo"}))->capture_default_str();
  ps->add_option("--target", sim.target)->check(CLI::IsMember({"phase", "coefficients"}))->capture_default_str();
  ps->add_option("--s", sim.s)->capture_default_str();
  ps->add_option("--phi-j", sim.phi_j, "reference phase of the first setting")->capture_default_str();
  ps->add_option("--delta", sim.delta, "phi_j - phi_k for the phase target")->capture_default_str();
  ps->add_option("--settings", sim.settings, "1 or 2 reference settings for the phase target")->capture_default_str();
  ps->add_option("--trials", sim.trials)->capture_default_str();
  ps->add_option("--seed", sim.seed)->capture_default_str();
  ps->add_option("--coef-r", sim.coef_r, "s=1 coefficient magnitude r")->capture_default_str();
  ps->add_option("--coef-theta", sim.coef_theta, "s=1 relative phase")->capture_default_str();
  ps->add_option("--coefs", sim.coefs, "re:im,re:im,... for s >= 2");
  add_common(ps, sim.common, false);

  try {
    std::vector<std::string> args = splice_config(raw_args);
    std::vector<const char*> argv{"pbphase"};
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (g->parsed()) cmd_wigner_grid(grid, out);
    else if (ns->parsed()) cmd_negativity_sweep(neg, out);
    else if (rs->parsed()) cmd_radius_sweep(rad, out);
    else if (hs->parsed()) cmd_herald_sweep(her, out);
    else if (ps->parsed()) return cmd_phase_sim(sim, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  } catch (const IoError& e) {
    err << "pbphase: " << e.what() << "\n";
    return kIo;
  } catch (const NumericalError& e) {
    err << "pbphase: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "pbphase: " << e.what() << "\n";
    return kValidation;
  } catch (const std::out_of_range& e) {
    err << "pbphase: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "pbphase: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace pbphase::cli
