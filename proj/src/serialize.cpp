#include "pbphase/serialize.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "pbphase/error.hpp"

namespace pbphase {

std::string format_double(double x) {
  if (x == 0.0) return "0";  // also folds -0
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

json to_json(const FockVector& v) {
  json entries = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cplx a = v[i];
    if (a == cplx(0.0, 0.0)) continue;
    json e = json::array();
    for (int n : v.occupation(i)) e.push_back(n);
    e.push_back(a.real());
    e.push_back(a.imag());
    entries.push_back(std::move(e));
  }
  return {{"cutoff", v.cutoff()},
          {"modes", v.modes()},
          {"norm", v.is_normalized() ? "normalized" : "subnormalized"},
          {"leakage", v.leakage()},
          {"entries", std::move(entries)}};
}

FockVector fock_vector_from_json(const json& j) {
  try {
    const TruncationConfig cfg{j.at("cutoff").get<int>(), j.at("modes").get<int>()};
    if (cfg.cutoff < 0 || cfg.modes < 1) throw std::invalid_argument("bad truncation header");
    FockVector shape = FockVector::zero(cfg);
    std::vector<cplx> amps(cfg.size());
    for (const json& e : j.at("entries")) {
      if (!e.is_array() || e.size() != static_cast<std::size_t>(cfg.modes) + 2)
        throw std::invalid_argument("entry has wrong arity");
      std::vector<int> occ(static_cast<std::size_t>(cfg.modes));
      for (int k = 0; k < cfg.modes; ++k) occ[static_cast<std::size_t>(k)] = e[static_cast<std::size_t>(k)].get<int>();
      for (int n : occ)
        if (n < 0 || n > cfg.cutoff) throw std::invalid_argument("occupation outside cutoff");
      amps[shape.flat_index(occ)] = {e[static_cast<std::size_t>(cfg.modes)].get<double>(),
                                     e[static_cast<std::size_t>(cfg.modes) + 1].get<double>()};
    }
    const Norm norm = j.value("norm", std::string("subnormalized")) == "normalized"
                          ? Norm::normalized
                          : Norm::subnormalized;
    return FockVector(cfg, std::move(amps), norm, j.value("leakage", 0.0));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed FockVector JSON: ") + e.what());
  }
}

json to_json(const FockDensity& rho) {
  json entries = json::array();
  const auto& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (m(r, c) != cplx(0.0, 0.0)) entries.push_back({r, c, m(r, c).real(), m(r, c).imag()});
  return {{"cutoff", rho.cutoff()}, {"trace", rho.declared_trace()}, {"entries", std::move(entries)}};
}

FockDensity fock_density_from_json(const json& j) {
  try {
    const int cutoff = j.at("cutoff").get<int>();
    if (cutoff < 0) throw std::invalid_argument("bad cutoff");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
    for (const json& e : j.at("entries")) {
      const int r = e.at(0).get<int>(), c = e.at(1).get<int>();
      if (r < 0 || c < 0 || r > cutoff || c > cutoff) throw std::invalid_argument("index outside cutoff");
      m(r, c) = {e.at(2).get<double>(), e.at(3).get<double>()};
    }
    return FockDensity(std::move(m), j.value("trace", 1.0));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed FockDensity JSON: ") + e.what());
  }
}

void CsvWriter::comment(std::string_view text) {
  std::size_t start = 0;
  while (true) {
    const std::size_t nl = text.find('\n', start);
    out_ += "# ";
    out_ += text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    out_ += '\n';
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
}

void CsvWriter::row(std::initializer_list<std::string> cells) {
  row(std::vector<std::string>(cells));
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += cells[i];
  }
  out_ += '\n';
}

void write_grid_rows(CsvWriter& w, const WignerGrid& grid) {
  w.row({"q", "p", "W"});
  for (int i = 0; i < grid.spec.nq; ++i)
    for (int j = 0; j < grid.spec.np; ++j)
      w.row({format_double(grid.q_at(i)), format_double(grid.p_at(j)), format_double(grid.values(i, j))});
}

void write_sweep_rows(CsvWriter& w, const std::vector<std::pair<int, double>>& rows) {
  w.row({"s", "value"});
  for (const auto& [s, v] : rows) w.row({std::to_string(s), format_double(v)});
}

void write_herald_rows(CsvWriter& w, const std::vector<SweepRow>& rows) {
  w.row({"s", "r", "eta", "P", "F", "V", "leakage"});
  for (const SweepRow& r : rows) {
    if (!r.error.empty()) {
      w.comment("failed s=" + std::to_string(r.s) + " r=" + format_double(r.r) +
                " eta=" + format_double(r.eta) + ": " + r.error);
      continue;
    }
    w.row({std::to_string(r.s), format_double(r.r), format_double(r.eta), format_double(r.P),
           format_double(r.F), format_double(r.V), format_double(r.leakage)});
  }
}

json herald_rows_json(const std::vector<SweepRow>& rows) {
  json out = json::array();
  for (const SweepRow& r : rows) {
    json alphas = json::array();
    for (const cplx& a : r.alphas) alphas.push_back({a.real(), a.imag()});
    json row = {{"s", r.s}, {"r", r.r}, {"eta", r.eta}, {"alphas", std::move(alphas)}};
    if (r.error.empty()) {
      row["P"] = r.P;
      row["F"] = r.F;
      row["V"] = r.V;
      row["leakage"] = r.leakage;
      if (r.rho_A) row["rho_A"] = to_json(*r.rho_A);
    } else {
      row["P"] = r.P;
      row["error"] = r.error;
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string count_table_csv(const CountTable& t) {
  CsvWriter w;
  w.row({"trials", "seed", "phi_j", "s"});
  w.row({std::to_string(t.trials), std::to_string(t.seed), format_double(t.phi_j), std::to_string(t.s)});
  w.row({"n1", "n2", "count"});
  for (Eigen::Index a = 0; a < t.counts.rows(); ++a)
    for (Eigen::Index b = 0; b < t.counts.cols(); ++b)
      w.row({std::to_string(a), std::to_string(b), std::to_string(t.counts(a, b))});
  return w.str();
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

template <typename T>
T parse_number(const std::string& text, const char* what) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::invalid_argument(std::string("bad ") + what + " '" + text + "' in count table");
  return value;
}

}  // namespace

CountTable parse_count_table_csv(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      lines.push_back(line);
    }
  }
  if (lines.size() < 3 || lines[0] != "trials,seed,phi_j,s" || lines[2] != "n1,n2,count")
    throw std::invalid_argument("count table must start with trials,seed,phi_j,s and n1,n2,count headers");
  const auto head = split_csv(lines[1]);
  if (head.size() != 4) throw std::invalid_argument("count table header row needs four values");
  CountTable t;
  t.trials = parse_number<std::int64_t>(head[0], "trials");
  t.seed = parse_number<std::uint64_t>(head[1], "seed");
  t.phi_j = parse_number<double>(head[2], "phi_j");
  t.s = parse_number<int>(head[3], "s");

  std::vector<std::array<std::int64_t, 3>> cells;
  std::int64_t max_n = 0, total = 0;
  for (std::size_t i = 3; i < lines.size(); ++i) {
    const auto c = split_csv(lines[i]);
    if (c.size() != 3) throw std::invalid_argument("count rows need n1,n2,count");
    const std::array<std::int64_t, 3> v{parse_number<std::int64_t>(c[0], "n1"),
                                         parse_number<std::int64_t>(c[1], "n2"),
                                         parse_number<std::int64_t>(c[2], "count")};
    if (v[0] < 0 || v[1] < 0 || v[2] < 0) throw std::invalid_argument("negative entry in count table");
    max_n = std::max({max_n, v[0], v[1]});
    total += v[2];
    cells.push_back(v);
  }
  if (total != t.trials) throw std::invalid_argument("counts do not sum to the declared trials");
  t.counts.setZero(max_n + 1, max_n + 1);
  for (const auto& v : cells) t.counts(v[0], v[1]) += v[2];
  return t;
}

json to_json(const PhaseEstimate& e) {
  return {{"phi_k", e.phi_k},
          {"stderr", e.std_error},
          {"candidates", e.candidates},
          {"resolved", e.resolved}};
}

json to_json(const CoefficientEstimate& e) {
  json c = json::array();
  for (const cplx& x : e.coeffs.c) c.push_back({x.real(), x.imag()});
  return {{"s", e.coeffs.s},        {"coefficients", std::move(c)}, {"objective", e.objective},
          {"iterations", e.iterations}, {"identifiable", e.identifiable}, {"method", e.method},
          {"warnings", e.warnings}};
}

json to_json(const OutcomeDistribution& d) {
  json rows = json::array();
  for (Eigen::Index a = 0; a < d.probs.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < d.probs.cols(); ++b) row.push_back(d.probs(a, b));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const CountTable& t) {
  json rows = json::array();
  for (Eigen::Index a = 0; a < t.counts.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < t.counts.cols(); ++b) row.push_back(t.counts(a, b));
    rows.push_back(std::move(row));
  }
  return {{"trials", t.trials}, {"seed", t.seed}, {"phi_j", t.phi_j}, {"s", t.s}, {"counts", std::move(rows)}};
}

}  // namespace pbphase
