#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "pbphase/fock.hpp"
#include "pbphase/herald.hpp"
#include "pbphase/phase_est.hpp"
#include "pbphase/wigner.hpp"

namespace pbphase {

using json = nlohmann::json;

/// Shortest round-trip decimal form.
std::string format_double(double x);

/// Writes through a sibling temp file and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// {"cutoff", "modes", "norm", "leakage", "entries": [[n_1..n_M, re, im], ...]}
json to_json(const FockVector& v);
FockVector fock_vector_from_json(const json& j);
// entries: [[row, col, re, im], ...], zeros omitted
json to_json(const FockDensity& rho);
FockDensity fock_density_from_json(const json& j);

/// Text sink for `#` comment rows and comma-separated data rows, LF endings.
class CsvWriter {
 public:
  void comment(std::string_view text);
  void row(std::initializer_list<std::string> cells);
  void row(const std::vector<std::string>& cells);
  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

/// q,p,W rows, q outermost.
void write_grid_rows(CsvWriter& w, const WignerGrid& grid);
void write_sweep_rows(CsvWriter& w, const std::vector<std::pair<int, double>>& rows);
/// s,r,eta,P,F,V,leakage; failed rows become comment rows carrying the error.
void write_herald_rows(CsvWriter& w, const std::vector<SweepRow>& rows);
json herald_rows_json(const std::vector<SweepRow>& rows);

/// Header `trials,seed,phi_j,s`, its values, then `n1,n2,count` rows.
std::string count_table_csv(const CountTable& t);
CountTable parse_count_table_csv(std::string_view text);

json to_json(const PhaseEstimate& e);
json to_json(const CoefficientEstimate& e);
json to_json(const OutcomeDistribution& d);
json to_json(const CountTable& t);

}  // namespace pbphase
