#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pulse/floquet.hpp"
#include "pulse/io.hpp"

namespace pulse {

/// One measured quantity compared against its threshold.
struct AuditCheck {
  std::string metric;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", ">=" or "=="
  bool pass = false;
};

struct AuditRow {
  int id = 0;
  std::string name;
  std::vector<AuditCheck> checks;
  std::string error;  // set when the row threw instead of producing checks

  bool pass() const;
};

struct AuditOptions {
  std::uint64_t seed = 1;
  int closed_form_refine = 2;  // refinements of the 32x32 grid for the closed-form row
  int spread_periods = 40;
  int front_grid = 8;          // nt = nx of the torus under the front cylinder
  double front_half_length = 15.0;
  bool determinism = true;     // rerun everything and compare CSV bytes
  std::vector<int> only;       // empty: every row
};

struct AuditResult {
  std::vector<AuditRow> rows;
  std::map<std::string, CsvTable> artifacts;  // file name -> table

  bool pass() const;
  CsvTable pass_matrix() const;
};

/// Dense reference for k_lambda: the monodromy matrix assembled from matrix
/// exponentials of the semi-discrete generator (midpoint rule with `fine`
/// pieces per grid interval) and its spectral radius.
double dense_monodromy_eigenvalue(const TwistedOperator& op, int fine = 32);

/// Runs the acceptance rows. `on_row` is called as each row finishes.
AuditResult run_audit(const AuditOptions& options = {}, const std::function<void(const AuditRow&)>& on_row = {});

/// pass_matrix.csv, one CSV per artifact and summary.json (with the manifest).
void write_audit(const AuditResult& result, const std::string& out_dir, const RunManifest& manifest);

}  // namespace pulse
