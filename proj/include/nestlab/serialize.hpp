#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "nestlab/comb.hpp"
#include "nestlab/ledger.hpp"
#include "nestlab/realize.hpp"
#include "nestlab/walk.hpp"

namespace nestlab {

// Insertion-ordered so documents serialize with a stable field order.
using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";

// Root object carrying schema_version and the command name.
Json json_document(const std::string& command);

// Working-precision values travel as decimal strings together with their
// mantissa size; they are never squeezed through a double.
Json real_json(const Real& x);

// Shortest round-trip form, C locale, no grouping.
std::string format_double(double x);

// One line without the trailing newline. Cells containing separators,
// quotes or line breaks get quoted.
std::string csv_row(const std::vector<std::string>& cells);

// ---- analyze ----

// One table line per built level. theta/r/t stay empty where the
// classification did not reach (level 0 and, after an early stop, the
// deepest rows); status reads "ok" except on the last row, which carries
// the terminal status of the run.
struct AnalyzeRow {
    long n;
    Real width_I;
    Real width_J;
    Real lambda;
    long S;
    long S_hat;
    std::string theta;
    long r;  // 0 when unknown
    long t;
    std::string status;
};

inline constexpr const char* kAnalyzeCsvHeader =
    "n,width_I,width_J,lambda,S,S_hat,theta,r,t,status";

std::vector<AnalyzeRow> analyze_rows(const Extraction& ext);

Json analyze_row_json(const AnalyzeRow& row);
std::vector<std::string> analyze_row_cells(const AnalyzeRow& row);

// ---- check ----

// ok plus, on failure, the violating index and rule.
Json admissibility_json(const AdmissibilityReport& report);

// ---- solve ----

Json solve_json(const SolveResult& result);

inline constexpr const char* kSolveCsvHeader =
    "parameter_lo,parameter_hi,achieved_depth,evaluations,extracted";

std::vector<std::string> solve_cells(const SolveResult& result);

// ---- ledger ----

inline constexpr const char* kLedgerCsvHeader = "step,beta,delta,mu_lower,rule_fired";

Json ledger_row_json(const LedgerRow& row);
std::vector<std::string> ledger_row_cells(const LedgerRow& row);

// ---- walk ----

inline constexpr const char* kWalkCsvHeader = "sample_id,k,level,stop_reason";

Json walk_stats_json(const WalkStats& stats);

// One line per recorded position of every sample path.
std::string walk_trajectories_csv(const WalkResult& result);

}  // namespace nestlab
