#include "nestlab/serialize.hpp"

#include <charconv>

namespace nestlab {

Json json_document(const std::string& command) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command;
    return doc;
}

Json real_json(const Real& x) {
    Json j;
    j["decimal"] = x.to_decimal();
    j["precision_bits"] = static_cast<long>(x.precision());
    return j;
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
    std::string out = "\"";
    for (char ch : cell) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
    return out;
}

}  // namespace

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(cells[i]);
    }
    return out;
}

std::vector<AnalyzeRow> analyze_rows(const Extraction& ext) {
    std::vector<AnalyzeRow> rows;
    for (const NestLevel& lv : ext.nest.levels) {
        AnalyzeRow row{lv.n,     lv.I.width(), lv.J.width(), lv.lambda,
                       lv.S,     lv.S_hat,     "",           0,
                       0,        "ok"};
        if (lv.n >= 1 && static_cast<std::size_t>(lv.n) <= ext.seq.triples.size()) {
            row.theta = ext.subtypes[lv.n - 1].str();
            row.r = ext.seq.triples[lv.n - 1].r;
            row.t = ext.seq.triples[lv.n - 1].t;
        }
        rows.push_back(std::move(row));
    }
    if (!rows.empty()) rows.back().status = nest_status_name(ext.status);
    return rows;
}

Json analyze_row_json(const AnalyzeRow& row) {
    Json j;
    j["n"] = row.n;
    j["width_I"] = real_json(row.width_I);
    j["width_J"] = real_json(row.width_J);
    j["lambda"] = real_json(row.lambda);
    j["S"] = row.S;
    j["S_hat"] = row.S_hat;
    if (row.theta.empty()) {
        j["theta"] = nullptr;
        j["r"] = nullptr;
        j["t"] = nullptr;
    } else {
        j["theta"] = row.theta;
        j["r"] = row.r;
        j["t"] = row.t;
    }
    j["status"] = row.status;
    return j;
}

std::vector<std::string> analyze_row_cells(const AnalyzeRow& row) {
    return {std::to_string(row.n),
            row.width_I.to_decimal(),
            row.width_J.to_decimal(),
            row.lambda.to_decimal(),
            std::to_string(row.S),
            std::to_string(row.S_hat),
            row.theta,
            row.theta.empty() ? "" : std::to_string(row.r),
            row.theta.empty() ? "" : std::to_string(row.t),
            row.status};
}

Json admissibility_json(const AdmissibilityReport& report) {
    Json j;
    j["admissible"] = report.ok;
    if (!report.ok) {
        j["index"] = report.index;
        j["rule"] = report.rule;
        j["detail"] = report.detail;
    }
    return j;
}

Json solve_json(const SolveResult& result) {
    Json j;
    Json window;
    window["lo"] = real_json(result.parameter_interval.lo);
    window["hi"] = real_json(result.parameter_interval.hi);
    j["parameter_interval"] = std::move(window);
    j["achieved_depth"] = result.achieved_depth;
    j["evaluations"] = result.evaluations;
    j["extracted"] = format_sequence(result.extracted);
    return j;
}

std::vector<std::string> solve_cells(const SolveResult& result) {
    return {result.parameter_interval.lo.to_decimal(),
            result.parameter_interval.hi.to_decimal(),
            std::to_string(result.achieved_depth),
            std::to_string(result.evaluations),
            format_sequence(result.extracted)};
}

Json ledger_row_json(const LedgerRow& row) {
    Json j;
    j["step"] = row.step;
    j["beta"] = row.beta;
    j["delta"] = row.delta;
    j["mu_lower"] = row.mu_lower;
    j["rule_fired"] = row.rule;
    return j;
}

std::vector<std::string> ledger_row_cells(const LedgerRow& row) {
    return {std::to_string(row.step), format_double(row.beta), format_double(row.delta),
            format_double(row.mu_lower), row.rule};
}

Json walk_stats_json(const WalkStats& stats) {
    Json j;
    j["samples"] = stats.samples;
    j["steps_per_sample"] = stats.steps_per_sample;
    j["aborted"] = stats.aborted;
    j["revisit_threshold"] = stats.revisit_threshold;
    j["revisit_fraction"] = stats.revisit_fraction;
    Json levels = Json::array();
    for (const auto& [level, visits] : stats.level_counts) {
        Json entry;
        entry["level"] = level;
        entry["visits"] = visits;
        entry["drift"] = stats.drift_estimates.at(level);
        entry["second_moment"] = stats.variance_estimates.at(level);
        levels.push_back(std::move(entry));
    }
    j["levels"] = std::move(levels);
    Json transitions = Json::array();
    for (const auto& [key, count] : stats.transition_counts) {
        Json entry;
        entry["level"] = key.first;
        entry["jump"] = key.second;
        entry["count"] = count;
        transitions.push_back(std::move(entry));
    }
    j["transitions"] = std::move(transitions);
    return j;
}

std::string walk_trajectories_csv(const WalkResult& result) {
    std::string out = kWalkCsvHeader;
    out += '\n';
    for (std::size_t s = 0; s < result.runs.size(); ++s) {
        const WalkRun& run = result.runs[s];
        for (std::size_t k = 0; k < run.levels.size(); ++k) {
            out += csv_row({std::to_string(s), std::to_string(k),
                            std::to_string(run.levels[k]), run.stop_reason});
            out += '\n';
        }
    }
    return out;
}

}  // namespace nestlab
