#include "nestlab/cli.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "nestlab/cubic.hpp"
#include "nestlab/errors.hpp"
#include "nestlab/ledger.hpp"
#include "nestlab/nest.hpp"
#include "nestlab/realize.hpp"
#include "nestlab/serialize.hpp"
#include "nestlab/walk.hpp"

namespace nestlab {
namespace {

struct CliConfig {
    long precision_bits = 256;
    long depth = 8;
    long max_iter = kDefaultMaxIter;
    long samples = 1000;
    long steps = 200;
    std::uint64_t seed = 1;
    std::optional<double> eta;
    double tau = 0.5;
    std::string tolerance;    // real literal; empty means 2^-(precision/2)
    std::string format;       // json|csv; empty means the command default
    std::string output_path;  // empty means stdout
};

FamilySign parse_family(const std::string& text) {
    if (text == "positive") return FamilySign::positive;
    if (text == "negative") return FamilySign::negative;
    throw Error(errc::malformed_input,
                "unknown family '" + text + "', expected positive or negative");
}

CubicMap make_map(const CliConfig& cfg, const std::string& family, const std::string& a_text,
                  const std::string& b_text) {
    FamilySign sign = parse_family(family);
    Real a = Real::parse(a_text, cfg.precision_bits);
    if (b_text.empty()) return make_symmetric_cubic(sign, a, cfg.precision_bits);
    return make_cubic(sign, a, Real::parse(b_text, cfg.precision_bits), cfg.precision_bits);
}

std::string effective_format(const CliConfig& cfg, const char* command_default) {
    return cfg.format.empty() ? command_default : cfg.format;
}

void write_output(const CliConfig& cfg, std::ostream& out, const std::string& text) {
    if (cfg.output_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.output_path, std::ios::binary);
    if (!file) {
        throw Error(errc::malformed_input, "cannot open output file '" + cfg.output_path + "'");
    }
    file << text;
    file.flush();
    if (!file.good()) throw Error(errc::internal, "short write to '" + cfg.output_path + "'");
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

int status_exit(NestStatus status) {
    switch (status) {
        case NestStatus::ok: return 0;
        case NestStatus::central_return: return exit_code_for(errc::central_return);
        case NestStatus::not_in_class_g: return exit_code_for(errc::not_in_class_g);
        case NestStatus::precision_exhausted: return exit_code_for(errc::precision_exhausted);
    }
    return 1;
}

int cmd_analyze(const CliConfig& cfg, const std::string& family, const std::string& a_text,
                const std::string& b_text, std::ostream& out) {
    CubicMap map = make_map(cfg, family, a_text, b_text);
    Extraction ext = extract_prefix(map, cfg.depth, cfg.max_iter);
    std::vector<AnalyzeRow> rows = analyze_rows(ext);
    // A clean run builds one spare level to classify the last requested one;
    // show exactly the requested depth. Failed runs keep every built level.
    if (ext.status == NestStatus::ok &&
        rows.size() > static_cast<std::size_t>(cfg.depth) + 1) {
        rows.erase(rows.begin() + (cfg.depth + 1), rows.end());
    }
    std::string text;
    if (effective_format(cfg, "json") == "csv") {
        std::string s(kAnalyzeCsvHeader);
        s += '\n';
        for (const AnalyzeRow& row : rows) {
            s += csv_row(analyze_row_cells(row));
            s += '\n';
        }
        text = std::move(s);
    } else {
        Json doc = json_document("analyze");
        doc["family"] = family_name(map.family_sign);
        doc["a"] = real_json(map.a);
        doc["b"] = real_json(map.b);
        doc["precision_bits"] = cfg.precision_bits;
        doc["depth"] = cfg.depth;
        doc["status"] = nest_status_name(ext.status);
        doc["detail"] = ext.detail;
        Json jrows = Json::array();
        for (const AnalyzeRow& row : rows) jrows.push_back(analyze_row_json(row));
        doc["levels"] = std::move(jrows);
        text = dump(doc);
    }
    write_output(cfg, out, text);
    return status_exit(ext.status);
}

int cmd_check(const CliConfig& cfg, const std::string& sequence, std::ostream& out) {
    CombSequence seq = parse_sequence(sequence);
    AdmissibilityReport report = check_admissible(seq);
    std::string text;
    if (effective_format(cfg, "json") == "csv") {
        std::string s = "admissible,index,rule,detail\n";
        s += csv_row({report.ok ? "true" : "false",
                      report.ok ? "" : std::to_string(report.index), report.rule,
                      report.detail});
        s += '\n';
        text = std::move(s);
    } else {
        Json doc = json_document("check");
        doc["sequence"] = format_sequence(seq);
        doc.update(admissibility_json(report));
        text = dump(doc);
    }
    write_output(cfg, out, text);
    return report.ok ? 0 : exit_code_for(errc::inadmissible);
}

int cmd_solve(const CliConfig& cfg, const std::string& family, const std::string& sequence,
              std::ostream& out) {
    FamilySign sign = parse_family(family);
    CombSequence target = parse_sequence(sequence);
    SolveOptions opts;
    opts.precision_bits = cfg.precision_bits;
    opts.max_iter = cfg.max_iter;
    Real tolerance = cfg.tolerance.empty()
                         ? Real::pow2(-(cfg.precision_bits / 2), cfg.precision_bits)
                         : Real::parse(cfg.tolerance, cfg.precision_bits);
    Interval range = default_parameter_range(sign, cfg.precision_bits);
    SolveResult result = solve(target, cfg.depth, sign, range, tolerance, opts);
    std::string text;
    if (effective_format(cfg, "json") == "csv") {
        std::string s(kSolveCsvHeader);
        s += '\n';
        s += csv_row(solve_cells(result));
        s += '\n';
        text = std::move(s);
    } else {
        Json doc = json_document("solve");
        doc["family"] = family_name(sign);
        doc["target"] = format_sequence(target);
        doc["depth"] = cfg.depth;
        doc["precision_bits"] = cfg.precision_bits;
        doc.update(solve_json(result));
        text = dump(doc);
    }
    write_output(cfg, out, text);
    return 0;
}

int cmd_ledger(const CliConfig& cfg, const std::string& sequence, std::ostream& out) {
    CombSequence seq = parse_sequence(sequence);
    std::vector<LedgerRow> rows = run_ledger(seq, cfg.tau, cfg.eta);
    std::string text;
    if (effective_format(cfg, "csv") == "json") {
        Json doc = json_document("ledger");
        doc["sequence"] = format_sequence(seq);
        doc["tau"] = cfg.tau;
        doc["eta"] = cfg.eta ? *cfg.eta : rows.front().beta / 32;
        Json jrows = Json::array();
        for (const LedgerRow& row : rows) jrows.push_back(ledger_row_json(row));
        doc["rows"] = std::move(jrows);
        text = dump(doc);
    } else {
        std::string s(kLedgerCsvHeader);
        s += '\n';
        for (const LedgerRow& row : rows) {
            s += csv_row(ledger_row_cells(row));
            s += '\n';
        }
        text = std::move(s);
    }
    write_output(cfg, out, text);
    return 0;
}

int cmd_walk(const CliConfig& cfg, const std::string& family, const std::string& a_text,
             const std::string& b_text, std::ostream& out) {
    CubicMap map = make_map(cfg, family, a_text, b_text);
    Nest nest = build_nest(map, cfg.depth, cfg.max_iter);
    if (nest.status != NestStatus::ok) {
        switch (nest.status) {
            case NestStatus::central_return: throw Error(errc::central_return, nest.detail);
            case NestStatus::not_in_class_g: throw Error(errc::not_in_class_g, nest.detail);
            default: throw Error(errc::precision_exhausted, nest.detail);
        }
    }
    InducedMapContext ctx = make_walk_context(std::move(nest), cfg.max_iter);
    WalkResult result = walk_statistics(ctx, cfg.samples, cfg.steps, cfg.seed);
    std::string text;
    if (effective_format(cfg, "json") == "csv") {
        text = walk_trajectories_csv(result);
    } else {
        Json doc = json_document("walk");
        doc["family"] = family_name(ctx.map.family_sign);
        doc["a"] = real_json(ctx.map.a);
        doc["b"] = real_json(ctx.map.b);
        doc["precision_bits"] = cfg.precision_bits;
        doc["depth"] = cfg.depth;
        doc["seed"] = cfg.seed;
        doc["stats"] = walk_stats_json(result.stats);
        text = dump(doc);
    }
    write_output(cfg, out, text);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    CLI::App app{"Twin principal nests of bimodal cubic maps"};
    app.name("nestlab");
    app.require_subcommand(1);
    app.set_config("--config")
        ->envname("NESTLAB_CONFIG")
        ->description("key=value file supplying defaults for any option");

    app.add_option("--precision-bits", cfg.precision_bits, "working mantissa bits")
        ->envname("NESTLAB_PRECISION_BITS")
        ->check(CLI::Range(long(32), long(1) << 20));
    app.add_option("--depth", cfg.depth, "nest levels to build")
        ->envname("NESTLAB_DEPTH")
        ->check(CLI::Range(long(0), long(1000000)));
    app.add_option("--max-iter", cfg.max_iter, "budget per return-time search")
        ->envname("NESTLAB_MAX_ITER")
        ->check(CLI::Range(long(1), std::numeric_limits<long>::max()));
    app.add_option("--samples", cfg.samples, "walk sample count")
        ->envname("NESTLAB_SAMPLES")
        ->check(CLI::Range(long(0), long(100000000)));
    app.add_option("--steps", cfg.steps, "steps per walk sample")
        ->envname("NESTLAB_STEPS")
        ->check(CLI::Range(long(0), long(100000000)));
    app.add_option("--seed", cfg.seed, "random stream seed")->envname("NESTLAB_SEED");
    app.add_option("--eta", cfg.eta, "ledger block bonus, defaults to beta_0/32")
        ->envname("NESTLAB_ETA");
    app.add_option("--tau", cfg.tau, "ledger start separation")->envname("NESTLAB_TAU");
    app.add_option("--tolerance", cfg.tolerance,
                   "target parameter window width, defaults to 2^-(precision/2)")
        ->envname("NESTLAB_TOLERANCE");
    app.add_option("--format", cfg.format, "json or csv")
        ->envname("NESTLAB_FORMAT")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", cfg.output_path, "write the document here instead of stdout")
        ->envname("NESTLAB_OUT");

    std::string family;
    std::string a_text;
    std::string b_text;
    std::string sequence;

    CLI::App* analyze = app.add_subcommand("analyze", "per-level nest table for one map");
    analyze->add_option("family", family, "positive or negative")->required();
    analyze->add_option("a", a_text, "leading coefficient")->required();
    analyze->add_option("--b", b_text, "quadratic coefficient, defaults to the symmetric slice");
    analyze->fallthrough();

    CLI::App* check = app.add_subcommand("check", "admissibility of a combinatorial sequence");
    check->add_option("sequence", sequence, "triples like 'A+,2,1;B-,2,1'")->required();
    check->fallthrough();

    CLI::App* solve = app.add_subcommand("solve", "find a parameter realizing a sequence prefix");
    solve->add_option("family", family, "positive or negative")->required();
    solve->add_option("sequence", sequence, "target triples")->required();
    solve->fallthrough();

    CLI::App* ledger = app.add_subcommand("ledger", "separation ledger along a sequence");
    ledger->add_option("sequence", sequence, "triples")->required();
    ledger->fallthrough();

    CLI::App* walk = app.add_subcommand("walk", "seeded first-entry walk statistics");
    walk->add_option("family", family, "positive or negative")->required();
    walk->add_option("a", a_text, "leading coefficient")->required();
    walk->add_option("--b", b_text, "quadratic coefficient, defaults to the symmetric slice");
    walk->fallthrough();

    // CLI11 applies config-file values before environment variables, which
    // would let a config file shadow the environment. The required order is
    // flags > environment > config > defaults, so environment values are
    // promoted to synthetic flags when the real flag is absent.
    static constexpr std::pair<const char*, const char*> kEnvFlags[] = {
        {"--precision-bits", "NESTLAB_PRECISION_BITS"},
        {"--depth", "NESTLAB_DEPTH"},
        {"--max-iter", "NESTLAB_MAX_ITER"},
        {"--samples", "NESTLAB_SAMPLES"},
        {"--steps", "NESTLAB_STEPS"},
        {"--seed", "NESTLAB_SEED"},
        {"--eta", "NESTLAB_ETA"},
        {"--tau", "NESTLAB_TAU"},
        {"--tolerance", "NESTLAB_TOLERANCE"},
        {"--format", "NESTLAB_FORMAT"},
        {"--out", "NESTLAB_OUT"},
    };
    std::vector<std::string> argv = args;
    for (const auto& [flag, env] : kEnvFlags) {
        const char* value = std::getenv(env);
        if (!value || !*value) continue;
        bool given = false;
        for (const std::string& tok : args) {
            if (tok == flag || tok.rfind(std::string(flag) + "=", 0) == 0) {
                given = true;
                break;
            }
        }
        if (!given) argv.push_back(std::string(flag) + "=" + value);
    }

    try {
        std::vector<std::string> reversed(argv.rbegin(), argv.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return exit_code_for(errc::malformed_input);
    }

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(cfg, family, a_text, b_text, out);
        if (app.got_subcommand(check)) return cmd_check(cfg, sequence, out);
        if (app.got_subcommand(solve)) return cmd_solve(cfg, family, sequence, out);
        if (app.got_subcommand(ledger)) return cmd_ledger(cfg, sequence, out);
        if (app.got_subcommand(walk)) return cmd_walk(cfg, family, a_text, b_text, out);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "internal: " << e.what() << "\n";
        return 1;
    }
    err << "no command selected\n";
    return exit_code_for(errc::malformed_input);
}

}  // namespace nestlab
