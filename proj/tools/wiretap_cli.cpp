// wiretap: analyze crawl traces for keystroke wiretapping.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wiretap/fixtures.hpp"
#include "wiretap/pipeline.hpp"

namespace {

using namespace wiretap;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInput = 3;
constexpr int kExitIo = 4;

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<Algorithm> algorithms(const std::string& list, TransformKind kind) {
  std::vector<Algorithm> out;
  if (ascii_lower(list) == "none") return out;
  if (ascii_lower(list) == "all") {
    for (Algorithm a : all_algorithms())
      if (kind_of(a) == kind) out.push_back(a);
    return out;
  }
  for (const auto& name : split_list(list)) {
    Algorithm a = parse_algorithm(name);
    if (kind_of(a) != kind) throw ConfigError(name + " is not listed under its kind");
    out.push_back(a);
  }
  return out;
}

struct AnalyzeArgs {
  std::string config;
  std::vector<std::string> traces;
  std::string psl, entities;
  std::vector<std::string> filters;
  std::string hashes = "all", encodings = "all", compressors = "all";
  int encode_depth = 2;
  TimestampMs window_ms = 500;
  std::size_t min_pattern_len = 8;
  std::string out = "wiretap-out";
  std::string formats = "csv,json-lines,text-table";
  std::size_t jobs = 0;
  bool lenient = false, audit = false, no_timelines = false, quiet = false;
};

int run_analyze_cmd(const AnalyzeArgs& a) {
  RunConfig cfg;
  cfg.traces = a.traces;
  cfg.psl = a.psl;
  cfg.entities = a.entities;
  cfg.filters = a.filters;
  cfg.chains.hashes = algorithms(a.hashes, TransformKind::kHash);
  cfg.chains.encodings = algorithms(a.encodings, TransformKind::kEncode);
  cfg.chains.compressors = algorithms(a.compressors, TransformKind::kCompress);
  cfg.chains.max_encode_depth = a.encode_depth;
  cfg.window_ms = a.window_ms;
  cfg.min_pattern_len = a.min_pattern_len;
  cfg.output_dir = a.out;
  cfg.formats.clear();
  for (const auto& f : split_list(a.formats)) cfg.formats.push_back(parse_report_format(f));
  cfg.parallelism = a.jobs;
  cfg.strict = !a.lenient;
  cfg.audit = a.audit;
  cfg.timelines = !a.no_timelines;
  if (!a.config.empty()) apply_config_file(cfg, a.config);
  cfg.validate();

  AnalysisRun run = run_analyze(cfg);
  for (const auto& w : run.warnings) std::cerr << "warning: " << w << "\n";
  if (!a.quiet) {
    const auto& s = run.report.summary;
    std::cout << "traces " << s.trace_count << ", sites " << s.site_count << ", sites with a wiretapper "
              << s.sites_with_wiretapper << " (" << format_percent(s.pct_sites_with_wiretapper) << "%)\n"
              << "reports written to " << cfg.output_dir << "\n";
  }
  return kExitOk;
}

int run_fixtures_cmd(const std::string& preset, const std::string& out, std::uint64_t seed,
                     const std::string& chains, bool quiet) {
  std::vector<TransformChain> sweep;
  const std::vector<TransformChain>* sweep_ptr = nullptr;
  if (!chains.empty()) {
    for (const auto& c : split_list(chains)) {
      TransformChain chain = parse_chain(c);
      if (!chain_is_admissible(chain)) throw ConfigError("unsupported chain: " + c);
      sweep.push_back(chain);
    }
    sweep_ptr = &sweep;
  }
  FixtureSet set = make_fixture(preset, seed, sweep_ptr);
  write_fixture_set(set, out);
  if (!quiet)
    std::cout << preset << ": " << set.traces.size() << " traces written to " << out << "\n"
              << "analyze with: wiretap analyze --config " << (std::filesystem::path(out) / "run.json").string()
              << "\n";
  return kExitOk;
}

int run_report_cmd(const std::string& input, const std::string& formats, const std::string& out) {
  std::ifstream in(input);
  if (!in) throw IoError("cannot read " + input);
  AnalysisReport report = parse_json_lines_report(in);
  for (const auto& f : split_list(formats)) emit_reports(report, parse_report_format(f), out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline detection of keystroke wiretapping in recorded page visits"};
  app.require_subcommand(1);

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Scan traces for leaks and classify script domains");
  analyze->add_option("--config", aa.config, "JSON run config; its fields override the flags");
  analyze->add_option("-t,--trace", aa.traces, "Trace file or directory (repeatable)");
  analyze->add_option("--psl", aa.psl, "Public suffix list (.dat)");
  analyze->add_option("--entities", aa.entities, "Entity map (JSON)");
  analyze->add_option("--filters", aa.filters, "Filter list (repeatable)");
  analyze->add_option("--hashes", aa.hashes, "Comma-separated hash names, 'all' or 'none'");
  analyze->add_option("--encodings", aa.encodings, "Comma-separated encoding names, 'all' or 'none'");
  analyze->add_option("--compressors", aa.compressors, "Comma-separated compressor names, 'all' or 'none'");
  analyze->add_option("--encode-depth", aa.encode_depth, "Maximum stacked encodings (0-2)");
  analyze->add_option("--window-ms", aa.window_ms, "Correlation window in milliseconds");
  analyze->add_option("--min-pattern-len", aa.min_pattern_len, "Shortest rendered pattern indexed");
  analyze->add_option("-o,--out", aa.out, "Output directory");
  analyze->add_option("--format", aa.formats, "csv, json-lines, text-table (comma-separated)");
  analyze->add_option("-j,--jobs", aa.jobs, "Traces analyzed in parallel; 0 (default) = all cores");
  analyze->add_flag("--lenient", aa.lenient, "Skip malformed lines and unreadable traces");
  analyze->add_flag("--audit", aa.audit, "Write fingerprint listings");
  analyze->add_flag("--no-timelines", aa.no_timelines, "Do not write timelines.jsonl");
  analyze->add_flag("-q,--quiet", aa.quiet, "No summary on stdout");

  std::string preset, fx_out, fx_chains;
  std::uint64_t seed = kDefaultFixtureSeed;
  bool fx_quiet = false;
  auto* gen = app.add_subcommand("gen-fixtures", "Write a synthetic trace corpus with its expected results");
  gen->add_option("--preset", preset, "truth-table, corpus50, chain-sweep or timeline")->required();
  gen->add_option("-o,--out", fx_out, "Output directory")->required();
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--chains", fx_chains, "chain-sweep only: comma-separated chains, default the full inventory");
  gen->add_flag("-q,--quiet", fx_quiet, "No message on stdout");

  std::string rp_in, rp_formats = "text-table", rp_out = ".";
  auto* report = app.add_subcommand("report", "Render a json-lines report in other formats");
  report->add_option("-i,--input", rp_in, "report.jsonl written by analyze")->required();
  report->add_option("--format", rp_formats, "csv, json-lines, text-table (comma-separated)");
  report->add_option("-o,--out", rp_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*analyze) return run_analyze_cmd(aa);
    if (*gen) return run_fixtures_cmd(preset, fx_out, seed, fx_chains, fx_quiet);
    if (*report) return run_report_cmd(rp_in, rp_formats, rp_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const IntegrityError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const UsageError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
