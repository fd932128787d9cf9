#include "wiretap/report.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "wiretap/url.hpp"

namespace wiretap {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::kCsv: return "csv";
    case ReportFormat::kJsonLines: return "json-lines";
    case ReportFormat::kTextTable: return "text-table";
  }
  return "?";
}

ReportFormat parse_report_format(std::string_view text) {
  std::string t = ascii_lower(text);
  if (t == "csv") return ReportFormat::kCsv;
  if (t == "json-lines" || t == "jsonl") return ReportFormat::kJsonLines;
  if (t == "text-table" || t == "text") return ReportFormat::kTextTable;
  throw ConfigError("unknown report format: " + std::string(text));
}

namespace {

std::vector<std::string> chain_names(const std::vector<TransformChain>& chains) {
  std::vector<std::string> out;
  for (const auto& c : chains) out.push_back(chain_name(c));
  return out;
}

std::vector<std::string> category_names(const std::vector<DataCategory>& cats) {
  std::vector<std::string> out;
  for (auto c : cats) out.emplace_back(to_string(c));
  return out;
}

std::vector<DataCategory> parse_categories(const json& j) {
  std::vector<DataCategory> out;
  for (const auto& c : j) out.push_back(parse_data_category(c.get<std::string>()));
  return out;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string fixed2(double v) { return format_percent(v); }

}  // namespace

ordered_json to_json(const LeakFinding& f) {
  ordered_json j;
  j["token_id"] = f.token_id;
  j["case_variant"] = to_string(f.variant);
  j["chain"] = chain_name(f.chain);
  j["equivalent_chains"] = chain_names(f.equivalent_chains);
  j["rendering"] = f.rendering;
  j["request_index"] = f.request_index;
  j["timestamp"] = f.timestamp;
  j["request_url"] = f.request_url;
  j["initiator_script"] = f.initiator_script ? ordered_json(*f.initiator_script) : ordered_json(nullptr);
  j["origin"] = to_string(f.origin);
  j["derivation"] = derivation_name(f.derivation);
  j["byte_offset"] = f.byte_offset;
  j["matched_len"] = f.matched_len;
  j["in_fragment"] = f.in_fragment;
  j["primary"] = f.primary;
  return j;
}

LeakFinding finding_from_json(const json& j) {
  LeakFinding f;
  f.token_id = j.at("token_id").get<std::string>();
  f.variant = parse_case_variant(j.at("case_variant").get<std::string>());
  f.chain = parse_chain(j.at("chain").get<std::string>());
  for (const auto& c : j.at("equivalent_chains")) f.equivalent_chains.push_back(parse_chain(c.get<std::string>()));
  f.rendering = j.at("rendering").get<std::string>();
  f.request_index = j.at("request_index").get<std::size_t>();
  f.timestamp = j.at("timestamp").get<TimestampMs>();
  f.request_url = j.at("request_url").get<std::string>();
  if (!j.at("initiator_script").is_null()) f.initiator_script = j.at("initiator_script").get<std::string>();
  f.origin = parse_view_origin(j.at("origin").get<std::string>());
  f.derivation = parse_derivation(j.at("derivation").get<std::string>());
  f.byte_offset = j.at("byte_offset").get<std::size_t>();
  f.matched_len = j.at("matched_len").get<std::size_t>();
  f.in_fragment = j.at("in_fragment").get<bool>();
  f.primary = j.at("primary").get<bool>();
  return f;
}

ordered_json to_json(const WiretapVerdict& v) {
  ordered_json j;
  j["script_domain"] = v.script_domain;
  j["installed_key_listener"] = v.flags.installed_key_listener;
  j["realtime_interception"] = v.flags.realtime_interception;
  j["third_party_exfiltration"] = v.flags.third_party_exfiltration;
  j["wiretapper"] = v.wiretapper;
  j["key_events_used"] = v.key_events_used;
  j["data_categories_shared"] = category_names(v.data_categories_shared);
  j["known_tracker"] = v.known_tracker;
  j["tracker_rule"] = v.tracker_rule ? ordered_json(*v.tracker_rule) : ordered_json(nullptr);
  j["evidence"] = {{"listener_ids", v.evidence.listener_ids},
                   {"invocations", v.evidence.invocations},
                   {"findings", v.evidence.findings}};
  return j;
}

WiretapVerdict verdict_from_json(const json& j) {
  WiretapVerdict v;
  v.script_domain = j.at("script_domain").get<std::string>();
  v.flags.installed_key_listener = j.at("installed_key_listener").get<bool>();
  v.flags.realtime_interception = j.at("realtime_interception").get<bool>();
  v.flags.third_party_exfiltration = j.at("third_party_exfiltration").get<bool>();
  v.wiretapper = j.at("wiretapper").get<bool>();
  v.key_events_used = j.at("key_events_used").get<std::vector<std::string>>();
  v.data_categories_shared = parse_categories(j.at("data_categories_shared"));
  v.known_tracker = j.at("known_tracker").get<bool>();
  if (!j.at("tracker_rule").is_null()) v.tracker_rule = j.at("tracker_rule").get<std::string>();
  const auto& ev = j.at("evidence");
  v.evidence.listener_ids = ev.at("listener_ids").get<std::vector<std::string>>();
  v.evidence.invocations = ev.at("invocations").get<std::vector<std::size_t>>();
  v.evidence.findings = ev.at("findings").get<std::vector<std::size_t>>();
  return v;
}

ordered_json to_json(const CorpusSummary& s) {
  ordered_json j;
  j["site_count"] = s.site_count;
  j["trace_count"] = s.trace_count;
  j["sites_with_listener"] = s.sites_with_listener;
  j["pct_sites_with_listener"] = s.pct_sites_with_listener;
  j["total_listeners"] = s.total_listeners;
  j["mean_listeners_per_site"] = s.mean_listeners_per_site;
  j["third_party_listeners"] = s.third_party_listeners;
  j["pct_third_party_listeners"] = s.pct_third_party_listeners;
  j["sites_with_key_listener"] = s.sites_with_key_listener;
  j["pct_sites_with_key_listener"] = s.pct_sites_with_key_listener;
  j["sites_with_wiretapper"] = s.sites_with_wiretapper;
  j["pct_sites_with_wiretapper"] = s.pct_sites_with_wiretapper;
  j["wiretapper_site_pairs"] = s.wiretapper_site_pairs;
  j["mean_wiretappers_per_site"] = s.mean_wiretappers_per_site;
  j["mean_wiretappers_per_flagged_site"] = s.mean_wiretappers_per_flagged_site;
  j["event_types"] = ordered_json::array();
  for (const auto& r : s.event_types)
    j["event_types"].push_back({{"event_type", r.event_type}, {"sites", r.sites}, {"pct_sites", r.pct_sites}});
  j["key_events"] = ordered_json::array();
  for (const auto& r : s.key_events)
    j["key_events"].push_back({{"event_type", r.event_type},
                               {"sites_listener", r.sites_listener},
                               {"pct_sites_listener", r.pct_sites_listener},
                               {"sites_wiretapping", r.sites_wiretapping},
                               {"pct_sites_wiretapping", r.pct_sites_wiretapping}});
  j["data_categories"] = ordered_json::array();
  for (const auto& r : s.data_categories)
    j["data_categories"].push_back(
        {{"category", to_string(r.category)}, {"sites", r.sites}, {"pct_sites", r.pct_sites}});
  j["domains"] = ordered_json::array();
  for (const auto& r : s.domains) {
    ordered_json d;
    d["domain"] = r.domain;
    d["known_tracker"] = r.known_tracker;
    d["sites_listener"] = r.sites_listener;
    d["pct_sites_listener"] = r.pct_sites_listener;
    d["sites_key_listener"] = r.sites_key_listener;
    d["pct_sites_key_listener"] = r.pct_sites_key_listener;
    d["sites_wiretapper"] = r.sites_wiretapper;
    d["pct_sites_wiretapper"] = r.pct_sites_wiretapper;
    d["top_events"] = r.top_events;
    d["data_categories"] = category_names(r.data_categories);
    d["scripts"] = r.scripts;
    j["domains"].push_back(std::move(d));
  }
  return j;
}

CorpusSummary summary_from_json(const json& j) {
  CorpusSummary s;
  s.site_count = j.at("site_count").get<std::size_t>();
  s.trace_count = j.at("trace_count").get<std::size_t>();
  s.sites_with_listener = j.at("sites_with_listener").get<std::size_t>();
  s.pct_sites_with_listener = j.at("pct_sites_with_listener").get<double>();
  s.total_listeners = j.at("total_listeners").get<std::size_t>();
  s.mean_listeners_per_site = j.at("mean_listeners_per_site").get<double>();
  s.third_party_listeners = j.at("third_party_listeners").get<std::size_t>();
  s.pct_third_party_listeners = j.at("pct_third_party_listeners").get<double>();
  s.sites_with_key_listener = j.at("sites_with_key_listener").get<std::size_t>();
  s.pct_sites_with_key_listener = j.at("pct_sites_with_key_listener").get<double>();
  s.sites_with_wiretapper = j.at("sites_with_wiretapper").get<std::size_t>();
  s.pct_sites_with_wiretapper = j.at("pct_sites_with_wiretapper").get<double>();
  s.wiretapper_site_pairs = j.at("wiretapper_site_pairs").get<std::size_t>();
  s.mean_wiretappers_per_site = j.at("mean_wiretappers_per_site").get<double>();
  s.mean_wiretappers_per_flagged_site = j.at("mean_wiretappers_per_flagged_site").get<double>();
  for (const auto& r : j.at("event_types"))
    s.event_types.push_back(
        {r.at("event_type").get<std::string>(), r.at("sites").get<std::size_t>(), r.at("pct_sites").get<double>()});
  for (const auto& r : j.at("key_events"))
    s.key_events.push_back({r.at("event_type").get<std::string>(), r.at("sites_listener").get<std::size_t>(),
                            r.at("pct_sites_listener").get<double>(), r.at("sites_wiretapping").get<std::size_t>(),
                            r.at("pct_sites_wiretapping").get<double>()});
  for (const auto& r : j.at("data_categories"))
    s.data_categories.push_back({parse_data_category(r.at("category").get<std::string>()),
                                 r.at("sites").get<std::size_t>(), r.at("pct_sites").get<double>()});
  for (const auto& r : j.at("domains")) {
    DomainRow d;
    d.domain = r.at("domain").get<std::string>();
    d.known_tracker = r.at("known_tracker").get<bool>();
    d.sites_listener = r.at("sites_listener").get<std::size_t>();
    d.pct_sites_listener = r.at("pct_sites_listener").get<double>();
    d.sites_key_listener = r.at("sites_key_listener").get<std::size_t>();
    d.pct_sites_key_listener = r.at("pct_sites_key_listener").get<double>();
    d.sites_wiretapper = r.at("sites_wiretapper").get<std::size_t>();
    d.pct_sites_wiretapper = r.at("pct_sites_wiretapper").get<double>();
    d.top_events = r.at("top_events").get<std::vector<std::string>>();
    d.data_categories = parse_categories(r.at("data_categories"));
    d.scripts = r.at("scripts").get<std::vector<std::string>>();
    s.domains.push_back(std::move(d));
  }
  return s;
}

namespace {

using Row = std::vector<std::string>;

struct Table {
  std::string name;
  Row header;
  std::vector<Row> rows;
};

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::vector<Table> summary_tables(const CorpusSummary& s) {
  std::vector<Table> out;
  Table t{"summary", {"metric", "value"}, {}};
  auto add = [&](std::string k, std::string v) { t.rows.push_back({std::move(k), std::move(v)}); };
  add("site_count", std::to_string(s.site_count));
  add("trace_count", std::to_string(s.trace_count));
  add("sites_with_listener", std::to_string(s.sites_with_listener));
  add("pct_sites_with_listener", fixed2(s.pct_sites_with_listener));
  add("total_listeners", std::to_string(s.total_listeners));
  add("mean_listeners_per_site", fixed2(s.mean_listeners_per_site));
  add("third_party_listeners", std::to_string(s.third_party_listeners));
  add("pct_third_party_listeners", fixed2(s.pct_third_party_listeners));
  add("sites_with_key_listener", std::to_string(s.sites_with_key_listener));
  add("pct_sites_with_key_listener", fixed2(s.pct_sites_with_key_listener));
  add("sites_with_wiretapper", std::to_string(s.sites_with_wiretapper));
  add("pct_sites_with_wiretapper", fixed2(s.pct_sites_with_wiretapper));
  add("wiretapper_site_pairs", std::to_string(s.wiretapper_site_pairs));
  add("mean_wiretappers_per_site", fixed2(s.mean_wiretappers_per_site));
  add("mean_wiretappers_per_flagged_site", fixed2(s.mean_wiretappers_per_flagged_site));
  out.push_back(std::move(t));

  Table ev{"event_types", {"event_type", "sites", "pct_sites"}, {}};
  for (const auto& r : s.event_types) ev.rows.push_back({r.event_type, std::to_string(r.sites), fixed2(r.pct_sites)});
  out.push_back(std::move(ev));

  Table ke{"key_events",
           {"event_type", "sites_listener", "pct_sites_listener", "sites_wiretapping", "pct_sites_wiretapping"},
           {}};
  for (const auto& r : s.key_events)
    ke.rows.push_back({r.event_type, std::to_string(r.sites_listener), fixed2(r.pct_sites_listener),
                       std::to_string(r.sites_wiretapping), fixed2(r.pct_sites_wiretapping)});
  out.push_back(std::move(ke));

  Table dc{"data_categories", {"category", "sites", "pct_sites"}, {}};
  for (const auto& r : s.data_categories)
    dc.rows.push_back({std::string(to_string(r.category)), std::to_string(r.sites), fixed2(r.pct_sites)});
  out.push_back(std::move(dc));

  Table dm{"domains",
           {"domain", "known_tracker", "sites_listener", "pct_sites_listener", "sites_key_listener",
            "pct_sites_key_listener", "sites_wiretapper", "pct_sites_wiretapper", "top_events", "data_categories",
            "scripts"},
           {}};
  for (const auto& r : s.domains)
    dm.rows.push_back({r.domain, yes_no(r.known_tracker), std::to_string(r.sites_listener),
                       fixed2(r.pct_sites_listener), std::to_string(r.sites_key_listener),
                       fixed2(r.pct_sites_key_listener), std::to_string(r.sites_wiretapper),
                       fixed2(r.pct_sites_wiretapper), join(r.top_events, ";"),
                       join(category_names(r.data_categories), ";"), join(r.scripts, ";")});
  out.push_back(std::move(dm));
  return out;
}

Table verdict_table(const AnalysisReport& report) {
  Table t{"verdicts",
          {"source", "page_url", "site", "script_domain", "installed_key_listener", "realtime_interception",
           "third_party_exfiltration", "wiretapper", "key_events_used", "data_categories_shared", "known_tracker",
           "tracker_rule"},
          {}};
  for (const auto& tr : report.traces)
    for (const auto& v : tr.verdicts)
      t.rows.push_back({tr.source, tr.page_url, tr.site, v.script_domain, yes_no(v.flags.installed_key_listener),
                        yes_no(v.flags.realtime_interception), yes_no(v.flags.third_party_exfiltration),
                        yes_no(v.wiretapper), join(v.key_events_used, ";"),
                        join(category_names(v.data_categories_shared), ";"), yes_no(v.known_tracker),
                        v.tracker_rule.value_or("")});
  return t;
}

Table finding_table(const AnalysisReport& report) {
  Table t{"findings",
          {"source", "page_url", "request_index", "timestamp", "token_id", "case_variant", "chain",
           "equivalent_chains", "origin", "derivation", "byte_offset", "matched_len", "in_fragment", "primary",
           "request_url", "initiator_script"},
          {}};
  for (const auto& tr : report.traces)
    for (const auto& f : tr.findings)
      t.rows.push_back({tr.source, tr.page_url, std::to_string(f.request_index), std::to_string(f.timestamp),
                        f.token_id, std::string(to_string(f.variant)), chain_name(f.chain),
                        join(chain_names(f.equivalent_chains), ";"), std::string(to_string(f.origin)),
                        derivation_name(f.derivation), std::to_string(f.byte_offset), std::to_string(f.matched_len),
                        yes_no(f.in_fragment), yes_no(f.primary), f.request_url, f.initiator_script.value_or("")});
  return t;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_csv(const Table& t) {
  std::string out;
  auto line = [&](const Row& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += csv_field(r[i]);
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

std::string render_text(const Table& t) {
  std::vector<std::size_t> width(t.header.size(), 0);
  auto measure = [&](const Row& r) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  };
  measure(t.header);
  for (const auto& r : t.rows) measure(r);
  std::string out = "== " + t.name + " ==\n";
  auto line = [&](const Row& r) {
    std::string l;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) l += "  ";
      l += r[i];
      if (i + 1 < r.size()) l.append(width[i] - r[i].size(), ' ');
    }
    out += l + '\n';
  };
  line(t.header);
  Row rule;
  for (auto w : width) rule.push_back(std::string(w, '-'));
  line(rule);
  for (const auto& r : t.rows) line(r);
  return out;
}

}  // namespace

ReportFiles render_reports(const AnalysisReport& report, ReportFormat format) {
  ReportFiles files;
  std::vector<Table> tables = summary_tables(report.summary);
  tables.push_back(verdict_table(report));
  tables.push_back(finding_table(report));
  switch (format) {
    case ReportFormat::kCsv:
      for (const auto& t : tables) files[t.name + ".csv"] = render_csv(t);
      break;
    case ReportFormat::kTextTable: {
      std::string out;
      for (std::size_t i = 0; i < tables.size(); ++i) {
        if (i) out += '\n';
        out += render_text(tables[i]);
      }
      files["report.txt"] = out;
      break;
    }
    case ReportFormat::kJsonLines: {
      std::string out;
      ordered_json head;
      head["type"] = "summary";
      head["summary"] = to_json(report.summary);
      out += head.dump() + '\n';
      for (std::size_t i = 0; i < report.traces.size(); ++i) {
        const auto& tr = report.traces[i];
        ordered_json t;
        t["type"] = "trace";
        t["trace"] = i;
        t["source"] = tr.source;
        t["page_url"] = tr.page_url;
        t["site"] = tr.site;
        out += t.dump() + '\n';
        for (const auto& f : tr.findings) {
          ordered_json j;
          j["type"] = "finding";
          j["trace"] = i;
          j.update(to_json(f));
          out += j.dump() + '\n';
        }
        for (const auto& v : tr.verdicts) {
          ordered_json j;
          j["type"] = "verdict";
          j["trace"] = i;
          j.update(to_json(v));
          out += j.dump() + '\n';
        }
      }
      files["report.jsonl"] = out;
      break;
    }
  }
  return files;
}

AnalysisReport parse_json_lines_report(std::istream& in) {
  AnalysisReport report;
  bool have_summary = false;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j = json::parse(line);
      std::string type = j.at("type").get<std::string>();
      if (type == "summary") {
        report.summary = summary_from_json(j.at("summary"));
        have_summary = true;
        continue;
      }
      std::size_t idx = j.at("trace").get<std::size_t>();
      if (type == "trace") {
        if (idx != report.traces.size()) throw ParseError(n, "trace records out of order");
        TraceReport tr;
        tr.source = j.at("source").get<std::string>();
        tr.page_url = j.at("page_url").get<std::string>();
        tr.site = j.at("site").get<std::string>();
        report.traces.push_back(std::move(tr));
        continue;
      }
      if (idx + 1 != report.traces.size()) throw ParseError(n, "record refers to an unknown trace");
      if (type == "finding")
        report.traces.back().findings.push_back(finding_from_json(j));
      else if (type == "verdict")
        report.traces.back().verdicts.push_back(verdict_from_json(j));
      else
        throw ParseError(n, "unknown record type: " + type);
    } catch (const json::exception& e) {
      throw ParseError(n, e.what());
    } catch (const ConfigError& e) {
      throw ParseError(n, e.what());
    }
  }
  if (!have_summary) throw ParseError(n, "report has no summary record");
  return report;
}

void write_files(const ReportFiles& files, const std::filesystem::path& dir,
                 std::vector<std::filesystem::path>* written) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [name, content] : files) {
    auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw IoError("write failed: " + path.string());
    if (written) written->push_back(path);
  }
}

std::vector<std::filesystem::path> emit_reports(const AnalysisReport& report, ReportFormat format,
                                                const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  write_files(render_reports(report, format), dir, &written);
  return written;
}

bool TimelineSeries::empty() const {
  return std::all_of(lanes.begin(), lanes.end(), [](const auto& l) { return l.empty(); });
}

TimelineSeries emit_timeline(const CrawlTrace& trace, std::string_view subject_domain,
                             const std::vector<LeakFinding>& findings, const AttributionContext& ctx,
                             std::vector<std::string>* warnings) {
  TimelineSeries t;
  t.page_url = trace.page_url;
  t.subject = std::string(subject_domain);

  auto& registration = t.lanes[1];
  auto& invocation = t.lanes[2];
  auto& share = t.lanes[3];
  for (const auto& e : trace.listener_events)
    if (e.kind == ListenerKind::kRegister && url_domain(e.script_url, *ctx.psl) == subject_domain)
      registration.push_back(e.timestamp);
  for (const auto& inv : trace.invocations)
    if (url_domain(inv.script_url, *ctx.psl) == subject_domain) invocation.push_back(inv.timestamp);
  Evidence ev = collect_evidence(subject_domain, trace, findings, ctx);
  std::set<std::size_t> requests;
  for (std::size_t i : ev.findings) requests.insert(findings[i].request_index);
  for (std::size_t r : requests) share.push_back(trace.requests[r].timestamp);

  if (registration.empty() && invocation.empty() && share.empty()) {
    if (warnings) warnings->push_back("timeline: " + t.subject + " has no records on " + trace.page_url);
    return t;
  }
  for (const auto& i : trace.interactions) t.lanes[0].push_back(i.timestamp_start);
  for (auto& lane : t.lanes) std::sort(lane.begin(), lane.end());
  return t;
}

ordered_json to_json(const TimelineSeries& t) {
  ordered_json j;
  j["page_url"] = t.page_url;
  j["subject"] = t.subject;
  ordered_json lanes;
  for (std::size_t i = 0; i < t.lanes.size(); ++i) lanes[std::string(kTimelineLanes[i])] = t.lanes[i];
  j["lanes"] = lanes;
  return j;
}

}  // namespace wiretap
