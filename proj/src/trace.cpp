#include "wiretap/trace.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wiretap/public_suffix.hpp"
#include "wiretap/transforms.hpp"
#include "wiretap/url.hpp"

namespace wiretap {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(ListenerKind kind) {
  return kind == ListenerKind::kRegister ? "register" : "remove";
}

std::string_view to_string(InteractionKind kind) {
  switch (kind) {
    case InteractionKind::kMouseMove: return "mouse_move";
    case InteractionKind::kNavKey: return "nav_key";
    case InteractionKind::kFormFill: return "form_fill";
    case InteractionKind::kTextareaFill: return "textarea_fill";
    case InteractionKind::kBodyKeystrokes: return "body_keystrokes";
  }
  return "mouse_move";
}

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::kEmail: return "email";
    case FieldKind::kPhone: return "phone";
    case FieldKind::kPassword: return "password";
    case FieldKind::kText: return "text";
    case FieldKind::kUrl: return "url";
    case FieldKind::kOther: return "other";
  }
  return "other";
}

std::string_view to_string(DataCategory category) {
  switch (category) {
    case DataCategory::kFormText: return "form_text";
    case DataCategory::kMail: return "mail";
    case DataCategory::kPhone: return "phone";
    case DataCategory::kPassword: return "password";
    case DataCategory::kUrl: return "url";
  }
  return "form_text";
}

DataCategory parse_data_category(std::string_view text) {
  for (DataCategory c : all_data_categories())
    if (to_string(c) == text) return c;
  throw ConfigError("unknown data category: " + std::string(text));
}

const std::vector<DataCategory>& all_data_categories() {
  static const std::vector<DataCategory> all = {DataCategory::kFormText, DataCategory::kMail, DataCategory::kPhone,
                                                DataCategory::kPassword, DataCategory::kUrl};
  return all;
}

std::optional<std::string> NetworkRecord::header(std::string_view name) const {
  std::string wanted = ascii_lower(name);
  for (const auto& [n, v] : headers)
    if (ascii_lower(n) == wanted) return v;
  return std::nullopt;
}

const HoneyToken* CrawlTrace::find_token(std::string_view token_id) const {
  for (const auto& t : honey_tokens)
    if (t.token_id == token_id) return &t;
  return nullptr;
}

const ListenerEvent* CrawlTrace::find_registration(std::string_view listener_id) const {
  for (const auto& e : listener_events)
    if (e.kind == ListenerKind::kRegister && e.listener_id == listener_id) return &e;
  return nullptr;
}

std::string CrawlTrace::page_host() const {
  auto url = parse_url(page_url);
  return url ? url->host : std::string();
}

namespace {

// Field access with the line number carried into every error.
class Record {
 public:
  Record(const json& j, std::size_t line) : j_(j), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

  const json& required(const char* key) const {
    auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) fail(std::string("missing field '") + key + "'");
    return *it;
  }
  const json* optional(const char* key) const {
    auto it = j_.find(key);
    return (it == j_.end() || it->is_null()) ? nullptr : &*it;
  }
  std::string str(const char* key) const { return as_string(required(key), key); }
  std::optional<std::string> opt_str(const char* key) const {
    const json* v = optional(key);
    if (!v) return std::nullopt;
    return as_string(*v, key);
  }
  std::int64_t integer(const char* key) const { return as_int(required(key), key); }
  std::vector<std::string> strings(const json& v, const char* key) const {
    if (!v.is_array()) fail(std::string("field '") + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& item : v) out.push_back(as_string(item, key));
    return out;
  }

  std::string as_string(const json& v, const char* key) const {
    if (!v.is_string()) fail(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
  }
  std::int64_t as_int(const json& v, const char* key) const {
    if (!v.is_number_integer()) fail(std::string("field '") + key + "' must be an integer");
    return v.get<std::int64_t>();
  }

 private:
  const json& j_;
  std::size_t line_;
};

bool is_http_token(std::string_view s) {
  if (s.empty()) return false;
  static constexpr std::string_view kExtra = "!#$%&'*+-.^_`|~";
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return is_ascii_alnum(c) || kExtra.find(static_cast<char>(c)) != std::string_view::npos;
  });
}

template <class T, class Key>
std::size_t stable_sort_by_time(std::vector<T>& items, Key key) {
  std::size_t out_of_order = 0;
  TimestampMs high = std::numeric_limits<TimestampMs>::min();
  for (const auto& item : items) {
    if (key(item) < high) ++out_of_order;
    high = std::max(high, key(item));
  }
  std::stable_sort(items.begin(), items.end(), [&](const T& a, const T& b) { return key(a) < key(b); });
  return out_of_order;
}

InteractionKind parse_interaction_kind(const Record& r, const std::string& s) {
  for (auto k : {InteractionKind::kMouseMove, InteractionKind::kNavKey, InteractionKind::kFormFill,
                 InteractionKind::kTextareaFill, InteractionKind::kBodyKeystrokes})
    if (to_string(k) == s) return k;
  r.fail("unknown interaction kind '" + s + "'");
}

FieldKind parse_field_kind(const Record& r, const std::string& s) {
  for (auto k : {FieldKind::kEmail, FieldKind::kPhone, FieldKind::kPassword, FieldKind::kText, FieldKind::kUrl,
                 FieldKind::kOther})
    if (to_string(k) == s) return k;
  r.fail("unknown field kind '" + s + "'");
}

void parse_meta(const Record& r, CrawlTrace& trace) {
  std::string schema = r.str("schema");
  if (schema != kTraceSchema) r.fail("unsupported schema '" + schema + "'");
  trace.page_url = r.str("page_url");
  trace.visit_start = r.integer("visit_start");
  if (const json* rank = r.optional("site_rank")) {
    trace.site_rank = r.as_int(*rank, "site_rank");
    if (*trace.site_rank <= 0) r.fail("site_rank must be positive");
  }
  if (const json* partial = r.optional("partial")) {
    if (!partial->is_boolean()) r.fail("field 'partial' must be a boolean");
    trace.partial = partial->get<bool>();
  }
}

ListenerEvent parse_listener(const Record& r) {
  ListenerEvent e;
  std::string kind = r.str("kind");
  if (kind == "register") {
    e.kind = ListenerKind::kRegister;
  } else if (kind == "remove") {
    e.kind = ListenerKind::kRemove;
  } else {
    r.fail("unknown listener kind '" + kind + "'");
  }
  e.event_type = ascii_lower(r.str("event_type"));
  e.target_descriptor = r.str("target");
  e.script_url = r.str("script_url");
  e.stack = r.strings(r.required("stack"), "stack");
  e.timestamp = r.integer("ts");
  e.listener_id = r.str("listener_id");
  return e;
}

InvocationRecord parse_invoke(const Record& r) {
  InvocationRecord inv;
  inv.listener_id = r.str("listener_id");
  inv.event_type = ascii_lower(r.str("event_type"));
  inv.timestamp = r.integer("ts");
  inv.script_url = r.str("script_url");
  inv.key = r.opt_str("key");
  return inv;
}

InteractionRecord parse_interact(const Record& r) {
  InteractionRecord rec;
  rec.kind = parse_interaction_kind(r, r.str("kind"));
  if (auto fk = r.opt_str("field_kind")) rec.field_kind = parse_field_kind(r, *fk);
  rec.token_id = r.opt_str("token_id");
  rec.timestamp_start = r.integer("ts_start");
  rec.timestamp_end = r.integer("ts_end");
  return rec;
}

NetworkRecord parse_request(const Record& r) {
  NetworkRecord req;
  req.request_url = r.str("url");
  if (!parse_url(req.request_url)) r.fail("request url does not parse: " + req.request_url);
  req.method = r.str("method");
  if (!is_http_token(req.method)) r.fail("invalid HTTP method '" + req.method + "'");
  if (const json* headers = r.optional("headers")) {
    if (!headers->is_array()) r.fail("field 'headers' must be an array");
    for (const auto& h : *headers) {
      if (!h.is_array() || h.size() != 2 || !h[0].is_string() || !h[1].is_string())
        r.fail("each header must be a [name, value] pair of strings");
      req.headers.emplace_back(h[0].get<std::string>(), h[1].get<std::string>());
    }
  }
  if (auto body = r.opt_str("body")) {
    auto decoded = codec::base64_decode(*body);
    if (!decoded) r.fail("request body is not valid base64");
    req.body = std::move(*decoded);
  }
  req.timestamp = r.integer("ts");
  req.initiator_script = r.opt_str("initiator_script");
  if (const json* stack = r.optional("initiator_stack")) req.initiator_stack = r.strings(*stack, "initiator_stack");
  return req;
}

HoneyToken parse_token(const Record& r) {
  HoneyToken t;
  t.token_id = r.str("token_id");
  t.value = r.str("value");
  std::string category = r.str("category");
  try {
    t.category = parse_data_category(category);
  } catch (const ConfigError&) {
    r.fail("unknown data category '" + category + "'");
  }
  if (const json* unique = r.optional("per_site_unique")) {
    if (!unique->is_boolean()) r.fail("field 'per_site_unique' must be a boolean");
    t.per_site_unique = unique->get<bool>();
  }
  return t;
}

}  // namespace

CrawlTrace parse_trace(std::istream& in, ParseStats* stats, const ParseOptions& options) {
  ParseStats local;
  ParseStats& st = stats ? *stats : local;
  st = ParseStats{};
  CrawlTrace trace;
  bool have_meta = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++st.lines_read;
    try {
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) throw ParseError(line_no, "not a JSON object");
      Record r(j, line_no);
      std::string rec = r.str("rec");
      if (!have_meta && rec != "meta") throw ParseError(line_no, "first record must be 'meta'");
      if (rec == "meta") {
        if (have_meta) r.fail("duplicate 'meta' record");
        parse_meta(r, trace);
        have_meta = true;
      } else if (rec == "listener") {
        trace.listener_events.push_back(parse_listener(r));
      } else if (rec == "invoke") {
        trace.invocations.push_back(parse_invoke(r));
      } else if (rec == "interact") {
        trace.interactions.push_back(parse_interact(r));
      } else if (rec == "request") {
        trace.requests.push_back(parse_request(r));
      } else if (rec == "token") {
        trace.honey_tokens.push_back(parse_token(r));
      } else if (rec == "response" || rec == "cookie") {
        ++st.ignored;
        continue;
      } else {
        r.fail("unknown record kind '" + rec + "'");
      }
      ++st.stored;
    } catch (const ParseError& e) {
      // Without a meta record the trace has no identity; always fatal.
      if (options.strict || !have_meta) throw;
      st.rejected.emplace_back(line_no, e.what());
    }
  }
  if (!have_meta) throw ParseError(line_no + 1, "missing 'meta' record");

  st.out_of_order += stable_sort_by_time(trace.listener_events, [](const auto& e) { return e.timestamp; });
  st.out_of_order += stable_sort_by_time(trace.invocations, [](const auto& e) { return e.timestamp; });
  st.out_of_order += stable_sort_by_time(trace.interactions, [](const auto& e) { return e.timestamp_start; });
  st.out_of_order += stable_sort_by_time(trace.requests, [](const auto& e) { return e.timestamp; });

  validate_trace(trace);
  return trace;
}

CrawlTrace parse_trace_file(const std::string& path, ParseStats* stats, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace file: " + path);
  return parse_trace(in, stats, options);
}

std::string serialize_trace(const CrawlTrace& trace) {
  std::ostringstream out;
  auto emit = [&](const ordered_json& j) { out << j.dump() << '\n'; };

  ordered_json meta = {{"rec", "meta"}, {"schema", kTraceSchema}, {"page_url", trace.page_url},
                       {"visit_start", trace.visit_start}};
  if (trace.site_rank) meta["site_rank"] = *trace.site_rank;
  if (trace.partial) meta["partial"] = true;
  emit(meta);

  for (const auto& t : trace.honey_tokens)
    emit({{"rec", "token"}, {"token_id", t.token_id}, {"value", t.value},
          {"category", to_string(t.category)}, {"per_site_unique", t.per_site_unique}});
  for (const auto& e : trace.listener_events)
    emit({{"rec", "listener"}, {"kind", to_string(e.kind)}, {"event_type", e.event_type},
          {"target", e.target_descriptor}, {"script_url", e.script_url}, {"stack", e.stack},
          {"ts", e.timestamp}, {"listener_id", e.listener_id}});
  for (const auto& inv : trace.invocations) {
    ordered_json j = {{"rec", "invoke"}, {"listener_id", inv.listener_id}, {"event_type", inv.event_type},
                      {"ts", inv.timestamp}, {"script_url", inv.script_url}};
    if (inv.key) j["key"] = *inv.key;
    emit(j);
  }
  for (const auto& rec : trace.interactions) {
    ordered_json j = {{"rec", "interact"}, {"kind", to_string(rec.kind)}};
    if (rec.field_kind) j["field_kind"] = to_string(*rec.field_kind);
    if (rec.token_id) j["token_id"] = *rec.token_id;
    j["ts_start"] = rec.timestamp_start;
    j["ts_end"] = rec.timestamp_end;
    emit(j);
  }
  for (const auto& req : trace.requests) {
    ordered_json headers = ordered_json::array();
    for (const auto& [n, v] : req.headers) headers.push_back({n, v});
    ordered_json j = {{"rec", "request"}, {"url", req.request_url}, {"method", req.method},
                      {"headers", headers}, {"body", codec::base64_encode(req.body)}, {"ts", req.timestamp}};
    if (req.initiator_script) j["initiator_script"] = *req.initiator_script;
    if (req.initiator_stack) j["initiator_stack"] = *req.initiator_stack;
    emit(j);
  }
  return out.str();
}

void validate_trace(const CrawlTrace& trace) {
  auto fail = [](const std::string& what) { throw IntegrityError(what); };
  auto page = parse_url(trace.page_url);
  if (!page || page->host.empty()) fail("page_url is not an absolute URL with a host: " + trace.page_url);

  auto check_time = [&](TimestampMs ts, const char* what) {
    if (ts < trace.visit_start) fail(std::string(what) + " timestamp precedes visit_start");
  };
  auto check_sorted = [&](auto& items, auto key, const char* what) {
    for (std::size_t i = 1; i < items.size(); ++i)
      if (key(items[i]) < key(items[i - 1])) fail(std::string(what) + " list is not sorted by timestamp");
  };
  check_sorted(trace.listener_events, [](const auto& e) { return e.timestamp; }, "listener");
  check_sorted(trace.invocations, [](const auto& e) { return e.timestamp; }, "invocation");
  check_sorted(trace.interactions, [](const auto& e) { return e.timestamp_start; }, "interaction");
  check_sorted(trace.requests, [](const auto& e) { return e.timestamp; }, "request");

  std::set<std::string> token_ids;
  for (const auto& t : trace.honey_tokens) {
    if (!token_ids.insert(t.token_id).second) fail("duplicate token_id " + t.token_id);
    if (t.value.size() < 12) fail("honey token " + t.token_id + " is shorter than 12 characters");
  }

  std::map<std::string, TimestampMs> registered;
  for (const auto& e : trace.listener_events) {
    check_time(e.timestamp, "listener");
    if (e.event_type.empty() || e.event_type != ascii_lower(e.event_type))
      fail("listener event_type must be non-empty lowercase");
    if (e.kind == ListenerKind::kRegister) {
      if (!registered.emplace(e.listener_id, e.timestamp).second)
        fail("listener_id registered twice: " + e.listener_id);
    } else if (!registered.count(e.listener_id)) {
      fail("remove precedes register for listener_id " + e.listener_id);
    }
  }
  for (const auto& inv : trace.invocations) {
    check_time(inv.timestamp, "invocation");
    auto it = registered.find(inv.listener_id);
    if (it == registered.end() || it->second > inv.timestamp)
      fail("invocation references no prior register: listener_id " + inv.listener_id);
  }
  for (const auto& rec : trace.interactions) {
    check_time(rec.timestamp_start, "interaction");
    if (rec.timestamp_end < rec.timestamp_start) fail("interaction ends before it starts");
    bool fill = rec.kind == InteractionKind::kFormFill || rec.kind == InteractionKind::kTextareaFill;
    bool tokenless = rec.kind == InteractionKind::kMouseMove || rec.kind == InteractionKind::kNavKey;
    if (fill && !rec.token_id) fail(std::string(to_string(rec.kind)) + " interaction without token_id");
    if (tokenless && rec.token_id) fail(std::string(to_string(rec.kind)) + " interaction carries a token_id");
    if (rec.token_id && !token_ids.count(*rec.token_id)) fail("interaction references unknown token " + *rec.token_id);
  }
  for (const auto& req : trace.requests) {
    check_time(req.timestamp, "request");
    if (!parse_url(req.request_url)) fail("request url does not parse: " + req.request_url);
    if (!is_http_token(req.method)) fail("invalid HTTP method " + req.method);
  }
}

CorpusView merge_traces(std::vector<CrawlTrace> traces, const PublicSuffixList& psl) {
  if (traces.empty()) throw UsageError("cannot build a corpus from zero traces");
  CorpusView view;
  std::map<std::string, std::vector<std::size_t>> by_site;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    std::string host = traces[i].page_host();
    if (host.empty()) throw IntegrityError("trace page_url has no host: " + traces[i].page_url);
    by_site[psl.site_key(host)].push_back(i);
  }
  view.site_of_trace_.assign(traces.size(), 0);
  for (auto& [domain, indices] : by_site) {
    for (std::size_t i : indices) view.site_of_trace_[i] = view.sites_.size();
    view.sites_.push_back({domain, std::move(indices)});
  }
  view.traces_ = std::make_shared<const std::vector<CrawlTrace>>(std::move(traces));
  return view;
}

}  // namespace wiretap
