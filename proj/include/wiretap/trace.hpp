#pragma once

#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wiretap/common.hpp"

namespace wiretap {

class PublicSuffixList;

enum class ListenerKind { kRegister, kRemove };

struct ListenerEvent {
  ListenerKind kind = ListenerKind::kRegister;
  std::string event_type;         // lowercase, e.g. "keydown"
  std::string target_descriptor;  // element path, "window" or "document"
  std::string script_url;         // installing script
  std::vector<std::string> stack;
  TimestampMs timestamp = 0;
  std::string listener_id;

  bool operator==(const ListenerEvent&) const = default;
};

// One handler invocation. script_url names the script that owns the invoked
// handler; usually identical to the registering script.
struct InvocationRecord {
  std::string listener_id;
  std::string event_type;
  TimestampMs timestamp = 0;
  std::string script_url;
  std::optional<std::string> key;  // reserved, not used by analysis

  bool operator==(const InvocationRecord&) const = default;
};

enum class InteractionKind { kMouseMove, kNavKey, kFormFill, kTextareaFill, kBodyKeystrokes };
enum class FieldKind { kEmail, kPhone, kPassword, kText, kUrl, kOther };

struct InteractionRecord {
  InteractionKind kind = InteractionKind::kMouseMove;
  std::optional<FieldKind> field_kind;
  std::optional<std::string> token_id;
  TimestampMs timestamp_start = 0;
  TimestampMs timestamp_end = 0;

  // nav_key, form_fill, textarea_fill and body_keystrokes produce key events.
  bool is_keystroke_bearing() const { return kind != InteractionKind::kMouseMove; }
  bool operator==(const InteractionRecord&) const = default;
};

struct NetworkRecord {
  std::string request_url;
  std::string method = "GET";
  std::vector<std::pair<std::string, std::string>> headers;
  Bytes body;
  TimestampMs timestamp = 0;
  std::optional<std::string> initiator_script;
  std::optional<std::vector<std::string>> initiator_stack;

  // Case-insensitive header lookup; first match wins.
  std::optional<std::string> header(std::string_view name) const;
  bool operator==(const NetworkRecord&) const = default;
};

enum class DataCategory { kFormText, kMail, kPhone, kPassword, kUrl };

struct HoneyToken {
  std::string token_id;
  std::string value;
  DataCategory category = DataCategory::kFormText;
  bool per_site_unique = false;

  bool operator==(const HoneyToken&) const = default;
};

struct CrawlTrace {
  std::string page_url;
  std::optional<std::int64_t> site_rank;
  TimestampMs visit_start = 0;
  bool partial = false;
  std::vector<ListenerEvent> listener_events;
  std::vector<InvocationRecord> invocations;
  std::vector<InteractionRecord> interactions;
  std::vector<NetworkRecord> requests;
  std::vector<HoneyToken> honey_tokens;

  const HoneyToken* find_token(std::string_view token_id) const;
  // Register record for a listener id, or nullptr.
  const ListenerEvent* find_registration(std::string_view listener_id) const;
  std::string page_host() const;

  bool operator==(const CrawlTrace&) const = default;
};

std::string_view to_string(ListenerKind kind);
std::string_view to_string(InteractionKind kind);
std::string_view to_string(FieldKind kind);
std::string_view to_string(DataCategory category);
DataCategory parse_data_category(std::string_view text);
const std::vector<DataCategory>& all_data_categories();

// Counters surfaced by ingestion. Every input line is accounted for:
// lines_read == stored + ignored + rejected.size().
struct ParseStats {
  std::size_t lines_read = 0;   // non-blank lines
  std::size_t stored = 0;       // records kept in the trace (meta included)
  std::size_t ignored = 0;      // accepted kinds not used by analysis (response, cookie)
  std::size_t out_of_order = 0; // records that arrived earlier than a predecessor
  std::vector<std::pair<std::size_t, std::string>> rejected;  // (line, reason)
};

struct ParseOptions {
  // Strict ingestion throws on the first malformed line; lenient ingestion
  // records it in ParseStats::rejected and continues.
  bool strict = true;
};

inline constexpr std::string_view kTraceSchema = "wiretap-trace/1";

// Reads the line-delimited trace format. Lists come back stably sorted by
// timestamp. Integrity violations always throw IntegrityError.
CrawlTrace parse_trace(std::istream& in, ParseStats* stats = nullptr,
                       const ParseOptions& options = {});
CrawlTrace parse_trace_file(const std::string& path, ParseStats* stats = nullptr,
                            const ParseOptions& options = {});

// Serializes a trace in canonical record order (meta, tokens, listener,
// invoke, interact, request).
std::string serialize_trace(const CrawlTrace& trace);

// Checks every trace invariant. Throws IntegrityError on the first violation.
void validate_trace(const CrawlTrace& trace);

// Immutable grouping of traces by the registrable domain of the page.
class CorpusView {
 public:
  struct Site {
    std::string domain;
    std::vector<std::size_t> trace_indices;  // into traces()
  };

  const std::vector<CrawlTrace>& traces() const { return *traces_; }
  const std::vector<Site>& sites() const { return sites_; }
  std::size_t site_count() const { return sites_.size(); }
  // Site index owning the given trace.
  std::size_t site_of_trace(std::size_t trace_index) const { return site_of_trace_[trace_index]; }

 private:
  friend CorpusView merge_traces(std::vector<CrawlTrace>, const PublicSuffixList&);
  std::shared_ptr<const std::vector<CrawlTrace>> traces_;
  std::vector<Site> sites_;
  std::vector<std::size_t> site_of_trace_;
};

// Sites are ordered by domain name; traces keep their input order within a site.
CorpusView merge_traces(std::vector<CrawlTrace> traces, const PublicSuffixList& psl);

}  // namespace wiretap
