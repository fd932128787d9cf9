#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wiretap/fingerprint_index.hpp"
#include "wiretap/trace.hpp"

namespace wiretap {

enum class ViewOrigin { kUrl, kBody };
enum class ViewStep { kUrlDecoded, kBase64Segment, kGzip, kZlib, kBrotli };

std::string_view to_string(ViewOrigin origin);
std::string_view to_string(ViewStep step);
ViewOrigin parse_view_origin(std::string_view text);
ViewStep parse_view_step(std::string_view text);

// "identity" for an untouched view, otherwise steps joined with '>'.
std::string derivation_name(const std::vector<ViewStep>& derivation);
std::vector<ViewStep> parse_derivation(std::string_view text);

// A byte sequence the request put on the wire, possibly after undoing a
// container encoding.
struct PayloadView {
  ViewOrigin origin = ViewOrigin::kUrl;
  std::vector<ViewStep> derivation;
  Bytes bytes;
  // Offset where the URL fragment starts in this view. 0 when the whole view
  // came from the fragment, nullopt when none of it did.
  std::optional<std::size_t> fragment_begin;
};

struct NormalizeOptions {
  std::size_t max_depth = 3;
  std::size_t min_base64_run = 16;
  std::size_t max_views_per_origin = 256;
  std::size_t max_inflate = 16u << 20;
};

// Raw URL and body plus every view derivable by percent-decoding, inflating
// (Content-Encoding or gzip/zlib magic) and decoding base64 runs, breadth
// first, deduplicated by content within each origin.
std::vector<PayloadView> normalize_payload(const NetworkRecord& req, std::vector<std::string>* warnings = nullptr,
                                           const NormalizeOptions& options = {});

struct LeakFinding {
  std::string token_id;
  CaseVariant variant = CaseVariant::kAsTyped;
  TransformChain chain;
  std::string rendering;
  std::vector<TransformChain> equivalent_chains;
  std::size_t request_index = 0;
  TimestampMs timestamp = 0;
  std::string request_url;
  std::optional<std::string> initiator_script;
  ViewOrigin origin = ViewOrigin::kUrl;
  std::vector<ViewStep> derivation;
  std::size_t byte_offset = 0;
  std::size_t matched_len = 0;
  bool in_fragment = false;
  // Best explanation among findings for the same request, token and origin:
  // fewest derivation steps, then longest match, then canonical chain order.
  bool primary = false;

  bool explains(const TransformChain& c) const;
  bool operator==(const LeakFinding&) const = default;
};

struct ScanOptions {
  NormalizeOptions normalize;
};

// Findings in one request, at most one per (token, chain, origin).
std::vector<LeakFinding> scan_request(const NetworkRecord& req, std::size_t request_index,
                                      const FingerprintIndex& index, std::vector<std::string>* warnings = nullptr,
                                      const ScanOptions& options = {});

// All requests of a trace, ordered by (timestamp, request_index).
std::vector<LeakFinding> detect_leaks(const CrawlTrace& trace, const FingerprintIndex& index,
                                      std::vector<std::string>* warnings = nullptr, const ScanOptions& options = {});

}  // namespace wiretap
