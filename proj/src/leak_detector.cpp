#include "wiretap/leak_detector.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <tuple>
#include <unordered_set>

#include "wiretap/url.hpp"

namespace wiretap {

std::string_view to_string(ViewOrigin origin) { return origin == ViewOrigin::kUrl ? "url" : "body"; }

std::string_view to_string(ViewStep step) {
  switch (step) {
    case ViewStep::kUrlDecoded: return "url-decoded";
    case ViewStep::kBase64Segment: return "base64-decoded-segment";
    case ViewStep::kGzip: return "gzip-decompressed";
    case ViewStep::kZlib: return "zlib-decompressed";
    case ViewStep::kBrotli: return "brotli-decompressed";
  }
  return "url-decoded";
}

ViewOrigin parse_view_origin(std::string_view text) {
  if (text == "url") return ViewOrigin::kUrl;
  if (text == "body") return ViewOrigin::kBody;
  throw ConfigError("unknown view origin: " + std::string(text));
}

ViewStep parse_view_step(std::string_view text) {
  for (auto s : {ViewStep::kUrlDecoded, ViewStep::kBase64Segment, ViewStep::kGzip, ViewStep::kZlib, ViewStep::kBrotli})
    if (to_string(s) == text) return s;
  throw ConfigError("unknown view step: " + std::string(text));
}

std::string derivation_name(const std::vector<ViewStep>& derivation) {
  if (derivation.empty()) return "identity";
  std::string out;
  for (std::size_t i = 0; i < derivation.size(); ++i) {
    if (i) out += '>';
    out += to_string(derivation[i]);
  }
  return out;
}

std::vector<ViewStep> parse_derivation(std::string_view text) {
  std::vector<ViewStep> out;
  if (text == "identity") return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('>', start);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(parse_view_step(text.substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

bool LeakFinding::explains(const TransformChain& c) const {
  return chain == c || std::find(equivalent_chains.begin(), equivalent_chains.end(), c) != equivalent_chains.end();
}

namespace {

bool is_base64_char(unsigned char c) { return is_ascii_alnum(c) || c == '+' || c == '/' || c == '-' || c == '_'; }

bool has_zlib_header(BytesView b) {
  if (b.size() < 2) return false;
  auto cmf = static_cast<unsigned char>(b[0]), flg = static_cast<unsigned char>(b[1]);
  return (cmf & 0x0F) == 8 && (cmf >> 4) <= 7 && ((cmf << 8) | flg) % 31 == 0;
}

class ViewBuilder {
 public:
  ViewBuilder(const NormalizeOptions& options, std::vector<std::string>* warnings)
      : options_(options), warnings_(warnings) {}

  void run(PayloadView root, std::vector<PayloadView>& out) {
    std::unordered_set<Bytes> seen;
    std::vector<PayloadView> views;
    auto push = [&](PayloadView v) {
      if (views.size() >= options_.max_views_per_origin) return;
      if (!seen.insert(v.bytes).second) return;
      views.push_back(std::move(v));
    };
    push(std::move(root));
    for (std::size_t head = 0; head < views.size(); ++head) {
      if (views[head].derivation.size() >= options_.max_depth) continue;
      // Copy: push() may reallocate views.
      PayloadView v = views[head];
      for (auto& child : children(v)) push(std::move(child));
    }
    for (auto& v : views) out.push_back(std::move(v));
  }

  void warn(std::string message) {
    if (warnings_) warnings_->push_back(std::move(message));
  }

 private:
  PayloadView derive(const PayloadView& parent, ViewStep step, Bytes bytes, std::optional<std::size_t> fragment) {
    PayloadView v{parent.origin, parent.derivation, std::move(bytes), fragment};
    v.derivation.push_back(step);
    return v;
  }

  // Whole-view derivations keep fragment membership only when the entire
  // parent came from the fragment.
  std::optional<std::size_t> whole(const PayloadView& parent) const {
    return parent.fragment_begin == std::optional<std::size_t>(0) ? parent.fragment_begin : std::nullopt;
  }

  std::vector<PayloadView> children(const PayloadView& v) {
    std::vector<PayloadView> out;
    const Bytes& b = v.bytes;

    if (b.find('%') != Bytes::npos) {
      Bytes decoded = percent_decode(b);
      if (decoded != b) {
        std::optional<std::size_t> frag;
        if (v.fragment_begin) frag = percent_decode(BytesView(b).substr(0, *v.fragment_begin)).size();
        out.push_back(derive(v, ViewStep::kUrlDecoded, std::move(decoded), frag));
      }
    }

    if (b.size() >= 2 && static_cast<unsigned char>(b[0]) == 0x1f && static_cast<unsigned char>(b[1]) == 0x8b) {
      if (auto inflated = codec::gzip_decompress(b, options_.max_inflate)) {
        out.push_back(derive(v, ViewStep::kGzip, std::move(*inflated), whole(v)));
      } else {
        warn("gzip magic present but body did not inflate");
      }
    } else if (has_zlib_header(b)) {
      if (auto inflated = codec::zlib_decompress(b, options_.max_inflate))
        out.push_back(derive(v, ViewStep::kZlib, std::move(*inflated), whole(v)));
    }

    for (std::size_t i = 0; i < b.size();) {
      if (!is_base64_char(static_cast<unsigned char>(b[i]))) {
        ++i;
        continue;
      }
      std::size_t start = i;
      while (i < b.size() && is_base64_char(static_cast<unsigned char>(b[i]))) ++i;
      std::size_t end = i;
      for (int pad = 0; pad < 2 && end < b.size() && b[end] == '='; ++pad) ++end;
      if (i - start < options_.min_base64_run) continue;
      std::optional<std::size_t> frag;
      if (v.fragment_begin && start >= *v.fragment_begin) frag = 0;
      // The run may begin with unrelated alphabet characters (a path segment,
      // a parameter name); try every 6-bit alignment.
      for (std::size_t shift = 0; shift < 4 && (i - start - shift) >= options_.min_base64_run; ++shift) {
        auto decoded = codec::base64_decode_lenient(BytesView(b).substr(start + shift, end - start - shift));
        if (decoded && !decoded->empty()) out.push_back(derive(v, ViewStep::kBase64Segment, std::move(*decoded), frag));
      }
    }
    return out;
  }

  const NormalizeOptions& options_;
  std::vector<std::string>* warnings_;
};

std::optional<Bytes> undo_content_encoding(const Bytes& body, std::string_view coding, std::size_t limit,
                                           ViewStep& step) {
  std::string c = ascii_lower(coding);
  if (c == "gzip" || c == "x-gzip") {
    step = ViewStep::kGzip;
    return codec::gzip_decompress(body, limit);
  }
  if (c == "deflate") {
    step = ViewStep::kZlib;
    if (auto z = codec::zlib_decompress(body, limit)) return z;
    return codec::deflate_decompress(body, limit);
  }
  if (c == "br") {
    step = ViewStep::kBrotli;
    return codec::brotli_decompress(body, limit);
  }
  return std::nullopt;
}

}  // namespace

std::vector<PayloadView> normalize_payload(const NetworkRecord& req, std::vector<std::string>* warnings,
                                           const NormalizeOptions& options) {
  std::vector<PayloadView> out;
  ViewBuilder builder(options, warnings);

  PayloadView url{ViewOrigin::kUrl, {}, req.request_url, std::nullopt};
  if (auto hash = req.request_url.find('#'); hash != std::string::npos) url.fragment_begin = hash + 1;
  builder.run(std::move(url), out);

  if (req.body.empty()) return out;
  std::vector<PayloadView> body_roots{{ViewOrigin::kBody, {}, req.body, std::nullopt}};
  if (auto encoding = req.header("content-encoding")) {
    // Codings are listed in the order applied; undo them last to first.
    std::vector<std::string> codings;
    std::size_t start = 0;
    while (start <= encoding->size()) {
      std::size_t end = encoding->find(',', start);
      if (end == std::string::npos) end = encoding->size();
      std::string token = encoding->substr(start, end - start);
      token.erase(0, token.find_first_not_of(" \t"));
      token.erase(token.find_last_not_of(" \t") + 1);
      if (!token.empty() && ascii_lower(token) != "identity") codings.push_back(token);
      start = end + 1;
    }
    PayloadView current = body_roots.front();
    for (auto it = codings.rbegin(); it != codings.rend(); ++it) {
      ViewStep step = ViewStep::kGzip;
      auto decoded = undo_content_encoding(current.bytes, *it, options.max_inflate, step);
      if (!decoded) {
        builder.warn("body did not decode as Content-Encoding '" + *it + "'");
        break;
      }
      current.bytes = std::move(*decoded);
      current.derivation.push_back(step);
      if (current.derivation.size() > options.max_depth) break;
      body_roots.push_back(current);
    }
  }
  // The decoded body (when present) seeds its own breadth-first expansion,
  // sharing deduplication with the raw body.
  std::vector<PayloadView> body_views;
  for (auto& root : body_roots) builder.run(std::move(root), body_views);
  std::unordered_set<Bytes> seen;
  for (auto& v : body_views)
    if (seen.insert(v.bytes).second) out.push_back(std::move(v));
  return out;
}

std::vector<LeakFinding> scan_request(const NetworkRecord& req, std::size_t request_index,
                                      const FingerprintIndex& index, std::vector<std::string>* warnings,
                                      const ScanOptions& options) {
  std::vector<LeakFinding> findings;
  if (index.pattern_count() == 0) return findings;
  auto views = normalize_payload(req, warnings, options.normalize);
  std::stable_sort(views.begin(), views.end(), [](const PayloadView& a, const PayloadView& b) {
    if (a.origin != b.origin) return a.origin < b.origin;
    return a.derivation.size() < b.derivation.size();
  });

  std::set<std::tuple<std::string, std::vector<Algorithm>, ViewOrigin>> seen;
  for (const auto& view : views) {
    const Bytes& text = view.bytes;
    for (const auto& m : index.matcher().scan(text)) {
      const std::size_t len = index.patterns()[m.pattern].size();
      if (index.is_numeric(m.pattern)) {
        bool left_ok = m.offset == 0 || !is_ascii_alnum(static_cast<unsigned char>(text[m.offset - 1]));
        bool right_ok = m.offset + len == text.size() || !is_ascii_alnum(static_cast<unsigned char>(text[m.offset + len]));
        if (!left_ok || !right_ok) continue;
      }
      for (std::uint32_t id : index.fingerprints_of(m.pattern)) {
        const Fingerprint& fp = index.fingerprint(id);
        if (!seen.emplace(fp.token_id, fp.chain.steps, view.origin).second) continue;
        LeakFinding f;
        f.token_id = fp.token_id;
        f.variant = fp.variant;
        f.chain = fp.chain;
        f.rendering = fp.rendering;
        f.equivalent_chains = fp.equivalent_chains;
        f.request_index = request_index;
        f.timestamp = req.timestamp;
        f.request_url = req.request_url;
        f.initiator_script = req.initiator_script;
        f.origin = view.origin;
        f.derivation = view.derivation;
        f.byte_offset = m.offset;
        f.matched_len = len;
        f.in_fragment = view.fragment_begin && m.offset >= *view.fragment_begin;
        findings.push_back(std::move(f));
      }
    }
  }

  std::map<std::pair<std::string, ViewOrigin>, std::size_t> best;
  for (std::size_t i = 0; i < findings.size(); ++i) {
    auto key = std::make_pair(findings[i].token_id, findings[i].origin);
    auto it = best.find(key);
    if (it == best.end()) {
      best.emplace(key, i);
      continue;
    }
    const LeakFinding& cur = findings[it->second];
    const LeakFinding& cand = findings[i];
    // A longer match at the same depth covers nested ones: Murmur3-64 is a
    // prefix of Murmur3-128, a Deflate stream sits inside Gzip and Zlib.
    auto rank = [](const LeakFinding& f) {
      return std::make_tuple(f.derivation.size(), std::numeric_limits<std::size_t>::max() - f.matched_len);
    };
    if (rank(cand) < rank(cur) || (rank(cand) == rank(cur) && cand.chain < cur.chain)) it->second = i;
  }
  for (const auto& [_, i] : best) findings[i].primary = true;
  return findings;
}

std::vector<LeakFinding> detect_leaks(const CrawlTrace& trace, const FingerprintIndex& index,
                                      std::vector<std::string>* warnings, const ScanOptions& options) {
  std::vector<LeakFinding> out;
  for (std::size_t i = 0; i < trace.requests.size(); ++i) {
    auto found = scan_request(trace.requests[i], i, index, warnings, options);
    out.insert(out.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }
  std::stable_sort(out.begin(), out.end(), [](const LeakFinding& a, const LeakFinding& b) {
    return std::tie(a.timestamp, a.request_index) < std::tie(b.timestamp, b.request_index);
  });
  return out;
}

}  // namespace wiretap
