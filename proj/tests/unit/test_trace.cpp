#include <gtest/gtest.h>

#include <sstream>

#include "wiretap/fixtures.hpp"

using namespace wiretap;

namespace {

const char* kMeta =
    R"({"rec":"meta","schema":"wiretap-trace/1","page_url":"https://www.shop.test/","visit_start":1000,"site_rank":3})";
const char* kToken =
    R"({"rec":"token","token_id":"mail","value":"example.email@domain.com","category":"mail","per_site_unique":false})";

std::string lines(std::initializer_list<std::string> ls) {
  std::string out;
  for (const auto& l : ls) out += l + "\n";
  return out;
}

CrawlTrace parse(const std::string& text, ParseStats* stats = nullptr, bool strict = true) {
  std::istringstream in(text);
  ParseOptions o;
  o.strict = strict;
  return parse_trace(in, stats, o);
}

std::string listener(const std::string& id, const std::string& event, long ts, const std::string& kind = "register") {
  return R"({"rec":"listener","kind":")" + kind + R"(","event_type":")" + event +
         R"(","target":"document","script_url":"https://cdn.t.test/t.js","stack":[],"ts":)" + std::to_string(ts) +
         R"(,"listener_id":")" + id + "\"}";
}

}  // namespace

TEST(Trace, RoundTripIsLossless) {
  for (const auto& set : {make_timeline_fixture(), make_truth_table()}) {
    for (const auto& [file, trace] : set.traces) {
      std::string text = serialize_trace(trace);
      CrawlTrace back = parse(text);
      EXPECT_EQ(back, trace) << file;
      EXPECT_EQ(serialize_trace(back), text) << file;
    }
  }
}

TEST(Trace, BinaryBodiesSurvive) {
  CrawlTrace t = parse(lines({kMeta, kToken}));
  NetworkRecord r;
  r.request_url = "https://x.test/in";
  r.method = "POST";
  r.timestamp = 1500;
  for (int i = 0; i < 256; ++i) r.body.push_back(static_cast<char>(i));
  r.headers = {{"Content-Encoding", "gzip"}};
  t.requests.push_back(r);
  EXPECT_EQ(parse(serialize_trace(t)), t);
}

TEST(Trace, Accounting) {
  std::string text = lines({kMeta, kToken, listener("L1", "KeyDown", 1100),
                            R"({"rec":"response","url":"https://x.test/","status":200})",
                            R"({"rec":"cookie","name":"a","value":"b"})", R"({"rec":"bogus"})", "not json", "",
                            R"({"rec":"invoke","listener_id":"L1","event_type":"keydown","ts":1200,"script_url":"https://cdn.t.test/t.js"})"});
  ParseStats st;
  CrawlTrace t = parse(text, &st, false);
  EXPECT_EQ(st.lines_read, 8u);
  EXPECT_EQ(st.stored, 4u);
  EXPECT_EQ(st.ignored, 2u);
  ASSERT_EQ(st.rejected.size(), 2u);
  EXPECT_EQ(st.rejected[0].first, 6u);
  EXPECT_EQ(st.rejected[1].first, 7u);
  EXPECT_EQ(st.lines_read, st.stored + st.ignored + st.rejected.size());
  ASSERT_EQ(t.listener_events.size(), 1u);
  EXPECT_EQ(t.listener_events[0].event_type, "keydown");
  EXPECT_EQ(t.site_rank, 3);

  try {
    parse(text);
    FAIL() << "strict parse accepted a bad record";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 6u);
  }
}

TEST(Trace, MissingMetaIsFatal) {
  EXPECT_THROW(parse(lines({kToken})), ParseError);
  EXPECT_THROW(parse(lines({kToken}), nullptr, false), ParseError);
  EXPECT_THROW(parse(""), ParseError);
}

TEST(Trace, MalformedFields) {
  auto bad = [](const std::string& rec) { return lines({kMeta, rec}); };
  EXPECT_THROW(parse(bad(R"({"rec":"request","url":"not a url","method":"GET","headers":[],"body":"","ts":1100})")),
               ParseError);
  EXPECT_THROW(parse(bad(R"({"rec":"request","url":"https://a.test/","method":"G T","headers":[],"body":"","ts":1100})")),
               ParseError);
  EXPECT_THROW(parse(bad(R"({"rec":"request","url":"https://a.test/","method":"GET","headers":[],"body":"@@@","ts":1100})")),
               ParseError);
  EXPECT_THROW(parse(bad(R"({"rec":"token","token_id":"x","value":"example_text_area","category":"shoe","per_site_unique":false})")),
               ParseError);
  EXPECT_THROW(parse(lines({R"({"rec":"meta","schema":"other/2","page_url":"https://a.test/","visit_start":0})"})),
               ParseError);
}

TEST(Trace, OutOfOrderRecordsAreSorted) {
  ParseStats st;
  CrawlTrace t = parse(lines({kMeta, listener("L2", "keyup", 1300), listener("L1", "keydown", 1100)}), &st);
  EXPECT_EQ(st.out_of_order, 1u);
  ASSERT_EQ(t.listener_events.size(), 2u);
  EXPECT_EQ(t.listener_events[0].listener_id, "L1");
}

TEST(Trace, IntegrityViolations) {
  EXPECT_THROW(
      parse(lines({kMeta, R"({"rec":"invoke","listener_id":"L9","event_type":"keydown","ts":1200,"script_url":"https://a.test/a.js"})"})),
      IntegrityError);
  EXPECT_THROW(parse(lines({kMeta, listener("L1", "keydown", 1100), listener("L1", "keydown", 1200)})),
               IntegrityError);
  EXPECT_THROW(parse(lines({kMeta, listener("L1", "keydown", 1100, "remove")})), IntegrityError);
  EXPECT_THROW(parse(lines({kMeta, listener("L1", "keydown", 900)})), IntegrityError);
  EXPECT_THROW(
      parse(lines({kMeta, R"({"rec":"token","token_id":"t","value":"short","category":"mail","per_site_unique":false})"})),
      IntegrityError);
  EXPECT_THROW(parse(lines({kMeta, kToken, kToken})), IntegrityError);
  EXPECT_THROW(
      parse(lines({kMeta, R"({"rec":"interact","kind":"form_fill","field_kind":"email","token_id":"nope","ts_start":1100,"ts_end":1200})"})),
      IntegrityError);
  EXPECT_THROW(
      parse(lines({kMeta, kToken, R"({"rec":"interact","kind":"form_fill","field_kind":"email","token_id":"mail","ts_start":1300,"ts_end":1200})"})),
      IntegrityError);
  // Lenient parsing does not relax integrity.
  EXPECT_THROW(parse(lines({kMeta, kToken, kToken}), nullptr, false), IntegrityError);
}

TEST(Corpus, GroupsTracesBySite) {
  std::istringstream psl_text("test\nco.uk\n");
  auto psl = PublicSuffixList::parse(psl_text);
  auto trace = [](std::string url) {
    CrawlTrace t;
    t.page_url = std::move(url);
    return t;
  };
  CorpusView c = merge_traces({trace("https://www.b.test/"), trace("https://shop.a.co.uk/"),
                               trace("https://b.test/login"), trace("https://a.co.uk/")},
                              psl);
  ASSERT_EQ(c.site_count(), 2u);
  EXPECT_EQ(c.sites()[0].domain, "a.co.uk");
  EXPECT_EQ(c.sites()[0].trace_indices, (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(c.sites()[1].trace_indices, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(c.site_of_trace(2), 1u);
  EXPECT_THROW(merge_traces({}, psl), UsageError);
}
