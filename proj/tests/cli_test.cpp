#include <gtest/gtest.h>

#include <cstdlib>

#include "chronopress/cli.hpp"
#include "test_support.hpp"

namespace chronopress {
namespace {

using testing::CliResult;
using testing::run_cli;
using testing::TempDir;

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

// Two text pages of one title over two days.
struct SmallCorpus {
    TempDir dir;
    std::filesystem::path manifest;
    std::filesystem::path vocab;

    SmallCorpus() {
        dir.write("d1.txt", "Vote vote bridge");
        dir.write("d2.txt", "rally bridge");
        vocab = dir.write("vocab.txt", "vote\nbridge\nrally\n");
        manifest = dir.write("manifest.csv",
                             "path,title,date,page_number,format\n"
                             "d1.txt,times,1906-10-29,1,text\n"
                             "d2.txt,times,1906-10-30,1,text\n");
    }

    std::string index() {
        const auto path = dir / "index.json";
        const auto r = run_cli({"ingest", "--manifest", manifest.string(), "--vocab", vocab.string(), "--out",
                                path.string()});
        EXPECT_EQ(r.code, 0) << r.err;
        return path.string();
    }
};

TEST(Cli, IngestSummary) {
    SmallCorpus c;
    const auto r = run_cli({"ingest", "--manifest", c.manifest.string(), "--vocab", c.vocab.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.err, "1 title, 2 days, 2 docs, 3 distinct terms")) << r.err;
    EXPECT_TRUE(contains(r.err, "times: 1906-10-29 .. 1906-10-30")) << r.err;
    const auto index = TermDateIndex::from_json(nlohmann::json::parse(r.out));
    EXPECT_EQ(index.stats("times", Date{1906, 10, 29}, "vote")->term_count, 2);
}

TEST(Cli, IngestMissingFileExitsOne) {
    SmallCorpus c;
    std::filesystem::remove(c.dir / "d2.txt");
    const auto r = run_cli({"ingest", "--manifest", c.manifest.string(), "--vocab", c.vocab.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(contains(r.err, "d2.txt")) << r.err;
    EXPECT_TRUE(r.out.empty());
}

TEST(Cli, IngestSkipBadWarnsAndContinues) {
    SmallCorpus c;
    c.dir.write("bad.xml", "<alto><Layout><TextBlock>");
    std::ofstream(c.manifest, std::ios::app) << "bad.xml,times,1906-10-31,1,alto\n";
    std::filesystem::remove(c.dir / "d2.txt");
    const auto r = run_cli({"ingest", "--manifest", c.manifest.string(), "--vocab", c.vocab.string(), "--skip-bad"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.err, "warning: skipping")) << r.err;
    EXPECT_TRUE(contains(r.err, "bad.xml"));
    EXPECT_TRUE(contains(r.err, "1 title, 1 day, 1 doc,")) << r.err;
}

TEST(Cli, IngestBadInputs) {
    SmallCorpus c;
    EXPECT_EQ(run_cli({"ingest", "--manifest", (c.dir / "none.csv").string(), "--vocab", c.vocab.string()}).code, 1);
    EXPECT_EQ(run_cli({"ingest", "--manifest", c.manifest.string(), "--vocab", (c.dir / "none").string()}).code, 1);
    EXPECT_EQ(run_cli({"ingest", "--vocab", c.vocab.string()}).code, 2);
    EXPECT_EQ(run_cli({"ingest", "--manifest", c.manifest.string(), "--vocab", c.vocab.string(), "--unit", "issue"}).code, 2);
    EXPECT_EQ(run_cli({"ingest", "--manifest", c.manifest.string(), "--vocab", c.vocab.string(), "--alpha", "0.5"}).code, 2);
    c.dir.write("dup.csv", "path,title,date,page_number,format\nd1.txt,t,1906-10-29,1,text\nd2.txt,t,1906-10-29,1,text\n");
    const auto r = run_cli({"ingest", "--manifest", (c.dir / "dup.csv").string(), "--vocab", c.vocab.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(contains(r.err, "duplicate")) << r.err;
}

TEST(Cli, IngestWithStoplistOptions) {
    SmallCorpus c;
    const auto stop = c.dir.write("stop.txt", "bridge\n");
    auto r = run_cli({"ingest", "--manifest", c.manifest.string(), "--vocab", c.vocab.string(), "--stoplist", stop.string()});
    ASSERT_EQ(r.code, 0);
    EXPECT_FALSE(contains(r.out, "bridge"));
    const auto counts = c.dir.write("counts.txt", "bridge 50\nvote 40\nrally 1\n");
    r = run_cli({"ingest", "--manifest", c.manifest.string(), "--vocab", c.vocab.string(), "--stoplist-counts",
                 counts.string(), "--stoplist-size", "2"});
    ASSERT_EQ(r.code, 0);
    EXPECT_FALSE(contains(r.out, "bridge"));
    EXPECT_FALSE(contains(r.out, "vote"));
    EXPECT_TRUE(contains(r.out, "rally"));
    EXPECT_EQ(run_cli({"ingest", "--manifest", c.manifest.string(), "--vocab", c.vocab.string(), "--stoplist",
                       stop.string(), "--stoplist-counts", counts.string()})
                  .code,
              2);
}

TEST(Cli, IngestHonorsThreadCap) {
    SmallCorpus c;
    ::setenv("CHRONOPRESS_THREADS", "1", 1);
    auto r = run_cli({"ingest", "--manifest", c.manifest.string(), "--vocab", c.vocab.string()});
    EXPECT_EQ(r.code, 0);
    ::setenv("CHRONOPRESS_THREADS", "many", 1);
    r = run_cli({"ingest", "--manifest", c.manifest.string(), "--vocab", c.vocab.string()});
    EXPECT_EQ(r.code, 2);
    ::unsetenv("CHRONOPRESS_THREADS");
}

TEST(Cli, Series) {
    SmallCorpus c;
    const auto index = c.index();
    auto r = run_cli({"series", "--index", index, "--title", "times", "--term", "Vote"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out,
              "date,term_count,doc_count,total_tokens,rel_freq\n"
              "1906-10-29,2,1,3,0.666667\n"
              "1906-10-30,0,0,2,0.000000\n");

    r = run_cli({"series", "--index", index, "--title", "times", "--term", "zeppelin", "--from", "1906-10-28",
                 "--to", "1906-11-01"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(count_lines(r.out), 6u);
    EXPECT_TRUE(contains(r.out, "1906-10-28,0,0,0,0.000000\n"));

    EXPECT_EQ(run_cli({"series", "--index", index, "--title", "herald", "--term", "vote"}).code, 2);
    r = run_cli({"series", "--index", index, "--title", "times", "--term", "vote", "--from", "1906-10-30", "--to",
                 "1906-10-29"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.err, "reversed"));
    EXPECT_EQ(run_cli({"series", "--index", index, "--title", "times", "--term", "1906"}).code, 2);
    EXPECT_EQ(run_cli({"series", "--index", index, "--title", "times", "--term", "vote", "--from", "Oct 29"}).code, 2);
    EXPECT_EQ(run_cli({"series", "--index", (c.dir / "nope.json").string(), "--title", "times", "--term", "vote"}).code,
              1);
}

// Ten days with "vote" in 6 documents on day 4 only.
struct BurstCorpus {
    TempDir dir;
    std::string index;

    explicit BurstCorpus(const std::string& title = "ledger", int spike_day = 4) {
        std::string manifest = "path,title,date,page_number,format\n";
        for (int day = 1; day <= 10; ++day) {
            const int pages = day == spike_day ? 6 : 1;
            for (int p = 1; p <= pages; ++p) {
                const std::string name = "p" + std::to_string(day) + "-" + std::to_string(p) + ".txt";
                dir.write(name, day == spike_day ? "vote" : "rally");
                manifest += name + "," + title + "," + (Date{1914, 9, 15} + day).iso() + "," + std::to_string(p) + ",text\n";
            }
        }
        const auto m = dir.write("manifest.csv", manifest);
        const auto v = dir.write("vocab.txt", "vote\nrally\n");
        index = (dir / "index.json").string();
        const auto r = run_cli({"ingest", "--manifest", m.string(), "--vocab", v.string(), "--out", index});
        EXPECT_EQ(r.code, 0) << r.err;
    }
};

TEST(Cli, BurstsWorkedExample) {
    BurstCorpus c;
    auto r = run_cli({"bursts", "--index", c.index, "--title", "ledger"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out,
              "{\"title\":\"ledger\",\"term\":\"vote\",\"date\":\"1914-09-19\",\"df\":6,\"mean\":0.600000,"
              "\"std\":1.800000,\"z\":3.000000}\n");
    EXPECT_EQ(run_cli({"bursts", "--index", c.index, "--title", "ledger", "--threshold", "1e9"}).out, "");
    EXPECT_EQ(run_cli({"bursts", "--index", c.index, "--title", "ledger", "--min-docs", "7"}).out, "");
    EXPECT_EQ(run_cli({"bursts", "--index", c.index, "--title", "nobody"}).code, 2);
    EXPECT_EQ(run_cli({"bursts", "--index", c.index, "--title", "ledger", "--sigma-floor", "0"}).code, 2);
    EXPECT_EQ(run_cli({"bursts", "--index", c.index, "--title", "ledger", "--min-docs", "0"}).code, 2);
    EXPECT_EQ(run_cli({"bursts", "--index", c.index, "--title", "ledger", "--threshold", "x"}).code, 2);
    r = run_cli({"bursts", "--index", c.index, "--title", "ledger", "--from", "1914-09-19", "--to", "1914-09-19"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "");  // a one-day range has no deviation to find
}

TEST(Cli, ConstantCorpusHasNoBursts) {
    TempDir dir;
    std::string manifest = "path,title,date,page_number,format\n";
    for (int day = 1; day <= 8; ++day) {
        for (int p = 1; p <= 3; ++p) {
            const auto name = std::to_string(day) + "-" + std::to_string(p) + ".txt";
            dir.write(name, "vote rally bridge");
            manifest += name + ",t," + (Date{1906, 1, 1} + day).iso() + "," + std::to_string(p) + ",text\n";
        }
    }
    const auto idx = (dir / "i.json").string();
    ASSERT_EQ(run_cli({"ingest", "--manifest", dir.write("m.csv", manifest).string(), "--vocab",
                       dir.write("v.txt", "vote\nrally\nbridge\n").string(), "--out", idx})
                  .code,
              0);
    const auto r = run_cli({"bursts", "--index", idx, "--title", "t"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "");
}

TEST(Cli, EventsNeedsTwoTitles) {
    BurstCorpus c;
    auto r = run_cli({"events", "--index", c.index});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.err, "at least 2")) << r.err;
    r = run_cli({"events", "--index", c.index, "--titles", "ledger,unknown"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.err, "unknown title 'unknown'")) << r.err;
    EXPECT_EQ(run_cli({"events", "--index", c.index, "--window", "0"}).code, 2);
}

TEST(Cli, EventsAcrossTwoIndexedTitles) {
    // Merge two single-title indexes into one file.
    BurstCorpus a("herald", 4), b("times", 5);
    auto ia = load_index(a.index);
    ia.merge(load_index(b.index));
    TempDir dir;
    save_index(ia, dir / "both.json");
    const auto idx = (dir / "both.json").string();

    auto r = run_cli({"events", "--index", idx, "--window", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "1914-09-19\tvote\n");
    r = run_cli({"events", "--index", idx, "--window", "1"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "");
    r = run_cli({"events", "--index", idx, "--titles", "times,herald", "--json"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0]["anchor_date"], "1914-09-19");
    EXPECT_EQ(j[0]["matches"][0]["title_a"], "herald");
}

TEST(Cli, EventsDisjointSpansGiveEmptyOutput) {
    BurstCorpus a("herald", 4);
    TempDir dir;
    std::string manifest = "path,title,date,page_number,format\n";
    for (int day = 1; day <= 10; ++day) {
        const int pages = day == 4 ? 6 : 1;
        for (int p = 1; p <= pages; ++p) {
            const auto name = std::to_string(day) + "-" + std::to_string(p) + ".txt";
            dir.write(name, day == 4 ? "vote" : "rally");
            manifest += name + ",times," + (Date{1915, 3, 1} + day).iso() + "," + std::to_string(p) + ",text\n";
        }
    }
    const auto ib = (dir / "b.json").string();
    ASSERT_EQ(run_cli({"ingest", "--manifest", dir.write("m.csv", manifest).string(), "--vocab",
                       dir.write("v.txt", "vote\nrally\n").string(), "--out", ib})
                  .code,
              0);
    auto both = load_index(a.index);
    both.merge(load_index(ib));
    save_index(both, dir / "both.json");
    const auto r = run_cli({"events", "--index", (dir / "both.json").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "");
}

const char* kTwoHeadlinePage = R"(<alto><Styles><TextStyle ID="B" FONTSIZE="10"/><TextStyle ID="H" FONTSIZE="24"/></Styles>
<Layout><Page><PrintSpace>
<TextBlock ID="a" HPOS="0" VPOS="0" WIDTH="700" HEIGHT="300" STYLEREFS="B">
  <TextLine><String CONTENT="weather" /><String CONTENT="fair"/></TextLine>
  <TextLine STYLEREFS="H"><String CONTENT="YALE"/><String CONTENT="WINS"/></TextLine>
  <TextLine><String CONTENT="Princeton"/><String CONTENT="tigers"/><String CONTENT="beaten"/><String CONTENT="by"/>
            <String CONTENT="Yale"/><String CONTENT="teams"/><String CONTENT="in"/><String CONTENT="the"/></TextLine>
  <TextLine><String CONTENT="final"/><String CONTENT="game"/><String CONTENT="of"/><String CONTENT="season"/></TextLine>
</TextBlock>
<TextBlock ID="b" HPOS="800" VPOS="0" WIDTH="700" HEIGHT="300" STYLEREFS="B">
  <TextLine STYLEREFS="H"><String CONTENT="BRIDGE"/><String CONTENT="FALLS"/></TextLine>
  <TextLine><String CONTENT="Camden"/><String CONTENT="trestle"/><String CONTENT="gives"/><String CONTENT="way"/></TextLine>
</TextBlock>
</PrintSpace></Page></Layout></alto>)";

TEST(Cli, SegmentFile) {
    TempDir dir;
    const auto page = dir.write("p.xml", kTwoHeadlinePage);
    auto r = run_cli({"segment", "--file", page.string(), "--title", "herald", "--date", "1906-11-18"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out,
              "{\"title\":\"herald\",\"date\":\"1906-11-18\",\"page\":1,\"seq\":0,\"headline\":null,\"token_count\":2}\n"
              "{\"title\":\"herald\",\"date\":\"1906-11-18\",\"page\":1,\"seq\":1,\"headline\":\"YALE WINS\",\"token_count\":14}\n"
              "{\"title\":\"herald\",\"date\":\"1906-11-18\",\"page\":1,\"seq\":2,\"headline\":\"BRIDGE FALLS\",\"token_count\":6}\n");

    EXPECT_EQ(run_cli({"segment", "--file", page.string(), "--date", "18/11/1906"}).code, 2);
    EXPECT_EQ(run_cli({"segment", "--file", page.string(), "--alpha", "1"}).code, 2);
    EXPECT_EQ(run_cli({"segment"}).code, 2);
    EXPECT_EQ(run_cli({"segment", "--file", (dir / "missing.xml").string()}).code, 1);
    EXPECT_EQ(run_cli({"segment", "--file", dir.write("bad.xml", "<alto>").string()}).code, 1);
}

TEST(Cli, SegmentManifestSelect) {
    TempDir dir;
    dir.write("p.xml", kTwoHeadlinePage);
    dir.write("q.txt", "plain words");
    const auto m = dir.write("m.csv",
                             "path,title,date,page_number,format\n"
                             "p.xml,herald,1906-11-18,1,alto\n"
                             "q.txt,herald,1906-11-18,2,text\n");
    auto r = run_cli({"segment", "--manifest", m.string()});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(count_lines(r.out), 4u);
    r = run_cli({"segment", "--manifest", m.string(), "--select", "herald:1906-11-18:2"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out,
              "{\"title\":\"herald\",\"date\":\"1906-11-18\",\"page\":2,\"seq\":0,\"headline\":null,\"token_count\":2}\n");
    EXPECT_EQ(run_cli({"segment", "--manifest", m.string(), "--select", "herald:1906-11-18:9"}).code, 2);
    EXPECT_EQ(run_cli({"segment", "--manifest", m.string(), "--select", "herald"}).code, 2);
    EXPECT_EQ(run_cli({"segment", "--manifest", m.string(), "--file", "x"}).code, 2);
}

TEST(Cli, Categorize) {
    TempDir dir;
    const auto page = dir.write("p.xml", kTwoHeadlinePage);
    const auto vocab = dir.write("v.txt", "yale\nwins\nprinceton\ntigers\nbeaten\nteams\ngame\nbridge\ncamden\ntrestle\n");
    const auto rules = dir.write("r.json", R"({"sports": ["yale", "princeton", "tigers", "teams"], "disaster": ["bridge", "trestle"]})");
    auto r = run_cli({"categorize", "--file", page.string(), "--title", "herald", "--date", "1906-11-18", "--rules",
                      rules.string(), "--vocab", vocab.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out,
              "{\"title\":\"herald\",\"date\":\"1906-11-18\",\"page\":1,\"seq\":1,\"category\":\"sports\",\"score\":4.0,"
              "\"matched_keywords\":[\"princeton\",\"teams\",\"tigers\",\"yale\"]}\n"
              "{\"title\":\"herald\",\"date\":\"1906-11-18\",\"page\":1,\"seq\":2,\"category\":\"disaster\",\"score\":2.0,"
              "\"matched_keywords\":[\"bridge\",\"trestle\"]}\n");

    r = run_cli({"categorize", "--file", page.string(), "--rules", dir.write("e.json", "{}").string(), "--vocab",
                 vocab.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "");

    EXPECT_EQ(run_cli({"categorize", "--file", page.string(), "--rules",
                       dir.write("bad.json", R"({"s": ["190 6"]})").string(), "--vocab", vocab.string()})
                  .code,
              2);
    EXPECT_EQ(run_cli({"categorize", "--file", page.string(), "--rules",
                       dir.write("dup.json", R"({"s": ["yale"], "s": ["tigers"]})").string(), "--vocab", vocab.string()})
                  .code,
              2);
    EXPECT_EQ(run_cli({"categorize", "--file", page.string(), "--rules", dir.write("broken.json", "{").string(),
                       "--vocab", vocab.string()})
                  .code,
              2);
    EXPECT_EQ(run_cli({"categorize", "--file", page.string(), "--rules", (dir / "none.json").string(), "--vocab",
                       vocab.string()})
                  .code,
              1);
}

TEST(Cli, Stoplist) {
    TempDir dir;
    const auto counts = dir.write("c.txt", "the 100\nof 90\nbridge 2\n");
    auto r = run_cli({"stoplist", "--counts", counts.string(), "--size", "2"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "the\nof\n");

    SmallCorpus c;
    r = run_cli({"stoplist", "--manifest", c.manifest.string(), "--vocab", c.vocab.string(), "--size", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "bridge\nvote\n");
    EXPECT_EQ(run_cli({"stoplist"}).code, 2);
    EXPECT_EQ(run_cli({"stoplist", "--manifest", c.manifest.string()}).code, 2);
}

TEST(Cli, UsageAndHelp) {
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    const auto r = run_cli({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(contains(r.out, "ingest"));
    EXPECT_FALSE(contains(r.out, "fixtures"));
    const auto h = run_cli({"bursts", "--help"});
    EXPECT_EQ(h.code, 0);
    for (const char* flag : {"--threshold", "--min-docs", "--sigma-floor", "--from", "--to"})
        EXPECT_TRUE(contains(h.out, flag)) << flag;
}

TEST(Cli, FixturesGenerateIsDeterministic) {
    TempDir a, b;
    ASSERT_EQ(run_cli({"fixtures", "generate", "--kind", "random", "--seed", "5", "--out", a.path().string()}).code, 0);
    ASSERT_EQ(run_cli({"fixtures", "generate", "--kind", "random", "--seed", "5", "--out", b.path().string()}).code, 0);
    for (const char* f : {"manifest.csv", "vocab.txt", "stoplist.txt", "truth.json"})
        EXPECT_EQ(read_file(a / f), read_file(b / f)) << f;
    EXPECT_EQ(run_cli({"fixtures", "generate", "--kind", "nope", "--out", a.path().string()}).code, 2);
}

}  // namespace
}  // namespace chronopress
