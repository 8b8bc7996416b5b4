#include <gtest/gtest.h>

#include <atomic>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "io.hpp"
#include "test_support.hpp"
#include "warp/csv.hpp"

namespace warp::cli {
namespace {

namespace fs = std::filesystem;
using testing::slurp;

struct Run {
  int status = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.status = run_command(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) rows.push_back(csv::split_line(line));
  return rows;
}

class Pipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("cli");
    const auto data = (*dir_ / "data").string();
    ASSERT_EQ(run({"synth", "--weeks", "12", "--seed", "7", "-o", data}).status, 0);
    const auto r = run({"profile", "-i", data + "/observations.csv", "-o", (*dir_ / "prof").string(), "--method",
                        "warp,ss", "--train-weeks", "8", "--folds", "4"});
    ASSERT_EQ(r.status, 0) << r.err;
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static fs::path path(const std::string& rel) { return *dir_ / rel; }

  static testing::TempDir* dir_;
};

testing::TempDir* Pipeline::dir_ = nullptr;

TEST_F(Pipeline, SynthWritesDatasetAndGroundTruth) {
  for (const char* f : {"observations.csv", "ground_truth.csv", "manifest.json", "run.conf"}) {
    EXPECT_TRUE(fs::exists(path("data") / f)) << f;
  }
  const auto manifest = nlohmann::json::parse(slurp(path("data/manifest.json")));
  EXPECT_EQ(manifest["command"], "synth");
  EXPECT_EQ(manifest["config"]["seed"], "7");
  EXPECT_EQ(manifest["config"]["weeks"], "12");
}

TEST_F(Pipeline, ProfileWritesMethodsTimesFolds) {
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(path("prof/link-01"))) {
    if (e.path().extension() == ".csv") ++count;
  }
  EXPECT_EQ(count, 8u);
  const auto warp = read_csv(path("prof/link-01/warp_fold0.csv"));
  ASSERT_EQ(warp.size(), kMinutesPerWeek + 1);
  EXPECT_EQ(warp[1][1], "2016-05-02T00:00");
  EXPECT_FALSE(warp[1][3].empty());
  const auto ss = read_csv(path("prof/link-01/ss_fold3.csv"));
  EXPECT_EQ(ss[1][1], "2016-05-23T00:00");
  EXPECT_TRUE(ss[1][3].empty());
}

TEST_F(Pipeline, EvaluateBinsSumToHundred) {
  const auto r = run({"evaluate", "-i", path("data/observations.csv").string(), "--profiles", path("prof").string(),
                      "-o", path("eval").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto bins = read_csv(path("eval/bins.csv"));
  ASSERT_EQ(bins.size(), 5u);  // header, link x 2 methods, all x 2 methods
  for (std::size_t i = 1; i < bins.size(); ++i) {
    double total = 0.0;
    for (std::size_t c = 3; c < bins[i].size(); ++c) total += *csv::parse_number(bins[i][c]);
    EXPECT_NEAR(total, 100.0, 0.01);
  }
  EXPECT_TRUE(fs::exists(path("eval/reports/link-01/warp_fold2.json")));
  const auto tod = read_csv(path("eval/time_of_day.csv"));
  EXPECT_EQ(tod[0], (std::vector<std::string>{"link_id", "minute_of_day", "ss", "warp"}));
  EXPECT_EQ(tod.size(), 1u + 2u * 24u);
  const auto pct = read_csv(path("eval/percentile.csv"));
  EXPECT_EQ(pct.size(), 1u + 2u * 100u);
  const auto groups = read_csv(path("eval/group_metrics.csv"));
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups[1][0], "all");
}

TEST_F(Pipeline, ConfigFileRoundTripsAndFlagsWin) {
  const auto conf = path("prof/run.conf");
  const auto text = slurp(conf);
  EXPECT_NE(text.find("method=[warp,ss]"), std::string::npos) << text;
  EXPECT_NE(text.find("lambda=0.5"), std::string::npos) << text;
  const auto r = run({"profile", "--config", conf.string(), "-o", path("prof2").string(), "--method", "ss"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(slurp(path("prof2/link-01/ss_fold1.csv")), slurp(path("prof/link-01/ss_fold1.csv")));
  EXPECT_FALSE(fs::exists(path("prof2/link-01/warp_fold0.csv")));
  EXPECT_NE(slurp(path("prof2/run.conf")).find("method=[ss]"), std::string::npos);
}

TEST_F(Pipeline, IngestAndDecompose) {
  const auto obs = path("data/observations.csv").string();
  auto r = run({"ingest", "-i", obs, "-o", path("clean").string(), "--exclude", "link-01"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rej = read_csv(path("clean/rejections.csv"));
  ASSERT_EQ(rej.size(), 2u);
  EXPECT_EQ(rej[1][2], "excluded");

  r = run({"decompose", "-i", obs, "-o", path("dec").string(), "--weeks", "9", "--power-stride", "10080"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto dec = read_csv(path("dec/link-01/decomposition.csv"));
  ASSERT_EQ(dec.size(), 9 * kMinutesPerWeek + 1);
  EXPECT_EQ(dec[0], (std::vector<std::string>{"link_id", "timestamp", "travel_time_s", "background_s", "spikes_s",
                                               "indicator"}));
  const auto power = read_csv(path("dec/link-01/power.csv"));
  EXPECT_EQ(power.size(), 141u);
  EXPECT_EQ(power[0].size(), 1u + 9u);
}

TEST(Cli, SynthIsReproducible) {
  testing::TempDir dir("repro");
  ASSERT_EQ(run({"synth", "--weeks", "9", "--seed", "3", "--links", "2", "-o", (dir / "a").string()}).status, 0);
  ASSERT_EQ(run({"synth", "--weeks", "9", "--seed", "3", "--links", "2", "--jobs", "2", "-o", (dir / "b").string()})
                .status,
            0);
  EXPECT_EQ(slurp(dir / "a/observations.csv"), slurp(dir / "b/observations.csv"));
  EXPECT_EQ(slurp(dir / "a/ground_truth.csv"), slurp(dir / "b/ground_truth.csv"));
}

TEST(Cli, UnknownFlagRejected) {
  testing::TempDir dir("flag");
  const auto r = run({"synth", "--bogus", "1", "-o", dir.path().string()});
  EXPECT_NE(r.status, 0);
  EXPECT_NE((r.out + r.err).find("--bogus"), std::string::npos);
}

TEST(Cli, DomainViolationNamesOption) {
  testing::TempDir dir("domain");
  const auto r = run({"synth", "--weeks", "4", "-o", dir.path().string()});
  EXPECT_NE(r.status, 0);
  EXPECT_NE((r.out + r.err).find("--weeks"), std::string::npos);
}

TEST(Cli, UnreadableInput) {
  testing::TempDir dir("missing");
  const auto r = run({"ingest", "-i", (dir / "nope.csv").string(), "-o", dir.path().string()});
  EXPECT_NE(r.status, 0);
  EXPECT_NE((r.out + r.err).find("nope.csv"), std::string::npos);
}

TEST(Cli, UnknownConfigKey) {
  testing::TempDir dir("conf");
  {
    std::ofstream(dir / "bad.conf") << "bogus=1\n";
  }
  const auto r = run({"synth", "--config", (dir / "bad.conf").string(), "-o", dir.path().string()});
  EXPECT_NE(r.status, 0);
  EXPECT_NE((r.out + r.err).find("bogus"), std::string::npos);
}

TEST(Cli, ConfigValuesApplyAndOtherCommandsKeysAreIgnored) {
  testing::TempDir dir("conf2");
  {
    std::ofstream(dir / "ok.conf") << "# comment\nlinks=2\nweeks=9\nfolds=3\n";
  }
  const auto r = run({"synth", "--config", (dir / "ok.conf").string(), "-o", (dir / "out").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = read_csv(dir / "out/observations.csv");
  EXPECT_EQ(rows.size(), 1 + 2 * 9 * kMinutesPerWeek);
}

TEST(Cli, RuntimeErrorReported) {
  testing::TempDir dir("short");
  ASSERT_EQ(run({"synth", "--weeks", "9", "-o", (dir / "d").string()}).status, 0);
  const auto r = run({"profile", "-i", (dir / "d/observations.csv").string(), "-o", (dir / "p").string(), "--method",
                      "ss"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("insufficient data"), std::string::npos) << r.err;
}

TEST(Cli, SubcommandRequired) {
  EXPECT_NE(run({}).status, 0);
  EXPECT_NE(run({"bogus"}).status, 0);
}

TEST(Io, Sha256KnownVector) {
  testing::TempDir dir("sha");
  write_atomic(dir / "abc.txt", [](std::ostream& o) { o << "abc"; });
  EXPECT_EQ(sha256_file(dir / "abc.txt"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_FALSE(fs::exists(dir / "abc.txt.tmp0"));
}

TEST(Io, WriteAtomicCreatesDirectories) {
  testing::TempDir dir("atomic");
  write_atomic(dir / "a/b/c.txt", [](std::ostream& o) { o << "x"; });
  EXPECT_EQ(slurp(dir / "a/b/c.txt"), "x");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "a/b")) ++entries;
  EXPECT_EQ(entries, 1u);
}

TEST(Io, ParallelForRunsEveryIndexAndRethrowsLowestFailure) {
  std::vector<std::atomic<int>> hits(50);
  parallel_for(50, 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  try {
    parallel_for(20, 3, [](std::size_t i) {
      if (i == 7 || i == 12) throw Error("fail " + std::to_string(i));
    });
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "fail 7");
  }
}

TEST(Io, SafeName) {
  EXPECT_EQ(safe_name("M25/J3 a"), "M25_J3_a");
  EXPECT_EQ(safe_name(".."), "_..");
  EXPECT_EQ(safe_name("link-01.x"), "link-01.x");
}

}  // namespace
}  // namespace warp::cli
