#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/results.hpp"
#include "embgeo/embp.hpp"
#include "embgeo/ingest.hpp"
#include "helpers.hpp"

using namespace embgeo;
using testutil::error_code;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "embgeo");
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string p(const std::filesystem::path& path) { return path.string(); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

}  // namespace

TEST_CASE("usage handling") {
  CHECK(run({"--version"}).code == 0);
  CHECK(run({"--version"}).out.find(cli::kVersion) != std::string::npos);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("retention") != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"retention", "--queries", "a"}).code == 2);
  CHECK(run({"synth", "--out", "x", "--n", "ten"}).code == 2);
}

TEST_CASE("component encoding") {
  for (std::string name : {"plain", "with/slash", "..", ".hidden", "", "sp ace", "ünï"}) {
    const auto enc = cli::encode_component(name);
    CHECK(enc.find('/') == std::string::npos);
    CHECK(enc != ".");
    CHECK(enc != "..");
    CHECK_FALSE(enc.empty());
    CHECK(cli::decode_component(enc) == name);
  }
}

TEST_CASE("synth, ingest and retention commands") {
  testutil::TempDir dir;
  auto r = run({"synth", "--n", "120", "--d", "8", "--seed", "3", "--out", p(dir / "s")});
  REQUIRE(r.code == 0);
  CHECK(std::filesystem::exists(dir / "s.queries.embp"));
  CHECK(std::filesystem::exists(dir / "s.truth.json"));

  write_text(dir / "e.csv", "id,v0,v1\na,1,2\nb,3,4\n");
  CHECK(run({"ingest", "--csv", p(dir / "e.csv"), "--out", p(dir / "e.embp")}).code == 0);
  CHECK(load_embeddings(dir / "e.embp").ids() == std::vector<std::string>{"a", "b"});
  write_text(dir / "bad.csv", "id,v0,v1\na,1,x\n");
  r = run({"ingest", "--csv", p(dir / "bad.csv"), "--out", p(dir / "bad.embp")});
  CHECK(r.code == 1);
  CHECK(r.err.find("non-numeric cell at row 1, col v1") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(dir / "bad.embp"));

  const auto results = dir / "results";
  r = run({"retention", "--queries", p(dir / "s.queries.embp"), "--targets", p(dir / "s.targets.embp"), "--out",
           p(results), "--dataset", "toy/set", "--model", "m1", "--k-grid", "5,0.1"});
  REQUIRE(r.code == 0);
  const auto runs = cli::scan_runs(results);
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].dataset == "toy/set");
  CHECK(runs[0].model == "m1");
  CHECK(runs[0].manifest.probe == ProbeKind::Retention);
  std::set<std::string> ks;
  for (const auto& run_ : runs) ks.insert(run_.manifest.parameters.at("k"));
  CHECK(ks == std::set<std::string>{"5", "12"});
  CHECK(runs[0].summary.at("mean_retention").get<double>() > 0.0);

  r = run({"retention", "--queries", p(dir / "s.queries.embp"), "--targets", p(dir / "missing.embp"), "--out",
           p(results)});
  CHECK(r.code == 1);
  CHECK(r.err.find("file not found") != std::string::npos);
  r = run({"retention", "--queries", p(dir / "s.queries.embp"), "--targets", p(dir / "s.targets.embp"), "--out",
           p(results), "--k", "500"});
  CHECK(r.code == 1);
}

TEST_CASE("ica, stability and explain commands") {
  testutil::TempDir dir;
  REQUIRE(run({"synth", "--n", "300", "--d", "16", "--seed", "1", "--out", p(dir / "s")}).code == 0);
  const auto results = dir / "results";
  const std::vector<std::string> pair{"--queries", p(dir / "s.queries.embp"), "--targets", p(dir / "s.targets.embp"),
                                      "--out", p(results), "--dataset", "ds", "--model", "m"};
  auto args = pair;
  for (std::string a : {"--dim", "6", "--seed", "2", "--shuffle-seed", "4"}) args.push_back(a);
  args.insert(args.begin(), "ica");
  auto r = run(args);
  REQUIRE(r.code == 0);
  const auto run_dir = results / "ds" / "m";
  CHECK(std::filesystem::exists(run_dir / "ica-d6-s2.profile.csv"));
  CHECK(std::filesystem::exists(run_dir / "ica-d6-s2.model.embp"));
  CHECK(std::filesystem::exists(run_dir / "shuffle-d6-s2-ss4.profile.json"));
  const auto csv = read_file(run_dir / "ica-d6-s2.profile.csv");
  CHECK(csv.rfind("dim,mean_abs_diff,std_abs_diff\n", 0) == 0);

  args = pair;
  for (std::string a : {"--dim", "6", "--restarts", "3", "--peak-sigma-threshold", "0.8"}) args.push_back(a);
  args.insert(args.begin(), "stability");
  r = run(args);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("peak_agreement=3/3") != std::string::npos);

  const auto runs = cli::scan_runs(results);
  CHECK(runs.size() == 3);

  // Explain the peak component with a tiny vocabulary.
  write_text(dir / "vocab.txt", "alpha\nbeta\ngamma\n");
  write_text(dir / "words.csv",
             "id,v0,v1,v2,v3,v4,v5,v6,v7,v8,v9,v10,v11,v12,v13,v14,v15\n"
             "alpha,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n"
             "beta,0,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n"
             "gamma,0,0,1,0,0,0,0,0,0,0,0,0,0,0,0,0\n");
  r = run({"explain", "--model-file", p(run_dir / "ica-d6-s2.model"), "--profile",
           p(run_dir / "ica-d6-s2.profile.json"), "--words", p(dir / "words.csv"), "--vocab", p(dir / "vocab.txt"),
           "--n-top", "2", "--out", p(dir / "explain")});
  REQUIRE(r.code == 0);
  CHECK(std::filesystem::exists(dir / "explain.txt"));
  CHECK(std::filesystem::exists(dir / "explain.unmixing.csv"));
  const auto doc = json::parse(read_file(dir / "explain.json"));
  CHECK(doc.at("words").at("top").size() == 2);

  r = run({"explain", "--model-file", p(run_dir / "ica-d6-s2.model"), "--component", "9", "--out",
           p(dir / "bad")});
  CHECK(r.code == 1);
  r = run({"explain", "--model-file", p(run_dir / "ica-d6-s2.model"), "--out", p(dir / "bad")});
  CHECK(r.code == 1);
}

TEST_CASE("correlate command") {
  testutil::TempDir dir;
  const auto results = dir / "results";
  // Three models whose retention is ordered by noise level.
  const std::vector<std::pair<std::string, std::string>> models{{"low", "0.2"}, {"mid", "1.0"}, {"high", "3.0"}};
  for (const auto& [name, noise] : models) {
    REQUIRE(run({"synth", "--n", "150", "--d", "8", "--noise", noise, "--out", p(dir / name)}).code == 0);
    REQUIRE(run({"retention", "--queries", p(dir / (name + ".queries.embp")), "--targets",
                 p(dir / (name + ".targets.embp")), "--out", p(results), "--dataset", "ds", "--model", name})
                .code == 0);
  }
  write_text(dir / "scores.csv", "model,dataset,score\nlow,ds,90\nmid,ds,70\nhigh,ds,50\n");
  auto r = run({"correlate", "--results", p(results), "--scores", p(dir / "scores.csv"), "--out", p(dir / "tables")});
  REQUIRE(r.code == 0);
  const auto csv = read_file(dir / "tables" / "correlation-retention.csv");
  CHECK(csv.rfind("dataset,measure,rho,p,marker,n\n", 0) == 0);
  // n=3 uses the exact permutation test: 2 of 6 orderings reach |rho| = 1.
  CHECK(csv.find("ds,retention,1.000000,0.333333,,3") != std::string::npos);
  const auto md = read_file(dir / "tables" / "correlation-retention.md");
  CHECK(md.find("| ds | **1.000** |") != std::string::npos);

  r = run({"correlate", "--results", p(results), "--scores", p(dir / "scores.csv"), "--out", p(dir / "tables"),
           "--measure", "jaccard", "--ascii-markers"});
  CHECK(r.code == 0);
  CHECK(read_file(dir / "tables" / "correlation-jaccard.csv").find("ds,jaccard,1.000000") != std::string::npos);

  // No prompted runs exist.
  r = run({"correlate", "--results", p(results), "--scores", p(dir / "scores.csv"), "--out", p(dir / "t2"),
           "--prompted"});
  CHECK(r.code == 1);

  write_text(dir / "scores2.csv", "model,dataset,score\nlow,ds,90\nmid,ds,70\nother,ds,50\n");
  r = run({"correlate", "--results", p(results), "--scores", p(dir / "scores2.csv"), "--out", p(dir / "t3")});
  CHECK(r.code == 1);
  CHECK(r.err.find("in results but not in scores: high") != std::string::npos);
  CHECK(r.err.find("in scores but not in results: other") != std::string::npos);

  std::filesystem::remove_all(results / "ds" / "high");
  write_text(dir / "scores3.csv", "model,dataset,score\nlow,ds,90\nmid,ds,70\n");
  r = run({"correlate", "--results", p(results), "--scores", p(dir / "scores3.csv"), "--out", p(dir / "t4")});
  CHECK(r.code == 1);
  CHECK(r.err.find("at least 3") != std::string::npos);

  r = run({"correlate", "--results", p(results), "--scores", p(dir / "scores3.csv"), "--out", p(dir / "t4"),
           "--measure", "vibes"});
  CHECK(r.code == 1);
}

TEST_CASE("results layout is enforced") {
  testutil::TempDir dir;
  RunManifest m{{"ds", "m", false}, ProbeKind::Retention, {{"k", "1"}, {"metric", "cosine"}}, "x", 0};
  std::filesystem::create_directories(dir / "ds");
  cli::write_manifest(dir / "ds" / "stray.json", m, json::object());
  CHECK(error_code([&] { cli::scan_runs(dir.path()); }) == ErrorCode::FormatError);
  CHECK(error_code([&] { cli::scan_runs(dir / "nowhere"); }) == ErrorCode::FileNotFound);
}

TEST_CASE("correlate over 25 models with measure equal to or opposite the score") {
  testutil::TempDir dir;
  for (int sign : {1, -1}) {
    const auto results = dir / ("results" + std::to_string(sign + 1));
    std::string scores = "model,dataset,score\n";
    for (int m = 0; m < 25; ++m) {
      const std::string name = "model" + std::to_string(m);
      const double score = 40.0 + 1.5 * m;
      RunManifest man{{"ds", name, false}, ProbeKind::Ica, {{"d_ica", "32"}, {"seed", "0"}}, "x", 0};
      std::filesystem::create_directories(results / "ds" / name);
      cli::write_manifest(results / "ds" / name / "ica-d32-s0.json", man, {{"gini", sign * score}});
      scores += name + ",ds," + std::to_string(score) + "\n";
    }
    write_text(dir / "scores.csv", scores);
    const auto r = run({"correlate", "--results", p(results), "--scores", p(dir / "scores.csv"), "--measure", "gini",
                        "--out", p(dir / "tables")});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(read_file(dir / "tables" / "correlation-gini.json"));
    CHECK(doc.at("rows").at(0).at("rho").get<double>() == sign);
    CHECK(doc.at("rows").at(0).at("marker").get<std::string>() == "‡");
    CHECK(doc.at("rows").at(0).at("n").get<int>() == 25);
  }
}

TEST_CASE("ica outputs are reproducible and budget exhaustion is not an error") {
  testutil::TempDir dir;
  REQUIRE(run({"synth", "--n", "200", "--d", "12", "--out", p(dir / "s")}).code == 0);
  auto ica = [&](const std::string& out, const std::string& max_iter, const std::string& dim) {
    return run({"ica", "--queries", p(dir / "s.queries.embp"), "--targets", p(dir / "s.targets.embp"), "--out",
                p(dir / out), "--dim", dim, "--max-iter", max_iter, "--shuffle-seed", "3"});
  };
  REQUIRE(ica("a", "10000", "4").code == 0);
  REQUIRE(ica("b", "10000", "4").code == 0);
  for (std::string f : {"ica-d4-s0.profile.csv", "ica-d4-s0.profile.json", "ica-d4-s0.model.embp",
                        "shuffle-d4-s0-ss3.profile.csv"}) {
    CHECK(read_file(dir / "a" / "default" / "default" / f) == read_file(dir / "b" / "default" / "default" / f));
  }
  const auto r = ica("c", "1", "4");
  CHECK(r.code == 0);
  CHECK(r.out.find("converged=false") != std::string::npos);
  const auto manifest = json::parse(read_file(dir / "c" / "default" / "default" / "ica-d4-s0.json"));
  CHECK(manifest.at("summary").at("converged").get<bool>() == false);
  CHECK(manifest.at("schema_version").get<int>() == 1);
  CHECK(ica("d", "100", "0").code == 1);
}
