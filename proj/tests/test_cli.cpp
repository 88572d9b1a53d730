#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "depthforge/io/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(DEPTHFORGE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path dir() {
  const fs::path d = fs::temp_directory_path() / "depthforge_test_cli";
  fs::create_directories(d);
  return d;
}

std::string path(const std::string& name) { return (dir() / name).string(); }

void write_file(const std::string& name, const std::string& text) { std::ofstream(dir() / name) << text; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("depth command") {
  write_file("one.csv", "0.5,-1,2\n");
  Run r = run("depth --data " + path("one.csv") + " --query-inline 0.5,-1,2 --notion halfspace --k 20 --r 2");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["results"][0]["depth"] == 1.0);

  REQUIRE(run("gen --dist gaussian --d 3 --n 200 --seed 4 --out " + path("g.csv")).code == 0);
  const std::string base = "depth --data " + path("g.csv") + " --query-inline 0.1,0.2,0.3 --k 300 --r 5 --seed 3 --trace";
  const Run a = run(base);
  const Run b = run(base);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(run(base + " --workers 3").out == a.out);
  CHECK(run(base + " --path sequential").out == a.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["results"][0]["trace"].size() == 5);
  CHECK(j["results"][0]["directions_used"] == 300);

  // Column mean of the data as the query.
  write_file("four.csv", "0,0\n2,0\n0,2\n2,4\n");
  r = run("depth --data " + path("four.csv") + " --query-inline 1,1.5 --notion mahalanobis");
  REQUIRE(r.code == 0);
  CHECK(std::abs(nlohmann::json::parse(r.out)["results"][0]["depth"].get<double>() - 1.0) <= 1e-12);

  write_file("queries.csv", "0,0,0\n1,1,1\n");
  r = run("depth --data " + path("g.csv") + " --query " + path("queries.csv") + " --k 100 --r 2");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["results"].size() == 2);
}

TEST_CASE("flag, environment and config precedence") {
  const std::string base = "depth --data " + path("g.csv") + " --query-inline 0.1,0.2,0.3 --k 200 --r 4";
  write_file("seed.ini", "seed = 8\n");
  const std::string seeded = run(base + " --seed 8").out;
  CHECK(run(base + " --config " + path("seed.ini")).out == seeded);
  CHECK(run(base, "DEPTHFORGE_SEED=8").out == seeded);
  CHECK(run(base + " --seed 9", "DEPTHFORGE_SEED=8").out != seeded);
  CHECK(run(base + " --seed 8", "DEPTHFORGE_SEED=9").out == seeded);
  CHECK(run(base + " --config " + path("seed.ini"), "DEPTHFORGE_SEED=9").out != seeded);
  CHECK(run(base + " --seed 8", "DEPTHFORGE_WORKERS=3").out == seeded);
}

TEST_CASE("exit codes") {
  CHECK(run("depth --data " + path("g.csv")).code == 2);
  CHECK(run("depth --bogus").code == 2);
  CHECK(run("depth --data " + path("g.csv") + " --query-inline 0,0,0 --alpha 1.5").code == 2);
  write_file("bad.csv", "1,2\n3,x\n");
  CHECK(run("depth --data " + path("bad.csv") + " --query-inline 0,0").code == 3);
  CHECK(run("depth --data " + path("nope.csv") + " --query-inline 0,0").code == 3);
  CHECK(run("depth --data " + path("g.csv") + " --query-inline 0,0").code == 4);
  CHECK(run("bench grid --dims 2 --directions 10 --n 20 --out /proc/forbidden").code == 5);
  CHECK(run("study converge --dims 2 --alphas 0.9 --refinements 2 --directions 1 --out " + path("s")).code == 2);
}

TEST_CASE("bench commands") {
  Run r = run("bench breakdown --path sequential --n 100,200 --d 4 --k 40 --r 2 --out " + path("bd"));
  REQUIRE(r.code == 0);
  const std::string csv = read_file(dir() / "bd" / "breakdown.csv");
  CHECK(csv.rfind("n,d,k,r,g,d_chunk,lambda,path,phase,seconds,fraction,total_seconds\n", 0) == 0);
  CHECK(lines(csv) == 7);
  CHECK(fs::exists(dir() / "bd" / "breakdown.json"));

  r = run("bench grid --dims 5,10 --directions 1000,2000 --n 100 --out " + path("grid"));
  REQUIRE(r.code == 0);
  CHECK(lines(read_file(dir() / "grid" / "runtime_grid.csv")) == 5);
}

TEST_CASE("fit-model command") {
  const std::string profiles = path("bd") + "/breakdown.csv";
  Run r = run("fit-model --profiles " + profiles);
  CHECK(r.code == 6);  // two profiles cannot determine the model

  r = run("fit-model --predict --g 1024 --lambda 1 --d 1");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["prediction"]["curve"][0]["plateau"] == 1024.0);

  write_file("nocol.csv", "n,d,k,r,path,phase,seconds\n1,1,1,1,sequential,generation,0.1\n");
  CHECK(run("fit-model --profiles " + path("nocol.csv")).code == 3);

  std::ostringstream many;
  many << "n,d,k,r,path,phase,seconds,total_seconds\n";
  for (int i = 1; i <= 5; ++i) {
    const double n = 100.0 * i, d = 3 + i, k = 10.0 * i * i;
    for (const char* phase : {"generation", "projection", "univariate"})
      many << n << ',' << d << ',' << k << ",1,sequential," << phase << ',' << 1e-6 * n * d << ',' << 1.0 << '\n';
  }
  write_file("many.csv", many.str());
  r = run("fit-model --profiles " + path("many.csv"));
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["profile_count"] == 5);
}

TEST_CASE("study commands") {
  Run r = run("study converge --dims 3 --n 200 --queries 3 --alphas 0.6,0.9 --refinements 2 --directions 40,80 "
              "--ref-k 1000 --ref-r 10 --out " + path("conv"));
  REQUIRE(r.code == 0);
  const std::string conv = read_file(dir() / "conv" / "convergence.csv");
  CHECK(conv.find(",reference\n") != std::string::npos);
  CHECK(conv.find("mean,0,reference") != std::string::npos);

  r = run("study frontier --tol 1e-4 --dims 3 --n 200 --queries 3 --refinements 2,4 --directions 40,80 "
          "--ref-k 1000 --ref-r 10 --out " + path("front"));
  REQUIRE(r.code == 0);
  CHECK(read_file(dir() / "front" / "frontier.csv").rfind("d,k,alpha,min_r,all_converged", 0) == 0);

  r = run("study rank --dist gaussian --d 5 --n 300 --queries 30 --k 200 --r 4 --out " + path("rank"));
  REQUIRE(r.code == 0);
  const std::string rank = read_file(dir() / "rank" / "rank.csv");
  CHECK(rank.rfind("dist,nu,d,queries,left,right,spearman,kendall\n", 0) == 0);
  CHECK(rank.find("PDF,D_P") != std::string::npos);
  CHECK(rank.find("PDF,D_M") != std::string::npos);
}

TEST_CASE("gen writes readable matrices") {
  REQUIRE(run("gen --dist exponential --d 2 --n 10 --out " + path("e.dfmx")).code == 0);
  CHECK(fs::file_size(dir() / "e.dfmx") == 4 + 16 + 160);
  REQUIRE(run("gen --dist t --nu 3 --d 2 --n 10 --out " + path("t.csv")).code == 0);
  CHECK(lines(read_file(dir() / "t.csv")) == 10);
}
