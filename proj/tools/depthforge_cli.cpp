// depthforge command-line front end.
//
// Exit codes: 0 success, 1 numerical failure, 2 bad flags or arguments,
// 3 malformed or unreadable input, 4 dimension mismatch, 5 unwritable output,
// 6 rank-deficient model fit.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "depthforge/depth_optimizer.hpp"
#include "depthforge/error.hpp"
#include "depthforge/io/config.hpp"
#include "depthforge/io/csv.hpp"
#include "depthforge/io/matrix_file.hpp"
#include "depthforge/parallel.hpp"
#include "depthforge/perf_model.hpp"
#include "depthforge/simd/dispatch.hpp"
#include "depthforge/study/benchmarks.hpp"
#include "depthforge/study/convergence.hpp"
#include "depthforge/study/generators.hpp"
#include "depthforge/study/rank_study.hpp"
#include "depthforge/univariate_depth.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace depthforge;

namespace {

enum Exit { kOk = 0, kNumerical = 1, kUsage = 2, kMalformed = 3, kDimension = 4, kUnwritable = 5, kRankDeficient = 6 };

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<std::size_t> as_size(std::optional<std::uint64_t> v) {
  if (!v) return std::nullopt;
  return static_cast<std::size_t>(*v);
}

// Flag > environment > config file > default.
std::size_t pick_workers(const std::optional<std::size_t>& flag, const io::KeyValueConfig& cfg) {
  if (flag) return resolve_workers(*flag);
  if (std::getenv("DEPTHFORGE_WORKERS") != nullptr) return resolve_workers();
  if (const auto v = cfg.integer("workers")) return resolve_workers(static_cast<std::size_t>(*v));
  return resolve_workers();
}

std::uint64_t pick_seed(const std::optional<std::uint64_t>& flag, const io::KeyValueConfig& cfg,
                        const std::string& key, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("DEPTHFORGE_SEED")) {
    double v = 0.0;
    require(io::parse_double(env, v) && v >= 0, ErrorKind::invalid_argument, "DEPTHFORGE_SEED is not an integer");
    return static_cast<std::uint64_t>(v);
  }
  if (const auto v = cfg.integer(key)) return *v;
  return fallback;
}

template <typename T>
T pick(const std::optional<T>& flag, const std::optional<T>& config, T fallback) {
  if (flag) return *flag;
  if (config) return *config;
  return fallback;
}

std::vector<std::size_t> parse_list(const std::string& text, const std::string& axis) {
  std::vector<std::size_t> out;
  for (const auto& field : io::split_fields(text)) {
    double v = 0.0;
    require(io::parse_double(field, v) && v >= 0 && v == static_cast<double>(static_cast<std::size_t>(v)),
            ErrorKind::invalid_argument, "grid axis '" + axis + "' has a non-integer entry '" + field + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  require(!out.empty(), ErrorKind::invalid_argument, "grid axis '" + axis + "' is empty");
  return out;
}

std::vector<double> parse_reals(const std::string& text, const std::string& axis) {
  std::vector<double> out;
  for (const auto& field : io::split_fields(text)) {
    double v = 0.0;
    require(io::parse_double(field, v), ErrorKind::invalid_argument,
            "grid axis '" + axis + "' has a non-numeric entry '" + field + "'");
    out.push_back(v);
  }
  require(!out.empty(), ErrorKind::invalid_argument, "grid axis '" + axis + "' is empty");
  return out;
}

std::vector<std::size_t> pick_list(const std::optional<std::string>& flag, const io::KeyValueConfig& cfg,
                                   const std::string& key, const std::string& axis, std::vector<std::size_t> fallback) {
  if (flag) return parse_list(*flag, axis);
  if (const auto v = cfg.text(key)) return parse_list(*v, axis);
  return fallback;
}

io::KeyValueConfig load_config(const std::optional<std::string>& path) {
  return path ? io::KeyValueConfig::load(*path) : io::KeyValueConfig{};
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw OutputError("cannot create output directory " + dir);
  const fs::path probe = fs::path(dir) / ".depthforge-write-test";
  {
    std::ofstream test(probe);
    if (!test) throw OutputError("output directory " + dir + " is not writable");
  }
  fs::remove(probe, ec);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw OutputError("cannot write " + path.string());
  out << text;
  if (!out) throw OutputError("failed writing " + path.string());
}

// ---------------------------------------------------------------- depth

struct DepthFlags {
  std::string data;
  std::optional<std::string> query_file;
  std::optional<std::string> query_inline;
  std::string notion = "projection";
  std::optional<std::size_t> k, r, workers;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> config;
  std::string path = "parallel";
  std::string pole_update = "per_refinement";
  bool trace = false;
};

int run_depth(const DepthFlags& f) {
  const io::KeyValueConfig cfg_file = load_config(f.config);
  const Dataset data = io::read_dataset(f.data);
  Matrix queries;
  if (f.query_inline) {
    std::vector<double> values;
    for (const auto& field : io::split_fields(*f.query_inline)) {
      double v = 0.0;
      require(io::parse_double(field, v) && std::isfinite(v), ErrorKind::invalid_argument,
              "--query-inline entry '" + field + "' is not a finite number");
      values.push_back(v);
    }
    const std::size_t cols = values.size();
    queries = Matrix(1, cols, std::move(values));
  } else {
    queries = io::read_matrix(*f.query_file);
  }
  require(queries.cols() == data.dim(), ErrorKind::dimension_mismatch,
          "query " + (f.query_file ? *f.query_file + " " : std::string()) + "row 1 has " +
              std::to_string(queries.cols()) + " coordinates but " + f.data + " has " + std::to_string(data.dim()));

  ordered_json out;
  out["notion"] = f.notion;
  out["n"] = data.size();
  out["d"] = data.dim();
  ordered_json results = ordered_json::array();

  if (f.notion == "mahalanobis") {
    const LocationScatter mle = estimate_mle(data);
    for (std::size_t i = 0; i < queries.rows(); ++i)
      results.push_back({{"query", i}, {"depth", mahalanobis_depth(queries.row(i), mle)}});
    out["results"] = results;
    std::cout << out.dump(2) << '\n';
    return kOk;
  }

  RrsConfig cfg;
  cfg.notion = parse_notion(f.notion);
  cfg.total_directions = pick(f.k, as_size(cfg_file.integer("k")), std::size_t{20'000});
  cfg.refinements = pick(f.r, as_size(cfg_file.integer("r")), std::size_t{40});
  cfg.shrink = pick(f.alpha, cfg_file.number("alpha"), 0.9);
  cfg.seed = pick_seed(f.seed, cfg_file, "seed", 1);
  cfg.parallel.workers = pick_workers(f.workers, cfg_file);
  require(f.pole_update == "per_refinement" || f.pole_update == "per_direction", ErrorKind::invalid_argument,
          "--pole-update must be per_refinement or per_direction");
  cfg.pole_update = f.pole_update == "per_direction" ? PoleUpdate::per_direction : PoleUpdate::per_refinement;
  validate(cfg);
  const ExecPath path = parse_path(f.path);

  std::vector<DepthResult> found;
  if (path == ExecPath::parallel) {
    found = depth_batch(queries, data, cfg);
  } else {
    const DepthSearch search(data);
    for (std::size_t i = 0; i < queries.rows(); ++i) found.push_back(search.run_sequential(queries.row(i), cfg));
  }

  out["k"] = cfg.total_directions;
  out["r"] = cfg.refinements;
  out["alpha"] = cfg.shrink;
  out["seed"] = cfg.seed;
  for (std::size_t i = 0; i < found.size(); ++i) {
    const DepthResult& res = found[i];
    ordered_json item{{"query", i},
                      {"depth", res.depth},
                      {"argmin_direction", res.argmin_direction},
                      {"directions_used", res.directions_used}};
    if (f.trace) {
      ordered_json trace = ordered_json::array();
      for (const TraceEntry& t : res.trace)
        trace.push_back({{"best", t.best}, {"epsilon", t.epsilon}, {"pole", t.pole}});
      item["trace"] = trace;
    }
    results.push_back(item);
  }
  out["results"] = results;
  std::cout << out.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- bench

struct BenchFlags {
  std::optional<std::string> config;
  std::optional<std::string> out_dir;
  std::optional<std::string> path, notion;
  std::optional<std::string> n_list, dims, directions;
  std::optional<std::size_t> n, r, repeats, workers, d_chunk;
  std::optional<std::uint64_t> seed;
};

study::BenchOptions bench_options(const BenchFlags& f, const io::KeyValueConfig& cfg) {
  study::BenchOptions opt;
  opt.path = parse_path(pick(f.path, cfg.text("bench.path"), std::string("parallel")));
  opt.notion = parse_notion(pick(f.notion, cfg.text("bench.notion"), std::string("projection")));
  opt.repeats = pick(f.repeats, as_size(cfg.integer("bench.repeats")), std::size_t{5});
  require(opt.repeats >= 1, ErrorKind::invalid_argument, "--repeats must be at least 1");
  opt.workers = pick_workers(f.workers, cfg);
  opt.d_chunk = pick(f.d_chunk, as_size(cfg.integer("bench.d_chunk")), std::size_t{256});
  opt.seed = pick_seed(f.seed, cfg, "bench.seed", 1);
  return opt;
}

int run_bench_breakdown(const BenchFlags& f) {
  const io::KeyValueConfig cfg = load_config(f.config);
  const study::BenchOptions opt = bench_options(f, cfg);
  const auto ns = pick_list(f.n_list, cfg, "bench.n", "n", {1000});
  const auto dims = pick_list(f.dims, cfg, "bench.dims", "dims", {150});
  const auto ks = pick_list(f.directions, cfg, "bench.directions", "directions", {1000});
  const std::size_t r = pick(f.r, as_size(cfg.integer("bench.r")), std::size_t{1});
  const fs::path dir = prepare_out_dir(pick(f.out_dir, cfg.text("output.dir"), std::string("out")));

  std::vector<Workload> workloads;
  for (std::size_t n : ns)
    for (std::size_t d : dims)
      for (std::size_t k : ks) {
        require(n >= 1 && d >= 1 && k >= r, ErrorKind::invalid_argument,
                "grid axis 'directions': each entry must be at least r and sizes positive");
        Workload w;
        w.n = n;
        w.d = d;
        w.k = k;
        w.r = r;
        workloads.push_back(w);
      }
  const auto profiles = study::breakdown_bench(workloads, opt);
  std::ostringstream csv;
  study::write_breakdown_csv(csv, profiles);
  write_text(dir / "breakdown.csv", csv.str());

  ordered_json summary{{"command", "bench breakdown"},
                       {"path", path_name(opt.path)},
                       {"notion", notion_name(opt.notion)},
                       {"workers", opt.workers},
                       {"repeats", opt.repeats},
                       {"isa", simd::isa_name(simd::active_kernels().isa)},
                       {"profiles", profiles.size()},
                       {"outputs", {"breakdown.csv"}}};
  write_text(dir / "breakdown.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

int run_bench_grid(const BenchFlags& f) {
  const io::KeyValueConfig cfg = load_config(f.config);
  const study::BenchOptions opt = bench_options(f, cfg);
  const auto dims = pick_list(f.dims, cfg, "bench.dims", "dims", {5, 50, 150});
  const auto ks = pick_list(f.directions, cfg, "bench.directions", "directions", {1000, 2000, 5000, 10000});
  const std::size_t n = pick(f.n, as_size(cfg.integer("bench.n")), std::size_t{10000});
  const std::size_t r = pick(f.r, as_size(cfg.integer("bench.r")), std::size_t{1});
  const fs::path dir = prepare_out_dir(pick(f.out_dir, cfg.text("output.dir"), std::string("out")));

  const auto cells = study::runtime_grid(dims, ks, n, r, opt);
  std::ostringstream csv;
  study::write_runtime_csv(csv, cells, opt);
  write_text(dir / "runtime_grid.csv", csv.str());
  ordered_json summary{{"command", "bench grid"},
                       {"path", path_name(opt.path)},
                       {"notion", notion_name(opt.notion)},
                       {"workers", opt.workers},
                       {"repeats", opt.repeats},
                       {"isa", simd::isa_name(simd::active_kernels().isa)},
                       {"rows", cells.size()},
                       {"outputs", {"runtime_grid.csv"}}};
  write_text(dir / "runtime_grid.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- study

struct StudyFlags {
  std::optional<std::string> config;
  std::optional<std::string> out_dir;
  std::optional<std::string> notion, dist, alphas, refinements, directions, dims;
  std::optional<std::size_t> n, queries, k, r, workers;
  std::optional<double> alpha, nu, tol;
  std::optional<std::uint64_t> seed;
  bool full = false;
};

study::StudyGrid convergence_grid(const StudyFlags& f, const io::KeyValueConfig& cfg, bool frontier) {
  study::StudyGrid g;
  if (!frontier) {
    // Full grid: d = 50, n = 50,000, 50 points, r in {25, 30, 35},
    // k from 200 to 90,000, reference (3,000,000 directions, r = 100).
    g.alphas = {0.6, 0.7, 0.8, 0.9};
    g.refinement_counts = f.full ? std::vector<std::size_t>{25, 30, 35} : std::vector<std::size_t>{25};
    g.direction_counts = f.full ? std::vector<std::size_t>{200, 1000, 5000, 10000, 30000, 60000, 90000}
                                : std::vector<std::size_t>{1000, 3000, 9000};
    g.dims = {f.full ? std::size_t{50} : std::size_t{10}};
    g.query_count = f.full ? 50 : 20;
    g.reference = f.full ? study::ReferenceSpec{3'000'000, 100, 0.9, 3} : study::ReferenceSpec{100'000, 50, 0.9, 3};
  } else {
    g.alphas = {0.9};
    g.refinement_counts = f.full ? std::vector<std::size_t>{10, 25, 50, 75, 100, 125, 150, 175}
                                 : std::vector<std::size_t>{10, 20, 40};
    g.direction_counts = f.full ? std::vector<std::size_t>{200, 1000, 5000, 10000, 50000, 100000}
                                : std::vector<std::size_t>{1000, 5000, 10000};
    g.dims = f.full ? std::vector<std::size_t>{5, 25, 50, 100, 175} : std::vector<std::size_t>{5, 10};
    g.query_count = f.full ? 50 : 5;
    g.reference = f.full ? study::ReferenceSpec{1'000'000, 100, 0.9, 3} : study::ReferenceSpec{50'000, 50, 0.9, 3};
  }
  if (f.alphas) g.alphas = parse_reals(*f.alphas, "alphas");
  else if (auto v = cfg.text("study.alphas")) g.alphas = parse_reals(*v, "alphas");
  g.refinement_counts = pick_list(f.refinements, cfg, "study.refinements", "refinements", g.refinement_counts);
  g.direction_counts = pick_list(f.directions, cfg, "study.directions", "directions", g.direction_counts);
  g.dims = pick_list(f.dims, cfg, "study.dims", "dims", g.dims);
  g.query_count = pick(f.queries, as_size(cfg.integer("study.queries")), g.query_count);
  g.reference.k = pick(f.k, as_size(cfg.integer("reference.k")), g.reference.k);
  g.reference.r = pick(f.r, as_size(cfg.integer("reference.r")), g.reference.r);
  g.reference.alpha = pick(f.alpha, cfg.number("reference.alpha"), g.reference.alpha);
  if (auto v = cfg.integer("reference.repeats")) g.reference.repeats = static_cast<std::size_t>(*v);
  g.verify_reference = cfg.text("reference.verify").value_or("true") != "false";
  g.seed = pick_seed(f.seed, cfg, "study.seed", 1);
  study::validate(g);
  return g;
}

int run_study_convergence(const StudyFlags& f, bool frontier) {
  const io::KeyValueConfig cfg = load_config(f.config);
  const study::StudyGrid grid = convergence_grid(f, cfg, frontier);
  const DepthNotion notion = parse_notion(pick(f.notion, cfg.text("study.notion"), std::string("projection")));
  const study::Distribution dist = study::parse_distribution(pick(f.dist, cfg.text("study.dist"), std::string("gaussian")));
  const double nu = pick(f.nu, cfg.number("study.nu"), 5.0);
  const std::size_t n = pick(f.n, as_size(cfg.integer("study.n")),
                             frontier ? (f.full ? std::size_t{10000} : std::size_t{1000})
                                      : (f.full ? std::size_t{50000} : std::size_t{5000}));
  const double tol = pick(f.tol, cfg.number("study.tol"), 1e-4);
  const std::size_t workers = pick_workers(f.workers, cfg);
  const fs::path dir = prepare_out_dir(pick(f.out_dir, cfg.text("output.dir"), std::string("out")));

  study::ConvergenceTable all;
  for (std::size_t d : grid.dims) {
    const Dataset data = study::generate(dist, {d, n, grid.seed}, nu, workers);
    const Matrix queries = study::select_queries(data, grid.query_count, grid.seed);
    study::ConvergenceTable t = study::convergence_study(grid, notion, data, queries, workers);
    all.reference_depths.insert(all.reference_depths.end(), t.reference_depths.begin(), t.reference_depths.end());
    for (auto& c : t.cells) all.cells.push_back(std::move(c));
  }

  std::ostringstream csv;
  study::write_convergence_csv(csv, all);
  write_text(dir / "convergence.csv", csv.str());
  ordered_json summary{{"command", frontier ? "study frontier" : "study converge"},
                       {"notion", notion_name(notion)},
                       {"dist", study::distribution_name(dist)},
                       {"n", n},
                       {"queries", grid.query_count},
                       {"reference", {{"k", grid.reference.k}, {"r", grid.reference.r}, {"alpha", grid.reference.alpha},
                                      {"repeats", grid.reference.repeats}}},
                       {"cells", all.cells.size()}};
  std::vector<std::string> outputs{"convergence.csv"};
  if (frontier) {
    const auto rows = study::convergence_frontier(all, tol);
    std::ostringstream fcsv;
    study::write_frontier_csv(fcsv, rows);
    write_text(dir / "frontier.csv", fcsv.str());
    outputs.push_back("frontier.csv");
    summary["tol"] = tol;
    summary["frontier_rows"] = rows.size();
  }
  summary["outputs"] = outputs;
  write_text(dir / (frontier ? "frontier.json" : "convergence.json"), summary.dump(2) + "\n");
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

int run_study_rank(const StudyFlags& f) {
  const io::KeyValueConfig cfg = load_config(f.config);
  const study::Distribution dist = study::parse_distribution(pick(f.dist, cfg.text("study.dist"), std::string("gaussian")));
  require(dist != study::Distribution::exponential, ErrorKind::invalid_argument, "--dist must be gaussian or t");
  const auto dims = pick_list(f.dims, cfg, "study.dims", "d", f.full ? std::vector<std::size_t>{5, 50} : std::vector<std::size_t>{5});
  RrsConfig rrs;
  rrs.total_directions = pick(f.k, as_size(cfg.integer("study.k")),
                              f.full ? std::size_t{100'000} : std::size_t{20'000});
  rrs.refinements = pick(f.r, as_size(cfg.integer("study.r")), std::size_t{40});
  rrs.shrink = pick(f.alpha, cfg.number("study.alpha"), 0.9);
  rrs.seed = pick_seed(f.seed, cfg, "study.seed", 1);
  rrs.parallel.workers = pick_workers(f.workers, cfg);
  validate(rrs);
  std::vector<DepthNotion> notions;
  const std::string notion_text = pick(f.notion, cfg.text("study.notions"), std::string("projection,asymprojection"));
  for (const auto& name : io::split_fields(notion_text)) notions.push_back(parse_notion(name));
  const fs::path dir = prepare_out_dir(pick(f.out_dir, cfg.text("output.dir"), std::string("out")));

  std::vector<study::RankStudyResult> results;
  for (std::size_t d : dims) {
    study::RankStudySpec spec;
    spec.dist = dist;
    spec.nu = pick(f.nu, cfg.number("study.nu"), 5.0);
    spec.dim = d;
    spec.n = pick(f.n, as_size(cfg.integer("study.n")),
                  f.full ? std::size_t{100'000} : std::size_t{10'000});
    spec.query_count = pick(f.queries, as_size(cfg.integer("study.queries")),
                            f.full ? std::size_t{5000} : std::size_t{500});
    spec.seed = rrs.seed;
    results.push_back(study::rank_study(spec, notions, rrs));
  }
  std::ostringstream csv;
  study::write_rank_csv(csv, results);
  write_text(dir / "rank.csv", csv.str());
  ordered_json summary{{"command", "study rank"},
                       {"dist", study::distribution_name(dist)},
                       {"k", rrs.total_directions},
                       {"r", rrs.refinements},
                       {"alpha", rrs.shrink},
                       {"rows", ordered_json::array()}};
  for (const auto& res : results)
    for (const auto& row : res.rows)
      summary["rows"].push_back({{"d", res.dim}, {"pair", row.left + " x " + row.right}, {"spearman", row.spearman},
                                 {"kendall", row.kendall}});
  summary["outputs"] = {"rank.csv"};
  write_text(dir / "rank.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- fit-model

struct FitFlags {
  std::optional<std::string> profiles;
  bool predict = false;
  std::optional<std::string> constants;
  std::string g_list = "1,2,4,8,16,32,64,128,256,512,1024";
  double lambda = 1.0;
  std::size_t d = 150;
  std::size_t d_chunk = 256;
  std::size_t n = 10000;
  std::size_t k = 10000;
  std::size_t r = 1;
};

int run_fit(const FitFlags& f) {
  require(f.profiles || f.predict, ErrorKind::invalid_argument, "fit-model needs --profiles or --predict");
  ordered_json out;
  CostConstants c{0.0, 0.0, 1.0, 1.0};
  if (f.profiles) {
    const auto profiles = study::read_breakdown_csv(*f.profiles);
    const FitReport report = fit_constants(profiles);
    c = report.constants;
    out = ordered_json::parse(fit_report_json(report));
  }
  if (f.constants) {
    const auto v = parse_reals(*f.constants, "constants");
    require(v.size() == 4, ErrorKind::invalid_argument, "--constants takes c_const,c_rv,c_proj,c_depth");
    c = CostConstants{v[0], v[1], v[2], v[3]};
    validate(c);
  }
  if (f.predict) {
    require(f.lambda > 0.0, ErrorKind::invalid_argument, "--lambda must be positive");
    ordered_json curve = ordered_json::array();
    for (std::size_t g : parse_list(f.g_list, "g")) {
      require(g >= 1, ErrorKind::invalid_argument, "grid axis 'g' has a zero entry");
      Workload w;
      w.n = f.n;
      w.d = f.d;
      w.k = f.k;
      w.r = f.r;
      w.g = g;
      w.lambda = f.lambda;
      w.d_chunk = f.d_chunk;
      validate(w);
      curve.push_back({{"g", g},
                       {"t_sequential", t_sequential(c, w)},
                       {"t_parallel", t_parallel(c, w)},
                       {"speedup", speedup(c, w)},
                       {"plateau", speedup_plateau(c, f.d, f.d_chunk, g, f.lambda)}});
    }
    out["prediction"] = {{"constants", {{"c_const", c.c_const}, {"c_rv", c.c_rv}, {"c_proj", c.c_proj}, {"c_depth", c.c_depth}}},
                         {"n", f.n},
                         {"d", f.d},
                         {"k", f.k},
                         {"r", f.r},
                         {"lambda", f.lambda},
                         {"d_chunk", f.d_chunk},
                         {"curve", curve}};
  }
  std::cout << out.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- gen

struct GenFlags {
  std::string dist = "gaussian";
  std::size_t d = 2;
  std::size_t n = 1000;
  double nu = 5.0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> workers;
};

int run_gen(const GenFlags& f) {
  const io::KeyValueConfig none;
  const study::Distribution dist = study::parse_distribution(f.dist);
  const Dataset data = study::generate(dist, {f.d, f.n, pick_seed(f.seed, none, "seed", 1)}, f.nu, pick_workers(f.workers, none));
  const fs::path target(f.out);
  if (target.has_parent_path()) prepare_out_dir(target.parent_path().string());
  try {
    io::write_matrix(target, data.matrix(), io::format_for(target));
  } catch (const Error& e) {
    throw OutputError(e.what());
  }
  return kOk;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
      return kUsage;
    case ErrorKind::malformed_data:
    case ErrorKind::io:
      return kMalformed;
    case ErrorKind::dimension_mismatch:
      return kDimension;
    case ErrorKind::rank_deficient:
      return kRankDeficient;
    case ErrorKind::numerical:
      return kNumerical;
  }
  return kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projection-based data depth by refined random search"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "depthforge 1.0");

  DepthFlags depth;
  auto* depth_cmd = app.add_subcommand("depth", "Depth of one or more query points");
  depth_cmd->add_option("--data", depth.data, "Data matrix (CSV or DFMX)")->required();
  auto* qf = depth_cmd->add_option("--query", depth.query_file, "Query matrix file, one point per row");
  auto* qi = depth_cmd->add_option("--query-inline", depth.query_inline, "Single query as \"v1,v2,...\"");
  qf->excludes(qi);
  depth_cmd->add_option("--notion", depth.notion)
      ->check(CLI::IsMember({"halfspace", "projection", "asymprojection", "mahalanobis"}));
  depth_cmd->add_option("--k", depth.k, "Total directions")->check(CLI::PositiveNumber);
  depth_cmd->add_option("--r", depth.r, "Refinements")->check(CLI::PositiveNumber);
  depth_cmd->add_option("--alpha", depth.alpha, "Cap shrink factor in (0, 1)");
  depth_cmd->add_option("--seed", depth.seed);
  depth_cmd->add_option("--workers", depth.workers)->check(CLI::PositiveNumber);
  depth_cmd->add_option("--config", depth.config, "INI file with defaults");
  depth_cmd->add_option("--path", depth.path)->check(CLI::IsMember({"sequential", "parallel"}));
  depth_cmd->add_option("--pole-update", depth.pole_update)->check(CLI::IsMember({"per_refinement", "per_direction"}));
  depth_cmd->add_flag("--trace", depth.trace, "Include the per-refinement trace");

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "Timing benchmarks");
  bench_cmd->require_subcommand(1);
  auto add_bench_common = [&bench](CLI::App* cmd) {
    cmd->add_option("--config", bench.config);
    cmd->add_option("--out", bench.out_dir, "Output directory");
    cmd->add_option("--path", bench.path)->check(CLI::IsMember({"sequential", "parallel"}));
    cmd->add_option("--notion", bench.notion)->check(CLI::IsMember({"halfspace", "projection", "asymprojection"}));
    cmd->add_option("--r", bench.r)->check(CLI::PositiveNumber);
    cmd->add_option("--repeats", bench.repeats)->check(CLI::PositiveNumber);
    cmd->add_option("--workers", bench.workers)->check(CLI::PositiveNumber);
    cmd->add_option("--d-chunk", bench.d_chunk)->check(CLI::PositiveNumber);
    cmd->add_option("--seed", bench.seed);
  };
  auto* breakdown_cmd = bench_cmd->add_subcommand("breakdown", "Phase breakdown per workload");
  add_bench_common(breakdown_cmd);
  breakdown_cmd->add_option("--n", bench.n_list, "Comma-separated sample sizes");
  breakdown_cmd->add_option("--d,--dims", bench.dims, "Comma-separated dimensions");
  breakdown_cmd->add_option("--k,--directions", bench.directions, "Comma-separated direction counts");
  auto* grid_cmd = bench_cmd->add_subcommand("grid", "Runtime over a (d, k) grid");
  add_bench_common(grid_cmd);
  grid_cmd->add_option("--n", bench.n)->check(CLI::PositiveNumber);
  grid_cmd->add_option("--dims", bench.dims, "Comma-separated dimensions");
  grid_cmd->add_option("--directions", bench.directions, "Comma-separated direction counts");

  StudyFlags st;
  auto* study_cmd = app.add_subcommand("study", "Convergence and rank-correlation studies");
  study_cmd->require_subcommand(1);
  auto add_study_common = [&st](CLI::App* cmd) {
    cmd->add_option("--config", st.config);
    cmd->add_option("--out", st.out_dir, "Output directory");
    cmd->add_option("--notion", st.notion);
    cmd->add_option("--dist", st.dist)->check(CLI::IsMember({"gaussian", "normal", "t", "student_t", "exponential"}));
    cmd->add_option("--nu", st.nu);
    cmd->add_option("--n", st.n)->check(CLI::PositiveNumber);
    cmd->add_option("--queries", st.queries)->check(CLI::PositiveNumber);
    cmd->add_option("--workers", st.workers)->check(CLI::PositiveNumber);
    cmd->add_option("--seed", st.seed);
    cmd->add_flag("--full", st.full, "Full-size grids");
  };
  auto* converge_cmd = study_cmd->add_subcommand("converge", "MSE against a high-budget reference");
  auto* frontier_cmd = study_cmd->add_subcommand("frontier", "Minimal refinements for convergence");
  for (CLI::App* cmd : {converge_cmd, frontier_cmd}) {
    add_study_common(cmd);
    cmd->add_option("--alphas", st.alphas);
    cmd->add_option("--refinements", st.refinements);
    cmd->add_option("--directions", st.directions);
    cmd->add_option("--dims", st.dims);
    cmd->add_option("--ref-k", st.k, "Reference directions");
    cmd->add_option("--ref-r", st.r, "Reference refinements");
    cmd->add_option("--ref-alpha", st.alpha, "Reference shrink factor");
  }
  frontier_cmd->add_option("--tol", st.tol, "Convergence tolerance on squared error");
  auto* rank_cmd = study_cmd->add_subcommand("rank", "Rank correlation against the true density");
  add_study_common(rank_cmd);
  rank_cmd->add_option("--d", st.dims, "Comma-separated dimensions");
  rank_cmd->add_option("--k", st.k)->check(CLI::PositiveNumber);
  rank_cmd->add_option("--r", st.r)->check(CLI::PositiveNumber);
  rank_cmd->add_option("--alpha", st.alpha);

  FitFlags fit;
  auto* fit_cmd = app.add_subcommand("fit-model", "Fit the cost model to benchmark profiles");
  fit_cmd->add_option("--profiles", fit.profiles, "breakdown.csv from bench breakdown");
  fit_cmd->add_flag("--predict", fit.predict, "Evaluate speedup curves");
  fit_cmd->add_option("--constants", fit.constants, "c_const,c_rv,c_proj,c_depth (overrides the fit)");
  fit_cmd->add_option("--g", fit.g_list, "Comma-separated worker counts");
  fit_cmd->add_option("--lambda", fit.lambda);
  fit_cmd->add_option("--d", fit.d)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--d-chunk", fit.d_chunk)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--n", fit.n)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--k", fit.k)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--r", fit.r)->check(CLI::PositiveNumber);

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic dataset");
  gen_cmd->add_option("--dist", gen.dist)->check(CLI::IsMember({"gaussian", "normal", "t", "student_t", "exponential"}));
  gen_cmd->add_option("--d", gen.d)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--n", gen.n)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--nu", gen.nu);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--workers", gen.workers)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out", gen.out, "Output file (.csv, .dfmx or .bin)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (depth_cmd->parsed()) {
      if (!depth.query_file && !depth.query_inline) {
        std::cerr << "error: depth needs --query or --query-inline\n";
        return kUsage;
      }
      return run_depth(depth);
    }
    if (breakdown_cmd->parsed()) return run_bench_breakdown(bench);
    if (grid_cmd->parsed()) return run_bench_grid(bench);
    if (converge_cmd->parsed()) return run_study_convergence(st, false);
    if (frontier_cmd->parsed()) return run_study_convergence(st, true);
    if (rank_cmd->parsed()) return run_study_rank(st);
    if (fit_cmd->parsed()) return run_fit(fit);
    if (gen_cmd->parsed()) return run_gen(gen);
  } catch (const OutputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUnwritable;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
