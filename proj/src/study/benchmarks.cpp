#include "depthforge/study/benchmarks.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <ostream>
#include <string>

#include "depthforge/depth_optimizer.hpp"
#include "depthforge/error.hpp"
#include "depthforge/io/csv.hpp"
#include "depthforge/study/generators.hpp"

namespace depthforge::study {

namespace {

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double upper = v[mid];
  return (*std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)) + upper) / 2.0;
}

// One benchmark cell: its dataset, search and configuration.
class Cell {
 public:
  Cell(const Workload& w, const BenchOptions& opt)
      : data_(gen_toeplitz_gaussian({w.d, w.n, opt.seed}, opt.workers)),
        probe_(gen_toeplitz_gaussian({w.d, 1, opt.seed + 1})),
        search_(data_),
        path_(opt.path) {
    cfg_.total_directions = w.k;
    cfg_.refinements = w.r;
    cfg_.shrink = opt.shrink;
    cfg_.notion = opt.notion;
    cfg_.seed = opt.seed;
    cfg_.parallel.workers = opt.workers;
    cfg_.parallel.d_chunk = opt.d_chunk;
  }

  PhaseTimes once() const {
    PhaseTimes t;
    if (path_ == ExecPath::sequential) {
      (void)search_.run_sequential(probe_.row(0), cfg_, &t);
    } else {
      (void)search_.run(probe_.row(0), cfg_, &t);
    }
    return t;
  }

 private:
  Dataset data_;
  Dataset probe_;
  DepthSearch search_;  // refers to data_; cells are never moved
  RrsConfig cfg_;
  ExecPath path_;
};

// Repeats go round-robin over the cells, so slow drift in machine speed
// spreads evenly instead of biasing whichever cells ran last. Each cell gets
// one discarded warm-up run first.
std::vector<PhaseTimes> time_cells(const std::vector<Workload>& workloads, const BenchOptions& opt) {
  std::vector<std::unique_ptr<Cell>> cells;
  for (const Workload& w : workloads) cells.push_back(std::make_unique<Cell>(w, opt));
  for (const auto& c : cells) (void)c->once();

  const std::size_t repeats = std::max<std::size_t>(1, opt.repeats);
  std::vector<std::array<std::vector<double>, 4>> samples(cells.size());
  for (std::size_t rep = 0; rep < repeats; ++rep) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const PhaseTimes t = cells[i]->once();
      samples[i][0].push_back(t.generation);
      samples[i][1].push_back(t.projection);
      samples[i][2].push_back(t.univariate);
      samples[i][3].push_back(t.total);
    }
  }
  std::vector<PhaseTimes> out;
  for (const auto& s : samples) out.push_back({median_of(s[0]), median_of(s[1]), median_of(s[2]), median_of(s[3])});
  return out;
}

}  // namespace

std::vector<TimingProfile> breakdown_bench(const std::vector<Workload>& workloads, const BenchOptions& opt) {
  require(opt.repeats >= 1, ErrorKind::invalid_argument, "repeats must be at least 1");
  std::vector<Workload> cells;
  for (Workload w : workloads) {
    validate(w);
    w.g = opt.path == ExecPath::sequential ? 1 : opt.workers;
    w.d_chunk = opt.d_chunk;
    cells.push_back(w);
  }
  const std::vector<PhaseTimes> times = time_cells(cells, opt);
  std::vector<TimingProfile> profiles;
  for (std::size_t i = 0; i < cells.size(); ++i) profiles.push_back(TimingProfile{cells[i], times[i], opt.path});
  return profiles;
}

void write_breakdown_csv(std::ostream& out, const std::vector<TimingProfile>& profiles) {
  io::CsvWriter csv(out, {"n", "d", "k", "r", "g", "d_chunk", "lambda", "path", "phase", "seconds", "fraction",
                          "total_seconds"});
  for (const TimingProfile& p : profiles) {
    const double phases[3] = {p.phases.generation, p.phases.projection, p.phases.univariate};
    const char* names[3] = {"generation", "projection", "univariate"};
    for (int k = 0; k < 3; ++k) {
      const Workload& w = p.workload;
      csv.cell(w.n).cell(w.d).cell(w.k).cell(w.r).cell(w.g).cell(w.d_chunk).cell(w.lambda);
      csv.cell(path_name(p.path)).cell(names[k]).cell(phases[k]);
      csv.cell(p.phases.total > 0.0 ? phases[k] / p.phases.total : 0.0).cell(p.phases.total);
      csv.end_row();
    }
  }
}

std::vector<TimingProfile> read_breakdown_csv(const std::string& path) {
  const io::CsvTable table = io::CsvTable::read(path);
  const std::size_t c_n = table.column("n");
  const std::size_t c_d = table.column("d");
  const std::size_t c_k = table.column("k");
  const std::size_t c_r = table.column("r");
  const std::size_t c_path = table.column("path");
  const std::size_t c_phase = table.column("phase");
  const std::size_t c_sec = table.column("seconds");
  const std::size_t c_total = table.column("total_seconds");
  auto integer = [&](std::size_t row, std::size_t col) {
    const double v = table.number(row, col);
    require(v >= 1 && v == static_cast<double>(static_cast<std::size_t>(v)), ErrorKind::malformed_data,
            path + ": data row " + std::to_string(row + 1) + ", column '" + table.header()[col] +
                "' must be a positive integer");
    return static_cast<std::size_t>(v);
  };

  std::vector<TimingProfile> profiles;
  bool seen[3] = {true, true, true};
  for (std::size_t row = 0; row < table.rows(); ++row) {
    Workload w;
    w.n = integer(row, c_n);
    w.d = integer(row, c_d);
    w.k = integer(row, c_k);
    w.r = integer(row, c_r);
    if (table.has_column("g")) w.g = integer(row, table.column("g"));
    if (table.has_column("d_chunk")) w.d_chunk = integer(row, table.column("d_chunk"));
    if (table.has_column("lambda")) w.lambda = table.number(row, table.column("lambda"));
    const ExecPath p = parse_path(table.text(row, c_path));
    const double total = table.number(row, c_total);
    const std::string& phase = table.text(row, c_phase);
    int slot = -1;
    if (phase == "generation") slot = 0;
    if (phase == "projection") slot = 1;
    if (phase == "univariate") slot = 2;
    require(slot >= 0, ErrorKind::malformed_data,
            path + ": data row " + std::to_string(row + 1) + " has unknown phase '" + phase + "'");

    const bool same = !profiles.empty() && !seen[slot] && profiles.back().path == p &&
                      profiles.back().phases.total == total && profiles.back().workload.n == w.n &&
                      profiles.back().workload.d == w.d && profiles.back().workload.k == w.k &&
                      profiles.back().workload.r == w.r;
    if (!same) {
      require(profiles.empty() || (seen[0] && seen[1] && seen[2]), ErrorKind::malformed_data,
              path + ": profile ending before data row " + std::to_string(row + 1) + " lacks a phase");
      profiles.push_back(TimingProfile{w, PhaseTimes{}, p});
      profiles.back().phases.total = total;
      seen[0] = seen[1] = seen[2] = false;
    }
    const double seconds = table.number(row, c_sec);
    double* target[3] = {&profiles.back().phases.generation, &profiles.back().phases.projection,
                         &profiles.back().phases.univariate};
    *target[slot] = seconds;
    seen[slot] = true;
  }
  require(!profiles.empty() && seen[0] && seen[1] && seen[2], ErrorKind::malformed_data,
          path + ": no complete profile (each needs generation, projection and univariate rows)");
  return profiles;
}

std::vector<RuntimeCell> runtime_grid(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& directions,
                                      std::size_t n, std::size_t r, const BenchOptions& opt) {
  require(!dims.empty(), ErrorKind::invalid_argument, "grid axis 'dims' is empty");
  require(!directions.empty(), ErrorKind::invalid_argument, "grid axis 'directions' is empty");
  std::vector<Workload> workloads;
  for (std::size_t d : dims) {
    for (std::size_t k : directions) {
      Workload w;
      w.n = n;
      w.d = d;
      w.k = k;
      w.r = r;
      validate(w);
      require(k >= r, ErrorKind::invalid_argument,
              "grid axis 'directions': " + std::to_string(k) + " is below r = " + std::to_string(r));
      workloads.push_back(w);
    }
  }
  const std::vector<PhaseTimes> times = time_cells(workloads, opt);
  std::vector<RuntimeCell> cells;
  for (std::size_t i = 0; i < workloads.size(); ++i)
    cells.push_back(RuntimeCell{workloads[i].d, workloads[i].k, n, r, times[i].total});
  return cells;
}

void write_runtime_csv(std::ostream& out, const std::vector<RuntimeCell>& cells, const BenchOptions& opt) {
  io::CsvWriter csv(out, {"d", "k", "n", "r", "notion", "path", "seconds"});
  for (const RuntimeCell& c : cells) {
    csv.cell(c.d).cell(c.k).cell(c.n).cell(c.r).cell(notion_name(opt.notion)).cell(path_name(opt.path)).cell(c.seconds);
    csv.end_row();
  }
}

}  // namespace depthforge::study
