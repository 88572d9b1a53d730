#include "depthforge/study/convergence.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <string>
#include <tuple>

#include "depthforge/depth_optimizer.hpp"
#include "depthforge/error.hpp"
#include "depthforge/io/csv.hpp"
#include "depthforge/parallel.hpp"
#include "depthforge/rng.hpp"

namespace depthforge::study {

namespace {

struct CellSpec {
  double alpha;
  std::size_t r;
  std::size_t k;
  bool reference;
};

RrsConfig search_config(double alpha, std::size_t r, std::size_t k, DepthNotion notion) {
  RrsConfig cfg;
  cfg.shrink = alpha;
  cfg.refinements = r;
  cfg.total_directions = k;
  cfg.notion = notion;
  cfg.parallel.workers = 1;
  return cfg;
}

}  // namespace

void validate(const StudyGrid& grid) {
  require(!grid.alphas.empty(), ErrorKind::invalid_argument, "grid axis 'alphas' is empty");
  for (double a : grid.alphas)
    require(a > 0.0 && a < 1.0, ErrorKind::invalid_argument, "grid axis 'alphas' has a value outside (0, 1)");
  require(!grid.refinement_counts.empty(), ErrorKind::invalid_argument, "grid axis 'refinements' is empty");
  require(!grid.direction_counts.empty(), ErrorKind::invalid_argument, "grid axis 'directions' is empty");
  for (std::size_t r : grid.refinement_counts)
    require(r >= 1, ErrorKind::invalid_argument, "grid axis 'refinements' has a zero entry");
  const std::size_t max_r = *std::max_element(grid.refinement_counts.begin(), grid.refinement_counts.end());
  for (std::size_t k : grid.direction_counts) {
    require(k >= max_r, ErrorKind::invalid_argument,
            "grid axis 'directions': " + std::to_string(k) + " is below the largest refinement count " +
                std::to_string(max_r));
    require(k < grid.reference.k, ErrorKind::invalid_argument,
            "grid axis 'directions': " + std::to_string(k) + " does not stay below the reference budget " +
                std::to_string(grid.reference.k));
  }
  for (std::size_t d : grid.dims) require(d >= 1, ErrorKind::invalid_argument, "grid axis 'dims' has a zero entry");
  require(grid.query_count >= 1, ErrorKind::invalid_argument, "grid axis 'queries' must be at least 1");
  require(grid.reference.repeats >= 1, ErrorKind::invalid_argument, "reference 'repeats' must be at least 1");
  require(grid.reference.r >= 1 && grid.reference.k >= grid.reference.r, ErrorKind::invalid_argument,
          "reference budget needs k >= r >= 1");
  require(grid.reference.alpha > 0.0 && grid.reference.alpha < 1.0, ErrorKind::invalid_argument,
          "reference 'alpha' must lie in (0, 1)");
}

std::uint64_t query_seed(std::uint64_t base, std::size_t point, std::size_t repeat) {
  return mix_seed(mix_seed(base) ^ (static_cast<std::uint64_t>(point) << 24) ^ static_cast<std::uint64_t>(repeat));
}

ConvergenceTable convergence_study(const StudyGrid& grid, DepthNotion notion, const Dataset& data,
                                   const Matrix& queries, std::size_t workers) {
  validate(grid);
  require(queries.cols() == data.dim(), ErrorKind::dimension_mismatch, "queries do not match the data dimension");
  const std::size_t points = queries.rows();
  const std::size_t repeats = grid.reference.repeats;
  const DepthSearch search(data);

  // Reference runs.
  std::vector<double> runs(points * repeats);
  const RrsConfig ref_cfg = search_config(grid.reference.alpha, grid.reference.r, grid.reference.k, notion);
  parallel_for(points * repeats, workers, 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t job = begin; job < end; ++job) {
      RrsConfig cfg = ref_cfg;
      cfg.seed = query_seed(grid.seed, job / repeats, job % repeats);
      runs[job] = search.run(queries.row(job / repeats), cfg).depth;
    }
  });
  ConvergenceTable table;
  table.reference_depths.resize(points);
  for (std::size_t p = 0; p < points; ++p)
    table.reference_depths[p] = *std::min_element(runs.begin() + static_cast<std::ptrdiff_t>(p * repeats),
                                                   runs.begin() + static_cast<std::ptrdiff_t>((p + 1) * repeats));

  std::vector<CellSpec> specs;
  for (double alpha : grid.alphas)
    for (std::size_t r : grid.refinement_counts)
      for (std::size_t k : grid.direction_counts) specs.push_back({alpha, r, k, false});
  if (grid.verify_reference) specs.push_back({grid.reference.alpha, grid.reference.r, grid.reference.k, true});

  std::vector<double> depths(specs.size() * points);
  parallel_for(specs.size() * points, workers, 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t job = begin; job < end; ++job) {
      const CellSpec& s = specs[job / points];
      const std::size_t p = job % points;
      RrsConfig cfg = search_config(s.alpha, s.r, s.k, notion);
      if (!s.reference) {
        cfg.seed = query_seed(grid.seed, p, 0);
        depths[job] = search.run(queries.row(p), cfg).depth;
        continue;
      }
      double best = 1.0;
      for (std::size_t rep = 0; rep < repeats; ++rep) {
        cfg.seed = query_seed(grid.seed, p, rep);
        best = std::min(best, search.run(queries.row(p), cfg).depth);
      }
      depths[job] = best;
    }
  });

  for (std::size_t c = 0; c < specs.size(); ++c) {
    ConvergenceCell cell{specs[c].alpha, specs[c].r, specs[c].k, data.dim(), specs[c].reference, {}, 0.0};
    for (std::size_t p = 0; p < points; ++p) {
      const double e = depths[c * points + p] - table.reference_depths[p];
      cell.squared_errors.push_back(e * e);
      cell.mse += e * e;
    }
    cell.mse /= static_cast<double>(points);
    table.cells.push_back(std::move(cell));
  }
  return table;
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table) {
  io::CsvWriter csv(out, {"alpha", "r", "k", "d", "point_id", "mse", "cell"});
  for (const ConvergenceCell& c : table.cells) {
    const char* kind = c.reference ? "reference" : "grid";
    for (std::size_t p = 0; p < c.squared_errors.size(); ++p) {
      csv.cell(c.alpha).cell(c.r).cell(c.k).cell(c.d).cell(p).cell(c.squared_errors[p]).cell(kind);
      csv.end_row();
    }
    csv.cell(c.alpha).cell(c.r).cell(c.k).cell(c.d).cell("mean").cell(c.mse).cell(kind);
    csv.end_row();
  }
}

std::vector<FrontierRow> convergence_frontier(const ConvergenceTable& table, double tol) {
  std::map<std::tuple<std::size_t, std::size_t, double>, std::vector<const ConvergenceCell*>> groups;
  for (const ConvergenceCell& c : table.cells)
    if (!c.reference) groups[{c.d, c.k, c.alpha}].push_back(&c);

  std::vector<FrontierRow> rows;
  for (auto& [key, cells] : groups) {
    std::sort(cells.begin(), cells.end(), [](const ConvergenceCell* a, const ConvergenceCell* b) { return a->r < b->r; });
    FrontierRow row{std::get<0>(key), std::get<1>(key), std::get<2>(key), std::nullopt, false, std::nullopt, 0};
    for (const ConvergenceCell* c : cells) {
      if (std::all_of(c->squared_errors.begin(), c->squared_errors.end(), [tol](double e) { return e <= tol; })) {
        row.min_r = c->r;
        row.all_converged = true;
        break;
      }
    }
    const std::size_t points = cells.front()->squared_errors.size();
    double sum = 0.0;
    for (std::size_t p = 0; p < points; ++p) {
      for (const ConvergenceCell* c : cells) {
        if (c->squared_errors[p] <= tol) {
          sum += static_cast<double>(c->r);
          ++row.converged_points;
          break;
        }
      }
    }
    if (row.converged_points > 0) row.mean_point_min_r = sum / static_cast<double>(row.converged_points);
    rows.push_back(row);
  }
  return rows;
}

void write_frontier_csv(std::ostream& out, const std::vector<FrontierRow>& rows) {
  io::CsvWriter csv(out, {"d", "k", "alpha", "min_r", "all_converged", "mean_point_min_r", "converged_points"});
  for (const FrontierRow& r : rows) {
    csv.cell(r.d).cell(r.k).cell(r.alpha);
    if (r.min_r) {
      csv.cell(*r.min_r);
    } else {
      csv.cell("none");
    }
    csv.cell(r.all_converged ? "true" : "false");
    if (r.mean_point_min_r) {
      csv.cell(*r.mean_point_min_r);
    } else {
      csv.cell("none");
    }
    csv.cell(r.converged_points);
    csv.end_row();
  }
}

}  // namespace depthforge::study
