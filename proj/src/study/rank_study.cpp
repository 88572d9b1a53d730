#include "depthforge/study/rank_study.hpp"

#include <ostream>

#include "depthforge/error.hpp"
#include "depthforge/io/csv.hpp"
#include "depthforge/study/correlation.hpp"

namespace depthforge::study {

const RankCorrelation& RankStudyResult::find(const std::string& left, const std::string& right) const {
  for (const RankCorrelation& r : rows)
    if ((r.left == left && r.right == right) || (r.left == right && r.right == left)) return r;
  fail(ErrorKind::invalid_argument, "no correlation row for " + left + " x " + right);
}

std::string notion_label(DepthNotion notion) {
  switch (notion) {
    case DepthNotion::halfspace:
      return "D_H";
    case DepthNotion::projection:
      return "D_P";
    case DepthNotion::asym_projection:
      return "D_AP";
  }
  return "D_?";
}

RankStudyResult rank_study(const RankStudySpec& spec, const std::vector<DepthNotion>& notions, const RrsConfig& cfg) {
  require(spec.dist != Distribution::exponential, ErrorKind::invalid_argument,
          "rank study needs an elliptical law (gaussian or student_t)");
  const std::size_t workers = cfg.parallel.workers;
  const Dataset data = generate(spec.dist, {spec.dim, spec.n, spec.seed}, spec.nu, workers);
  const Matrix queries = select_queries(data, spec.query_count, spec.seed);

  // Density decreases with the quadratic form, so its negated rank orders
  // queries from least to most central like a depth does.
  const LocationScatter law(std::vector<double>(spec.dim, 0.0), toeplitz_scatter(spec.dim));
  const std::vector<double> density_rank = true_density_rank(law, queries);
  std::vector<std::string> labels{"PDF"};
  std::vector<std::vector<double>> scores;
  scores.emplace_back();
  for (double r : density_rank) scores.back().push_back(-r);

  for (DepthNotion notion : notions) {
    RrsConfig c = cfg;
    c.notion = notion;
    const auto results = depth_batch(queries, data, c);
    labels.push_back(notion_label(notion));
    scores.emplace_back();
    for (const DepthResult& r : results) scores.back().push_back(r.depth);
  }
  const LocationScatter mle = estimate_mle(data);
  labels.push_back("D_M");
  scores.emplace_back();
  for (std::size_t i = 0; i < queries.rows(); ++i) scores.back().push_back(mahalanobis_depth(queries.row(i), mle));

  RankStudyResult result{spec.dist, spec.nu, spec.dim, spec.query_count, {}};
  for (std::size_t a = 0; a < labels.size(); ++a)
    for (std::size_t b = a + 1; b < labels.size(); ++b)
      result.rows.push_back(
          RankCorrelation{labels[a], labels[b], spearman_rho(scores[a], scores[b]), kendall_tau(scores[a], scores[b])});
  return result;
}

void write_rank_csv(std::ostream& out, const std::vector<RankStudyResult>& results) {
  io::CsvWriter csv(out, {"dist", "nu", "d", "queries", "left", "right", "spearman", "kendall"});
  for (const RankStudyResult& res : results) {
    for (const RankCorrelation& r : res.rows) {
      csv.cell(distribution_name(res.dist));
      if (res.dist == Distribution::student_t) {
        csv.cell(res.nu);
      } else {
        csv.cell("inf");
      }
      csv.cell(res.dim).cell(res.query_count).cell(r.left).cell(r.right).cell(r.spearman).cell(r.kendall);
      csv.end_row();
    }
  }
}

}  // namespace depthforge::study
