#include "roadtrack/evaluation/hota.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "roadtrack/core/hungarian.hpp"
#include "roadtrack/tracking/iou.hpp"

namespace roadtrack::evaluation {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Dense relabelling of object ids in order of first appearance.
struct IdIndex {
  std::map<ObjectId, int> index;
  int get(ObjectId id) {
    const auto [it, inserted] = index.emplace(id, static_cast<int>(index.size()));
    return it->second;
  }
};

}  // namespace

HotaResult hota(const AlignedSequence& seq, std::span<const double> thresholds) {
  HotaResult r;
  r.alphas.assign(thresholds.begin(), thresholds.end());
  const std::size_t na = r.alphas.size();
  r.tp.assign(na, 0);
  r.fn.assign(na, 0);
  r.fp.assign(na, 0);
  r.loc_a.assign(na, 0.0);

  IdIndex gt_ix, pr_ix;
  std::vector<std::vector<int>> gt_rows(seq.size()), pr_cols(seq.size());
  std::vector<Eigen::MatrixXd> sims(seq.size());
  for (std::size_t k = 0; k < seq.size(); ++k) {
    for (ObjectId id : seq[k].gt_ids) gt_rows[k].push_back(gt_ix.get(id));
    for (ObjectId id : seq[k].pred_ids) pr_cols[k].push_back(pr_ix.get(id));
    sims[k] = tracking::iou_matrix(seq[k].gt, seq[k].pred);
  }
  const int ng = static_cast<int>(gt_ix.index.size());
  const int np = static_cast<int>(pr_ix.index.size());

  Eigen::MatrixXd potential = Eigen::MatrixXd::Zero(ng, np);
  Eigen::VectorXd gt_count = Eigen::VectorXd::Zero(ng);
  Eigen::VectorXd pr_count = Eigen::VectorXd::Zero(np);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const Eigen::MatrixXd& s = sims[k];
    const Eigen::VectorXd row_sum = s.rowwise().sum();
    const Eigen::RowVectorXd col_sum = s.colwise().sum();
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      for (Eigen::Index j = 0; j < s.cols(); ++j) {
        const double denom = col_sum(j) + row_sum(i) - s(i, j);
        if (denom > kEps) potential(gt_rows[k][i], pr_cols[k][j]) += s(i, j) / denom;
      }
    }
    for (int g : gt_rows[k]) gt_count(g) += 1.0;
    for (int p : pr_cols[k]) pr_count(p) += 1.0;
  }
  Eigen::MatrixXd alignment(ng, np);
  for (int g = 0; g < ng; ++g) {
    for (int p = 0; p < np; ++p) {
      alignment(g, p) = potential(g, p) / (gt_count(g) + pr_count(p) - potential(g, p));
    }
  }

  std::vector<Eigen::MatrixXd> match_counts(na, Eigen::MatrixXd::Zero(ng, np));
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const long n_gt = static_cast<long>(gt_rows[k].size());
    const long n_pr = static_cast<long>(pr_cols[k].size());
    if (n_gt == 0 || n_pr == 0) {
      for (std::size_t a = 0; a < na; ++a) {
        r.fn[a] += n_gt;
        r.fp[a] += n_pr;
      }
      continue;
    }
    const Eigen::MatrixXd& s = sims[k];
    Eigen::MatrixXd cost(n_gt, n_pr);
    for (long i = 0; i < n_gt; ++i) {
      for (long j = 0; j < n_pr; ++j) cost(i, j) = -alignment(gt_rows[k][i], pr_cols[k][j]) * s(i, j);
    }
    const std::vector<int> assign = solve_assignment(cost);
    for (std::size_t a = 0; a < na; ++a) {
      long matched = 0;
      for (long i = 0; i < n_gt; ++i) {
        const int j = assign[i];
        if (j < 0 || !(s(i, j) >= r.alphas[a] - kEps)) continue;
        ++matched;
        r.loc_a[a] += s(i, j);
        match_counts[a](gt_rows[k][i], pr_cols[k][j]) += 1.0;
      }
      r.tp[a] += matched;
      r.fn[a] += n_gt - matched;
      r.fp[a] += n_pr - matched;
    }
  }

  for (std::size_t a = 0; a < na; ++a) {
    const Eigen::MatrixXd& mc = match_counts[a];
    double ass_sum = 0.0;
    for (int g = 0; g < ng; ++g) {
      for (int p = 0; p < np; ++p) {
        const double m = mc(g, p);
        if (m == 0.0) continue;
        ass_sum += m * (m / std::max(1.0, gt_count(g) + pr_count(p) - m));
      }
    }
    const double tp = static_cast<double>(r.tp[a]);
    const double ass = ass_sum / std::max(1.0, tp);
    const double det = tp / std::max(1.0, tp + static_cast<double>(r.fn[a] + r.fp[a]));
    r.ass_a.push_back(ass);
    r.det_a.push_back(det);
    r.hota.push_back(std::sqrt(det * ass));
    r.loc_a[a] = std::max(kEps, r.loc_a[a]) / std::max(kEps, tp);
  }
  auto mean = [na](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return na > 0 ? s / static_cast<double>(na) : 0.0;
  };
  r.hota_mean = mean(r.hota);
  r.det_a_mean = mean(r.det_a);
  r.ass_a_mean = mean(r.ass_a);
  r.loc_a_mean = mean(r.loc_a);
  return r;
}

}  // namespace roadtrack::evaluation
