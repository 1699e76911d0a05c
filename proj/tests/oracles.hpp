#pragma once

// Slow, direct reference implementations of the evaluation metrics, written
// from the metric definitions with no shared code beyond the data types.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "roadtrack/core/rng.hpp"
#include "roadtrack/evaluation/alignment.hpp"
#include "roadtrack/evaluation/average_precision.hpp"
#include "roadtrack/evaluation/dimension_stats.hpp"

namespace roadtrack::testing {

using evaluation::AlignedFrame;
using evaluation::AlignedSequence;

// Number of 0.01 ft cell centres of the grid k * 0.01 + 0.005 inside [lo, hi).
inline long long raster_cells(double lo, double hi) {
  const double step = 0.01;
  const long long a = static_cast<long long>(std::ceil(lo / step - 0.5));
  const long long b = static_cast<long long>(std::ceil(hi / step - 0.5));
  return std::max(0LL, b - a);
}

// Rasterized footprint IOU. Axis-aligned rectangles rasterize separably, so
// the cell count of a rectangle is the product of its per-axis counts.
inline double raster_iou(const Box3D& a, const Box3D& b) {
  const auto fa = footprint(a), fb = footprint(b);
  const long long na = raster_cells(fa.x0, fa.x1) * raster_cells(fa.y0, fa.y1);
  const long long nb = raster_cells(fb.x0, fb.x1) * raster_cells(fb.y0, fb.y1);
  const long long ni =
      raster_cells(std::max(fa.x0, fb.x0), std::min(fa.x1, fb.x1)) * raster_cells(std::max(fa.y0, fb.y0), std::min(fa.y1, fb.y1));
  const long long nu = na + nb - ni;
  return nu > 0 ? static_cast<double>(ni) / static_cast<double>(nu) : 0.0;
}

inline double oracle_iou(const Box3D& a, const Box3D& b) {
  auto span_x = [](const Box3D& q) {
    return q.direction == Direction::kEB ? std::pair{q.x, q.x + q.l} : std::pair{q.x - q.l, q.x};
  };
  const auto [ax0, ax1] = span_x(a);
  const auto [bx0, bx1] = span_x(b);
  const double iw = std::max(0.0, std::min(ax1, bx1) - std::max(ax0, bx0));
  const double ih = std::max(0.0, std::min(a.y + a.w / 2, b.y + b.w / 2) - std::max(a.y - a.w / 2, b.y - b.w / 2));
  const double inter = iw * ih;
  const double uni = a.l * a.w + b.l * b.w - inter;
  return uni > 0 ? inter / uni : 0.0;
}

/// Every partial one-to-one matching between n rows and m columns.
inline void for_each_matching(int n, int m, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> assign(n, -1);
  std::vector<bool> used(m, false);
  std::function<void(int)> go = [&](int r) {
    if (r == n) {
      fn(assign);
      return;
    }
    assign[r] = -1;
    go(r + 1);
    for (int c = 0; c < m; ++c) {
      if (used[c]) continue;
      used[c] = true;
      assign[r] = c;
      go(r + 1);
      used[c] = false;
      assign[r] = -1;
    }
  };
  go(0);
}

/// Small random tracking instance: up to `max_objects` GT and predicted
/// objects over up to `max_frames` frames, with predictions that follow GT
/// objects, drift, swap and appear spuriously.
inline AlignedSequence random_instance(Rng& rng, int max_objects = 3, int max_frames = 6) {
  const int frames = rng.uniform_int(1, max_frames);
  const int n_gt = rng.uniform_int(0, max_objects);
  const int n_pr = rng.uniform_int(0, max_objects);
  std::vector<double> gx(n_gt), gy(n_gt);
  for (int i = 0; i < n_gt; ++i) gx[i] = rng.uniform(0, 30), gy[i] = rng.uniform(2, 8);
  std::vector<int> follows(n_pr);
  for (int j = 0; j < n_pr; ++j) follows[j] = n_gt > 0 ? rng.uniform_int(-1, n_gt - 1) : -1;
  std::vector<double> px(n_pr), py(n_pr);
  for (int j = 0; j < n_pr; ++j) px[j] = rng.uniform(0, 30), py[j] = rng.uniform(2, 8);
  AlignedSequence seq;
  for (int k = 0; k < frames; ++k) {
    AlignedFrame f;
    f.t = k / 30.0;
    for (int i = 0; i < n_gt; ++i) {
      gx[i] += rng.uniform(0.0, 3.0);
      if (!rng.bernoulli(0.8)) continue;
      f.gt_ids.push_back(i + 1);
      f.gt.push_back({gx[i], gy[i], 10.0, 6.0, 5.0, Direction::kEB, VehicleClass::kSedan});
    }
    if (n_pr > 1 && rng.bernoulli(0.15)) std::swap(follows[0], follows[1]);
    for (int j = 0; j < n_pr; ++j) {
      if (!rng.bernoulli(0.8)) continue;
      double x = px[j] += rng.uniform(0.0, 3.0), y = py[j];
      if (follows[j] >= 0) x = gx[follows[j]] + rng.normal(0.0, 2.5), y = gy[follows[j]] + rng.normal(0.0, 0.7);
      f.pred_ids.push_back(100 + j);
      f.pred.push_back({x, y, rng.uniform(8.0, 12.0), rng.uniform(5.0, 7.0), 5.0, Direction::kEB,
                        VehicleClass::kSedan});
    }
    seq.push_back(std::move(f));
  }
  return seq;
}

struct OracleClearMot {
  long tp = 0, fp = 0, fn = 0, sw = 0, gt_dets = 0;
  int mt = 0, pt = 0, ml = 0, gt_objects = 0, pred_objects = 0, gt_matched = 0, pred_matched = 0;
  double iou_sum = 0.0;
  double mota = 0.0, motp = 0.0, recall = 0.0, precision = 0.0;
};

/// CLEAR-MOT by enumeration: the previous frame's pairs are kept while their
/// IOU clears the threshold, and the rest of the frame takes whichever
/// matching of the remaining objects has the largest total IOU.
inline OracleClearMot brute_clearmot(const AlignedSequence& seq, double threshold) {
  OracleClearMot r;
  std::map<ObjectId, ObjectId> prev_frame, last_ever;
  std::map<ObjectId, int> present, hits;
  std::set<ObjectId> preds, preds_matched;
  for (const auto& f : seq) {
    const int n = static_cast<int>(f.gt.size()), m = static_cast<int>(f.pred.size());
    std::vector<int> keep(n, -1);
    std::vector<bool> taken(m, false);
    for (int i = 0; i < n; ++i) {
      auto it = prev_frame.find(f.gt_ids[i]);
      if (it == prev_frame.end()) continue;
      for (int j = 0; j < m; ++j)
        if (f.pred_ids[j] == it->second && oracle_iou(f.gt[i], f.pred[j]) >= threshold) keep[i] = j, taken[j] = true;
    }
    std::vector<int> best = keep;
    double best_total = -1.0;
    for_each_matching(n, m, [&](const std::vector<int>& a) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        if (keep[i] >= 0) {
          if (a[i] != keep[i]) return;
          continue;
        }
        if (a[i] < 0) continue;
        if (taken[a[i]]) return;
        const double v = oracle_iou(f.gt[i], f.pred[a[i]]);
        if (v < threshold) return;
        total += v;
      }
      if (total > best_total) best_total = total, best = a;
    });
    prev_frame.clear();
    for (int i = 0; i < n; ++i) {
      ++present[f.gt_ids[i]];
      ++r.gt_dets;
      if (best[i] < 0) {
        ++r.fn;
        continue;
      }
      const ObjectId g = f.gt_ids[i], p = f.pred_ids[best[i]];
      ++r.tp;
      ++hits[g];
      r.iou_sum += oracle_iou(f.gt[i], f.pred[best[i]]);
      if (last_ever.count(g) && last_ever[g] != p) ++r.sw;
      last_ever[g] = p;
      prev_frame[g] = p;
      preds_matched.insert(p);
    }
    for (int j = 0; j < m; ++j) preds.insert(f.pred_ids[j]);
    r.fp += m - static_cast<long>(prev_frame.size());
  }
  for (const auto& [g, n] : present) {
    const double ratio = static_cast<double>(hits[g]) / n;
    if (hits[g] > 0) ++r.gt_matched;
    if (ratio >= 0.8) ++r.mt;
    else if (ratio <= 0.2) ++r.ml;
    else ++r.pt;
  }
  r.gt_objects = static_cast<int>(present.size());
  r.pred_objects = static_cast<int>(preds.size());
  r.pred_matched = static_cast<int>(preds_matched.size());
  if (r.gt_dets > 0) r.mota = 100.0 * (1.0 - static_cast<double>(r.fn + r.fp + r.sw) / r.gt_dets);
  if (r.tp > 0) r.motp = 100.0 * r.iou_sum / r.tp;
  if (r.tp + r.fn > 0) r.recall = 100.0 * r.tp / (r.tp + r.fn);
  if (r.tp + r.fp > 0) r.precision = 100.0 * r.tp / (r.tp + r.fp);
  return r;
}

struct OracleHota {
  double hota = 0.0, det_a = 0.0, ass_a = 0.0;
  long tp = 0, fn = 0, fp = 0;
};

/// HOTA at one threshold straight from its definition. Frame matchings are
/// enumerated and the one with the largest alignment-weighted similarity is
/// used; association accuracy is averaged over the resulting true positives.
inline OracleHota brute_hota(const AlignedSequence& seq, double alpha) {
  const double eps = 2.220446049250313e-16;
  // Global alignment between every (gt, pred) id pair.
  std::map<ObjectId, double> gt_n, pr_n;
  std::map<std::pair<ObjectId, ObjectId>, double> potential;
  for (const auto& f : seq) {
    const std::size_t n = f.gt.size(), m = f.pred.size();
    for (std::size_t i = 0; i < n; ++i) gt_n[f.gt_ids[i]] += 1;
    for (std::size_t j = 0; j < m; ++j) pr_n[f.pred_ids[j]] += 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        double row = 0, col = 0;
        for (std::size_t q = 0; q < m; ++q) row += oracle_iou(f.gt[i], f.pred[q]);
        for (std::size_t q = 0; q < n; ++q) col += oracle_iou(f.gt[q], f.pred[j]);
        const double s = oracle_iou(f.gt[i], f.pred[j]);
        const double d = row + col - s;
        if (d > eps) potential[{f.gt_ids[i], f.pred_ids[j]}] += s / d;
      }
    }
  }
  auto align = [&](ObjectId g, ObjectId p) {
    const double pot = potential.count({g, p}) ? potential[{g, p}] : 0.0;
    return pot / (gt_n[g] + pr_n[p] - pot);
  };

  // Matched (gt, pred) id pairs, one entry per true positive.
  std::vector<std::pair<ObjectId, ObjectId>> tps;
  OracleHota r;
  for (const auto& f : seq) {
    const int n = static_cast<int>(f.gt.size()), m = static_cast<int>(f.pred.size());
    std::vector<int> best(n, -1);
    double best_score = -1.0;
    for_each_matching(n, m, [&](const std::vector<int>& a) {
      double score = 0.0;
      for (int i = 0; i < n; ++i)
        if (a[i] >= 0) score += align(f.gt_ids[i], f.pred_ids[a[i]]) * oracle_iou(f.gt[i], f.pred[a[i]]);
      if (score > best_score + 1e-12) best_score = score, best = a;
    });
    long matched = 0;
    for (int i = 0; i < n; ++i) {
      if (best[i] < 0 || oracle_iou(f.gt[i], f.pred[best[i]]) < alpha - eps) continue;
      ++matched;
      tps.push_back({f.gt_ids[i], f.pred_ids[best[i]]});
    }
    r.tp += matched;
    r.fn += n - matched;
    r.fp += m - matched;
  }
  double ass_sum = 0.0;
  for (const auto& c : tps) {
    long tpa = 0;
    for (const auto& d : tps) tpa += d == c;
    const double fna = gt_n[c.first] - tpa;   // this GT's detections not matched to this pred
    const double fpa = pr_n[c.second] - tpa;  // this pred's detections not matched to this GT
    ass_sum += tpa / (tpa + fna + fpa);
  }
  const double total = static_cast<double>(r.tp + r.fn + r.fp);
  r.det_a = total > 0 ? r.tp / total : 0.0;
  r.ass_a = r.tp > 0 ? ass_sum / r.tp : 0.0;
  r.hota = std::sqrt(r.det_a * r.ass_a);
  return r;
}

/// All-point interpolated AP from the ranked list: precision at each rank is
/// replaced by the best precision at any deeper rank, then integrated over
/// recall steps.
inline double brute_average_precision(const std::vector<evaluation::ApFrame>& frames, double threshold) {
  struct Item {
    double conf;
    std::size_t frame, det;
  };
  std::vector<Item> items;
  long n_gt = 0;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    n_gt += static_cast<long>(frames[f].gt.size());
    for (std::size_t d = 0; d < frames[f].detections.size(); ++d)
      items.push_back({frames[f].detections[d].confidence, f, d});
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.conf > b.conf; });
  std::vector<std::vector<bool>> claimed(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) claimed[f].assign(frames[f].gt.size(), false);
  std::vector<double> prec, rec;
  long tp = 0, fp = 0;
  for (const auto& it : items) {
    const auto& fr = frames[it.frame];
    int best = -1;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < fr.gt.size(); ++g) {
      const double v = oracle_iou(fr.gt[g], fr.detections[it.det].box);
      if (v > best_iou) best_iou = v, best = static_cast<int>(g);
    }
    if (best >= 0 && best_iou >= threshold && !claimed[it.frame][best]) {
      claimed[it.frame][best] = true;
      ++tp;
    } else {
      ++fp;
    }
    prec.push_back(static_cast<double>(tp) / (tp + fp));
    rec.push_back(n_gt > 0 ? static_cast<double>(tp) / n_gt : 0.0);
  }
  double ap = 0.0, prev_recall = 0.0;
  for (std::size_t k = 0; k < prec.size(); ++k) {
    double p = 0.0;
    for (std::size_t j = k; j < prec.size(); ++j) p = std::max(p, prec[j]);
    ap += (rec[k] - prev_recall) * p;
    prev_recall = rec[k];
  }
  return ap;
}

/// Per-class annotation errors with exactly the tabulated per-class sample
/// counts, means and standard deviations (l, w, h), built around nominal true
/// dimensions for each class.
inline std::vector<evaluation::DimensionPair> dimension_fixture() {
  struct Row {
    VehicleClass cls;
    int n;
    double mean[3], sd[3];
    evaluation::Dims truth;
  };
  const std::vector<Row> rows{
      {VehicleClass::kSedan, 16, {-1.0, -0.2, -0.5}, {0.7, 0.2, 0.2}, {15.5, 6.0, 4.8}},
      {VehicleClass::kMidsize, 28, {-0.9, -0.2, -0.3}, {0.6, 0.3, 0.4}, {15.8, 6.3, 5.6}},
      {VehicleClass::kVan, 7, {-0.6, -0.2, 0.0}, {0.7, 0.2, 0.5}, {16.8, 6.6, 6.0}},
      {VehicleClass::kPickup, 9, {-0.6, -0.1, -0.3}, {0.9, 0.2, 0.4}, {19.0, 6.7, 6.3}},
      {VehicleClass::kTruck, 5, {0.5, 0.2, 0.9}, {0.9, 0.6, 1.6}, {25.0, 8.0, 11.0}},
      {VehicleClass::kSemi, 7, {1.5, 0.2, -0.1}, {1.3, 0.3, 0.7}, {70.0, 8.5, 13.5}},
  };
  std::vector<evaluation::DimensionPair> out;
  for (const auto& r : rows) {
    // Evenly spaced standard scores with zero mean and unit sample variance,
    // rotated per axis so the axes are not perfectly correlated.
    std::vector<double> z(r.n);
    double ss = 0.0;
    for (int i = 0; i < r.n; ++i) z[i] = i - (r.n - 1) / 2.0, ss += z[i] * z[i];
    for (auto& v : z) v /= std::sqrt(ss / (r.n - 1));
    for (int i = 0; i < r.n; ++i) {
      evaluation::DimensionPair p;
      p.cls = r.cls;
      p.truth = r.truth;
      p.annotated = {r.truth.l + r.mean[0] + r.sd[0] * z[i], r.truth.w + r.mean[1] + r.sd[1] * z[(i + 1) % r.n],
                     r.truth.h + r.mean[2] + r.sd[2] * z[(i + 2) % r.n]};
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace roadtrack::testing
