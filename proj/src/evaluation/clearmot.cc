#include "roadtrack/evaluation/clearmot.hpp"

#include <map>
#include <set>

#include "roadtrack/core/hungarian.hpp"
#include "roadtrack/tracking/iou.hpp"

namespace roadtrack::evaluation {

MatchedSequence match_frames(const AlignedSequence& seq, double threshold) {
  MatchedSequence out;
  out.reserve(seq.size());
  std::map<ObjectId, ObjectId> previous;  // gt -> pred at the previous frame
  for (const auto& f : seq) {
    FrameMatch fm;
    const Eigen::MatrixXd iou = tracking::iou_matrix(f.gt, f.pred);
    std::vector<char> g_used(f.gt.size(), 0), p_used(f.pred.size(), 0);
    for (std::size_t i = 0; i < f.gt.size(); ++i) {
      const auto it = previous.find(f.gt_ids[i]);
      if (it == previous.end()) continue;
      for (std::size_t j = 0; j < f.pred.size(); ++j) {
        if (f.pred_ids[j] == it->second && !p_used[j] && iou(i, j) >= threshold) {
          fm.pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
          g_used[i] = p_used[j] = 1;
          break;
        }
      }
    }
    std::vector<int> gr, pr;
    for (std::size_t i = 0; i < f.gt.size(); ++i) {
      if (!g_used[i]) gr.push_back(static_cast<int>(i));
    }
    for (std::size_t j = 0; j < f.pred.size(); ++j) {
      if (!p_used[j]) pr.push_back(static_cast<int>(j));
    }
    Eigen::MatrixXd rest(gr.size(), pr.size());
    for (std::size_t a = 0; a < gr.size(); ++a) {
      for (std::size_t b = 0; b < pr.size(); ++b) rest(a, b) = iou(gr[a], pr[b]);
    }
    for (const auto& [a, b] : max_weight_matching(rest, threshold)) {
      fm.pairs.emplace_back(gr[a], pr[b]);
    }
    std::sort(fm.pairs.begin(), fm.pairs.end());
    previous.clear();
    for (const auto& [i, j] : fm.pairs) {
      fm.iou.push_back(iou(i, j));
      previous[f.gt_ids[i]] = f.pred_ids[j];
    }
    out.push_back(std::move(fm));
  }
  return out;
}

ClearMotResult clearmot(const AlignedSequence& seq, const MatchedSequence& matches) {
  ClearMotResult r;
  std::map<ObjectId, ObjectId> last_match;
  std::map<ObjectId, long> gt_frames, gt_hits;
  std::set<ObjectId> pred_seen, pred_matched;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const auto& f = seq[k];
    const auto& m = matches[k];
    for (ObjectId id : f.gt_ids) gt_frames[id] += 1;
    for (ObjectId id : f.pred_ids) pred_seen.insert(id);
    r.gt_dets += static_cast<long>(f.gt.size());
    r.tp += static_cast<long>(m.pairs.size());
    r.fn += static_cast<long>(f.gt.size() - m.pairs.size());
    r.fp += static_cast<long>(f.pred.size() - m.pairs.size());
    for (std::size_t p = 0; p < m.pairs.size(); ++p) {
      const ObjectId g = f.gt_ids[m.pairs[p].first];
      const ObjectId q = f.pred_ids[m.pairs[p].second];
      r.iou_sum += m.iou[p];
      gt_hits[g] += 1;
      pred_matched.insert(q);
      const auto it = last_match.find(g);
      if (it != last_match.end() && it->second != q) r.id_switches += 1;
      last_match[g] = q;
    }
  }
  r.gt_objects = static_cast<int>(gt_frames.size());
  r.pred_objects = static_cast<int>(pred_seen.size());
  r.pred_matched_objects = static_cast<int>(pred_matched.size());
  for (const auto& [id, n] : gt_frames) {
    const long hits = gt_hits.count(id) ? gt_hits.at(id) : 0;
    if (hits > 0) r.gt_matched_objects += 1;
    const double ratio = static_cast<double>(hits) / static_cast<double>(n);
    if (ratio >= 0.8) {
      r.mostly_tracked += 1;
    } else if (ratio <= 0.2) {
      r.mostly_lost += 1;
    } else {
      r.partially_tracked += 1;
    }
  }
  auto pct = [](double num, double den) { return den > 0.0 ? 100.0 * num / den : 0.0; };
  r.mota = r.gt_dets > 0
               ? 100.0 * (1.0 - static_cast<double>(r.fn + r.fp + r.id_switches) /
                                    static_cast<double>(r.gt_dets))
               : 0.0;
  r.motp = pct(r.iou_sum, static_cast<double>(r.tp));
  r.recall = pct(static_cast<double>(r.tp), static_cast<double>(r.tp + r.fn));
  r.precision = pct(static_cast<double>(r.tp), static_cast<double>(r.tp + r.fp));
  r.mt_pct = pct(r.mostly_tracked, r.gt_objects);
  r.pt_pct = pct(r.partially_tracked, r.gt_objects);
  r.ml_pct = pct(r.mostly_lost, r.gt_objects);
  r.gt_pct = pct(r.gt_matched_objects, r.gt_objects);
  r.pred_pct = pct(r.pred_matched_objects, r.pred_objects);
  r.switches_per_gt = r.gt_objects > 0 ? static_cast<double>(r.id_switches) / r.gt_objects : 0.0;
  return r;
}

}  // namespace roadtrack::evaluation
