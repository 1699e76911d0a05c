#include "roadtrack/tracking/association.hpp"

#include <algorithm>

#include "roadtrack/core/hungarian.hpp"
#include "roadtrack/tracking/iou.hpp"

namespace roadtrack::tracking {

Association associate_matrix(const Eigen::MatrixXd& iou, double min_iou) {
  Association out;
  out.matches = max_weight_matching(iou, min_iou);
  std::vector<char> t_used(iou.rows(), 0), d_used(iou.cols(), 0);
  for (const auto& [t, d] : out.matches) {
    t_used[t] = 1;
    d_used[d] = 1;
  }
  for (int i = 0; i < static_cast<int>(iou.rows()); ++i) {
    if (!t_used[i]) out.unmatched_tracks.push_back(i);
  }
  for (int j = 0; j < static_cast<int>(iou.cols()); ++j) {
    if (!d_used[j]) out.unmatched_detections.push_back(j);
  }
  return out;
}

Association associate_kiou(std::span<const Box3D> tracks, std::span<const Box3D> detections,
                           double min_iou) {
  return associate_matrix(iou_matrix(tracks, detections), min_iou);
}

ByteAssociation associate_byte_matrix(const Eigen::MatrixXd& iou, std::span<const double> confidence,
                                      const ByteThresholds& th) {
  ByteAssociation out;
  std::vector<int> high, low;
  for (int j = 0; j < static_cast<int>(confidence.size()); ++j) {
    const double c = confidence[j];
    if (c >= th.high) {
      high.push_back(j);
    } else if (c >= th.low) {
      low.push_back(j);
    } else {
      out.discarded.push_back(j);
    }
  }
  const int nt = static_cast<int>(iou.rows());
  auto sub = [&](const std::vector<int>& rows, const std::vector<int>& cols) {
    Eigen::MatrixXd m(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = iou(rows[i], cols[j]);
    }
    return m;
  };
  std::vector<int> all_tracks(nt);
  for (int i = 0; i < nt; ++i) all_tracks[i] = i;

  const Association first = associate_matrix(sub(all_tracks, high), th.min_iou);
  for (const auto& [t, d] : first.matches) out.matches.emplace_back(t, high[d]);
  for (int d : first.unmatched_detections) out.spawn.push_back(high[d]);

  const Association second = associate_matrix(sub(first.unmatched_tracks, low), th.min_iou);
  for (const auto& [t, d] : second.matches) {
    out.matches.emplace_back(first.unmatched_tracks[t], low[d]);
  }
  for (int t : second.unmatched_tracks) out.unmatched_tracks.push_back(first.unmatched_tracks[t]);
  for (int d : second.unmatched_detections) out.discarded.push_back(low[d]);

  std::sort(out.matches.begin(), out.matches.end());
  std::sort(out.discarded.begin(), out.discarded.end());
  return out;
}

ByteAssociation associate_byte(std::span<const Box3D> tracks, std::span<const Detection> detections,
                               const ByteThresholds& th) {
  std::vector<Box3D> boxes;
  std::vector<double> conf;
  for (const auto& d : detections) {
    boxes.push_back(d.box);
    conf.push_back(d.confidence);
  }
  return associate_byte_matrix(iou_matrix(tracks, boxes), conf, th);
}

}  // namespace roadtrack::tracking
