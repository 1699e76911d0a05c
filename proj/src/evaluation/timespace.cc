#include "roadtrack/evaluation/timespace.hpp"

#include <string>

#include "roadtrack/core/error.hpp"

namespace roadtrack::evaluation {

const char* to_string(PointStatus s) {
  switch (s) {
    case PointStatus::kTP:
      return "TP";
    case PointStatus::kFP:
      return "FP";
    case PointStatus::kFN:
      return "FN";
  }
  return "?";
}

PointStatus parse_point_status(std::string_view s) {
  if (s == "TP") return PointStatus::kTP;
  if (s == "FP") return PointStatus::kFP;
  if (s == "FN") return PointStatus::kFN;
  fail(ErrorKind::kParseError, "unknown point status '" + std::string(s) + "'");
}

std::vector<TimeSpacePoint> emit_timespace(const AlignedSequence& seq, const MatchedSequence& matches,
                                           double lane_width) {
  std::vector<TimeSpacePoint> out;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const AlignedFrame& f = seq[k];
    std::vector<char> g_hit(f.gt.size(), 0), p_hit(f.pred.size(), 0);
    auto point = [&](const Box3D& b, ObjectId id, PointStatus s) {
      out.push_back({b.direction, lane_index(b.y, lane_width), f.t, b.x, id, s});
    };
    for (const auto& [i, j] : matches[k].pairs) {
      g_hit[i] = p_hit[j] = 1;
      point(f.gt[i], f.pred_ids[j], PointStatus::kTP);
    }
    for (std::size_t i = 0; i < f.gt.size(); ++i) {
      if (!g_hit[i]) point(f.gt[i], f.gt_ids[i], PointStatus::kFN);
    }
    for (std::size_t j = 0; j < f.pred.size(); ++j) {
      if (!p_hit[j]) point(f.pred[j], f.pred_ids[j], PointStatus::kFP);
    }
  }
  return out;
}

}  // namespace roadtrack::evaluation
