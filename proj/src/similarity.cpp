#include "demoplan/similarity.hpp"

namespace demoplan {

double alpha(const Deltad& d1, const Deltad& d2) {
  return quat_distance(d1.rotation, d2.rotation);
}

double beta(const Deltad& d1, const Deltad& d2, const SimilarityConfig& cfg) {
  const double n1 = d1.translation.norm();
  const double n2 = d2.translation.norm();
  const bool z1 = n1 < cfg.zero_translation_epsilon;
  const bool z2 = n2 < cfg.zero_translation_epsilon;
  if (z1 && z2) return 1.0;
  if (z1 || z2) return -1.0;
  return d1.translation.dot(d2.translation) / (n1 * n2);
}

namespace {

bool admissible(const Deltad& demo, const Deltad& task, const SimilarityConfig& cfg) {
  return alpha(demo, task) <= cfg.delta_alpha && beta(demo, task, cfg) >= cfg.delta_beta;
}

}  // namespace

std::optional<Allocation> is_semantically_similar(const TaskFeature& tf, const DemoFeature& hd,
                                                  const SimilarityConfig& cfg) {
  const auto& task = tf.deltas;
  const auto& demo = hd.deltas;
  if (task.empty() || demo.empty()) return std::nullopt;
  if (!admissible(demo[0], task[0], cfg)) return std::nullopt;
  Allocation out;
  out.pairs.reserve(task.size());
  out.pairs.emplace_back(0, 0);
  std::size_t l = 1;
  for (std::size_t j = 1; j < task.size(); ++j) {
    bool found = false;
    for (; l < demo.size(); ++l) {
      if (admissible(demo[l], task[j], cfg)) {
        out.pairs.emplace_back(static_cast<int>(j), static_cast<int>(l));
        ++l;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  return out;
}

}  // namespace demoplan
