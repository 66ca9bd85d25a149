#include "courantkit/chart.hpp"

namespace ck {

Chart::Chart(std::string name, std::vector<std::string> coords,
             std::vector<std::vector<double>> samples, std::optional<Box> box)
    : name_(std::move(name)),
      coords_(std::move(coords)),
      samples_(std::move(samples)),
      box_(std::move(box)) {
  if (coords_.empty()) throw SchemaError("chart '" + name_ + "' has no coordinates");
  if (samples_.empty()) throw SchemaError("chart '" + name_ + "' has no samples");
  for (const auto& s : samples_)
    if (s.size() != coords_.size())
      throw SchemaError("chart '" + name_ + "': sample dimension mismatch");
  if (box_) {
    if (box_->lo.size() != coords_.size() || box_->hi.size() != coords_.size())
      throw SchemaError("chart '" + name_ + "': box dimension mismatch");
    for (const auto& s : samples_)
      for (size_t i = 0; i < s.size(); ++i)
        if (s[i] < box_->lo[i] || s[i] > box_->hi[i])
          throw SchemaError("chart '" + name_ + "': sample outside box");
  }
}

std::vector<std::vector<double>> Chart::eval_points(int extra, uint64_t seed) const {
  std::vector<std::vector<double>> pts = samples_;
  if (box_ && extra > 0) {
    SplitMix64 rng(seed ^ fnv1a(name_));
    for (int k = 0; k < extra; ++k) {
      std::vector<double> p(coords_.size());
      for (size_t i = 0; i < p.size(); ++i) p[i] = rng.next_in(box_->lo[i], box_->hi[i]);
      pts.push_back(std::move(p));
    }
  }
  return pts;
}

ChartPtr make_chart(std::string name, std::vector<std::string> coords,
                    std::vector<std::vector<double>> samples, std::optional<Box> box) {
  return std::make_shared<const Chart>(std::move(name), std::move(coords), std::move(samples),
                                       std::move(box));
}

ChartPtr make_box_chart(std::string name, std::vector<std::string> coords, const Box& box,
                        int count, uint64_t seed) {
  SplitMix64 rng(seed ^ fnv1a(name));
  std::vector<std::vector<double>> samples;
  samples.reserve(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) {
    std::vector<double> p(coords.size());
    for (size_t i = 0; i < p.size(); ++i) p[i] = rng.next_in(box.lo[i], box.hi[i]);
    samples.push_back(std::move(p));
  }
  return make_chart(std::move(name), std::move(coords), std::move(samples), box);
}

}  // namespace ck
