#include "csm/measures.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace csm {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::confidence: return "confidence";
    case Measure::support: return "support";
    case Measure::lift: return "lift";
    case Measure::conviction: return "conviction";
    case Measure::cosine: return "cosine";
    case Measure::jaccard: return "jaccard";
    case Measure::phi: return "phi";
  }
  return "?";
}

std::optional<Measure> parse_measure(std::string_view name) {
  for (auto m : kAllMeasures)
    if (to_string(m) == name) return m;
  return std::nullopt;
}

double MeasureValue::value() const {
  switch (tag_) {
    case Tag::undefined: return std::numeric_limits<double>::quiet_NaN();
    case Tag::infinite: return std::numeric_limits<double>::infinity();
    case Tag::finite: break;
  }
  return value_;
}

std::string MeasureValue::format() const {
  if (tag_ == Tag::undefined) return "undefined";
  if (tag_ == Tag::infinite) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", value_ == 0.0 ? 0.0 : value_);
  return buf;
}

std::partial_ordering operator<=>(const MeasureValue& a, const MeasureValue& b) {
  if (a.tag_ != b.tag_) return static_cast<int>(a.tag_) <=> static_cast<int>(b.tag_);
  if (a.tag_ != MeasureValue::Tag::finite) return std::partial_ordering::equivalent;
  return a.value_ <=> b.value_;
}

bool operator==(const MeasureValue& a, const MeasureValue& b) {
  return a.tag_ == b.tag_ && (a.tag_ != MeasureValue::Tag::finite || a.value_ == b.value_);
}

MeasureValue confidence(const ProbabilityEstimates& e) {
  if (!e.confidence.defined()) return MeasureValue::undefined();
  return MeasureValue::of(e.confidence.value());
}

MeasureValue support(const ProbabilityEstimates& e) { return MeasureValue::of(e.p_xy); }

MeasureValue lift(const ProbabilityEstimates& e) {
  if (e.p_x <= 0.0 || e.p_y <= 0.0) return MeasureValue::undefined();
  return MeasureValue::of(e.p_xy / (e.p_x * e.p_y));
}

MeasureValue conviction(const ProbabilityEstimates& e) {
  const Ratio& c = e.confidence;
  if (!c.defined()) return MeasureValue::undefined();
  if (c.numerator == c.denominator) return e.p_y < 1.0 ? MeasureValue::infinity() : MeasureValue::undefined();
  // 1 - conf taken from the exact ratio.
  const double miss = static_cast<double>(c.denominator - c.numerator) / static_cast<double>(c.denominator);
  return MeasureValue::of((1.0 - e.p_y) / miss);
}

MeasureValue cosine(const ProbabilityEstimates& e) {
  if (e.p_x <= 0.0 || e.p_y <= 0.0) return MeasureValue::undefined();
  return MeasureValue::of(e.p_xy / std::sqrt(e.p_x * e.p_y));
}

MeasureValue jaccard(const ProbabilityEstimates& e) {
  const double den = e.p_x + e.p_y - e.p_xy;
  if (e.p_x <= 0.0 || e.p_y <= 0.0 || den <= 0.0) return MeasureValue::undefined();
  return MeasureValue::of(e.p_xy / den);
}

MeasureValue phi(const ProbabilityEstimates& e) {
  auto inside = [](double p) { return p > 0.0 && p < 1.0; };
  if (!inside(e.p_x) || !inside(e.p_y)) return MeasureValue::undefined();
  // Grouped per marginal so that swapping X and Y gives the same bits.
  const double den = std::sqrt((e.p_x * (1.0 - e.p_x)) * (e.p_y * (1.0 - e.p_y)));
  return MeasureValue::of((e.p_xy - e.p_x * e.p_y) / den);
}

const MeasureValue& MeasureVector::get(Measure m) const {
  switch (m) {
    case Measure::confidence: return confidence;
    case Measure::support: return support;
    case Measure::lift: return lift;
    case Measure::conviction: return conviction;
    case Measure::cosine: return cosine;
    case Measure::jaccard: return jaccard;
    case Measure::phi: return phi;
  }
  return confidence;
}

MeasureVector compute_measures(const ProbabilityEstimates& e) {
  return {csm::confidence(e), csm::support(e), csm::lift(e),   csm::conviction(e),
          csm::cosine(e),     csm::jaccard(e), csm::phi(e)};
}

}  // namespace csm
