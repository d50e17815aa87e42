#pragma once

// The seven interestingness measures, scored from probability estimates.

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "csm/interaction.hpp"

namespace csm {

enum class Measure { confidence, support, lift, conviction, cosine, jaccard, phi };

inline constexpr std::array<Measure, 7> kAllMeasures = {Measure::confidence, Measure::support, Measure::lift,
                                                       Measure::conviction, Measure::cosine,  Measure::jaccard,
                                                       Measure::phi};

std::string_view to_string(Measure m);
std::optional<Measure> parse_measure(std::string_view name);

/// A real number, +infinity, or undefined. Orders undefined < finite < +inf.
class MeasureValue {
 public:
  enum class Tag { undefined, finite, infinite };

  MeasureValue() = default;
  static MeasureValue of(double v) { return MeasureValue(Tag::finite, v); }
  static MeasureValue infinity() { return MeasureValue(Tag::infinite, 0.0); }
  static MeasureValue undefined() { return MeasureValue(); }

  Tag tag() const { return tag_; }
  bool defined() const { return tag_ != Tag::undefined; }
  bool finite() const { return tag_ == Tag::finite; }
  bool infinite() const { return tag_ == Tag::infinite; }
  /// NaN when undefined, +inf when infinite.
  double value() const;

  /// Three significant digits; "inf" / "undefined" for the tagged values.
  std::string format() const;

  friend std::partial_ordering operator<=>(const MeasureValue& a, const MeasureValue& b);
  friend bool operator==(const MeasureValue& a, const MeasureValue& b);

 private:
  MeasureValue(Tag tag, double v) : tag_(tag), value_(v) {}

  Tag tag_ = Tag::undefined;
  double value_ = 0.0;
};

MeasureValue confidence(const ProbabilityEstimates& e);
MeasureValue support(const ProbabilityEstimates& e);
MeasureValue lift(const ProbabilityEstimates& e);
MeasureValue conviction(const ProbabilityEstimates& e);
MeasureValue cosine(const ProbabilityEstimates& e);
MeasureValue jaccard(const ProbabilityEstimates& e);
MeasureValue phi(const ProbabilityEstimates& e);

struct MeasureVector {
  MeasureValue confidence;
  MeasureValue support;
  MeasureValue lift;
  MeasureValue conviction;
  MeasureValue cosine;
  MeasureValue jaccard;
  MeasureValue phi;

  const MeasureValue& get(Measure m) const;
};

MeasureVector compute_measures(const ProbabilityEstimates& e);

struct InteractionRecord {
  InteractionKey key;
  ProbabilityEstimates estimates;
  MeasureVector measures;
  std::string interpretation;
};

}  // namespace csm
