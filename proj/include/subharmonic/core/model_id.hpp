#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "subharmonic/error.hpp"

namespace subharmonic {

/// Default ceiling on the number of predictors for exhaustive enumeration.
inline constexpr int kDefaultEnumerationCap = 25;

/// A submodel, identified by the set of predictors it uses. Bit i (0-based)
/// corresponds to predictor i+1.
class ModelId {
 public:
  constexpr ModelId() = default;
  constexpr explicit ModelId(std::uint64_t mask) : mask_(mask) {}

  /// Builds a model from 1-based predictor indices.
  static ModelId from_indices(const std::vector<int>& one_based) {
    std::uint64_t mask = 0;
    for (int i : one_based) {
      if (i < 1 || i > 64) {
        throw Error(ErrorCode::InvalidInput, "predictor index out of range: " + std::to_string(i));
      }
      mask |= std::uint64_t{1} << (i - 1);
    }
    return ModelId(mask);
  }

  static constexpr ModelId null_model() { return ModelId(0); }
  static constexpr ModelId full_model(int p) {
    return ModelId(p >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << p) - 1);
  }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool is_null() const { return mask_ == 0; }
  constexpr bool contains(int zero_based) const { return (mask_ >> zero_based) & 1U; }
  constexpr bool is_subset_of(ModelId other) const { return (mask_ & ~other.mask_) == 0; }

  /// 0-based predictor indices, ascending.
  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  /// "{1,3,4}" style label with 1-based indices; the null model is "{}".
  std::string label() const {
    std::string s = "{";
    bool first = true;
    for (int i : indices()) {
      if (!first) s += ',';
      s += std::to_string(i + 1);
      first = false;
    }
    return s + "}";
  }

  constexpr auto operator<=>(const ModelId&) const = default;

 private:
  std::uint64_t mask_ = 0;
};

/// All submodels of a p-predictor problem in ascending mask order.
inline std::vector<ModelId> enumerate_models(int p, bool include_null,
                                             int cap = kDefaultEnumerationCap) {
  if (p < 1) throw Error(ErrorCode::InvalidInput, "p must be at least 1");
  if (p > cap) {
    throw Error(ErrorCode::TooManyModels,
                "p = " + std::to_string(p) + " exceeds enumeration cap " + std::to_string(cap));
  }
  const std::uint64_t count = std::uint64_t{1} << p;
  std::vector<ModelId> models;
  models.reserve(include_null ? count : count - 1);
  for (std::uint64_t m = include_null ? 0 : 1; m < count; ++m) models.emplace_back(m);
  return models;
}

}  // namespace subharmonic
