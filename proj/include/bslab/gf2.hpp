// Copyright 2026 The bslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BSLAB_GF2_HPP
#define BSLAB_GF2_HPP

#include <bit>
#include <cstdint>
#include <vector>

namespace bslab {

/// Row-reduced GF(2) span of 64-bit vectors. Rows are kept with distinct
/// leading bits, so membership tests are a single elimination pass.
class Gf2Span {
 public:
  /// Adds a vector to the span. Returns true if the rank increased.
  bool add(uint64_t v) {
    v = reduce(v);
    if (v == 0) return false;
    rows_.push_back(v);
    // Keep rows sorted by leading bit (descending) for stable reduction.
    for (size_t i = rows_.size() - 1; i > 0 && rows_[i] > rows_[i - 1]; --i) {
      std::swap(rows_[i], rows_[i - 1]);
    }
    return true;
  }

  /// Reduces v by the current basis; the result is 0 iff v is in the span.
  uint64_t reduce(uint64_t v) const {
    for (uint64_t row : rows_) {
      uint64_t lead = uint64_t(1) << (63 - std::countl_zero(row));
      if (v & lead) v ^= row;
    }
    return v;
  }

  bool contains(uint64_t v) const { return reduce(v) == 0; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const std::vector<uint64_t>& rows() const { return rows_; }

 private:
  std::vector<uint64_t> rows_;
};

}  // namespace bslab

#endif  // BSLAB_GF2_HPP
