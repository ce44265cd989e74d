// Copyright 2026 The advtrain Authors
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

#ifndef ADVTRAIN_QUERY_METER_H_
#define ADVTRAIN_QUERY_METER_H_

#include <string>

#include "advtrain/error.h"

namespace advtrain {

// Counts victim-model forward passes against a hard budget. Consume() refuses
// (throws kBudgetExceeded) instead of overrunning, so forward_count never
// exceeds budget.
class QueryMeter {
 public:
  explicit QueryMeter(long budget) : budget_(budget) {
    if (budget < 1) {
      throw Error(ErrorCode::kInvalidArgument, "query budget must be >= 1");
    }
  }

  long forward_count() const { return forward_count_; }
  long budget() const { return budget_; }
  long remaining() const { return budget_ - forward_count_; }
  bool CanAfford(long n = 1) const { return forward_count_ + n <= budget_; }

  void Consume() {
    if (!CanAfford()) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "query budget of " + std::to_string(budget_) + " exhausted");
    }
    ++forward_count_;
  }

 private:
  long forward_count_ = 0;
  long budget_;
};

}  // namespace advtrain

#endif  // ADVTRAIN_QUERY_METER_H_
