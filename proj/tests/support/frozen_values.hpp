// Copyright 2026 The oodkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Reference values printed by tests/oracles/hand_values.py.
#pragma once

namespace oodkit::frozen {

inline constexpr double kTargetP[2][2] = {{0.9719999999999999, 0.028}, {0.3, 0.7000000000000001}};
inline constexpr double kKlRows[2] = {0.039163093061555736, 0.08228287850505189};
inline constexpr double kKlMean = 0.06072298578330382;
inline constexpr double kKlOneHot = 0.10536051565782635;
inline constexpr double kSoftAssign[2] = {0.8333333333333334, 0.16666666666666669};
inline constexpr double kNtXentOrthogonal = 0.2395447662218845;
inline constexpr double kNtXentFlatTau = 1.0986120583599617;  // tau = 1e6, 4 rows
inline constexpr double kAurocExample = 0.875;
inline constexpr double kFprExampleThreshold = 0.4;
inline constexpr double kFprExample = 0.5;
inline constexpr double kScoreLnHalfQuarter = -1.0397207708399179;
inline constexpr double kLnGeometric = 0.3535533905932738;
inline constexpr int kCoveragePrefix = 2;
inline constexpr double kPearson123132 = 0.5;
inline constexpr double kGmmPeak = -1.8378770664093453;

}  // namespace oodkit::frozen
