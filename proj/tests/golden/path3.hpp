// Generated by scripts/forward_oracle.py; do not edit.
#pragma once

#include <array>

namespace golden::path3 {

inline constexpr std::array<double, 2> kTheta1{0.5, -0.3};
inline constexpr std::array<double, 2> kTheta2{0.2, 0.4};
inline constexpr std::array<double, 4> kTheta3{1.0, 0.5, -0.5, 1.0};  // row-major
inline constexpr std::array<double, 4> kTheta4{0.3, -0.2, 0.1, 0.6};  // row-major
inline constexpr std::array<double, 4> kTheta5{0.7, 0.1, -0.2, 0.4};  // row-major
inline constexpr std::array<double, 4> kTheta6{0.5, -0.1, 0.3, 0.8};  // row-major
inline constexpr std::array<double, 4> kTheta7{1.0, -0.5, 0.25, 0.75};

inline constexpr std::array<double, 6> kEmbedEmptyL1{0.4, 0.30000000000000004, 0.8, 0.6000000000000001, 0.4, 0.30000000000000004};
inline constexpr std::array<double, 3> kScoresEmptyL1{1.4725, 1.785, 1.4725};
inline constexpr std::array<double, 6> kEmbedEmptyL2{0.52, 0.7400000000000001, 0.92, 1.04, 0.52, 0.7400000000000001};
inline constexpr std::array<double, 3> kScoresEmptyL2{1.9234999999999998, 2.2359999999999998, 1.9234999999999998};
inline constexpr std::array<double, 6> kEmbedAfterNode0L1{0.5, 0.0, 0.4, 0.30000000000000004, 0.4, 0.30000000000000004};
inline constexpr std::array<double, 3> kScoresAfterNode0L1{0.97, 1.2825, 1.2825};
inline constexpr std::array<double, 6> kEmbedAfterNode0L2{0.5, 0.0, 0.46, 0.52, 0.46, 0.52};
inline constexpr std::array<double, 3> kScoresAfterNode0L2{1.0319999999999998, 1.4919999999999998, 1.4919999999999998};

inline constexpr double kTargetAfterNode0L2 = 0.34279999999999977;

}  // namespace golden::path3
