#pragma once

// Reference benchmark values for the default reinsurance experiment
// (w0 = 20, loading 0.1, g(s) = s^0.5, X ~ truncated Pareto(10, 3, 10),
// Y ~ standard normal truncated to [-5, 5]) at goals 15, 15.5, ..., 19.

#include <array>
#include <optional>

namespace drgoal::reference {

struct Row {
  double goal;
  double premium;
  double value;
  double attach;
  double detach;
  /// false where every contract is optimal and the value is 0.
  bool solvable = true;
};

/// Attachment point shared by all nondegenerate rows.
inline constexpr double kAttachment = 0.5644;

inline constexpr std::array<Row, 9> kNoBackground{{
    {15.0, 4.4356, 0.9690, 0.5644, 8.7320},
    {15.5, 3.9356, 0.9047, 0.5644, 6.8680},
    {16.0, 3.4356, 0.8048, 0.5644, 5.5817},
    {16.5, 2.9356, 0.7714, 0.5644, 4.5439},
    {17.0, 2.4356, 0.6946, 0.5644, 3.6608},
    {17.5, 1.9356, 0.6090, 0.5644, 2.8882},
    {18.0, 1.4356, 0.5135, 0.5644, 2.2003},
    {18.5, 0.9356, 0.4069, 0.5644, 1.5803},
    {19.0, 0.4356, 0.2881, 0.5644, 1.0165},
}};

// The reference attachment at goal 18 reads 0.5664; the attachment cannot
// depend on the goal, so the shared value is stored.
inline constexpr std::array<Row, 9> kWorstCase{{
    {15.0, 3.0064, 0.7051, 0.5644, 4.6801},
    {15.5, 2.5712, 0.6300, 0.5644, 3.8884},
    {16.0, 2.1416, 0.5476, 0.5644, 3.1950},
    {16.5, 1.7162, 0.4571, 0.5644, 2.5772},
    {17.0, 1.2945, 0.3577, 0.5644, 2.0197},
    {17.5, 0.8775, 0.2488, 0.5644, 1.5120},
    {18.0, 0.4657, 0.1295, 0.5644, 1.0493},
    {18.5, 0.0, 0.0, 0.0, 0.0, false},
    {19.0, 0.0, 0.0, 0.0, 0.0, false},
}};

// The reference premium at goal 17 (1.2955) breaks the monotone trend of its
// neighbours and is not used; see kComonotonePremiumUnreliableGoal.
inline constexpr std::array<Row, 9> kComonotone{{
    {15.0, 3.4372, 0.8410, 0.5644, 5.5853},
    {15.5, 3.1080, 0.7960, 0.5644, 4.8811},
    {16.0, 2.7708, 0.7469, 0.5644, 4.2383},
    {16.5, 2.4296, 0.6936, 0.5644, 3.6509},
    {17.0, 1.2955, 0.6360, 0.5644, 3.1133},
    {17.5, 1.7480, 0.5744, 0.5644, 2.6212},
    {18.0, 1.4131, 0.5090, 0.5644, 2.1710},
    {18.5, 1.0860, 0.4402, 0.5644, 1.7604},
    {19.0, 0.7701, 0.3690, 0.5644, 1.3879},
}};

inline constexpr double kComonotonePremiumUnreliableGoal = 17.0;

/// Distorted expectation of the loss including loading, pi^g(X).
inline constexpr double kFullPremium = 5.187;

}  // namespace drgoal::reference
