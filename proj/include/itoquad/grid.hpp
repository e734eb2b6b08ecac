#pragma once

#include <cstddef>
#include <vector>

namespace itoquad {

/// Randomly shifted equidistant partition of [0, T]:
///   theta_0 = 0, theta_j = (j - 1 + shift) * h for j = 1..N, theta_{N+1} = T.
/// For shift = 0 the first shifted node coincides with 0, for shift = 1 the
/// last one coincides with T; coincident nodes are stored once.
struct ShiftedGrid {
  double T;
  int N;
  double h;
  double shift;                // Theta in [0, 1]
  std::vector<double> nodes;   // deduplicated, ascending, nodes.front() = 0, nodes.back() = T

  /// Index of theta_j in nodes, valid for j = 1..N+1.
  std::size_t node_index(int j) const {
    const std::size_t i = shift == 0.0 ? (std::size_t)(j - 1) : (std::size_t)j;
    return i < nodes.size() ? i : nodes.size() - 1;
  }

  /// Value of theta_j for j = 1..N (the rule's evaluation points).
  double eval_point(int j) const { return nodes[node_index(j)]; }
};

ShiftedGrid build_shifted_grid(double T, int N, double shift);

/// Equidistant grid t_j = j*h for the trapezoidal rule, with the rule's
/// evaluation points theta_j = t_{j-1} + theta*h and
/// theta_hat_j = t_{j-1} + (1-theta)*h.
struct UniformGrid {
  double T;
  int N;
  double h;

  double node(int j) const { return j == N ? T : j * h; }
  double midpoint(int j) const { return 0.5 * (node(j - 1) + node(j)); }
  double theta_point(int j, double theta) const { return node(j - 1) + theta * h; }
  double theta_hat_point(int j, double theta) const { return node(j - 1) + (1.0 - theta) * h; }
};

UniformGrid build_uniform_grid(double T, int N);

}  // namespace itoquad
