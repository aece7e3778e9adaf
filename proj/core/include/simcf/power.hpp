#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "simcf/rate.hpp"
#include "simcf/scenario.hpp"

namespace simcf {

/// Closed-form auxiliary vector of the quadratic transform at amplitudes
/// `amps`: t_k = |c(k,k)| / (sum_{j!=k} |c(k,j)|^2 + noise).  Maximizes the
/// concave-in-t surrogate 2t*sqrt(A) - t^2*B, and at this t the per-user
/// surrogate term equals the true SINR (tightness).
Eigen::VectorXd optimal_t(const Eigen::VectorXd& amps,
                          const StackedSystem& stacked, double noise_w);

/// Surrogate objective at fixed t:
///   sum_k log2(1 + 2 t_k |c(k,k)| - t_k^2 (sum_{j!=k} |c(k,j)|^2 + noise)).
/// Returns -infinity when any log argument is nonpositive.
double surrogate_value(const Eigen::VectorXd& t, const Eigen::VectorXd& amps,
                       const StackedSystem& stacked, double noise_w);

/// One surrogate maximization over the per-AP power ball at fixed t:
/// projected gradient ascent on amplitudes, projection = clamp at zero then
/// per-AP scaling onto ||amps_l||^2 <= p_max.  Never decreases the
/// surrogate; stops on relative gain < inner_rel_tol, a failed line search,
/// or power_max iterations.  Throws std::runtime_error on a non-finite
/// gradient.
Eigen::VectorXd update_power(const Eigen::VectorXd& t,
                             const Eigen::VectorXd& amps0,
                             const StackedSystem& stacked, double noise_w,
                             double p_max_w, const OptParams& opt,
                             int* steps_out = nullptr);

/// Exact Euclidean projection onto {amps >= 0, per-AP ||amps_l||^2 <= p_max}.
Eigen::VectorXd project_power(Eigen::VectorXd amps, int num_aps,
                              int antennas_per_ap, double p_max_w);

struct PowerTrace {
  std::vector<double> sum_rate;  // true objective after each outer iteration
  int outer_iters = 0;           // sum_rate.size() - 1
  long inner_iters = 0;          // total ascent steps across outer iterations
};

/// Full power-control stage: alternate optimal_t / update_power from the
/// given feasible start until the true objective's relative gain drops below
/// inner_rel_tol (or power_max outer iterations).  The returned trace starts
/// at the initial objective and is non-decreasing.
std::pair<PowerAllocation, PowerTrace> power_control(
    const PowerAllocation& initial, const StackedSystem& stacked,
    double noise_w, double p_max_w, const OptParams& opt);

}  // namespace simcf
