#pragma once

// Independent reference implementations used to check the library. Everything
// here is written with plain index loops and its own formulas on purpose; none
// of it calls into the optimized code paths.

#include <map>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

double objective(const Eigen::MatrixXd& a, const std::vector<Eigen::MatrixXd>& r,
                 const std::vector<Eigen::MatrixXd>& x, double lambda_a, double lambda_r);

Eigen::MatrixXd update_A(const Eigen::MatrixXd& a, const std::vector<Eigen::MatrixXd>& r,
                         const std::vector<Eigen::MatrixXd>& x, double lambda_a,
                         double epsilon);

std::vector<Eigen::MatrixXd> update_R(const Eigen::MatrixXd& a,
                                      const std::vector<Eigen::MatrixXd>& r,
                                      const std::vector<Eigen::MatrixXd>& x,
                                      double lambda_r, double epsilon);

// Q over ordered pairs including i = j, straight from the definition.
double modularity(const Eigen::MatrixXd& w, const std::vector<int>& labels);

// NMI per the confusion-count formula, natural logs.
double nmi(const std::map<int, int>& truth, const std::map<int, int>& detected);

// All partitions of {0..n-1} as restricted-growth label vectors.
std::vector<std::vector<int>> partitions_of(int n);

// Exhaustive modularity maximum over all partitions; optionally returns the
// best labeling.
double max_modularity(const Eigen::MatrixXd& w, std::vector<int>* best = nullptr);

bool connected(const Eigen::MatrixXd& w);

// True iff the two labelings group nodes identically (labels may differ).
bool same_partition(const std::vector<int>& lhs, const std::vector<int>& rhs);

}  // namespace oracle
