#pragma once

#include <Eigen/Dense>
#include <vector>

namespace pcadmm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct AdmmOptions {
  double rho = 1.0;     // augmented-Lagrangian weight
  double lambda = 1.0;  // l1 weight
  int iters = 100;
};

// How a node that only holds a column block of A treats the target vector:
// regress the full y (each block explains as much of y as it can) or y / K
// (the blocks share y evenly). full is the default.
enum class YScaling { full, over_k };

double soft_threshold(double v, double kappa);
Vec soft_threshold(const Vec& v, double kappa);

// 0.5 ||A z - y||^2 + lambda ||z||_1, always against the full problem.
double lasso_objective(const Mat& a, const Vec& y, const Vec& z, double lambda);
double mse(const Vec& a, const Vec& b);

struct AdmmResult {
  Vec x, z, v;                    // final iterates; z is the sparse one
  std::vector<double> objective;  // on z, one entry per iteration
  std::vector<Vec> x_trace;       // x after each iteration, for loss studies
};

// Centralized solver: x = (A^T A + rho I)^-1 (A^T y + rho (z - v)),
// z = soft(x + v, lambda / rho), v += x - z. The normal-matrix factorization
// (LDLT) is done once and reused across iterations.
AdmmResult lasso_admm(const Mat& a, const Vec& y, const AdmmOptions& opt);

// What one column-block node precomputes: x_k = alpha + b_bar (z_k - v_k)
// is its whole per-iteration update. b_bar = rho (A_k^T A_k + rho I)^-1 and
// alpha = (A_k^T A_k + rho I)^-1 A_k^T y_s are exactly the matrices the
// encrypted pipeline quantizes.
struct NodeFactor {
  Mat b_bar;
  Vec alpha;
};

NodeFactor node_factor(const Mat& a_k, const Vec& y, const AdmmOptions& opt,
                       int k_total, YScaling scaling);

// Near-equal column partition: first (cols % k) blocks get one extra.
std::vector<int> split_columns(int cols, int k);

// Column-split form: each block runs the NodeFactor recurrence with its own
// z_k, v_k slices (no cross-block coupling; the objective trace shows what
// that approximation costs). With one block and full scaling this is the
// centralized iteration in precomputed-inverse form.
AdmmResult lasso_admm_split(const Mat& a, const Vec& y, const AdmmOptions& opt,
                            const std::vector<int>& cols_per_node,
                            YScaling scaling = YScaling::full);

// Proximal-gradient reference solver (ISTA with the exact Lipschitz step).
// Independent of the ADMM recurrences; used to cross-check them.
Vec lasso_ista(const Mat& a, const Vec& y, double lambda, int iters);

}  // namespace pcadmm
