#include "pcadmm/admm.hpp"

#include <cmath>
#include <stdexcept>

namespace pcadmm {

static void check_inputs(const Mat& a, const Vec& y, const AdmmOptions& opt) {
  if (a.rows() == 0 || a.cols() == 0)
    throw std::invalid_argument("empty design matrix");
  if (y.size() != a.rows())
    throw std::invalid_argument("target length != row count");
  if (!(opt.rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (opt.lambda < 0.0) throw std::invalid_argument("negative lambda");
  if (opt.iters < 1) throw std::invalid_argument("need at least one iteration");
}

double soft_threshold(double v, double kappa) {
  if (v > kappa) return v - kappa;
  if (v < -kappa) return v + kappa;
  return 0.0;
}

Vec soft_threshold(const Vec& v, double kappa) {
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); i++)
    out[i] = soft_threshold(v[i], kappa);
  return out;
}

double lasso_objective(const Mat& a, const Vec& y, const Vec& z,
                       double lambda) {
  return 0.5 * (a * z - y).squaredNorm() + lambda * z.lpNorm<1>();
}

double mse(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("mse length mismatch");
  if (a.size() == 0) return 0.0;
  return (a - b).squaredNorm() / (double)a.size();
}

AdmmResult lasso_admm(const Mat& a, const Vec& y, const AdmmOptions& opt) {
  check_inputs(a, y, opt);
  Eigen::Index n = a.cols();
  Mat normal = a.transpose() * a + opt.rho * Mat::Identity(n, n);
  Eigen::LDLT<Mat> solver(normal);
  Vec aty = a.transpose() * y;

  AdmmResult r;
  r.x = Vec::Zero(n);
  r.z = Vec::Zero(n);
  r.v = Vec::Zero(n);
  for (int it = 0; it < opt.iters; it++) {
    r.x = solver.solve(aty + opt.rho * (r.z - r.v));
    r.z = soft_threshold(r.x + r.v, opt.lambda / opt.rho);
    r.v += r.x - r.z;
    r.objective.push_back(lasso_objective(a, y, r.z, opt.lambda));
    r.x_trace.push_back(r.x);
  }
  return r;
}

NodeFactor node_factor(const Mat& a_k, const Vec& y, const AdmmOptions& opt,
                       int k_total, YScaling scaling) {
  check_inputs(a_k, y, opt);
  if (k_total < 1) throw std::invalid_argument("node count below 1");
  Eigen::Index n = a_k.cols();
  Mat normal = a_k.transpose() * a_k + opt.rho * Mat::Identity(n, n);
  Eigen::LDLT<Mat> solver(normal);
  Vec y_s = scaling == YScaling::over_k ? Vec(y / (double)k_total) : y;
  NodeFactor f;
  f.b_bar = opt.rho * solver.solve(Mat::Identity(n, n));
  f.alpha = solver.solve(a_k.transpose() * y_s);
  return f;
}

std::vector<int> split_columns(int cols, int k) {
  if (cols < 1 || k < 1 || k > cols)
    throw std::invalid_argument("cannot split columns across nodes");
  std::vector<int> sizes(k, cols / k);
  for (int i = 0; i < cols % k; i++) sizes[i]++;
  return sizes;
}

AdmmResult lasso_admm_split(const Mat& a, const Vec& y, const AdmmOptions& opt,
                            const std::vector<int>& cols_per_node,
                            YScaling scaling) {
  check_inputs(a, y, opt);
  int total = 0;
  for (int c : cols_per_node) {
    if (c < 1) throw std::invalid_argument("empty column block");
    total += c;
  }
  if (total != a.cols()) throw std::invalid_argument("blocks must cover A");

  int k_total = (int)cols_per_node.size();
  std::vector<NodeFactor> fac;
  int at = 0;
  for (int c : cols_per_node) {
    fac.push_back(
        node_factor(a.middleCols(at, c), y, opt, k_total, scaling));
    at += c;
  }

  AdmmResult r;
  r.x = Vec::Zero(a.cols());
  r.z = Vec::Zero(a.cols());
  r.v = Vec::Zero(a.cols());
  for (int it = 0; it < opt.iters; it++) {
    at = 0;
    for (int k = 0; k < k_total; k++) {
      int c = cols_per_node[k];
      auto xk = r.x.segment(at, c);
      auto zk = r.z.segment(at, c);
      auto vk = r.v.segment(at, c);
      xk = fac[k].alpha + fac[k].b_bar * (zk - vk);
      zk = soft_threshold(Vec(xk + vk), opt.lambda / opt.rho);
      vk += xk - zk;
      at += c;
    }
    r.objective.push_back(lasso_objective(a, y, r.z, opt.lambda));
    r.x_trace.push_back(r.x);
  }
  return r;
}

Vec lasso_ista(const Mat& a, const Vec& y, double lambda, int iters) {
  if (a.rows() == 0 || a.cols() == 0)
    throw std::invalid_argument("empty design matrix");
  if (y.size() != a.rows())
    throw std::invalid_argument("target length != row count");
  Mat gram = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  double lip = es.eigenvalues().maxCoeff();
  if (!(lip > 0.0)) throw std::invalid_argument("zero design matrix");
  double t = 1.0 / lip;
  Vec aty = a.transpose() * y;
  Vec x = Vec::Zero(a.cols());
  for (int it = 0; it < iters; it++)
    x = soft_threshold(Vec(x - t * (gram * x - aty)), t * lambda);
  return x;
}

}  // namespace pcadmm
