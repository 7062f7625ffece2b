#include "panelkit/inference.hpp"

#include "panelkit/error.hpp"
#include "panelkit/rng.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace panelkit {

namespace {

double denominator(const Eigen::VectorXd& beta) {
  const double d = 1.0 - beta.sum();
  if (std::abs(d) <= 1e-8) {
    throw Error(ErrorCode::UnitRootDenominator, "lag coefficients sum to one; long-run effect undefined");
  }
  return d;
}

}  // namespace

double long_run_effect(double alpha, const Eigen::VectorXd& beta) { return alpha / denominator(beta); }

Eigen::VectorXd long_run_gradient(double alpha, const Eigen::VectorXd& beta) {
  const double d = denominator(beta);
  Eigen::VectorXd g(1 + beta.size());
  g(0) = 1.0 / d;
  g.tail(beta.size()).setConstant(alpha / (d * d));
  return g;
}

double delta_method_lr(double alpha, const Eigen::VectorXd& beta, const Eigen::MatrixXd& cov) {
  if (cov.rows() != beta.size() + 1 || cov.cols() != beta.size() + 1) {
    throw Error(ErrorCode::InvalidArgument, "covariance must cover (alpha, beta) jointly");
  }
  const Eigen::VectorXd g = long_run_gradient(alpha, beta);
  const double var = g.dot(cov * g);
  if (!(var >= 0.0)) throw Error(ErrorCode::NegativeVariance, "delta-method variance is negative");
  return std::sqrt(var);
}

Eigen::MatrixXd treatment_lag_block(const Eigen::MatrixXd& slope_cov, Index treatment, Index d_alpha) {
  const Index L = slope_cov.rows() - d_alpha;
  std::vector<Index> idx{treatment};
  for (Index j = 0; j < L; ++j) idx.push_back(d_alpha + j);
  return slope_cov(idx, idx);
}

void parallel_for(int count, int threads, const std::function<void(int)>& f) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(count, 1));
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<Index> bootstrap_draw(Index num_units, std::uint64_t seed, int replicate) {
  Rng rng(derive_seed(derive_seed(seed, static_cast<std::uint64_t>(replicate)), 0));
  std::vector<Index> draw(num_units);
  for (auto& d : draw) d = static_cast<Index>(rng.index(static_cast<std::size_t>(num_units)));
  return draw;
}

std::uint64_t bootstrap_procedure_seed(std::uint64_t seed, int replicate) {
  return derive_seed(derive_seed(seed, static_cast<std::uint64_t>(replicate)), 1);
}

BootstrapResult cluster_bootstrap(const RegressionSample& sample, const BootstrapProcedure& procedure,
                                  const BootstrapOptions& options) {
  const int B = options.replications;
  if (B < 2) throw Error(ErrorCode::InvalidArgument, "bootstrap needs at least 2 replications");

  std::vector<std::optional<Eigen::VectorXd>> results(B);
  parallel_for(B, options.threads, [&](int b) {
    const auto draw = bootstrap_draw(sample.num_units(), options.seed, b);
    try {
      const RegressionSample resampled = sample.select_units(draw, true);
      results[b] = procedure(resampled, bootstrap_procedure_seed(options.seed, b));
    } catch (const Error&) {
      results[b].reset();
    }
  });

  BootstrapResult out;
  out.requested = B;
  Index q = -1;
  for (int b = 0; b < B; ++b) {
    if (!results[b]) {
      out.failed_replicates.push_back(b);
    } else if (q < 0) {
      q = results[b]->size();
    }
  }
  if (static_cast<double>(out.failed_replicates.size()) > 0.1 * B || q < 0) {
    throw Error(ErrorCode::TooManyFailedReplicates, std::to_string(out.failed_replicates.size()) + " of " +
                                                         std::to_string(B) + " bootstrap replicates failed");
  }
  const Index ok = B - static_cast<Index>(out.failed_replicates.size());
  out.replicates.resize(ok, q);
  Index row = 0;
  for (int b = 0; b < B; ++b) {
    if (results[b]) out.replicates.row(row++) = results[b]->transpose();
  }
  const Eigen::RowVectorXd mean = out.replicates.colwise().mean();
  out.standard_errors =
      ((out.replicates.rowwise() - mean).colwise().squaredNorm() / static_cast<double>(ok - 1)).cwiseSqrt().transpose();
  return out;
}

SmallBiasDiagnostic small_bias_diagnostic(double n, double p, double m) {
  SmallBiasDiagnostic d;
  const double dim = std::max(p, m);
  d.ratio = dim * dim / n;
  d.debiasing_recommended = d.ratio >= 1.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "(p v m)^2/n = %.3g: %s", d.ratio,
                d.debiasing_recommended ? "small-bias condition fails, debiasing recommended"
                                        : "small-bias condition plausible");
  d.verdict = buf;
  return d;
}

}  // namespace panelkit
