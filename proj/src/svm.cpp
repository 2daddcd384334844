#include "sartex/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sartex/error.hpp"

namespace sartex::classify {

namespace {

constexpr double kTau = 1e-12;

Error svm_error(const std::string& message) {
  return Error(ErrorKind::Training, "svm", message);
}

double auto_gamma(const std::vector<Features>& z) {
  // Mean per-feature variance of the standardized data. Constant features
  // contribute 0, so this can fall below 1.
  const double n = static_cast<double>(z.size());
  double total = 0.0;
  for (std::size_t f = 0; f < texture::kFeatureCount; ++f) {
    double mean = 0.0;
    for (const auto& row : z) mean += row[f];
    mean /= n;
    double ss = 0.0;
    for (const auto& row : z) ss += (row[f] - mean) * (row[f] - mean);
    total += ss / n;
  }
  const double mean_var = total / double(texture::kFeatureCount);
  return mean_var > 0.0 ? 1.0 / (double(texture::kFeatureCount) * mean_var)
                        : 1.0 / double(texture::kFeatureCount);
}

}  // namespace

double rbf_kernel(const Features& a, const Features& b, double gamma) {
  double d2 = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) {
    const double d = a[f] - b[f];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

double SvmModel::decision_standardized(const Features& z) const {
  double sum = bias;
  for (std::size_t i = 0; i < support_vectors.size(); ++i) {
    sum += dual_coef[i] * rbf_kernel(support_vectors[i], z, gamma);
  }
  return sum;
}

double SvmModel::decision(const Features& x) const {
  return decision_standardized(standardizer.apply(x));
}

SvmFit fit_svm(const LabeledDataset& data, const SvmParams& params, std::uint64_t seed) {
  validate_for_training(data);
  if (!(params.c > 0.0)) throw svm_error("penalty C must be > 0");
  if (params.gamma && !(*params.gamma > 0.0)) throw svm_error("gamma must be > 0");
  if (!(params.tolerance > 0.0)) throw svm_error("tolerance must be > 0");

  const std::size_t n = data.size();
  const Standardizer standardizer = Standardizer::fit(data);
  std::vector<Features> z(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = standardizer.apply(data.samples[i].x.values);
    y[i] = data.samples[i].label == 1 ? 1.0 : -1.0;
  }
  const double gamma = params.gamma ? *params.gamma : auto_gamma(z);
  const double c = params.c;

  // Full kernel cache; chip datasets are a few hundred samples.
  std::vector<double> k(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    k[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      k[i * n + j] = k[j * n + i] = rbf_kernel(z[i], z[j], gamma);
    }
  }
  auto q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * k[i * n + j]; };

  // Dual: minimize 0.5 a'Qa - e'a  s.t.  y'a = 0, 0 <= a <= C.  grad = Qa - e.
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  auto in_up = [&](std::size_t t) {
    return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0);
  };
  auto in_low = [&](std::size_t t) {
    return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < c);
  };

  long iter = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (; iter < params.max_iterations; ++iter) {
    // i: maximal -y grad over I_up.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i_sel = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (in_up(t) && -y[t] * grad[t] > gmax) {
        gmax = -y[t] * grad[t];
        i_sel = t;
      }
    }
    // j: second-order selection over I_low; also track min -y grad for the gap.
    double gmin = std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    std::size_t j_sel = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = -y[t] * grad[t];
      gmin = std::min(gmin, v);
      if (i_sel == n) continue;
      const double b = gmax - v;
      if (b > 0) {
        double a = k[i_sel * n + i_sel] + k[t * n + t] - 2.0 * k[i_sel * n + t];
        if (a <= 0) a = kTau;
        const double obj = -(b * b) / a;
        if (obj < best_obj) {
          best_obj = obj;
          j_sel = t;
        }
      }
    }
    gap = gmax - gmin;
    if (i_sel == n || j_sel == n || gap < params.tolerance) break;

    const std::size_t i = i_sel;
    const std::size_t j = j_sel;
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    double quad = k[i * n + i] + k[j * n + j] - 2.0 * k[i * n + j];
    if (quad <= 0) quad = kTau;

    // Two-variable subproblem, following the LIBSVM update rules.
    if (y[i] != y[j]) {
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = -diff; }
      }
      if (diff > 0) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = c - diff; }
      } else {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = c + diff; }
      }
    } else {
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = sum - c; }
      } else {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = sum; }
      }
      if (sum > c) {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = sum - c; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = sum; }
      }
    }

    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q(t, i) * dai + q(t, j) * daj;
  }
  if (!(gap < params.tolerance)) {
    throw svm_error("SMO did not converge after " + std::to_string(iter) +
                    " iterations (gap " + std::to_string(gap) + ")");
  }

  // Bias from free multipliers; with none, the midpoint of the feasible range.
  double b_sum = 0.0;
  std::size_t n_free = 0;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double v = -y[t] * grad[t];
    if (alpha[t] > 0 && alpha[t] < c) {
      b_sum += v;
      ++n_free;
    }
    if (in_up(t)) lo = std::max(lo, v);
    if (in_low(t)) hi = std::min(hi, v);
  }
  double bias = 0.0;
  if (n_free > 0) {
    bias = b_sum / static_cast<double>(n_free);
  } else if (std::isfinite(lo) && std::isfinite(hi)) {
    bias = 0.5 * (lo + hi);
  } else {
    bias = std::isfinite(lo) ? lo : hi;
  }

  SvmFit fit;
  fit.iterations = iter;
  fit.alpha = alpha;
  fit.model.standardizer = standardizer;
  fit.model.bias = bias;
  fit.model.gamma = gamma;
  fit.model.c = c;
  fit.model.seed = seed;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0) {
      fit.model.support_vectors.push_back(z[t]);
      fit.model.dual_coef.push_back(alpha[t] * y[t]);
    }
  }
  return fit;
}

SvmModel train_svm(const LabeledDataset& data, const SvmParams& params, std::uint64_t seed) {
  return fit_svm(data, params, seed).model;
}

double kkt_violation(const SvmModel& model, const LabeledDataset& data,
                     const std::vector<double>& alpha) {
  double worst = 0.0;
  for (std::size_t t = 0; t < data.size(); ++t) {
    const double y = data.samples[t].label == 1 ? 1.0 : -1.0;
    const double margin = y * model.decision(data.samples[t].x.values);
    double v = 0.0;
    if (alpha[t] <= 0.0) {
      v = std::max(0.0, 1.0 - margin);
    } else if (alpha[t] >= model.c) {
      v = std::max(0.0, margin - 1.0);
    } else {
      v = std::abs(margin - 1.0);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace sartex::classify
