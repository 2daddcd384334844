#include "sartex/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sartex/error.hpp"
#include "sartex/random.hpp"

namespace sartex::classify {

namespace {

constexpr std::uint64_t kMlpSalt = 0x3A1F;

Error mlp_error(const std::string& message) { return Error(ErrorKind::Training, "mlp", message); }

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// -[y log s(t) + (1 - y) log(1 - s(t))] without forming s(t).
double bce_with_logit(double t, int y) {
  return std::max(t, 0.0) - t * y + std::log1p(std::exp(-std::abs(t)));
}

// activations[0] is the input; activations[l + 1] the output of layer l
// (post-ReLU for hidden layers, the raw logit for the last one).
void forward(const MlpModel& m, std::span<const double> z,
             std::vector<std::vector<double>>& activations) {
  activations.resize(m.layers.size() + 1);
  activations[0].assign(z.begin(), z.end());
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const DenseLayer& layer = m.layers[l];
    const auto& in = activations[l];
    auto& out = activations[l + 1];
    out.assign(static_cast<std::size_t>(layer.outputs), 0.0);
    const bool hidden = l + 1 < m.layers.size();
    for (int o = 0; o < layer.outputs; ++o) {
      const double* w = layer.weights.data() + static_cast<std::size_t>(o) * layer.inputs;
      double s = layer.bias[static_cast<std::size_t>(o)];
      for (int i = 0; i < layer.inputs; ++i) s += w[i] * in[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(o)] = hidden ? std::max(s, 0.0) : s;
    }
  }
}

}  // namespace

double MlpModel::logit_standardized(std::span<const double> z) const {
  std::vector<std::vector<double>> act;
  forward(*this, z, act);
  return act.back()[0];
}

double MlpModel::probability(const Features& x) const {
  const Features z = standardizer.apply(x);
  return sigmoid(logit_standardized(z));
}

std::vector<int> layer_sizes(const MlpModel& model) {
  std::vector<int> sizes;
  if (model.layers.empty()) return sizes;
  sizes.push_back(model.layers.front().inputs);
  for (const auto& l : model.layers) sizes.push_back(l.outputs);
  return sizes;
}

MlpModel init_mlp(const std::vector<int>& sizes, std::uint64_t seed) {
  if (sizes.size() < 2 || sizes.front() != static_cast<int>(texture::kFeatureCount) ||
      sizes.back() != 1) {
    throw mlp_error("layer sizes must start at 12 inputs and end at 1 output");
  }
  for (int s : sizes) {
    if (s < 1) throw mlp_error("layer sizes must be positive");
  }
  MlpModel m;
  m.standardizer = Standardizer::identity();
  m.seed = seed;
  random::Engine rng(random::derive(seed, 0, kMlpSalt));
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    DenseLayer layer;
    layer.inputs = sizes[l];
    layer.outputs = sizes[l + 1];
    const double r = std::sqrt(6.0 / double(layer.inputs + layer.outputs));
    layer.weights.resize(static_cast<std::size_t>(layer.inputs) * layer.outputs);
    for (double& w : layer.weights) w = random::uniform(rng, -r, r);
    layer.bias.assign(static_cast<std::size_t>(layer.outputs), 0.0);
    m.layers.push_back(std::move(layer));
  }
  return m;
}

double mlp_loss(const MlpModel& model, std::span<const Features> inputs,
                std::span<const int> labels, MlpGradient* grad) {
  const std::size_t n_layers = model.layers.size();
  if (grad) {
    grad->weights.resize(n_layers);
    grad->bias.resize(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
      grad->weights[l].assign(model.layers[l].weights.size(), 0.0);
      grad->bias[l].assign(model.layers[l].bias.size(), 0.0);
    }
  }
  if (inputs.empty()) return 0.0;

  std::vector<std::vector<double>> act;
  std::vector<double> delta;
  std::vector<double> prev_delta;
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(inputs.size());

  for (std::size_t s = 0; s < inputs.size(); ++s) {
    forward(model, inputs[s], act);
    const double logit = act.back()[0];
    loss += bce_with_logit(logit, labels[s]);
    if (!grad) continue;

    // d loss / d logit for sigmoid + BCE.
    delta.assign(1, (sigmoid(logit) - labels[s]) * inv_n);
    for (std::size_t l = n_layers; l-- > 0;) {
      const DenseLayer& layer = model.layers[l];
      const auto& in = act[l];
      auto& gw = grad->weights[l];
      auto& gb = grad->bias[l];
      for (int o = 0; o < layer.outputs; ++o) {
        const double d = delta[static_cast<std::size_t>(o)];
        gb[static_cast<std::size_t>(o)] += d;
        double* row = gw.data() + static_cast<std::size_t>(o) * layer.inputs;
        for (int i = 0; i < layer.inputs; ++i) row[i] += d * in[static_cast<std::size_t>(i)];
      }
      if (l == 0) break;
      // Propagate through the weights and the ReLU of the layer below.
      prev_delta.assign(static_cast<std::size_t>(layer.inputs), 0.0);
      for (int o = 0; o < layer.outputs; ++o) {
        const double d = delta[static_cast<std::size_t>(o)];
        const double* w = layer.weights.data() + static_cast<std::size_t>(o) * layer.inputs;
        for (int i = 0; i < layer.inputs; ++i) prev_delta[static_cast<std::size_t>(i)] += w[i] * d;
      }
      for (std::size_t i = 0; i < prev_delta.size(); ++i) {
        if (in[i] <= 0.0) prev_delta[i] = 0.0;
      }
      delta.swap(prev_delta);
    }
  }
  return loss * inv_n;
}

MlpModel train_mlp(const LabeledDataset& data, const MlpParams& params, std::uint64_t seed) {
  validate_for_training(data);
  if (params.epochs < 0) throw mlp_error("epochs must be >= 0");
  if (!(params.learning_rate > 0.0)) throw mlp_error("learning rate must be > 0");

  std::vector<int> sizes{static_cast<int>(texture::kFeatureCount)};
  sizes.insert(sizes.end(), params.hidden.begin(), params.hidden.end());
  sizes.push_back(1);
  MlpModel model = init_mlp(sizes, seed);
  model.standardizer = Standardizer::fit(data);

  std::vector<Features> z;
  std::vector<int> y;
  z.reserve(data.size());
  y.reserve(data.size());
  for (const auto& s : data.samples) {
    z.push_back(model.standardizer.apply(s.x.values));
    y.push_back(s.label);
  }

  const std::size_t n_layers = model.layers.size();
  MlpGradient m1;
  MlpGradient m2;
  MlpGradient g;
  m1.weights.resize(n_layers);
  m1.bias.resize(n_layers);
  for (std::size_t l = 0; l < n_layers; ++l) {
    m1.weights[l].assign(model.layers[l].weights.size(), 0.0);
    m1.bias[l].assign(model.layers[l].bias.size(), 0.0);
  }
  m2 = m1;

  auto adam = [&](std::vector<double>& theta, const std::vector<double>& gr,
                  std::vector<double>& mom, std::vector<double>& vel, double c1, double c2) {
    for (std::size_t k = 0; k < theta.size(); ++k) {
      mom[k] = params.beta1 * mom[k] + (1.0 - params.beta1) * gr[k];
      vel[k] = params.beta2 * vel[k] + (1.0 - params.beta2) * gr[k] * gr[k];
      const double mhat = mom[k] / c1;
      const double vhat = vel[k] / c2;
      theta[k] -= params.learning_rate * mhat / (std::sqrt(vhat) + params.epsilon);
    }
  };

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const double loss = mlp_loss(model, z, y, &g);
    if (!std::isfinite(loss)) {
      throw mlp_error("loss became non-finite at epoch " + std::to_string(epoch));
    }
    const double c1 = 1.0 - std::pow(params.beta1, epoch + 1);
    const double c2 = 1.0 - std::pow(params.beta2, epoch + 1);
    for (std::size_t l = 0; l < n_layers; ++l) {
      adam(model.layers[l].weights, g.weights[l], m1.weights[l], m2.weights[l], c1, c2);
      adam(model.layers[l].bias, g.bias[l], m1.bias[l], m2.bias[l], c1, c2);
    }
  }
  return model;
}

}  // namespace sartex::classify
