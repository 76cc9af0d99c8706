#pragma once
// From-scratch feedforward networks: forward pass, exact reverse-mode
// gradients, plain gradient-descent and adaptive (Adam) updates, seeded
// initialization, and bit-exact binary checkpoints.
//
// Weight layout: weights[l] is a row-major (layer_sizes[l+1] x layer_sizes[l])
// matrix, so weights[l][i * n_in + j] connects input unit j to output unit i.
// Activation derivatives are evaluated from the activation value itself, so
// the backward pass only needs the per-layer activations, not pre-activations.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "growthlab/errors.hpp"

namespace growthlab {

enum class Activation { kIdentity, kTanh, kLogistic, kSquash };

inline std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kTanh: return "tanh";
    case Activation::kLogistic: return "logistic";
    case Activation::kSquash: return "squash";
  }
  throw std::logic_error("unreachable activation");
}

inline Activation activation_from_name(std::string_view name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "tanh") return Activation::kTanh;
  if (name == "logistic") return Activation::kLogistic;
  if (name == "squash") return Activation::kSquash;
  throw ConfigError("unknown activation name: '" + std::string(name) + "'");
}

// Bounded, strictly monotone, everywhere-differentiable map from a raw network
// output to an action in [a_lo, a_hi].
inline double actor_squash(double u, double a_lo, double a_hi) {
  return a_lo + (a_hi - a_lo) / (1.0 + std::exp(-u));
}

struct MlpParams {
  std::vector<int> layer_sizes;              // input first, output last
  std::vector<std::vector<double>> weights;  // per weight layer, row-major
  std::vector<std::vector<double>> biases;   // per weight layer
  Activation hidden_activation = Activation::kTanh;
  Activation output_activation = Activation::kIdentity;
  double squash_lo = 0.0;  // used only when output_activation == kSquash
  double squash_hi = 1.0;
};

// dLoss/dParameter, shape-congruent with the network it came from, plus
// dLoss/dInput for chaining one network's backward pass into another's.
struct Gradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
  std::vector<double> input;

  void zero() {
    for (auto& w : weights) std::fill(w.begin(), w.end(), 0.0);
    for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
    std::fill(input.begin(), input.end(), 0.0);
  }

  void add_scaled(const Gradients& other, double scale) {
    for (std::size_t l = 0; l < weights.size(); ++l) {
      for (std::size_t i = 0; i < weights[l].size(); ++i) weights[l][i] += scale * other.weights[l][i];
      for (std::size_t i = 0; i < biases[l].size(); ++i) biases[l][i] += scale * other.biases[l][i];
    }
    for (std::size_t i = 0; i < input.size(); ++i) input[i] += scale * other.input[i];
  }
};

inline Gradients make_gradients(const MlpParams& p) {
  Gradients g;
  g.weights.resize(p.weights.size());
  g.biases.resize(p.biases.size());
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    g.weights[l].assign(p.weights[l].size(), 0.0);
    g.biases[l].assign(p.biases[l].size(), 0.0);
  }
  g.input.assign(p.layer_sizes.empty() ? 0 : p.layer_sizes.front(), 0.0);
  return g;
}

namespace detail {

inline double activate(Activation f, double z, double lo, double hi) {
  switch (f) {
    case Activation::kIdentity: return z;
    case Activation::kTanh: return std::tanh(z);
    case Activation::kLogistic: return 1.0 / (1.0 + std::exp(-z));
    case Activation::kSquash: return actor_squash(z, lo, hi);
  }
  throw std::logic_error("unreachable activation");
}

// Derivative expressed through the activation value a = f(z).
inline double activate_derivative(Activation f, double a, double lo, double hi) {
  switch (f) {
    case Activation::kIdentity: return 1.0;
    case Activation::kTanh: return 1.0 - a * a;
    case Activation::kLogistic: return a * (1.0 - a);
    case Activation::kSquash: return (a - lo) * (hi - a) / (hi - lo);
  }
  throw std::logic_error("unreachable activation");
}

inline void check_shapes(const MlpParams& p) {
  if (p.layer_sizes.size() < 2) throw std::invalid_argument("network needs at least 2 layers");
  const std::size_t n_layers = p.layer_sizes.size() - 1;
  if (p.weights.size() != n_layers || p.biases.size() != n_layers) {
    throw std::invalid_argument("weight/bias layer count mismatch");
  }
  for (std::size_t l = 0; l < n_layers; ++l) {
    const std::size_t rows = static_cast<std::size_t>(p.layer_sizes[l + 1]);
    const std::size_t cols = static_cast<std::size_t>(p.layer_sizes[l]);
    if (p.weights[l].size() != rows * cols) throw std::invalid_argument("weight matrix shape mismatch");
    if (p.biases[l].size() != rows) throw std::invalid_argument("bias vector shape mismatch");
  }
}

}  // namespace detail

// Per-layer activations kept around for the backward pass. Reused across
// calls to avoid reallocating in training loops.
struct ForwardTrace {
  std::vector<std::vector<double>> activations;  // [0] = input ... [L] = output
};

inline void forward_trace_into(const MlpParams& p, std::span<const double> x, ForwardTrace& tr) {
  detail::check_shapes(p);
  if (x.size() != static_cast<std::size_t>(p.layer_sizes.front())) {
    throw std::invalid_argument("forward: input size mismatch");
  }
  const std::size_t n_layers = p.layer_sizes.size() - 1;
  tr.activations.resize(n_layers + 1);
  tr.activations[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < n_layers; ++l) {
    const std::size_t n_in = static_cast<std::size_t>(p.layer_sizes[l]);
    const std::size_t n_out = static_cast<std::size_t>(p.layer_sizes[l + 1]);
    const Activation f = (l + 1 == n_layers) ? p.output_activation : p.hidden_activation;
    const std::vector<double>& in = tr.activations[l];
    std::vector<double>& out = tr.activations[l + 1];
    out.resize(n_out);
    const double* w = p.weights[l].data();
    for (std::size_t i = 0; i < n_out; ++i) {
      const double* row = w + i * n_in;
      double acc = p.biases[l][i];
      for (std::size_t j = 0; j < n_in; ++j) acc += row[j] * in[j];
      out[i] = detail::activate(f, acc, p.squash_lo, p.squash_hi);
    }
  }
}

inline std::vector<double> forward(const MlpParams& p, std::span<const double> x) {
  ForwardTrace tr;
  forward_trace_into(p, x, tr);
  return tr.activations.back();
}

// Reverse-mode gradients of (output . upstream) with respect to every weight,
// bias, and the input vector. `upstream` is dLoss/dOutput.
inline void backward_into(const MlpParams& p, const ForwardTrace& tr,
                          std::span<const double> upstream, Gradients& g) {
  const std::size_t n_layers = p.layer_sizes.size() - 1;
  if (upstream.size() != static_cast<std::size_t>(p.layer_sizes.back())) {
    throw std::invalid_argument("backward: upstream size mismatch");
  }
  if (g.weights.size() != n_layers) g = make_gradients(p);

  // delta = dLoss/d(pre-activation) of the current layer, built top-down.
  static thread_local std::vector<double> delta, delta_prev;
  delta.assign(upstream.begin(), upstream.end());
  {
    const std::vector<double>& out = tr.activations[n_layers];
    for (std::size_t i = 0; i < delta.size(); ++i) {
      delta[i] *= detail::activate_derivative(p.output_activation, out[i], p.squash_lo, p.squash_hi);
    }
  }
  for (std::size_t l = n_layers; l-- > 0;) {
    const std::size_t n_in = static_cast<std::size_t>(p.layer_sizes[l]);
    const std::size_t n_out = static_cast<std::size_t>(p.layer_sizes[l + 1]);
    const std::vector<double>& in = tr.activations[l];
    double* gw = g.weights[l].data();
    for (std::size_t i = 0; i < n_out; ++i) {
      const double d = delta[i];
      g.biases[l][i] = d;
      double* grow = gw + i * n_in;
      for (std::size_t j = 0; j < n_in; ++j) grow[j] = d * in[j];
    }
    // Propagate delta through W^T, then through the previous activation.
    delta_prev.assign(n_in, 0.0);
    const double* w = p.weights[l].data();
    for (std::size_t i = 0; i < n_out; ++i) {
      const double d = delta[i];
      const double* row = w + i * n_in;
      for (std::size_t j = 0; j < n_in; ++j) delta_prev[j] += row[j] * d;
    }
    if (l > 0) {
      const Activation f = p.hidden_activation;
      for (std::size_t j = 0; j < n_in; ++j) {
        delta_prev[j] *= detail::activate_derivative(f, in[j], p.squash_lo, p.squash_hi);
      }
    }
    delta.swap(delta_prev);
  }
  g.input = delta;  // dLoss/dInput: no activation applied to the input layer
}

inline Gradients backward(const MlpParams& p, const ForwardTrace& tr,
                          std::span<const double> upstream) {
  Gradients g = make_gradients(p);
  backward_into(p, tr, upstream, g);
  return g;
}

inline Gradients backward(const MlpParams& p, std::span<const double> x,
                          std::span<const double> upstream) {
  ForwardTrace tr;
  forward_trace_into(p, x, tr);
  return backward(p, tr, upstream);
}

// Plain gradient descent: every parameter moves by -eta * gradient.
inline void sgd_update(MlpParams& p, const Gradients& g, double eta) {
  detail::check_shapes(p);
  if (g.weights.size() != p.weights.size()) throw std::invalid_argument("sgd_update: shape mismatch");
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    if (g.weights[l].size() != p.weights[l].size() || g.biases[l].size() != p.biases[l].size()) {
      throw std::invalid_argument("sgd_update: shape mismatch");
    }
    for (std::size_t i = 0; i < p.weights[l].size(); ++i) p.weights[l][i] -= eta * g.weights[l][i];
    for (std::size_t i = 0; i < p.biases[l].size(); ++i) p.biases[l][i] -= eta * g.biases[l][i];
  }
}

// Weights drawn uniform on [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
// Deterministic given the generator state.
inline MlpParams init_mlp(const std::vector<int>& layer_sizes, Activation hidden,
                          Activation output, std::mt19937_64& rng) {
  if (layer_sizes.size() < 2) throw std::invalid_argument("init_mlp: need at least 2 layers");
  for (int n : layer_sizes) {
    if (n < 1) throw std::invalid_argument("init_mlp: layer sizes must be positive");
  }
  MlpParams p;
  p.layer_sizes = layer_sizes;
  p.hidden_activation = hidden;
  p.output_activation = output;
  const std::size_t n_layers = layer_sizes.size() - 1;
  p.weights.resize(n_layers);
  p.biases.resize(n_layers);
  for (std::size_t l = 0; l < n_layers; ++l) {
    const std::size_t n_in = static_cast<std::size_t>(layer_sizes[l]);
    const std::size_t n_out = static_cast<std::size_t>(layer_sizes[l + 1]);
    const double bound = 1.0 / std::sqrt(static_cast<double>(n_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    p.weights[l].resize(n_in * n_out);
    for (double& w : p.weights[l]) w = dist(rng);
    p.biases[l].assign(n_out, 0.0);
  }
  return p;
}

// Scales gradients so their global L2 norm (weights and biases, not the input
// gradient) is at most max_norm. No-op when already within the budget.
inline void clip_global_norm(Gradients& g, double max_norm) {
  double sq = 0.0;
  for (const auto& w : g.weights) for (double v : w) sq += v * v;
  for (const auto& b : g.biases) for (double v : b) sq += v * v;
  const double norm = std::sqrt(sq);
  if (norm <= max_norm || norm == 0.0) return;
  const double scale = max_norm / norm;
  for (auto& w : g.weights) for (double& v : w) v *= scale;
  for (auto& b : g.biases) for (double& v : b) v *= scale;
}

// Adaptive-moment estimation, the optional faster optimizer. Standard
// constants; `step` counts updates for bias correction.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  std::vector<std::vector<double>> m_w, v_w, m_b, v_b;
};

inline AdamState make_adam_state(const MlpParams& p) {
  AdamState s;
  s.m_w.resize(p.weights.size());
  s.v_w.resize(p.weights.size());
  s.m_b.resize(p.biases.size());
  s.v_b.resize(p.biases.size());
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    s.m_w[l].assign(p.weights[l].size(), 0.0);
    s.v_w[l].assign(p.weights[l].size(), 0.0);
    s.m_b[l].assign(p.biases[l].size(), 0.0);
    s.v_b[l].assign(p.biases[l].size(), 0.0);
  }
  return s;
}

inline void adam_update(MlpParams& p, AdamState& s, const Gradients& g, double eta) {
  if (s.m_w.size() != p.weights.size()) throw std::invalid_argument("adam_update: shape mismatch");
  s.step += 1;
  const double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
  const double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
  auto apply = [&](std::vector<double>& param, std::vector<double>& m,
                   std::vector<double>& v, const std::vector<double>& grad) {
    for (std::size_t i = 0; i < param.size(); ++i) {
      m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * grad[i];
      v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * grad[i] * grad[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      param[i] -= eta * m_hat / (std::sqrt(v_hat) + s.eps);
    }
  };
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    apply(p.weights[l], s.m_w[l], s.v_w[l], g.weights[l]);
    apply(p.biases[l], s.m_b[l], s.v_b[l], g.biases[l]);
  }
}

// ---------------------------------------------------------------------------
// Checkpoints
//
// Flat binary file: magic, layer sizes, activation names, squash bounds, the
// input scale s_ref, then for each layer the row-major weight matrix followed
// by the bias vector, all 64-bit doubles. Round-trips bit-exactly.
// ---------------------------------------------------------------------------

struct Checkpoint {
  MlpParams net;
  double s_ref = 1.0;
};

namespace detail {

inline constexpr char kCheckpointMagic[8] = {'G', 'L', 'A', 'B', 'N', 'E', 'T', '1'};

template <class T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void read_pod(std::ifstream& in, T& v, const std::filesystem::path& path) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("truncated checkpoint: " + path.string());
}

inline void write_name(std::ofstream& out, std::string_view name) {
  const std::uint32_t len = static_cast<std::uint32_t>(name.size());
  write_pod(out, len);
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
}

inline std::string read_name(std::ifstream& in, const std::filesystem::path& path) {
  std::uint32_t len = 0;
  read_pod(in, len, path);
  if (len > 64) throw IoError("corrupt checkpoint header: " + path.string());
  std::string name(len, '\0');
  in.read(name.data(), len);
  if (!in) throw IoError("truncated checkpoint: " + path.string());
  return name;
}

}  // namespace detail

inline void save_checkpoint(const MlpParams& p, double s_ref,
                            const std::filesystem::path& path) {
  detail::check_shapes(p);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path.string());
  out.write(detail::kCheckpointMagic, sizeof(detail::kCheckpointMagic));
  detail::write_pod(out, static_cast<std::uint32_t>(p.layer_sizes.size()));
  for (int n : p.layer_sizes) detail::write_pod(out, static_cast<std::uint32_t>(n));
  detail::write_name(out, activation_name(p.hidden_activation));
  detail::write_name(out, activation_name(p.output_activation));
  detail::write_pod(out, p.squash_lo);
  detail::write_pod(out, p.squash_hi);
  detail::write_pod(out, s_ref);
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    out.write(reinterpret_cast<const char*>(p.weights[l].data()),
              static_cast<std::streamsize>(p.weights[l].size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(p.biases[l].data()),
              static_cast<std::streamsize>(p.biases[l].size() * sizeof(double)));
  }
  if (!out) throw IoError("checkpoint write failed: " + path.string());
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  char magic[sizeof(detail::kCheckpointMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, detail::kCheckpointMagic, sizeof(magic)) != 0) {
    throw IoError("not a growthlab checkpoint: " + path.string());
  }
  Checkpoint ck;
  std::uint32_t n_sizes = 0;
  detail::read_pod(in, n_sizes, path);
  if (n_sizes < 2 || n_sizes > 64) throw IoError("corrupt checkpoint header: " + path.string());
  ck.net.layer_sizes.resize(n_sizes);
  for (auto& n : ck.net.layer_sizes) {
    std::uint32_t v = 0;
    detail::read_pod(in, v, path);
    n = static_cast<int>(v);
  }
  ck.net.hidden_activation = activation_from_name(detail::read_name(in, path));
  ck.net.output_activation = activation_from_name(detail::read_name(in, path));
  detail::read_pod(in, ck.net.squash_lo, path);
  detail::read_pod(in, ck.net.squash_hi, path);
  detail::read_pod(in, ck.s_ref, path);
  const std::size_t n_layers = ck.net.layer_sizes.size() - 1;
  ck.net.weights.resize(n_layers);
  ck.net.biases.resize(n_layers);
  for (std::size_t l = 0; l < n_layers; ++l) {
    const std::size_t n_in = static_cast<std::size_t>(ck.net.layer_sizes[l]);
    const std::size_t n_out = static_cast<std::size_t>(ck.net.layer_sizes[l + 1]);
    ck.net.weights[l].resize(n_in * n_out);
    in.read(reinterpret_cast<char*>(ck.net.weights[l].data()),
            static_cast<std::streamsize>(n_in * n_out * sizeof(double)));
    ck.net.biases[l].resize(n_out);
    in.read(reinterpret_cast<char*>(ck.net.biases[l].data()),
            static_cast<std::streamsize>(n_out * sizeof(double)));
    if (!in) throw IoError("truncated checkpoint: " + path.string());
  }
  detail::check_shapes(ck.net);
  return ck;
}

}  // namespace growthlab
