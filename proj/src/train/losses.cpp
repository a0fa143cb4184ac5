#include "finn/train/losses.hpp"

#include <random>

#include "finn/errors.hpp"

namespace finn {

std::string mask_name(const LossMask& m) {
  if (std::holds_alternative<BreakthroughOnly>(m)) return "breakthrough";
  if (std::holds_alternative<FinalProfileOnly>(m)) return "profile";
  return "full";
}

LossMask parse_mask(const std::string& name) {
  if (name == "full") return FullField{};
  if (name == "breakthrough") return BreakthroughOnly{};
  if (name == "profile") return FinalProfileOnly{};
  throw ConfigError("unknown loss mask '" + name + "' (expected full, breakthrough or profile)");
}

Dataset add_noise(const Dataset& data, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ConfigError("noise sigma must be non-negative");
  Dataset out = data;
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (auto& row : out.c)
    for (double& v : row) v += noise(rng);
  for (auto& row : out.c_t)
    for (double& v : row) v += noise(rng);
  return out;
}

double mse(const Dataset& pred, const Dataset& target, const LossMask& mask, TimeWindow w) {
  if (pred.volumes() != target.volumes()) throw ShapeError("mse: volume counts differ");
  if (w.end > pred.steps() || w.end > target.steps() || w.begin >= w.end)
    throw ShapeError("mse: window [" + std::to_string(w.begin) + ", " + std::to_string(w.end) +
                     ") outside the datasets");
  const std::size_t n = target.volumes();
  double acc = 0.0;
  std::size_t count = 0;
  auto add_row = [&](const std::vector<double>& a, const std::vector<double>& b, std::size_t lo,
                     std::size_t hi) {
    if (a.size() != n || b.size() != n) throw ShapeError("mse: ragged row");
    for (std::size_t i = lo; i < hi; ++i) {
      const double d = a[i] - b[i];
      acc += d * d;
      ++count;
    }
  };
  if (std::holds_alternative<FullField>(mask)) {
    for (std::size_t k = w.begin; k < w.end; ++k) {
      add_row(pred.c[k], target.c[k], 0, n);
      add_row(pred.c_t[k], target.c_t[k], 0, n);
    }
  } else if (std::holds_alternative<BreakthroughOnly>(mask)) {
    for (std::size_t k = w.begin; k < w.end; ++k) add_row(pred.c[k], target.c[k], n - 1, n);
  } else {
    add_row(pred.c_t[w.end - 1], target.c_t[w.end - 1], 0, n);
  }
  return acc / static_cast<double>(count);
}

double mse(const Dataset& pred, const Dataset& target, const LossMask& mask) {
  if (pred.steps() != target.steps()) throw ShapeError("mse: step counts differ");
  return mse(pred, target, mask, {0, target.steps()});
}

ad::Var mse_loss(std::span<const ad::Var> pred, const Dataset& target, const LossMask& mask,
                 std::size_t first_row) {
  if (pred.empty()) throw ShapeError("mse_loss: empty prediction");
  const std::size_t n = target.volumes();
  if (first_row + pred.size() > target.steps())
    throw ShapeError("mse_loss: prediction runs past the target");

  std::vector<ad::Var> terms;
  double count = 0.0;
  if (std::holds_alternative<FullField>(mask)) {
    std::vector<double> row(2 * n);
    for (std::size_t k = 0; k < pred.size(); ++k) {
      if (pred[k].size() != 2 * n) throw ShapeError("mse_loss: state length mismatch");
      const auto& c = target.c[first_row + k];
      const auto& ct = target.c_t[first_row + k];
      std::copy(c.begin(), c.end(), row.begin());
      std::copy(ct.begin(), ct.end(), row.begin() + static_cast<std::ptrdiff_t>(n));
      terms.push_back(ad::sq_err(pred[k], row));
    }
    count = static_cast<double>(pred.size() * 2 * n);
  } else if (std::holds_alternative<BreakthroughOnly>(mask)) {
    for (std::size_t k = 0; k < pred.size(); ++k) {
      const double y = target.c[first_row + k][n - 1];
      terms.push_back(ad::sq_err(ad::slice(pred[k], n - 1, 1), std::span(&y, 1)));
    }
    count = static_cast<double>(pred.size());
  } else {
    const std::size_t k = pred.size() - 1;
    terms.push_back(ad::sq_err(ad::slice(pred[k], n, n), target.c_t[first_row + k]));
    count = static_cast<double>(n);
  }
  std::vector<double> ones(terms.size(), 1.0 / count);
  return ad::lincomb(ones, terms);
}

}  // namespace finn
