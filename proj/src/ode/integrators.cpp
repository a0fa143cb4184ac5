#include "finn/ode/integrators.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace finn::ode {
namespace {

using Vec = std::vector<double>;

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 5th minus embedded 4th order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

Vec combine(const Vec& u, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out = u;
  const auto& k = simd::active();
  for (const auto& [a, v] : terms)
    if (a != 0.0) k.axpy(h * a, *v, out);
  return out;
}

double rms_norm(const Vec& v, const Vec& scale_ref, const AdaptiveOptions& o) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double s = o.atol + o.rtol * std::abs(scale_ref[i]);
    acc += (v[i] / s) * (v[i] / s);
  }
  return std::sqrt(acc / static_cast<double>(std::max<std::size_t>(v.size(), 1)));
}

double initial_step(const Rhs<Vec>& rhs, double t0, const Vec& u0, const Vec& f0,
                    const AdaptiveOptions& o, std::size_t& evals) {
  const double d0 = rms_norm(u0, u0, o);
  const double d1 = rms_norm(f0, u0, o);
  const double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  const Vec u1 = combine(u0, h0, {{1.0, &f0}});
  const Vec f1 = rhs(t0 + h0, u1);
  ++evals;
  Vec df(f0.size());
  for (std::size_t i = 0; i < df.size(); ++i) df[i] = f1[i] - f0[i];
  const double d2 = rms_norm(df, u0, o) / h0;
  const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                               : std::pow(0.01 / std::max(d1, d2), 1.0 / 5.0);
  return std::min(100.0 * h0, h1);
}

}  // namespace

std::vector<Vec> integrate_adaptive(const Rhs<Vec>& rhs, Vec u0, std::span<const double> t_eval,
                                    const AdaptiveOptions& o, AdaptiveStats* stats) {
  if (t_eval.empty()) throw ConfigError("integrate_adaptive: empty evaluation grid");
  for (std::size_t k = 1; k < t_eval.size(); ++k)
    if (!(t_eval[k] > t_eval[k - 1]))
      throw ConfigError("integrate_adaptive: evaluation grid not strictly increasing at index " +
                        std::to_string(k));
  if (!(o.rtol > 0.0) || !(o.atol > 0.0)) throw ConfigError("integrate_adaptive: tolerances must be positive");

  AdaptiveStats local;
  AdaptiveStats& st = stats ? *stats : local;
  st = {};

  std::vector<Vec> out;
  out.reserve(t_eval.size());
  out.push_back(u0);
  if (t_eval.size() == 1) return out;

  double t = t_eval[0];
  Vec u = std::move(u0);
  Vec k1 = rhs(t, u);
  ++st.rhs_evals;
  if (k1.size() != u.size()) throw ShapeError("rhs returned a state of the wrong length");
  double h = o.h_initial > 0.0 ? o.h_initial : initial_step(rhs, t, u, k1, o, st.rhs_evals);

  std::size_t steps = 0;
  for (std::size_t target = 1; target < t_eval.size(); ++target) {
    const double t_end = t_eval[target];
    while (t < t_end) {
      if (++steps > o.max_steps) throw StiffnessError("integrate_adaptive: step budget exhausted", t);
      const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
      if (h < h_min) throw StiffnessError("integrate_adaptive: step size underflow", t);

      const bool clipped = t + h >= t_end;
      const double h_step = clipped ? t_end - t : h;

      const Vec k2 = rhs(t + c2 * h_step, combine(u, h_step, {{a21, &k1}}));
      const Vec k3 = rhs(t + c3 * h_step, combine(u, h_step, {{a31, &k1}, {a32, &k2}}));
      const Vec k4 = rhs(t + c4 * h_step, combine(u, h_step, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
      const Vec k5 = rhs(t + c5 * h_step,
                         combine(u, h_step, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
      const Vec k6 = rhs(t + h_step, combine(u, h_step,
                                             {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
      Vec u_new = combine(u, h_step, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      const double t_new = clipped ? t_end : t + h_step;
      Vec k7 = rhs(t_new, u_new);
      st.rhs_evals += 6;

      double err = 0.0;
      bool finite = true;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double e = h_step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                   e7 * k7[i]);
        const double sc = o.atol + o.rtol * std::max(std::abs(u[i]), std::abs(u_new[i]));
        err = std::max(err, std::abs(e) / sc);
        finite = finite && std::isfinite(u_new[i]);
      }
      if (!finite || !std::isfinite(err)) {
        // Treat as a rejected step; repeated failure ends in step underflow.
        ++st.rejected;
        h = h_step * o.min_factor;
        continue;
      }

      if (err <= 1.0) {
        ++st.accepted;
        t = t_new;
        u = std::move(u_new);
        k1 = std::move(k7);
        const double factor =
            err == 0.0 ? o.max_factor
                       : std::clamp(o.safety * std::pow(err, -1.0 / 5.0), o.min_factor, o.max_factor);
        // A step shortened to hit an output time keeps the unclipped proposal.
        h = clipped ? std::max(h, h_step * factor) : h_step * factor;
      } else {
        ++st.rejected;
        h = h_step * std::clamp(o.safety * std::pow(err, -1.0 / 5.0), o.min_factor, 1.0);
      }
    }
    out.push_back(u);
  }
  return out;
}

}  // namespace finn::ode
