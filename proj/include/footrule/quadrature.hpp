#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace footrule {

/// Controls for the adaptive Gauss-Legendre integrator on [0,1].
struct QuadratureSpec {
    int nodes_per_panel = 32;   ///< Gauss-Legendre order per panel (>= 4, even)
    double abs_tol = 1e-10;     ///< target absolute error of the whole integral
    int max_panels = 4096;      ///< bisection budget
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
};

/// Thrown when the panel budget runs out before abs_tol is met; carries the
/// best value computed so far.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(double best_value, double error_estimate, int panels)
        : std::runtime_error("quadrature: tolerance " + std::to_string(error_estimate) +
                             " not reached within " + std::to_string(panels) + " panels"),
          best_value(best_value), error_estimate(error_estimate), panels(panels) {}

    double best_value;
    double error_estimate;
    int panels;
};

namespace detail {

struct GaussRule {
    std::vector<double> nodes;    // on (-1,1), symmetric
    std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights by Newton iteration on the Legendre
/// polynomial (relative accuracy ~1e-15).
inline GaussRule make_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

inline const GaussRule& gauss_legendre(int n) {
    static thread_local std::map<int, GaussRule> cache;   // node-based: stable references
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

template <class F>
double gauss_panel(const F& f, double a, double b, const GaussRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

} // namespace detail

/// Integrate f over [0,1] adaptively: every panel carries a high/low-order
/// Gauss pair whose difference drives worst-panel-first bisection. f is only
/// evaluated at interior points, so endpoint limits are never needed.
template <class F>
QuadratureResult integrate(const F& f, const QuadratureSpec& spec = {}) {
    if (spec.abs_tol <= 0.0) throw std::invalid_argument("integrate: abs_tol must be > 0");
    if (spec.nodes_per_panel < 4) throw std::invalid_argument("integrate: nodes_per_panel too small");
    const auto& high = detail::gauss_legendre(spec.nodes_per_panel);
    const auto& low = detail::gauss_legendre(spec.nodes_per_panel / 2);

    struct Panel {
        double a, b, value, error;
        bool operator<(const Panel& o) const {
            if (error != o.error) return error < o.error;
            return a > o.a;   // deterministic tie-break
        }
    };

    auto make_panel = [&](double a, double b) {
        const double v = detail::gauss_panel(f, a, b, high);
        const double v_low = detail::gauss_panel(f, a, b, low);
        return Panel{a, b, v, std::abs(v - v_low)};
    };

    std::priority_queue<Panel> active;
    std::vector<Panel> frozen;   // panels too narrow to split further
    active.push(make_panel(0.0, 1.0));
    int panels = 1;
    double total_error = active.top().error;

    while (total_error > spec.abs_tol && !active.empty()) {
        if (panels >= spec.max_panels) break;
        Panel worst = active.top();
        active.pop();
        total_error -= worst.error;
        if (worst.b - worst.a < 1e-14) {
            frozen.push_back(worst);
            total_error += worst.error;
            if (active.empty()) break;
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = make_panel(worst.a, mid);
        Panel right = make_panel(mid, worst.b);
        total_error += left.error + right.error;
        active.push(left);
        active.push(right);
        ++panels;
    }

    // Sum in interval order so the result is independent of heap history.
    std::vector<Panel> all = std::move(frozen);
    while (!active.empty()) {
        all.push_back(active.top());
        active.pop();
    }
    std::sort(all.begin(), all.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double value = 0.0, error = 0.0;
    for (const auto& p : all) {
        value += p.value;
        error += p.error;
    }
    if (error > spec.abs_tol) throw QuadratureError(value, error, panels);
    return QuadratureResult{value, error, panels};
}

} // namespace footrule
