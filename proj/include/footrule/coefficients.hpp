#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "footrule/copulas.hpp"
#include "footrule/direction.hpp"
#include "footrule/quadrature.hpp"

namespace footrule {

enum class Method { closed_form, quadrature, decomposition };

inline std::string_view method_name(Method m) {
    switch (m) {
        case Method::closed_form: return "closed_form";
        case Method::quadrature: return "quadrature";
        case Method::decomposition: return "decomposition";
    }
    return "?";
}

/// A coefficient together with how it was obtained and a bound on the
/// numerical error (0 for closed forms).
struct CoefficientValue {
    double value = 0.0;
    Method method = Method::closed_form;
    double abs_error = 0.0;
};

namespace detail {

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double acc = 1.0;
    for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    return acc;
}

inline void check_dim(int d) {
    if (d < 2) throw std::invalid_argument("coefficients: dimension must be >= 2");
    if (d > 12) throw std::invalid_argument("coefficients: dimension capped at 12");
}

/// 2(d+1)/(d-1), the normalization shared by every coefficient here.
inline double prefactor(int d) {
    check_dim(d);
    return 2.0 * (d + 1) / (d - 1);
}

/// 2/((d-1) C(d,j)); equals prefactor(d) * |I|! |J|! / (d+1)!.
inline double mixed_constant(int d, int j_count) {
    check_dim(d);
    return 2.0 / ((d - 1) * binomial(d, j_count));
}

inline void check_alpha(int d, const Direction& alpha) {
    if (alpha.dim() != d)
        throw std::invalid_argument("coefficients: direction dimension mismatch");
}

/// Inner quadrature budget so that a result scaled by `scale` still lands
/// under the requested tolerance.
inline QuadratureSpec scaled(const QuadratureSpec& spec, double scale) {
    QuadratureSpec inner = spec;
    inner.abs_tol = std::max(spec.abs_tol / scale, 5e-15);
    return inner;
}

} // namespace detail

// ============================================================================
// Extreme directions and the classical coefficient
// ============================================================================

/// Downward index: prefactor * int_0^1 delta_C(u) du - 2/(d-1).
inline CoefficientValue phi_minus(const CopulaModel& model, const QuadratureSpec& spec = {}) {
    const int d = model.dim;
    const double pref = detail::prefactor(d);
    auto q = integrate([&](double u) { return marginal_diagonal(model, d, u); },
                       detail::scaled(spec, pref));
    return {pref * q.value - 2.0 / (d - 1), Method::quadrature, pref * q.error_estimate};
}

inline CoefficientValue phi_minus(const CopulaEvaluator& eval, const QuadratureSpec& spec = {}) {
    const int d = eval.dim();
    const double pref = detail::prefactor(d);
    auto q = integrate(
        [&](double u) {
            std::vector<double> point(static_cast<std::size_t>(d), u);
            return eval(point);
        },
        detail::scaled(spec, pref));
    return {pref * q.value - 2.0 / (d - 1), Method::quadrature, pref * q.error_estimate};
}

/// Upward index: same normalization applied to the survival diagonal,
/// expanded by inclusion-exclusion over marginal diagonals.
inline CoefficientValue phi_plus(const CopulaModel& model, const QuadratureSpec& spec = {}) {
    const int d = model.dim;
    const double pref = detail::prefactor(d);
    auto survival_diag = [&](double u) {
        double acc = 0.0;
        for (int k = 0; k <= d; ++k) {
            const double term = detail::binomial(d, k) * marginal_diagonal(model, k, 1.0 - u);
            acc += (k % 2 == 0) ? term : -term;
        }
        return acc;
    };
    auto q = integrate(survival_diag, detail::scaled(spec, pref));
    return {pref * q.value - 2.0 / (d - 1), Method::quadrature, pref * q.error_estimate};
}

inline CoefficientValue phi_plus(const CopulaEvaluator& eval, const QuadratureSpec& spec = {}) {
    const int d = eval.dim();
    const double pref = detail::prefactor(d);
    auto survival_diag = [&](double u) {
        std::vector<double> point(static_cast<std::size_t>(d));
        double acc = 0.0;
        for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << d); ++mask) {
            int bits = 0;
            for (int i = 0; i < d; ++i) {
                const bool in = (mask >> i) & 1u;
                point[static_cast<std::size_t>(i)] = in ? 1.0 - u : 1.0;
                bits += in;
            }
            const double term = eval(point);
            acc += (bits % 2 == 0) ? term : -term;
        }
        return acc;
    };
    auto q = integrate(survival_diag, detail::scaled(spec, pref));
    return {pref * q.value - 2.0 / (d - 1), Method::quadrature, pref * q.error_estimate};
}

// Forward declaration; defined after the per-family closed forms.
inline CoefficientValue phi_dir(const CopulaModel& model, const Direction& alpha,
                                const QuadratureSpec& spec);

/// Classical multivariate footrule, the average of the two extreme indices.
inline CoefficientValue phi_footrule(const CopulaModel& model, const QuadratureSpec& spec = {});

// ============================================================================
// Directional coefficients: quadrature and decomposition routes
// ============================================================================

/// Directional coefficient by one-dimensional quadrature of the alternating
/// sum of marginal diagonals (exchangeable families: terms grouped by size).
inline CoefficientValue phi_dir_quadrature(const CopulaModel& model, const Direction& alpha,
                                           const QuadratureSpec& spec = {}) {
    const int d = model.dim;
    detail::check_alpha(d, alpha);
    const int i_count = alpha.negative_count();
    const int j_count = alpha.positive_count();
    const double pref = detail::prefactor(d);
    auto orthant = [&](double u) {
        double acc = 0.0;
        for (int k = 0; k <= j_count; ++k) {
            const double term =
                detail::binomial(j_count, k) * marginal_diagonal(model, i_count + k, u);
            acc += (k % 2 == 0) ? term : -term;
        }
        return acc;
    };
    auto q = integrate(orthant, detail::scaled(spec, pref));
    return {pref * q.value - detail::mixed_constant(d, j_count), Method::quadrature,
            pref * q.error_estimate};
}

/// Evaluator overload; marginals are obtained by plugging 1 into the dropped
/// coordinates, so no exchangeability is assumed.
inline CoefficientValue phi_dir_quadrature(const CopulaEvaluator& eval, const Direction& alpha,
                                           const QuadratureSpec& spec = {}) {
    const int d = eval.dim();
    detail::check_alpha(d, alpha);
    const auto j_idx = alpha.positive_indices();
    const int j_count = static_cast<int>(j_idx.size());
    const double pref = detail::prefactor(d);
    auto orthant = [&](double u) {
        std::vector<double> point(static_cast<std::size_t>(d));
        double acc = 0.0;
        for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << j_count); ++mask) {
            for (int i = 0; i < d; ++i) point[static_cast<std::size_t>(i)] = u;
            int bits = 0;
            for (int b = 0; b < j_count; ++b) {
                if ((mask >> b) & 1u) ++bits;                                   // kept at u
                else point[static_cast<std::size_t>(j_idx[static_cast<std::size_t>(b)])] = 1.0;
            }
            const double term = eval(point);
            acc += (bits % 2 == 0) ? term : -term;
        }
        return acc;
    };
    auto q = integrate(orthant, detail::scaled(spec, pref));
    return {pref * q.value - detail::mixed_constant(d, j_count), Method::quadrature,
            pref * q.error_estimate};
}

/// Directional coefficient as the alternating combination of downward indices
/// of the coordinate-subset marginals; subsets of size 0 and 1 drop out (the
/// size-1 weight vanishes, the empty-set index is 0 by convention).
inline CoefficientValue phi_dir_decompose(const CopulaModel& model, const Direction& alpha,
                                          const QuadratureSpec& spec = {}) {
    const int d = model.dim;
    detail::check_alpha(d, alpha);
    const int i_count = alpha.negative_count();
    const int j_count = alpha.positive_count();
    const double pref = detail::prefactor(d);

    std::map<int, CoefficientValue> minus_by_size;
    const QuadratureSpec inner =
        detail::scaled(spec, pref * std::pow(2.0, static_cast<double>(j_count)));
    double acc = 0.0, err = 0.0;
    for (int k = 0; k <= j_count; ++k) {
        const int m = i_count + k;
        if (m <= 1) continue;
        auto it = minus_by_size.find(m);
        if (it == minus_by_size.end())
            it = minus_by_size.emplace(m, phi_minus(marginal_model(model, m), inner)).first;
        const double weight = detail::binomial(j_count, k) * (m - 1) / (2.0 * (m + 1));
        acc += ((k % 2 == 0) ? weight : -weight) * it->second.value;
        err += weight * it->second.abs_error;
    }
    return {pref * acc, Method::decomposition, pref * err};
}

// ============================================================================
// Per-family formulas
// ============================================================================

/// Comonotone copula: 1 at the two extreme directions, -2/((d-1) C(d,k))
/// for k components reversed, 0 < k < d.
inline CoefficientValue phi_dir_comonotone(int d, int negative_count) {
    detail::check_dim(d);
    if (negative_count < 0 || negative_count > d)
        throw std::invalid_argument("phi_dir_comonotone: negative_count out of range");
    if (negative_count == 0 || negative_count == d) return {1.0, Method::closed_form, 0.0};
    return {-detail::mixed_constant(d, d - negative_count), Method::closed_form, 0.0};
}

/// Countermonotone pair: -1/2 at the extreme directions, +1/2 mixed.
inline CoefficientValue phi_dir_countermonotone(const Direction& alpha) {
    detail::check_alpha(2, alpha);
    const int k = alpha.negative_count();
    return {(k == 1) ? 0.5 : -0.5, Method::closed_form, 0.0};
}

/// FGM family: 2 lambda (-1)^|J| (d+1) (d!)^2 / ((d-1) (2d+1)!), via
/// log-gamma so large d stays in range.
inline CoefficientValue phi_dir_fgm(int d, double lambda, const Direction& alpha) {
    detail::check_dim(d);
    detail::check_alpha(d, alpha);
    if (!(lambda >= -1.0 && lambda <= 1.0))
        throw std::invalid_argument("phi_dir_fgm: lambda must lie in [-1, 1]");
    const double magnitude =
        2.0 * (d + 1) / (d - 1) * std::exp(2.0 * std::lgamma(d + 1.0) - std::lgamma(2.0 * d + 2.0));
    const double parity = (alpha.positive_count() % 2 == 0) ? 1.0 : -1.0;
    return {lambda * parity * magnitude, Method::closed_form, 0.0};
}

/// Cuadras-Auge family: alternating binomial sum of
/// T(m) = theta (m-1) / ((m+1)^2 - theta (m^2-1)), with T(0) = 0 so the
/// empty subset contributes nothing.
inline CoefficientValue phi_dir_cuadras_auge(int d, double theta, const Direction& alpha) {
    detail::check_dim(d);
    detail::check_alpha(d, alpha);
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("phi_dir_cuadras_auge: theta must lie in [0, 1]");
    const int i_count = alpha.negative_count();
    const int j_count = alpha.positive_count();
    auto term = [theta](int m) {
        if (m < 1) return 0.0;
        return theta * (m - 1) / ((m + 1.0) * (m + 1.0) - theta * (m * m - 1.0));
    };
    double acc = 0.0;
    for (int k = 0; k <= j_count; ++k) {
        const double t = detail::binomial(j_count, k) * term(i_count + k);
        acc += (k % 2 == 0) ? t : -t;
    }
    return {detail::prefactor(d) * acc, Method::closed_form, 0.0};
}

/// Clayton family: alternating binomial sum of the one-dimensional diagonal
/// integrals, each integrated separately.
inline CoefficientValue phi_dir_clayton(int d, double theta, const Direction& alpha,
                                        const QuadratureSpec& spec = {}) {
    detail::check_dim(d);
    detail::check_alpha(d, alpha);
    if (!(theta > 0.0)) throw std::invalid_argument("phi_dir_clayton: theta must be > 0");
    const int i_count = alpha.negative_count();
    const int j_count = alpha.positive_count();
    const QuadratureSpec inner =
        detail::scaled(spec, detail::prefactor(d) * std::pow(2.0, static_cast<double>(j_count)));
    double acc = 0.0, err = 0.0;
    for (int k = 0; k <= j_count; ++k) {
        const int m = i_count + k;
        double integral = 0.0, integral_err = 0.0;
        if (m == 0) {
            integral = 1.0;
        } else if (m == 1) {
            integral = 0.5;
        } else {
            auto q = integrate([&](double u) { return detail::clayton_diagonal(m, theta, u); },
                               inner);
            integral = q.value;
            integral_err = q.error_estimate;
        }
        const double b = detail::binomial(j_count, k);
        acc += (k % 2 == 0) ? b * integral : -b * integral;
        err += b * integral_err;
    }
    const double pref = detail::prefactor(d);
    return {pref * acc - detail::mixed_constant(d, j_count), Method::quadrature, pref * err};
}

// ============================================================================
// Dispatch and tables
// ============================================================================

/// Best available route for the family: closed form when one exists,
/// otherwise quadrature.
inline CoefficientValue phi_dir(const CopulaModel& model, const Direction& alpha,
                                const QuadratureSpec& spec = {}) {
    detail::check_alpha(model.dim, alpha);
    switch (model.family) {
        case Family::independence: return {0.0, Method::closed_form, 0.0};
        case Family::comonotone: return phi_dir_comonotone(model.dim, alpha.negative_count());
        case Family::countermonotone: return phi_dir_countermonotone(alpha);
        case Family::fgm: return phi_dir_fgm(model.dim, model.param, alpha);
        case Family::cuadras_auge: return phi_dir_cuadras_auge(model.dim, model.param, alpha);
        case Family::clayton: return phi_dir_clayton(model.dim, model.param, alpha, spec);
    }
    throw std::logic_error("phi_dir: unknown family");
}

inline CoefficientValue phi_footrule(const CopulaModel& model, const QuadratureSpec& spec) {
    const auto up = phi_dir(model, Direction::all_positive(model.dim), spec);
    const auto down = phi_dir(model, Direction::all_negative(model.dim), spec);
    const Method method =
        (up.method == Method::closed_form && down.method == Method::closed_form)
            ? Method::closed_form
            : Method::quadrature;
    return {0.5 * (up.value + down.value), method, 0.5 * (up.abs_error + down.abs_error)};
}

struct DirectionTableEntry {
    Direction alpha;
    CoefficientValue coeff;
};

struct DirectionTable {
    std::vector<DirectionTableEntry> entries;   // sign-string order
    double sum = 0.0;          // should vanish
    double sum_abs_error = 0.0;
};

/// All 2^d coefficients by the best available method, plus their sum (a
/// consistency diagnostic: the coefficients over all directions cancel).
inline DirectionTable direction_table(const CopulaModel& model, const QuadratureSpec& spec = {}) {
    detail::check_dim(model.dim);
    DirectionTable table;
    for (auto& alpha : Direction::enumerate(model.dim)) {
        auto value = phi_dir(model, alpha, spec);
        table.sum += value.value;
        table.sum_abs_error += value.abs_error;
        table.entries.push_back({std::move(alpha), value});
    }
    return table;
}

} // namespace footrule
