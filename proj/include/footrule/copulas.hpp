#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace footrule {

// ============================================================================
// Parametric families
// ============================================================================

enum class Family {
    independence,
    comonotone,
    countermonotone,   // d = 2 only
    fgm,               // lambda in [-1, 1]
    clayton,           // theta > 0
    cuadras_auge,      // theta in [0, 1]
};

inline std::string_view family_name(Family f) {
    switch (f) {
        case Family::independence: return "independence";
        case Family::comonotone: return "comonotone";
        case Family::countermonotone: return "countermonotone";
        case Family::fgm: return "fgm";
        case Family::clayton: return "clayton";
        case Family::cuadras_auge: return "cuadras_auge";
    }
    return "?";
}

inline std::optional<Family> family_from_name(std::string_view name) {
    if (name == "independence" || name == "pi") return Family::independence;
    if (name == "comonotone" || name == "m") return Family::comonotone;
    if (name == "countermonotone" || name == "w") return Family::countermonotone;
    if (name == "fgm") return Family::fgm;
    if (name == "clayton") return Family::clayton;
    if (name == "cuadras_auge" || name == "cuadras-auge" || name == "ca")
        return Family::cuadras_auge;
    return std::nullopt;
}

/// A copula model: family tag, dimension, and (where applicable) parameter.
/// Construct through the named factories, which validate parameter ranges.
struct CopulaModel {
    Family family = Family::independence;
    int dim = 2;
    double param = 0.0;   // fgm lambda, clayton/cuadras_auge theta; unused otherwise

    static CopulaModel independence(int d) { return checked(Family::independence, d, 0.0); }
    static CopulaModel comonotone(int d) { return checked(Family::comonotone, d, 0.0); }
    static CopulaModel countermonotone() { return checked(Family::countermonotone, 2, 0.0); }
    static CopulaModel fgm(int d, double lambda) { return checked(Family::fgm, d, lambda); }
    static CopulaModel clayton(int d, double theta) { return checked(Family::clayton, d, theta); }
    static CopulaModel cuadras_auge(int d, double theta) {
        return checked(Family::cuadras_auge, d, theta);
    }

    static CopulaModel make(Family f, int d, double param) { return checked(f, d, param); }

    bool has_param() const {
        return family == Family::fgm || family == Family::clayton ||
               family == Family::cuadras_auge;
    }

private:
    static CopulaModel checked(Family f, int d, double p) {
        if (d < 2) throw std::invalid_argument("CopulaModel: dimension must be >= 2");
        switch (f) {
            case Family::countermonotone:
                if (d != 2)
                    throw std::invalid_argument("CopulaModel: countermonotone requires d = 2");
                break;
            case Family::fgm:
                if (!(p >= -1.0 && p <= 1.0))
                    throw std::invalid_argument("CopulaModel: fgm lambda must lie in [-1, 1]");
                break;
            case Family::clayton:
                if (!(p > 0.0))
                    throw std::invalid_argument("CopulaModel: clayton theta must be > 0");
                break;
            case Family::cuadras_auge:
                if (!(p >= 0.0 && p <= 1.0))
                    throw std::invalid_argument("CopulaModel: cuadras_auge theta must lie in [0, 1]");
                break;
            default:
                break;
        }
        return CopulaModel{f, d, p};
    }
};

namespace detail {

inline void check_point(const CopulaModel& m, std::span<const double> u) {
    if (static_cast<int>(u.size()) != m.dim)
        throw std::invalid_argument("cdf: point has dimension " + std::to_string(u.size()) +
                                    ", model has " + std::to_string(m.dim));
    for (double v : u)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("cdf: coordinates must lie in [0, 1]");
}

/// Diagonal of an m-variate Clayton copula, (m u^-theta + 1 - m)^(-1/theta),
/// evaluated as exp(-log1p(m expm1(-theta log u)) / theta) so small theta and
/// small u stay accurate; the u -> 0 limit is 0.
inline double clayton_diagonal(int m, double theta, double u) {
    if (m == 0) return 1.0;
    if (m == 1) return u;
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double t = static_cast<double>(m) * std::expm1(-theta * std::log(u));
    if (!std::isfinite(t)) return 0.0;   // u^-theta overflowed
    return std::exp(-std::log1p(t) / theta);
}

} // namespace detail

/// Copula CDF at a point in [0,1]^d.
inline double cdf(const CopulaModel& m, std::span<const double> u) {
    detail::check_point(m, u);
    switch (m.family) {
        case Family::independence: {
            double p = 1.0;
            for (double v : u) p *= v;
            return p;
        }
        case Family::comonotone:
            return *std::min_element(u.begin(), u.end());
        case Family::countermonotone:
            return std::max(u[0] + u[1] - 1.0, 0.0);
        case Family::fgm: {
            double p = 1.0, q = 1.0;
            for (double v : u) {
                p *= v;
                q *= 1.0 - v;
            }
            return p * (1.0 + m.param * q);
        }
        case Family::clayton: {
            double s = 0.0;
            for (double v : u) {
                if (v <= 0.0) return 0.0;
                s += std::expm1(-m.param * std::log(v));   // v^-theta - 1
            }
            if (!std::isfinite(s)) return 0.0;
            return std::exp(-std::log1p(s) / m.param);
        }
        case Family::cuadras_auge: {
            const double theta = m.param;
            double mn = 1.0, logp = 0.0;
            for (double v : u) {
                if (v <= 0.0) return 0.0;
                mn = std::min(mn, v);
                logp += std::log(v);
            }
            if (theta == 0.0) return std::exp(logp);
            if (theta == 1.0) return mn;
            return std::exp((1.0 - theta) * logp + theta * std::log(mn));
        }
    }
    throw std::logic_error("cdf: unknown family");
}

/// Diagonal of the subset marginal with |K| = subset_size: C_K(u,..,u).
/// All families here are exchangeable, so only the subset size matters.
/// Conventions: size 0 -> 1, size 1 -> u. Note that proper FGM marginals
/// are product copulas (the lambda term vanishes once any argument is 1),
/// so only the full-set diagonal keeps the lambda correction.
inline double marginal_diagonal(const CopulaModel& m, int subset_size, double u) {
    if (subset_size < 0 || subset_size > m.dim)
        throw std::invalid_argument("marginal_diagonal: subset size out of range");
    if (!(u >= 0.0 && u <= 1.0))
        throw std::invalid_argument("marginal_diagonal: u must lie in [0, 1]");
    const int k = subset_size;
    if (k == 0) return 1.0;
    if (k == 1) return u;
    switch (m.family) {
        case Family::independence:
            return std::pow(u, static_cast<double>(k));
        case Family::comonotone:
            return u;
        case Family::countermonotone:
            return std::max(2.0 * u - 1.0, 0.0);   // k == d == 2 here
        case Family::fgm: {
            const double uk = std::pow(u, static_cast<double>(k));
            if (k < m.dim) return uk;
            return uk * (1.0 + m.param * std::pow(1.0 - u, static_cast<double>(k)));
        }
        case Family::clayton:
            return detail::clayton_diagonal(k, m.param, u);
        case Family::cuadras_auge:
            if (u == 0.0) return 0.0;
            return std::pow(u, k - m.param * (k - 1));
    }
    throw std::logic_error("marginal_diagonal: unknown family");
}

/// Index-set overload; validates the subset and keys the formula by its size.
inline double marginal_diagonal(const CopulaModel& m, std::span<const int> subset, double u) {
    std::vector<bool> seen(static_cast<std::size_t>(m.dim), false);
    for (int i : subset) {
        if (i < 0 || i >= m.dim)
            throw std::invalid_argument("marginal_diagonal: subset index out of range");
        if (seen[static_cast<std::size_t>(i)])
            throw std::invalid_argument("marginal_diagonal: repeated subset index");
        seen[static_cast<std::size_t>(i)] = true;
    }
    return marginal_diagonal(m, static_cast<int>(subset.size()), u);
}

/// The copula of a size-m coordinate subset. Same family and parameter for
/// the exchangeable families, except FGM whose proper marginals collapse to
/// independence. Requires m >= 2.
inline CopulaModel marginal_model(const CopulaModel& m, int subset_size) {
    if (subset_size < 2 || subset_size > m.dim)
        throw std::invalid_argument("marginal_model: subset size out of range");
    if (subset_size == m.dim) return m;
    switch (m.family) {
        case Family::independence: return CopulaModel::independence(subset_size);
        case Family::comonotone: return CopulaModel::comonotone(subset_size);
        case Family::countermonotone:
            throw std::logic_error("marginal_model: countermonotone has no proper marginals");
        case Family::fgm: return CopulaModel::independence(subset_size);
        case Family::clayton: return CopulaModel::clayton(subset_size, m.param);
        case Family::cuadras_auge: return CopulaModel::cuadras_auge(subset_size, m.param);
    }
    throw std::logic_error("marginal_model: unknown family");
}

/// Survival CDF P[U > 1-u] by inclusion-exclusion over coordinate subsets;
/// each marginal evaluation plugs 1 into the dropped coordinates.
inline double survival_cdf(const CopulaModel& m, std::span<const double> u) {
    detail::check_point(m, u);
    const int d = m.dim;
    std::vector<double> point(static_cast<std::size_t>(d));
    double acc = 0.0;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << d); ++mask) {
        int bits = 0;
        for (int i = 0; i < d; ++i) {
            const bool in = (mask >> i) & 1u;
            point[static_cast<std::size_t>(i)] = in ? 1.0 - u[static_cast<std::size_t>(i)] : 1.0;
            bits += in;
        }
        const double term = cdf(m, point);
        acc += (bits % 2 == 0) ? term : -term;
    }
    return std::clamp(acc, 0.0, 1.0);
}

// ============================================================================
// Type-erased evaluators
// ============================================================================

enum class EvaluatorKind { model, reflected, survival, custom };

/// An immutable [0,1]^k -> [0,1] function object. Evaluators never mutate
/// shared state, so any number of threads may call one concurrently.
class CopulaEvaluator {
public:
    using Fn = std::function<double(std::span<const double>)>;

    CopulaEvaluator(int dim, EvaluatorKind kind, Fn fn)
        : dim_(dim), kind_(kind), fn_(std::make_shared<Fn>(std::move(fn))) {
        if (dim_ < 2) throw std::invalid_argument("CopulaEvaluator: dimension must be >= 2");
    }

    double operator()(std::span<const double> u) const {
        if (static_cast<int>(u.size()) != dim_)
            throw std::invalid_argument("CopulaEvaluator: dimension mismatch");
        return (*fn_)(u);
    }

    int dim() const { return dim_; }
    EvaluatorKind kind() const { return kind_; }

private:
    int dim_;
    EvaluatorKind kind_;
    std::shared_ptr<const Fn> fn_;
};

inline CopulaEvaluator make_evaluator(const CopulaModel& m) {
    return CopulaEvaluator(m.dim, EvaluatorKind::model,
                           [m](std::span<const double> u) { return cdf(m, u); });
}

inline CopulaEvaluator survival_evaluator(const CopulaModel& m) {
    return CopulaEvaluator(m.dim, EvaluatorKind::survival,
                           [m](std::span<const double> u) { return survival_cdf(m, u); });
}

/// The copula of the vector with coordinates in `flip` replaced by their
/// complements 1-U_i: inclusion-exclusion over subsets of the flipped set,
/// costing 2^|flip| base evaluations per call.
inline CopulaEvaluator reflect(const CopulaEvaluator& base, std::vector<int> flip) {
    const int d = base.dim();
    std::vector<bool> seen(static_cast<std::size_t>(d), false);
    for (int i : flip) {
        if (i < 0 || i >= d) throw std::invalid_argument("reflect: flip index out of range");
        if (seen[static_cast<std::size_t>(i)])
            throw std::invalid_argument("reflect: repeated flip index");
        seen[static_cast<std::size_t>(i)] = true;
    }
    auto fn = [base, flip, d](std::span<const double> u) {
        const std::size_t nf = flip.size();
        std::vector<double> point(u.begin(), u.end());
        double acc = 0.0;
        for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << nf); ++mask) {
            int bits = 0;
            for (std::size_t b = 0; b < nf; ++b) {
                const auto idx = static_cast<std::size_t>(flip[b]);
                if ((mask >> b) & 1u) {
                    point[idx] = 1.0 - u[idx];
                    ++bits;
                } else {
                    point[idx] = 1.0;   // dropped from the marginal
                }
            }
            const double term = base(point);
            acc += (bits % 2 == 0) ? term : -term;
        }
        return acc;
    };
    return CopulaEvaluator(d, EvaluatorKind::reflected, std::move(fn));
}

// ============================================================================
// Boxes, volumes, axiom checks
// ============================================================================

/// An axis-aligned box [lower, upper] inside [0,1]^k.
struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    Box(std::vector<double> lo, std::vector<double> hi)
        : lower(std::move(lo)), upper(std::move(hi)) {
        if (lower.size() != upper.size() || lower.empty())
            throw std::invalid_argument("Box: bounds must have equal nonzero length");
        for (std::size_t i = 0; i < lower.size(); ++i)
            if (!(0.0 <= lower[i] && lower[i] <= upper[i] && upper[i] <= 1.0))
                throw std::invalid_argument("Box: need 0 <= lower <= upper <= 1");
    }

    std::size_t dim() const { return lower.size(); }
};

/// Signed vertex sum of the evaluator over the box: the probability mass the
/// copula assigns to it.
inline double c_volume(const CopulaEvaluator& eval, const Box& box) {
    if (static_cast<int>(box.dim()) != eval.dim())
        throw std::invalid_argument("c_volume: box/evaluator dimension mismatch");
    const int d = eval.dim();
    std::vector<double> vertex(static_cast<std::size_t>(d));
    double acc = 0.0;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << d); ++mask) {
        int lows = 0;
        for (int i = 0; i < d; ++i) {
            const bool low = (mask >> i) & 1u;
            vertex[static_cast<std::size_t>(i)] =
                low ? box.lower[static_cast<std::size_t>(i)] : box.upper[static_cast<std::size_t>(i)];
            lows += low;
        }
        const double term = eval(vertex);
        acc += (lows % 2 == 0) ? term : -term;
    }
    return acc;
}

struct CopulaViolation {
    enum class Kind { grounded, margin, negative_volume };
    Kind kind;
    std::vector<double> where;   // grid point, or lower corner of the offending cell
    double magnitude;
};

struct ValidationReport {
    double tolerance = 1e-9;
    double worst = 0.0;                       // largest violation magnitude seen
    std::vector<CopulaViolation> violations;  // entries exceeding the tolerance

    bool passed() const { return violations.empty(); }
};

/// Grid check of the two copula axioms: zero on the lower faces, uniform
/// margins, and nonnegative mass on every grid cell.
inline ValidationReport validate_copula(const CopulaEvaluator& eval, int grid_resolution,
                                        double tolerance = 1e-9) {
    if (grid_resolution < 2)
        throw std::invalid_argument("validate_copula: grid_resolution must be >= 2");
    const int d = eval.dim();
    if (d > 8) throw std::invalid_argument("validate_copula: supported up to dimension 8");

    ValidationReport report;
    report.tolerance = tolerance;
    const int g = grid_resolution;
    auto tick = [g](int k) { return static_cast<double>(k) / g; };

    auto record = [&](CopulaViolation::Kind kind, std::vector<double> where, double mag) {
        report.worst = std::max(report.worst, mag);
        if (mag > tolerance)
            report.violations.push_back({kind, std::move(where), mag});
    };

    // Cache all lattice evaluations once: index = sum_i k_i * (g+1)^i.
    const std::size_t side = static_cast<std::size_t>(g) + 1;
    std::size_t lattice_size = 1;
    for (int i = 0; i < d; ++i) lattice_size *= side;
    std::vector<double> values(lattice_size);
    std::vector<int> coord(static_cast<std::size_t>(d), 0);
    std::vector<double> point(static_cast<std::size_t>(d));
    for (std::size_t idx = 0; idx < lattice_size; ++idx) {
        std::size_t rest = idx;
        for (int i = 0; i < d; ++i) {
            coord[static_cast<std::size_t>(i)] = static_cast<int>(rest % side);
            rest /= side;
            point[static_cast<std::size_t>(i)] = tick(coord[static_cast<std::size_t>(i)]);
        }
        values[idx] = eval(point);

        bool has_zero = false;
        int ones = 0, free_axis = -1;
        for (int i = 0; i < d; ++i) {
            if (coord[static_cast<std::size_t>(i)] == 0) has_zero = true;
            if (coord[static_cast<std::size_t>(i)] == g) ++ones;
            else free_axis = i;
        }
        if (has_zero)
            record(CopulaViolation::Kind::grounded, point, std::abs(values[idx]));
        else if (ones == d - 1)
            record(CopulaViolation::Kind::margin, point,
                   std::abs(values[idx] - point[static_cast<std::size_t>(free_axis)]));
    }

    // Cell volumes from the cached lattice.
    std::size_t cells = 1;
    for (int i = 0; i < d; ++i) cells *= static_cast<std::size_t>(g);
    std::vector<std::size_t> stride(static_cast<std::size_t>(d));
    stride[0] = 1;
    for (int i = 1; i < d; ++i)
        stride[static_cast<std::size_t>(i)] = stride[static_cast<std::size_t>(i - 1)] * side;
    for (std::size_t c = 0; c < cells; ++c) {
        std::size_t rest = c, base = 0;
        for (int i = 0; i < d; ++i) {
            const int k = static_cast<int>(rest % static_cast<std::size_t>(g));
            rest /= static_cast<std::size_t>(g);
            coord[static_cast<std::size_t>(i)] = k;
            base += static_cast<std::size_t>(k) * stride[static_cast<std::size_t>(i)];
        }
        double vol = 0.0;
        for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << d); ++mask) {
            std::size_t idx = base;
            int highs = 0;
            for (int i = 0; i < d; ++i)
                if ((mask >> i) & 1u) {
                    idx += stride[static_cast<std::size_t>(i)];
                    ++highs;
                }
            vol += ((d - highs) % 2 == 0) ? values[idx] : -values[idx];
        }
        if (vol < 0.0) {
            std::vector<double> corner(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i)
                corner[static_cast<std::size_t>(i)] = tick(coord[static_cast<std::size_t>(i)]);
            record(CopulaViolation::Kind::negative_volume, corner, -vol);
        }
    }
    return report;
}

} // namespace footrule
