#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "footrule/copulas.hpp"
#include "footrule/dataset.hpp"
#include "footrule/rng.hpp"

namespace footrule {

/// Clayton rows by the gamma-frailty construction: one Gamma(1/theta) frailty
/// per row, one exponential per coordinate, U_i = (1 + E_i/W)^(-1/theta).
/// Exact and rejection-free for every theta > 0.
inline Dataset sample_clayton(int d, double theta, std::size_t n, RngStream& rng) {
    if (!(theta > 0.0)) throw std::invalid_argument("sample_clayton: theta must be > 0");
    if (d < 2) throw std::invalid_argument("sample_clayton: d must be >= 2");
    Dataset data(n, static_cast<std::size_t>(d));
    const double shape = 1.0 / theta;
    for (std::size_t r = 0; r < n; ++r) {
        const double frailty = rng.gamma(shape);
        for (int j = 0; j < d; ++j) {
            const double e = rng.exponential();
            data.at(r, static_cast<std::size_t>(j)) =
                std::exp(-std::log1p(e / frailty) / theta);
        }
    }
    return data;
}

/// Cuadras-Auge rows as U_i = max(V_i^(1/(1-theta)), Z^(1/theta)) with
/// independent uniforms V_1..V_d, Z; the endpoints theta = 0 and 1 degenerate
/// to independent and to identical coordinates.
inline Dataset sample_cuadras_auge(int d, double theta, std::size_t n, RngStream& rng) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("sample_cuadras_auge: theta must lie in [0, 1]");
    if (d < 2) throw std::invalid_argument("sample_cuadras_auge: d must be >= 2");
    Dataset data(n, static_cast<std::size_t>(d));
    for (std::size_t r = 0; r < n; ++r) {
        if (theta == 0.0) {
            for (int j = 0; j < d; ++j)
                data.at(r, static_cast<std::size_t>(j)) = rng.uniform();
            continue;
        }
        if (theta == 1.0) {
            const double z = rng.uniform();
            for (int j = 0; j < d; ++j) data.at(r, static_cast<std::size_t>(j)) = z;
            continue;
        }
        const double shock = std::pow(rng.uniform(), 1.0 / theta);
        for (int j = 0; j < d; ++j) {
            const double own = std::pow(rng.uniform(), 1.0 / (1.0 - theta));
            data.at(r, static_cast<std::size_t>(j)) = std::max(own, shock);
        }
    }
    return data;
}

/// FGM rows by rejection: propose independent uniforms, accept with
/// probability (1 + lambda prod(1-2u_i)) / 2. The density is bounded by 2,
/// so two proposals per row on average.
inline Dataset sample_fgm(int d, double lambda, std::size_t n, RngStream& rng) {
    if (!(lambda >= -1.0 && lambda <= 1.0))
        throw std::invalid_argument("sample_fgm: lambda must lie in [-1, 1]");
    if (d < 2) throw std::invalid_argument("sample_fgm: d must be >= 2");
    Dataset data(n, static_cast<std::size_t>(d));
    std::vector<double> proposal(static_cast<std::size_t>(d));
    for (std::size_t r = 0; r < n; ++r) {
        for (;;) {
            double product = 1.0;
            for (int j = 0; j < d; ++j) {
                proposal[static_cast<std::size_t>(j)] = rng.uniform();
                product *= 1.0 - 2.0 * proposal[static_cast<std::size_t>(j)];
            }
            if (rng.uniform() < 0.5 * (1.0 + lambda * product)) break;
        }
        for (int j = 0; j < d; ++j)
            data.at(r, static_cast<std::size_t>(j)) = proposal[static_cast<std::size_t>(j)];
    }
    return data;
}

enum class ReferenceKind { independence, comonotone, countermonotone };

inline Dataset sample_reference(ReferenceKind kind, int d, std::size_t n, RngStream& rng) {
    if (d < 2) throw std::invalid_argument("sample_reference: d must be >= 2");
    if (kind == ReferenceKind::countermonotone && d != 2)
        throw std::invalid_argument("sample_reference: countermonotone requires d = 2");
    Dataset data(n, static_cast<std::size_t>(d));
    for (std::size_t r = 0; r < n; ++r) {
        switch (kind) {
            case ReferenceKind::independence:
                for (int j = 0; j < d; ++j)
                    data.at(r, static_cast<std::size_t>(j)) = rng.uniform();
                break;
            case ReferenceKind::comonotone: {
                const double z = rng.uniform();
                for (int j = 0; j < d; ++j) data.at(r, static_cast<std::size_t>(j)) = z;
                break;
            }
            case ReferenceKind::countermonotone: {
                const double z = rng.uniform();
                data.at(r, 0) = z;
                data.at(r, 1) = 1.0 - z;
                break;
            }
        }
    }
    return data;
}

inline Dataset sample_model(const CopulaModel& model, std::size_t n, RngStream& rng) {
    switch (model.family) {
        case Family::independence:
            return sample_reference(ReferenceKind::independence, model.dim, n, rng);
        case Family::comonotone:
            return sample_reference(ReferenceKind::comonotone, model.dim, n, rng);
        case Family::countermonotone:
            return sample_reference(ReferenceKind::countermonotone, model.dim, n, rng);
        case Family::fgm: return sample_fgm(model.dim, model.param, n, rng);
        case Family::clayton: return sample_clayton(model.dim, model.param, n, rng);
        case Family::cuadras_auge: return sample_cuadras_auge(model.dim, model.param, n, rng);
    }
    throw std::logic_error("sample_model: unknown family");
}

} // namespace footrule
