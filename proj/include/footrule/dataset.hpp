#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace footrule {

/// An n x d matrix of observations, rows = samples, with column labels.
class Dataset {
public:
    Dataset(std::size_t rows, std::size_t cols, std::vector<std::string> column_names = {})
        : rows_(rows), cols_(cols), values_(rows * cols, 0.0),
          names_(std::move(column_names)) {
        if (rows_ < 1) throw std::invalid_argument("Dataset: need at least one row");
        if (cols_ < 2) throw std::invalid_argument("Dataset: need at least two columns");
        if (names_.empty()) {
            names_.reserve(cols_);
            for (std::size_t j = 0; j < cols_; ++j) names_.push_back("u" + std::to_string(j + 1));
        } else if (names_.size() != cols_) {
            throw std::invalid_argument("Dataset: column name count mismatch");
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<std::string>& column_names() const { return names_; }

    double& at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return {values_.data() + r * cols_, cols_};
    }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool operator==(const Dataset& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && values_ == other.values_;
    }

private:
    std::size_t rows_, cols_;
    std::vector<double> values_;
    std::vector<std::string> names_;
};

} // namespace footrule
