#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace devdan {

/// Dense row-major matrix of doubles with row/column insertion and removal,
/// sized for networks whose hidden layer grows and shrinks at runtime.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    double operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    const std::vector<double>& storage() const { return data_; }
    std::vector<double>& storage() { return data_; }

    void append_row(const std::vector<double>& row) {
        assert(rows_ == 0 || row.size() == cols_);
        if (rows_ == 0) cols_ = row.size();
        data_.insert(data_.end(), row.begin(), row.end());
        ++rows_;
    }

    void remove_row(std::size_t i) {
        assert(i < rows_);
        const auto first = data_.begin() + static_cast<std::ptrdiff_t>(i * cols_);
        data_.erase(first, first + static_cast<std::ptrdiff_t>(cols_));
        --rows_;
    }

    void append_col(const std::vector<double>& col) {
        assert(cols_ == 0 || col.size() == rows_);
        if (cols_ == 0) rows_ = col.size();
        std::vector<double> next((cols_ + 1) * rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j)
                next[i * (cols_ + 1) + j] = data_[i * cols_ + j];
            next[i * (cols_ + 1) + cols_] = col[i];
        }
        data_ = std::move(next);
        ++cols_;
    }

    void remove_col(std::size_t j) {
        assert(j < cols_);
        std::vector<double> next(rows_ * (cols_ - 1));
        for (std::size_t i = 0; i < rows_; ++i) {
            std::size_t out = 0;
            for (std::size_t jj = 0; jj < cols_; ++jj) {
                if (jj == j) continue;
                next[i * (cols_ - 1) + out++] = data_[i * cols_ + jj];
            }
        }
        data_ = std::move(next);
        --cols_;
    }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace devdan
