#pragma once

#include <cmath>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace mfpca {

// Dense row-major matrix of doubles. Everything in this library is small:
// columns are sensor channels (D) or temporal windows (L), a handful each.
class Matrix {
public:
    Matrix() = default;

    Matrix(int rows, int cols, double fill = 0.0) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
        data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        Matrix m(static_cast<int>(rows.size()),
                 rows.size() ? static_cast<int>(rows.begin()->size()) : 0);
        int r = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != m.cols_)
                throw std::invalid_argument("Matrix::from_rows: ragged rows");
            int c = 0;
            for (double v : row) m(r, c++) = v;
            ++r;
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int r, int c) { return data_[index(r, c)]; }
    double operator()(int r, int c) const { return data_[index(r, c)]; }

    std::span<const double> row(int r) const {
        return {data_.data() + index(r, 0), static_cast<std::size_t>(cols_)};
    }
    std::span<double> row(int r) {
        return {data_.data() + index(r, 0), static_cast<std::size_t>(cols_)};
    }

    std::vector<double> col(int c) const {
        std::vector<double> out(static_cast<std::size_t>(rows_));
        for (int r = 0; r < rows_; ++r) out[static_cast<std::size_t>(r)] = (*this)(r, c);
        return out;
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    const std::vector<double>& data() const { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t index(int r, int c) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(c);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

}  // namespace mfpca
