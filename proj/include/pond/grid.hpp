#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pond {

// Dense row-major matrix, sized once at construction.
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Grid from_rows(const std::vector<std::vector<T>>& rows) {
        if (rows.empty()) return Grid(0, 0);
        Grid g(rows.size(), rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != g.cols_)
                throw std::invalid_argument("Grid::from_rows: ragged rows");
            for (std::size_t j = 0; j < g.cols_; ++j) g(i, j) = rows[i][j];
        }
        return g;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    bool same_shape(const Grid& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

}  // namespace pond
