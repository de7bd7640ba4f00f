#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fdwave {

/// Dense scalar field on a regular grid, row-major with axis order
/// Z, X[, Y] (last index fastest). 2D fields keep a trailing extent of 1.
template <typename T>
class Field {
public:
    Field() = default;

    Field(int ndim, const std::array<std::size_t, 3>& shape)
        : ndim_(ndim), shape_(shape) {
        if (ndim != 2 && ndim != 3)
            throw std::invalid_argument("Field: ndim must be 2 or 3");
        if (ndim == 2) shape_[2] = 1;
        strides_ = {shape_[1] * shape_[2], shape_[2], 1};
        data_.assign(shape_[0] * shape_[1] * shape_[2], T(0));
    }

    int ndim() const { return ndim_; }
    const std::array<std::size_t, 3>& shape() const { return shape_; }
    const std::array<std::size_t, 3>& strides() const { return strides_; }
    std::size_t size() const { return data_.size(); }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    std::size_t index(std::size_t iz, std::size_t ix, std::size_t iy = 0) const {
        return iz * strides_[0] + ix * strides_[1] + iy;
    }

    T& operator()(std::size_t iz, std::size_t ix, std::size_t iy = 0) {
        return data_[index(iz, ix, iy)];
    }
    const T& operator()(std::size_t iz, std::size_t ix, std::size_t iy = 0) const {
        return data_[index(iz, ix, iy)];
    }

    void fill(T value) { data_.assign(data_.size(), value); }

    const std::vector<T>& values() const { return data_; }
    std::vector<T>& values() { return data_; }

private:
    int ndim_ = 2;
    std::array<std::size_t, 3> shape_{1, 1, 1};
    std::array<std::size_t, 3> strides_{1, 1, 1};
    std::vector<T> data_;
};

}  // namespace fdwave
