#include "ellsq/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ellsq {

Grid::Grid(std::vector<int> dims, std::vector<double> extents, int n_x_axes)
    : dims_(std::move(dims)), extents_(std::move(extents)), n_x_axes_(n_x_axes) {
    if (dims_.size() != extents_.size()) throw std::invalid_argument("grid: dims/extents size mismatch");
    if (n_x_axes_ != 0 && n_x_axes_ != 2) throw std::invalid_argument("grid: n_x_axes must be 0 or 2");
    if (static_cast<int>(dims_.size()) < n_x_axes_) throw std::invalid_argument("grid: fewer axes than x-axes");
    if (dims_.size() > 4) throw std::invalid_argument("grid: at most 4 axes supported");
    for (std::size_t a = 0; a < dims_.size(); ++a) {
        if (dims_[a] < 4 || dims_[a] % 2 != 0)
            throw std::invalid_argument("grid: point counts must be even and >= 4");
        if (!(extents_[a] > 0.0)) throw std::invalid_argument("grid: extents must be positive");
        n_sites_ *= dims_[a];
        cell_volume_ *= extents_[a] / dims_[a];
        volume_ *= extents_[a];
    }
    if (!(cell_volume_ > 0.0)) throw std::invalid_argument("grid: cell volume must be positive");
}

Grid Grid::xz(std::vector<int> x_dims, std::vector<double> x_extents,
              std::vector<int> z_dims, std::vector<double> z_extents) {
    if (x_dims.size() != 2) throw std::invalid_argument("grid: exactly two x-axes required");
    if (z_dims.size() > 2) throw std::invalid_argument("grid: at most two z-axes supported");
    std::vector<int> dims = x_dims;
    dims.insert(dims.end(), z_dims.begin(), z_dims.end());
    std::vector<double> ext = x_extents;
    ext.insert(ext.end(), z_extents.begin(), z_extents.end());
    return Grid(std::move(dims), std::move(ext), 2);
}

Grid Grid::zonly(std::vector<int> dims, std::vector<double> extents) {
    return Grid(std::move(dims), std::move(extents), 0);
}

Grid Grid::point() { return Grid({}, {}, 0); }

double Grid::frequency(int axis, int index) const {
    return 2.0 * std::numbers::pi * mode_number(axis, index) / extents_[axis];
}

int Grid::mode_number(int axis, int index) const {
    const int n = dims_[axis];
    return index < n / 2 ? index : index - n;
}

double Grid::displacement(int axis, int index) const {
    const int n = dims_[axis];
    const int signed_idx = index <= n / 2 ? index : index - n;
    return signed_idx * spacing(axis);
}

std::int64_t Grid::flatten(const std::vector<int>& idx) const {
    std::int64_t flat = 0;
    for (std::size_t a = 0; a < dims_.size(); ++a) flat = flat * dims_[a] + idx[a];
    return flat;
}

void Grid::unflatten(std::int64_t flat, std::vector<int>& idx) const {
    idx.resize(dims_.size());
    for (int a = rank() - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % dims_[a]);
        flat /= dims_[a];
    }
}

Grid Grid::z_slice() const {
    std::vector<int> d(dims_.begin() + n_x_axes_, dims_.end());
    std::vector<double> e(extents_.begin() + n_x_axes_, extents_.end());
    return Grid(std::move(d), std::move(e), 0);
}

}  // namespace ellsq
