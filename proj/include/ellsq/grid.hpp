#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace ellsq {

// Periodic lattice over a (2+d)-dimensional torus: two x-axes followed by
// d z-axes (d in {0,1,2}). A pure z-grid (n_x_axes == 0) represents the
// restriction target M; a 0-axis grid is a single point.
//
// Axis j has extent L_j and N_j sites at spacing h_j = L_j/N_j, coordinates
// x_i = i*h_j for i in [0, N_j), so index 0 sits at coordinate 0. Dual
// frequencies are k_j = 2*pi*n_j/L_j with n_j in [-N_j/2, N_j/2).
class Grid {
  public:
    Grid() = default;
    Grid(std::vector<int> dims, std::vector<double> extents, int n_x_axes);

    static Grid xz(std::vector<int> x_dims, std::vector<double> x_extents,
                   std::vector<int> z_dims, std::vector<double> z_extents);
    static Grid zonly(std::vector<int> dims, std::vector<double> extents);
    static Grid point();

    int rank() const { return static_cast<int>(dims_.size()); }
    int n_x_axes() const { return n_x_axes_; }
    int n_z_axes() const { return rank() - n_x_axes_; }
    const std::vector<int>& dims() const { return dims_; }
    const std::vector<double>& extents() const { return extents_; }
    double extent(int axis) const { return extents_[axis]; }
    int points(int axis) const { return dims_[axis]; }
    double spacing(int axis) const { return extents_[axis] / dims_[axis]; }

    std::int64_t n_sites() const { return n_sites_; }
    double cell_volume() const { return cell_volume_; }
    double volume() const { return volume_; }

    // frequency of dual index i on an axis (i in [0, N))
    double frequency(int axis, int index) const;
    // signed integer mode number in [-N/2, N/2)
    int mode_number(int axis, int index) const;
    // minimum-image physical displacement of site index i from the origin
    double displacement(int axis, int index) const;

    // row-major flattening
    std::int64_t flatten(const std::vector<int>& idx) const;
    void unflatten(std::int64_t flat, std::vector<int>& idx) const;

    // grid consisting of the z-axes only
    Grid z_slice() const;

    bool operator==(const Grid& o) const {
        return dims_ == o.dims_ && extents_ == o.extents_ && n_x_axes_ == o.n_x_axes_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

  private:
    std::vector<int> dims_;
    std::vector<double> extents_;
    int n_x_axes_ = 0;
    std::int64_t n_sites_ = 1;
    double cell_volume_ = 1.0;
    double volume_ = 1.0;
};

}  // namespace ellsq
