#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "iim/core.hpp"

namespace iim {

// Dense 2D array with a fixed-width ghost frame. Owned indices run
// i in [0,nx), j in [0,ny); ghosted accesses allow i in [-G, nx+G).
class Array2D {
  public:
    static constexpr int kGhost = 3;

    Array2D() = default;
    Array2D(int nx, int ny, double init = 0.0)
        : nx_(nx), ny_(ny), stride_(nx + 2 * kGhost),
          data_((nx + 2 * kGhost) * (ny + 2 * kGhost), init) {}

    int nx() const { return nx_; }
    int ny() const { return ny_; }

    double& operator()(int i, int j) { return data_[idx(i, j)]; }
    double operator()(int i, int j) const { return data_[idx(i, j)]; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    bool owned_finite() const {
        for (int j = 0; j < ny_; ++j)
            for (int i = 0; i < nx_; ++i)
                if (!std::isfinite((*this)(i, j))) return false;
        return true;
    }

    double max_abs_owned() const {
        double m = 0.0;
        for (int j = 0; j < ny_; ++j)
            for (int i = 0; i < nx_; ++i) m = std::max(m, std::abs((*this)(i, j)));
        return m;
    }

    bool same_shape(const Array2D& o) const { return nx_ == o.nx_ && ny_ == o.ny_; }

    // raw storage, ghosts included; used by checkpoint/dump IO
    const std::vector<double>& raw() const { return data_; }
    std::vector<double>& raw() { return data_; }

  private:
    int idx(int i, int j) const {
#ifndef NDEBUG
        if (i < -kGhost || i >= nx_ + kGhost || j < -kGhost || j >= ny_ + kGhost)
            throw ContractError("Array2D index out of ghosted range");
#endif
        return (i + kGhost) + (j + kGhost) * stride_;
    }

    int nx_ = 0, ny_ = 0, stride_ = 0;
    std::vector<double> data_;
};

} // namespace iim
