#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace g5 {

struct DomainTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Uniform periodic truncation of the line to [-L, L).
class Grid {
  public:
    static std::shared_ptr<const Grid> make(double half_length, std::size_t n);

    double half_length() const { return half_length_; }
    std::size_t n() const { return n_; }
    double dx() const { return dx_; }
    double node(std::size_t i) const { return -half_length_ + dx_ * static_cast<double>(i); }
    // k_j = pi*j/L in standard DFT ordering (j = 0..n/2-1, -n/2..-1)
    const std::vector<double>& wavenumbers() const { return wavenumbers_; }
    double kmax() const { return wavenumbers_[n_ / 2] < 0 ? -wavenumbers_[n_ / 2]
                                                          : wavenumbers_[n_ / 2]; }
    bool same(const Grid& other) const {
        return n_ == other.n_ && half_length_ == other.half_length_;
    }

  private:
    Grid(double half_length, std::size_t n);
    double half_length_;
    std::size_t n_;
    double dx_;
    std::vector<double> wavenumbers_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Real-valued sample of a function on a Grid.
class RealField {
  public:
    RealField(GridPtr grid, std::vector<double> values);
    static RealField zeros(GridPtr grid);

    const Grid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    bool all_finite() const;
    double sup() const;
    // largest |value| among the two boundary samples
    double boundary_level() const;

  private:
    GridPtr grid_;
    std::vector<double> values_;
};

RealField make_grid_field(const GridPtr& grid, double (*fn)(double));

void require_same_grid(const RealField& a, const RealField& b);
// boundary magnitude must stay below tol * peak, else DomainTooSmall
void require_decay(const RealField& u, double tol, const std::string& what);

}  // namespace g5
