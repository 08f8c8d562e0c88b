#include "g5/grid.hpp"

#include <cmath>

#include "g5/kernels.hpp"

namespace g5 {

Grid::Grid(double half_length, std::size_t n) : half_length_(half_length), n_(n) {
    dx_ = 2.0 * half_length_ / static_cast<double>(n_);
    wavenumbers_.resize(n_);
    const double k0 = M_PI / half_length_;
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(n_) / 2;
    for (std::size_t i = 0; i < n_; ++i) {
        std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i);
        if (j >= half) j -= static_cast<std::ptrdiff_t>(n_);
        wavenumbers_[i] = k0 * static_cast<double>(j);
    }
}

std::shared_ptr<const Grid> Grid::make(double half_length, std::size_t n) {
    if (!(half_length > 0.0))
        throw std::invalid_argument("Grid: half_length must be positive");
    if (n < 16) throw std::invalid_argument("Grid: n must be >= 16");
    if (n % 2 != 0) throw std::invalid_argument("Grid: n must be even");
    return std::shared_ptr<const Grid>(new Grid(half_length, n));
}

RealField::RealField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->n())
        throw std::invalid_argument("RealField: values length must equal grid.n");
}

RealField RealField::zeros(GridPtr grid) {
    std::vector<double> v(grid->n(), 0.0);
    return RealField(std::move(grid), std::move(v));
}

bool RealField::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

double RealField::sup() const { return kern::ops().supnorm(values_.data(), values_.size()); }

double RealField::boundary_level() const {
    return std::max(std::fabs(values_.front()), std::fabs(values_.back()));
}

RealField make_grid_field(const GridPtr& grid, double (*fn)(double)) {
    RealField f = RealField::zeros(grid);
    for (std::size_t i = 0; i < grid->n(); ++i) f[i] = fn(grid->node(i));
    return f;
}

void require_same_grid(const RealField& a, const RealField& b) {
    if (!a.grid().same(b.grid()))
        throw std::invalid_argument("fields live on different grids");
}

void require_decay(const RealField& u, double tol, const std::string& what) {
    const double peak = u.sup();
    if (peak == 0.0) return;
    if (u.boundary_level() > tol * peak)
        throw DomainTooSmall("domain too small: " + what + " does not decay at the boundary");
}

}  // namespace g5
