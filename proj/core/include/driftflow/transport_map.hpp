#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace driftflow {

// One resampling map R^D -> R^D: an affine base plus a Gaussian RBF layer,
//   M_i(x) = a_i'x + b_i + sum_r v_{r,i} * exp(-|x - c_r|^2 / (2 s_r^2)).
// Centers and widths are fixed geometry; only A, b, V enter the parameter
// vector (packed A row-major, then b, then V row-major).
class RbfMap {
public:
  RbfMap(std::size_t dim,
         std::vector<double> affine_matrix,   // D x D, row-major
         std::vector<double> affine_offset,   // D
         std::vector<double> rbf_weights,     // D x R, row-major
         std::vector<double> rbf_centers,     // R x D, row-major
         std::vector<double> rbf_widths);     // R, all > 0

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rbf_count() const noexcept { return widths_.size(); }
  std::size_t param_count() const noexcept { return dim_ * dim_ + dim_ + dim_ * widths_.size(); }

  const std::vector<double>& affine_matrix() const noexcept { return a_; }
  const std::vector<double>& affine_offset() const noexcept { return b_; }
  const std::vector<double>& rbf_weights() const noexcept { return v_; }
  const std::vector<double>& rbf_centers() const noexcept { return centers_; }
  const std::vector<double>& rbf_widths() const noexcept { return widths_; }

  std::vector<double> pack_params() const;
  // Same geometry (centers, widths), new A, b, V from a packed vector.
  RbfMap with_params(std::span<const double> params) const;

  void apply(std::span<const double> x, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> x) const;

private:
  std::size_t dim_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> v_;
  std::vector<double> centers_;
  std::vector<double> widths_;
};

// A = I, b = 0, V = 0: the exact identity for every input.
RbfMap identity_map(std::size_t dim, std::vector<double> rbf_centers,
                    std::vector<double> rbf_widths);

std::vector<double> apply_map(const RbfMap& map, std::span<const double> x);

// Elementwise over row-major points, order preserved.
std::vector<double> apply_map_batch(const RbfMap& map, std::span<const double> xs);

// Accumulates J_theta(M(x_p))' * upstream_p over all points, packed in
// parameter order. upstream is row-major with one D-vector per point
// (typically the location gradient of a distance). Centers and widths are
// fixed and receive no gradient.
std::vector<double> map_param_gradient(const RbfMap& map, std::span<const double> xs,
                                       std::span<const double> upstream);

// Ordered sub-step maps; composition applies maps.front() first.
class MapChain {
public:
  MapChain() = default;
  explicit MapChain(std::vector<RbfMap> maps);

  void push_back(RbfMap map);
  std::size_t size() const noexcept { return maps_.size(); }
  bool empty() const noexcept { return maps_.empty(); }
  const RbfMap& operator[](std::size_t k) const { return maps_[k]; }

private:
  std::vector<RbfMap> maps_;
};

// Sequential application through the chain; an empty chain returns x.
std::vector<double> compose(const MapChain& chain, std::span<const double> x);

// compose over extra prior-space points (row-major); lets a finished flow
// carry more samples than it was fitted on.
std::vector<double> upsample(const MapChain& chain, std::span<const double> points,
                             std::size_t dim);

// JSON round-trip: per map the fields dim, R, A (row-major), b, V
// (row-major), centers, widths.
std::string map_chain_to_json(const MapChain& chain);
MapChain map_chain_from_json(const std::string& text);

}  // namespace driftflow
