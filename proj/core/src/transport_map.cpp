#include "driftflow/transport_map.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

namespace driftflow {

RbfMap::RbfMap(std::size_t dim, std::vector<double> affine_matrix,
               std::vector<double> affine_offset, std::vector<double> rbf_weights,
               std::vector<double> rbf_centers, std::vector<double> rbf_widths)
    : dim_(dim),
      a_(std::move(affine_matrix)),
      b_(std::move(affine_offset)),
      v_(std::move(rbf_weights)),
      centers_(std::move(rbf_centers)),
      widths_(std::move(rbf_widths)) {
  if (dim_ == 0) throw std::invalid_argument("RbfMap: dim must be >= 1");
  const std::size_t r = widths_.size();
  if (a_.size() != dim_ * dim_ || b_.size() != dim_ || v_.size() != dim_ * r ||
      centers_.size() != r * dim_) {
    throw std::invalid_argument("RbfMap: inconsistent parameter sizes");
  }
  for (double w : widths_) {
    if (!(w > 0.0)) throw std::invalid_argument("RbfMap: rbf widths must be positive");
  }
}

std::vector<double> RbfMap::pack_params() const {
  std::vector<double> params;
  params.reserve(param_count());
  params.insert(params.end(), a_.begin(), a_.end());
  params.insert(params.end(), b_.begin(), b_.end());
  params.insert(params.end(), v_.begin(), v_.end());
  return params;
}

RbfMap RbfMap::with_params(std::span<const double> params) const {
  if (params.size() != param_count()) {
    throw std::invalid_argument("RbfMap::with_params: wrong parameter count");
  }
  std::vector<double> a(params.begin(), params.begin() + dim_ * dim_);
  std::vector<double> b(params.begin() + dim_ * dim_, params.begin() + dim_ * dim_ + dim_);
  std::vector<double> v(params.begin() + dim_ * dim_ + dim_, params.end());
  return RbfMap(dim_, std::move(a), std::move(b), std::move(v), centers_, widths_);
}

void RbfMap::apply(std::span<const double> x, std::span<double> out) const {
  if (x.size() != dim_ || out.size() != dim_) {
    throw std::invalid_argument("RbfMap::apply: dimension mismatch");
  }
  const std::size_t r = rbf_count();
  // Kernel values are shared across output components.
  double kbuf[64];
  std::vector<double> kheap;
  double* kernels = kbuf;
  if (r > 64) {
    kheap.resize(r);
    kernels = kheap.data();
  }
  for (std::size_t k = 0; k < r; ++k) {
    const double* c = centers_.data() + k * dim_;
    double s = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) {
      const double diff = x[d] - c[d];
      s += diff * diff;
    }
    const double w = widths_[k];
    kernels[k] = std::exp(-0.5 * s / (w * w));
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    const double* row = a_.data() + i * dim_;
    double acc = b_[i];
    for (std::size_t d = 0; d < dim_; ++d) acc += row[d] * x[d];
    const double* vrow = v_.data() + i * r;
    for (std::size_t k = 0; k < r; ++k) acc += vrow[k] * kernels[k];
    out[i] = acc;
  }
}

std::vector<double> RbfMap::apply(std::span<const double> x) const {
  std::vector<double> out(dim_);
  apply(x, out);
  return out;
}

RbfMap identity_map(std::size_t dim, std::vector<double> rbf_centers,
                    std::vector<double> rbf_widths) {
  std::vector<double> a(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) a[i * dim + i] = 1.0;
  std::vector<double> b(dim, 0.0);
  std::vector<double> v(dim * rbf_widths.size(), 0.0);
  return RbfMap(dim, std::move(a), std::move(b), std::move(v), std::move(rbf_centers),
                std::move(rbf_widths));
}

std::vector<double> apply_map(const RbfMap& map, std::span<const double> x) {
  return map.apply(x);
}

std::vector<double> apply_map_batch(const RbfMap& map, std::span<const double> xs) {
  const std::size_t dim = map.dim();
  if (xs.size() % dim != 0) {
    throw std::invalid_argument("apply_map_batch: point buffer not a multiple of dim");
  }
  std::vector<double> out(xs.size());
  const std::size_t n = xs.size() / dim;
  for (std::size_t p = 0; p < n; ++p) {
    map.apply(xs.subspan(p * dim, dim), {out.data() + p * dim, dim});
  }
  return out;
}

std::vector<double> map_param_gradient(const RbfMap& map, std::span<const double> xs,
                                       std::span<const double> upstream) {
  const std::size_t dim = map.dim();
  const std::size_t r = map.rbf_count();
  if (xs.size() != upstream.size() || xs.size() % dim != 0) {
    throw std::invalid_argument("map_param_gradient: xs/upstream size mismatch");
  }
  const std::size_t n = xs.size() / dim;

  std::vector<double> grad(map.param_count(), 0.0);
  double* ga = grad.data();                    // D x D
  double* gb = grad.data() + dim * dim;        // D
  double* gv = grad.data() + dim * dim + dim;  // D x R

  std::vector<double> kernels(r);
  for (std::size_t p = 0; p < n; ++p) {
    const double* x = xs.data() + p * dim;
    const double* u = upstream.data() + p * dim;
    for (std::size_t k = 0; k < r; ++k) {
      const double* c = map.rbf_centers().data() + k * dim;
      double s = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = x[d] - c[d];
        s += diff * diff;
      }
      const double w = map.rbf_widths()[k];
      kernels[k] = std::exp(-0.5 * s / (w * w));
    }
    for (std::size_t i = 0; i < dim; ++i) {
      const double ui = u[i];
      for (std::size_t d = 0; d < dim; ++d) ga[i * dim + d] += ui * x[d];
      gb[i] += ui;
      for (std::size_t k = 0; k < r; ++k) gv[i * r + k] += ui * kernels[k];
    }
  }
  return grad;
}

MapChain::MapChain(std::vector<RbfMap> maps) : maps_(std::move(maps)) {
  for (const auto& m : maps_) {
    if (m.dim() != maps_.front().dim()) {
      throw std::invalid_argument("MapChain: member maps must share the dimension");
    }
  }
}

void MapChain::push_back(RbfMap map) {
  if (!maps_.empty() && map.dim() != maps_.front().dim()) {
    throw std::invalid_argument("MapChain::push_back: dimension mismatch");
  }
  maps_.push_back(std::move(map));
}

std::vector<double> compose(const MapChain& chain, std::span<const double> x) {
  std::vector<double> cur(x.begin(), x.end());
  std::vector<double> next(cur.size());
  for (std::size_t k = 0; k < chain.size(); ++k) {
    chain[k].apply(cur, next);
    cur.swap(next);
  }
  return cur;
}

std::vector<double> upsample(const MapChain& chain, std::span<const double> points,
                             std::size_t dim) {
  if (dim == 0 || points.size() % dim != 0) {
    throw std::invalid_argument("upsample: point buffer not a multiple of dim");
  }
  if (!chain.empty() && chain[0].dim() != dim) {
    throw std::invalid_argument("upsample: dimension mismatch");
  }
  std::vector<double> out(points.size());
  const std::size_t n = points.size() / dim;
  for (std::size_t p = 0; p < n; ++p) {
    const auto mapped = compose(chain, points.subspan(p * dim, dim));
    for (std::size_t d = 0; d < dim; ++d) out[p * dim + d] = mapped[d];
  }
  return out;
}

std::string map_chain_to_json(const MapChain& chain) {
  nlohmann::json maps = nlohmann::json::array();
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const RbfMap& m = chain[k];
    nlohmann::json centers = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rbf_count(); ++r) {
      centers.push_back(std::vector<double>(m.rbf_centers().begin() + r * m.dim(),
                                            m.rbf_centers().begin() + (r + 1) * m.dim()));
    }
    maps.push_back({{"dim", m.dim()},
                    {"R", m.rbf_count()},
                    {"A", m.affine_matrix()},
                    {"b", m.affine_offset()},
                    {"V", m.rbf_weights()},
                    {"centers", centers},
                    {"widths", m.rbf_widths()}});
  }
  return nlohmann::json{{"maps", maps}}.dump(2);
}

MapChain map_chain_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  std::vector<RbfMap> maps;
  for (const auto& jm : doc.at("maps")) {
    const std::size_t dim = jm.at("dim").get<std::size_t>();
    std::vector<double> centers;
    for (const auto& c : jm.at("centers")) {
      for (const auto& v : c) centers.push_back(v.get<double>());
    }
    maps.emplace_back(dim, jm.at("A").get<std::vector<double>>(),
                      jm.at("b").get<std::vector<double>>(),
                      jm.at("V").get<std::vector<double>>(), std::move(centers),
                      jm.at("widths").get<std::vector<double>>());
  }
  return MapChain(std::move(maps));
}

}  // namespace driftflow
