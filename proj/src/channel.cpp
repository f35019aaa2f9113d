#include "fris/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fris/kernels.hpp"

namespace fris {

namespace {

constexpr double kExponentialDecay = 0.25;  // wavelengths

double distance3(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// exp(-j 2 pi d) with the integer part of d removed first.
Complex unit_phase(double d_wavelengths) {
  const double frac = d_wavelengths - std::floor(d_wavelengths);
  if (frac == 0.0) return {1.0, 0.0};
  const double arg = -2.0 * std::numbers::pi * frac;
  return {std::cos(arg), std::sin(arg)};
}

}  // namespace

std::string to_string(Fading f) { return f == Fading::rayleigh ? "rayleigh" : "los"; }

std::string to_string(CouplingKernel k) {
  switch (k) {
    case CouplingKernel::sinc:
      return "sinc";
    case CouplingKernel::exponential:
      return "exponential";
    case CouplingKernel::none:
      return "none";
  }
  return "?";
}

Fading parse_fading(const std::string& text) {
  if (text == "rayleigh") return Fading::rayleigh;
  if (text == "los") return Fading::los;
  throw std::invalid_argument("unknown fading model '" + text + "'");
}

CouplingKernel parse_kernel(const std::string& text) {
  if (text == "sinc") return CouplingKernel::sinc;
  if (text == "exponential") return CouplingKernel::exponential;
  if (text == "none") return CouplingKernel::none;
  throw std::invalid_argument("unknown coupling kernel '" + text + "'");
}

void ChannelParams::validate() const {
  if (rx_antennas < 1) throw std::invalid_argument("rx_antennas must be >= 1");
  if (!(coupling_strength >= 0.0 && coupling_strength <= 1.0))
    throw std::invalid_argument("coupling_strength must lie in [0, 1]");
  if (!(estimation_error_var >= 0.0)) throw std::invalid_argument("estimation_error_var must be >= 0");
  if (!(rx_spacing >= 0.0)) throw std::invalid_argument("rx_spacing must be >= 0");
}

ChannelRealization draw_channel(const ApertureGrid& grid, const ChannelParams& params) {
  params.validate();
  const std::size_t n = grid.size();
  const auto r_count = static_cast<std::size_t>(params.rx_antennas);
  ChannelRealization out(n, r_count);
  out.set_seed(params.seed);

  if (params.fading == Fading::rayleigh) {
    Rng rng = make_rng(params.seed);
    ComplexGaussian cn(1.0);
    std::vector<Complex> tx_hop(n);
    for (auto& g : tx_hop) g = cn(rng);
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t r = 0; r < r_count; ++r) out(m, r) = tx_hop[m] * cn(rng);
    return out;
  }

  for (std::size_t m = 0; m < n; ++m) {
    const Point3 e{grid.position(m).x, grid.position(m).y, 0.0};
    const double d_tx = distance3(params.tx_position, e);
    for (std::size_t r = 0; r < r_count; ++r) {
      const Point3 a{params.rx_position.x + static_cast<double>(r) * params.rx_spacing,
                     params.rx_position.y, params.rx_position.z};
      out(m, r) = unit_phase(d_tx + distance3(e, a));
    }
  }
  return out;
}

CouplingMatrix coupling_matrix(const ApertureGrid& grid, double rho, CouplingKernel kernel) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("coupling rho must lie in [0, 1]");
  const std::size_t n = grid.size();
  CouplingMatrix c(n, kernel, rho);
  for (std::size_t m = 0; m < n; ++m) {
    c(m, m) = 1.0;
    for (std::size_t k = m + 1; k < n; ++k) {
      double v = 0.0;
      if (rho > 0.0) {
        const double d = distance(grid.position(m), grid.position(k));
        switch (kernel) {
          case CouplingKernel::sinc:
            v = rho * normalized_sinc(2.0 * d);
            break;
          case CouplingKernel::exponential:
            v = rho * std::exp(-d / kExponentialDecay);
            break;
          case CouplingKernel::none:
            break;
        }
      }
      c(m, k) = v;
      c(k, m) = v;
    }
  }
  return c;
}

ResponseVector effective_response(std::span<const std::size_t> active_elements,
                                  const ChannelRealization& realization,
                                  const CouplingMatrix& coupling) {
  const std::size_t n = realization.elements();
  if (coupling.size() != n)
    throw std::invalid_argument("coupling matrix size does not match the channel realization");
  for (auto e : active_elements)
    if (e >= n) throw std::invalid_argument("active element index out of range");

  ResponseVector h{std::vector<Complex>(realization.antennas(), Complex{})};
  for (std::size_t m = 0; m < n; ++m) {
    double u = 0.0;
    for (auto a : active_elements) u += coupling(m, a);
    if (u == 0.0) continue;
    const auto row = realization.row(m);
    for (std::size_t r = 0; r < row.size(); ++r) h.values[r] += u * row[r];
  }
  return h;
}

ResponseVector effective_response(const Configuration& config, const ChannelRealization& realization,
                                  const CouplingMatrix& coupling) {
  return effective_response(std::span<const std::size_t>(config.active_elements), realization, coupling);
}

ResponseMap build_response_map(const CandidateSet& candidates, const ChannelRealization& realization,
                               const CouplingMatrix& coupling, double estimation_error_var,
                               std::uint64_t seed) {
  if (!(estimation_error_var >= 0.0)) throw std::invalid_argument("estimation_error_var must be >= 0");
  if (candidates.grid.size() != realization.elements())
    throw std::invalid_argument("candidate grid does not match the channel realization");
  ResponseMap map;
  map.entries = kernels::omp::responses(candidates.configurations, realization, coupling,
                                        estimation_error_var, seed);
  map.antennas = realization.antennas();
  map.provenance = {realization.seed(), coupling.rho(), coupling.kernel(), estimation_error_var, seed};
  return map;
}

ResponseVector group_equivalent_response(const ElementSet& unit, const ChannelRealization& realization,
                                         const CouplingMatrix& coupling) {
  if (unit.empty()) throw std::invalid_argument("unit must be nonempty");
  return effective_response(std::span<const std::size_t>(unit), realization, coupling);
}

}  // namespace fris
