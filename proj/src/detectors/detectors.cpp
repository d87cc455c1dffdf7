#include "vdet/detectors.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "vdet/error.hpp"
#include "vdet/operators.hpp"

namespace vdet {

void gauss_legendre(std::size_t n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
  // Golub-Welsch: eigenvalues of the Jacobi matrix of the Legendre recurrence
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m), sub(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index k = 1; k < m; ++k) sub[k - 1] = static_cast<double>(k) / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  nodes.resize(n);
  weights.resize(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (Eigen::Index k = 0; k < m; ++k) {
    nodes[k] = mid + half * eig.eigenvalues()[k];
    const double v = eig.eigenvectors()(0, k);
    weights[k] = 2.0 * v * v * half;
  }
}

namespace {

LineSample line_sample(double xi, double u, double weight) {
  LineSample s;
  const double sxi = std::sqrt(xi);
  s.eta = u * u;
  s.x = 0.5 * (xi - s.eta);
  s.y = sxi * u;
  s.tx = -0.5;
  s.ty = 0.5 * sxi / u;
  s.weight = weight;
  // rotate the tangent by -90 degrees: (ty, -tx) * deta/du = (sqrt(xi), u)
  s.nx = sxi;
  s.ny = u;
  s.length = 2.0 * u;
  return s;
}

// Composite 3-point Gauss-Legendre in u with breaks wherever the line (either
// half) crosses a row or column of nodes. Inside each piece the bilinear
// interpolant is a polynomial of degree <= 4 in u, so the rule is exact for it.
// Pieces are bisected until there are at least `min_samples` nodes.
DetectorLine grid_adapted(const DetectorLine& line, const GridSpec& grid, std::size_t min_samples) {
  const double top = std::sqrt(line.eta_max), sxi = std::sqrt(line.xi);
  std::vector<double> breaks{0.0, top};
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    const double e = line.xi - 2.0 * grid.x(i);
    if (e > 0.0 && e < line.eta_max) breaks.push_back(std::sqrt(e));
  }
  for (std::size_t j = 0; j < grid.ny(); ++j) {
    const double u = std::abs(grid.y(j)) / sxi;
    if (u > 0.0 && u < top) breaks.push_back(u);
  }
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> pieces{breaks.front()};
  for (std::size_t k = 1; k < breaks.size(); ++k)
    if (breaks[k] - pieces.back() > 1e-12 * top) pieces.push_back(breaks[k]);
  pieces.back() = top;
  while (3 * (pieces.size() - 1) < min_samples) {
    std::size_t widest = 0;
    for (std::size_t k = 1; k + 1 < pieces.size(); ++k)
      if (pieces[k + 1] - pieces[k] > pieces[widest + 1] - pieces[widest]) widest = k;
    pieces.insert(pieces.begin() + static_cast<std::ptrdiff_t>(widest) + 1,
                  0.5 * (pieces[widest] + pieces[widest + 1]));
  }
  DetectorLine out{line.xi, line.eta_max, {}};
  out.samples.reserve(3 * (pieces.size() - 1));
  std::vector<double> u, w;
  for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
    gauss_legendre(3, pieces[k], pieces[k + 1], u, w);
    for (std::size_t q = 0; q < 3; ++q) out.samples.push_back(line_sample(line.xi, u[q], w[q]));
  }
  return out;
}

}  // namespace

DetectorLine make_line(double xi, double eta_max, std::size_t n) {
  if (!(xi > 0.0) || !(eta_max > 0.0)) throw ConfigError("detector line needs xi > 0 and eta0 > 0");
  if (n < 16) throw ConfigError("detector line needs at least 16 samples");
  std::vector<double> u, w;
  gauss_legendre(n, 0.0, std::sqrt(eta_max), u, w);
  DetectorLine line{xi, eta_max, {}};
  line.samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) line.samples.push_back(line_sample(xi, u[k], w[k]));
  return line;
}

DetectorBank::DetectorBank(const GridSpec& grid, std::vector<DetectorLine> lines, double relative_floor)
    : grid_(grid), relative_floor_(relative_floor) {
  lines_.reserve(lines.size());
  for (const auto& l : lines) lines_.push_back(grid_adapted(l, grid_, l.samples.size()));
  std::map<std::size_t, std::size_t> slot_of;
  auto slot = [&](std::size_t i, std::size_t j) {
    const std::size_t k = grid_.index(i, j);
    auto [it, inserted] = slot_of.try_emplace(k, nodes_.size());
    if (inserted) nodes_.push_back(k);
    return it->second;
  };
  auto stencil = [&](double x, double y) {
    const double fx = grid_.fx(x), fy = grid_.fy(y);
    const double i0 = std::floor(fx), j0 = std::floor(fy);
    if (i0 < 0 || j0 < 0 || i0 + 1 >= static_cast<double>(grid_.nx()) || j0 + 1 >= static_cast<double>(grid_.ny())) {
      std::ostringstream msg;
      msg << "detector sample (" << x << ", " << y << ") lies outside the grid";
      throw ConfigError(msg.str());
    }
    const double tx = fx - i0, ty = fy - j0;
    const auto i = static_cast<std::size_t>(i0), j = static_cast<std::size_t>(j0);
    return Stencil{{slot(i, j), slot(i + 1, j), slot(i, j + 1), slot(i + 1, j + 1)},
                   {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty}};
  };
  stencils_.resize(lines_.size());
  for (std::size_t l = 0; l < lines_.size(); ++l)
    for (const auto& s : lines_[l].samples) stencils_[l].push_back({stencil(s.x, s.y), stencil(s.x, -s.y)});
}

std::vector<LineReading> DetectorBank::read(const WaveField& field) const {
  if (!(field.grid() == grid_)) throw ConfigError("field grid differs from detector grid");
  const std::size_t n = nodes_.size();
  std::vector<double> rho(n), jx(n), jy(n);
  auto d = field.data();
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t k = nodes_[s];
    const std::size_t i = k / grid_.ny(), j = k % grid_.ny();
    rho[s] = std::norm(d[k]);
    const auto c = current_at(field, i, j);
    jx[s] = c.jx;
    jy[s] = c.jy;
  }
  double peak = 0.0;
  for (const auto& z : d) peak = std::max(peak, std::norm(z));
  const double floor = relative_floor_ * peak;

  std::vector<LineReading> out(lines_.size());
  for (std::size_t l = 0; l < lines_.size(); ++l) {
    const auto& line = lines_[l];
    LineReading r;
    std::size_t masked = 0;
    for (std::size_t k = 0; k < line.samples.size(); ++k) {
      const auto& smp = line.samples[k];
      for (int half = 0; half < 2; ++half) {
        const auto& st = stencils_[l][k][half];
        const double sign = half == 0 ? 1.0 : -1.0;
        double p = 0.0, ax = 0.0, ay = 0.0, vx = 0.0, vy = 0.0;
        bool valid = peak > 0.0;
        for (int c = 0; c < 4; ++c) {
          const std::size_t s = st.slot[c];
          const double w = st.weight[c];
          p += w * rho[s];
          ax += w * jx[s];
          ay += w * jy[s];
          if (rho[s] < floor || rho[s] <= 0.0) {
            valid = false;
          } else {
            vx += w * jx[s] / rho[s];
            vy += w * jy[s] / rho[s];
          }
        }
        r.flux += smp.weight * (ax * smp.nx + sign * ay * smp.ny);
        r.density += smp.weight * smp.length * p;
        if (valid)
          r.velocity += smp.weight * (vx * smp.nx + sign * vy * smp.ny);
        else
          ++masked;
      }
    }
    r.masked_fraction = static_cast<double>(masked) / (2.0 * static_cast<double>(line.samples.size()));
    out[l] = r;
  }
  return out;
}

std::array<double, 3> DetectorBank::extent() const {
  double ymax = 0.0, xlo = INFINITY, xhi = -INFINITY;
  for (const auto& line : lines_)
    for (const auto& s : line.samples) {
      ymax = std::max(ymax, std::abs(s.y));
      xlo = std::min(xlo, s.x);
      xhi = std::max(xhi, s.x);
    }
  return {xlo, xhi, ymax};
}

double flux(const DetectorLine& line, const WaveField& field) {
  return DetectorBank(field.grid(), {line}).read(field)[0].flux;
}

double line_density(const DetectorLine& line, const WaveField& field) {
  return DetectorBank(field.grid(), {line}).read(field)[0].density;
}

LineVelocity line_velocity(const DetectorLine& line, const WaveField& field, double relative_floor) {
  const auto r = DetectorBank(field.grid(), {line}, relative_floor).read(field)[0];
  if (r.masked_fraction > 0.5) {
    std::ostringstream msg;
    msg << "line velocity at xi = " << line.xi << ": " << 100.0 * r.masked_fraction
        << "% of samples below the density floor";
    throw NumericalError(msg.str());
  }
  return {r.velocity, r.masked_fraction};
}

TraceRecorder::TraceRecorder(const GridSpec& grid, std::vector<DetectorLine> lines, double relative_floor)
    : bank_(grid, std::move(lines), relative_floor) {
  for (const auto& l : bank_.lines()) traces_.push_back(DetectorTrace{l.xi, l.eta_max, {}, {}, {}, {}, {}});
}

void TraceRecorder::observe(double t, const WaveField& field) {
  const auto readings = bank_.read(field);
  for (std::size_t l = 0; l < readings.size(); ++l) {
    auto& tr = traces_[l];
    tr.times.push_back(t);
    tr.flux.push_back(readings[l].flux);
    tr.line_density.push_back(readings[l].density);
    tr.line_velocity.push_back(readings[l].velocity);
    tr.masked_fraction.push_back(readings[l].masked_fraction);
  }
}

ObserverHook TraceRecorder::hook(std::size_t stride) {
  return {stride, [this](double t, const WaveField& f) { observe(t, f); }};
}

std::vector<double> detector_fan(double xi_lo, double xi_hi, std::size_t count, std::span<const double> extra) {
  if (!(xi_lo > 0.0) || !(xi_hi > xi_lo) || count < 2) throw ConfigError("invalid detector fan parameters");
  std::vector<double> xs;
  const double ratio = std::log(xi_hi / xi_lo);
  for (std::size_t k = 0; k < count; ++k)
    xs.push_back(xi_lo * std::exp(ratio * static_cast<double>(k) / static_cast<double>(count - 1)));
  xs.front() = xi_lo;
  xs.back() = xi_hi;
  xs.insert(xs.end(), extra.begin(), extra.end());
  std::sort(xs.begin(), xs.end());
  // drop near-duplicates, preferring the explicitly requested values
  std::vector<double> out;
  for (double x : xs) {
    if (!out.empty() && std::abs(x - out.back()) < 1e-9 * x) continue;
    out.push_back(x);
  }
  return out;
}

}  // namespace vdet
