#include "symdet/voting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "symdet/detail/parallel.hpp"
#include "symdet/geometry.hpp"
#include "symdet/histograms.hpp"

namespace symdet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegPerRad = 180.0 / kPi;
constexpr std::uint32_t kNoVote = std::numeric_limits<std::uint32_t>::max();

double wrap_degrees(double deg) noexcept {
  double t = std::fmod(deg, 360.0);
  if (t < 0.0) t += 360.0;
  if (t >= 360.0) t -= 360.0;
  return t;
}

int wrap_index(int i, int n) noexcept { return ((i % n) + n) % n; }

double min_sum(const double* a, const double* b, std::size_t n) noexcept {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += a[k] < b[k] ? a[k] : b[k];
  return sum;
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    total += k[i + radius];
  }
  for (double& v : k) v /= total;
  return k;
}

// Vertex of the parabola through (-1, l), (0, c), (1, r), limited to half a bin.
double parabolic_offset(double l, double c, double r) noexcept {
  const double denom = l - 2.0 * c + r;
  if (!(denom < 0.0)) return 0.0;
  return std::clamp(0.5 * (l - r) / denom, -0.5, 0.5);
}

}  // namespace

AxisParams pair_axis_params(Point2 a, Point2 b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len = std::hypot(dx, dy);
  if (!(len > 0.0)) fail(ErrorKind::invalid_argument, "pair_axis_params: coincident points");
  const double nx = dx / len;
  const double ny = dy / len;
  double rho = 0.5 * (a.x + b.x) * nx + 0.5 * (a.y + b.y) * ny;
  double theta = std::atan2(ny, nx) * kDegPerRad;
  if (rho < 0.0) {
    rho = -rho;
    theta += 180.0;
  }
  return {rho, wrap_degrees(theta)};
}

Mat2 reflection_matrix(double gamma) noexcept {
  const double c = std::cos(2.0 * gamma);
  const double s = std::sin(2.0 * gamma);
  return {{{c, s}, {s, -c}}};
}

double mirror_term(double phi_i, double phi_j, double gamma) noexcept {
  const Mat2 r = reflection_matrix(gamma);
  const double ci = std::cos(phi_i), si = std::sin(phi_i);
  const double cj = std::cos(phi_j), sj = std::sin(phi_j);
  return std::abs(ci * (r[0][0] * cj + r[0][1] * sj) + si * (r[1][0] * cj + r[1][1] * sj));
}

WeightFactors weight_factors(const SymmetryFeature& a, const SymmetryFeature& b,
                             TextureMirror mode) {
  const AxisParams axis = pair_axis_params(a.position, b.position);
  const double gamma = axis.theta / kDegPerRad + kPi / 2.0;
  const std::vector<double> mirrored =
      mode == TextureMirror::anchor ? mirror_about_anchor(b.texture) : reverse(b.texture);
  return {mirror_term(a.orientation, b.orientation, gamma), intersection(a.texture, mirrored),
          intersection(a.color, b.color)};
}

double symmetry_weight(const SymmetryFeature& a, const SymmetryFeature& b, TextureMirror mode) {
  return weight_factors(a, b, mode).weight();
}

VoteHistogram::VoteHistogram(int rho_bins, int theta_bins)
    : bins_(rho_bins, theta_bins), offsets_(static_cast<std::size_t>(rho_bins) * theta_bins + 1, 0) {
  require(rho_bins >= 1 && theta_bins >= 1, "vote histogram needs at least one bin per axis");
}

std::span<const PairRef> VoteHistogram::voters(int rho_bin, int theta_bin) const {
  require(rho_bin >= 0 && rho_bin < rho_bins() && theta_bin >= 0 && theta_bin < theta_bins(),
          "vote histogram bin out of range");
  const std::size_t b = bins_.index(rho_bin, theta_bin);
  return std::span<const PairRef>(voters_).subspan(offsets_[b], offsets_[b + 1] - offsets_[b]);
}

std::array<int, 2> VoteHistogram::bin_of(const AxisParams& axis) const noexcept {
  if (!(axis.rho >= 0.0)) return {-1, -1};
  const int r = std::min(static_cast<int>(std::floor(axis.rho)), rho_bins() - 1);
  const int t = std::min(static_cast<int>(std::floor(axis.theta / theta_bin_width())),
                         theta_bins() - 1);
  return {r, std::max(t, 0)};
}

int rho_bin_count(int width, int height) noexcept {
  return static_cast<int>(std::ceil(std::hypot(static_cast<double>(width), height)));
}

VoteHistogram accumulate(std::span<const SymmetryFeature> features, int width, int height,
                         const VotingOptions& options) {
  require(width >= 1 && height >= 1, "accumulate: image dimensions must be positive");
  require(options.theta_bins >= 1, "accumulate: theta_bins must be >= 1");
  const std::size_t count = features.size();
  require(count <= std::numeric_limits<std::uint16_t>::max(),
          "accumulate: at most 65535 features are supported, got " + std::to_string(count));
  if (count < 2) fail(ErrorKind::no_symmetry_evidence, "no symmetry evidence: fewer than 2 features");

  const std::size_t tex_bins = features[0].texture.size();
  const std::size_t color_bins = features[0].color.size();
  for (const SymmetryFeature& f : features)
    require(f.texture.size() == tex_bins && f.color.size() == color_bins,
            "accumulate: features carry histograms of different sizes");

  // Flat descriptor tables for the pair loop.
  std::vector<double> texture(count * tex_bins), mirrored(count * tex_bins),
      color(count * color_bins), cos_phi(count), sin_phi(count);
  for (std::size_t i = 0; i < count; ++i) {
    const SymmetryFeature& f = features[i];
    const std::vector<double> m = options.texture_mirror == TextureMirror::anchor
                                      ? mirror_about_anchor(f.texture)
                                      : reverse(f.texture);
    std::copy(f.texture.begin(), f.texture.end(), texture.begin() + i * tex_bins);
    std::copy(m.begin(), m.end(), mirrored.begin() + i * tex_bins);
    std::copy(f.color.begin(), f.color.end(), color.begin() + i * color_bins);
    cos_phi[i] = std::cos(f.orientation);
    sin_phi[i] = std::sin(f.orientation);
  }

  VoteHistogram hist(rho_bin_count(width, height), options.theta_bins);
  const std::size_t pairs = count * (count - 1) / 2;
  hist.pair_count_ = pairs;
  std::vector<std::uint32_t> pair_bin(pairs, kNoVote);

  const int workers = std::max(1, std::min<int>(options.threads, static_cast<int>(count - 1)));
  std::vector<Grid<double>> partial(workers, Grid<double>(hist.rho_bins(), hist.theta_bins()));
  std::vector<double> partial_total(workers, 0.0);

  detail::parallel_for(workers, workers, [&](std::size_t w) {
    Grid<double>& acc = partial[w];
    double total = 0.0;
    for (std::size_t i = w; i + 1 < count; i += workers) {
      std::size_t linear = i * (2 * count - i - 1) / 2;
      const Point2 pi = features[i].position;
      for (std::size_t j = i + 1; j < count; ++j, ++linear) {
        const Point2 pj = features[j].position;
        const AxisParams axis = pair_axis_params(pi, pj);
        // Reflection across the bisector depends only on the pair normal n:
        // cos 2gamma = -(nx^2 - ny^2), sin 2gamma = -2 nx ny.
        const double dx = pj.x - pi.x, dy = pj.y - pi.y;
        const double len = std::hypot(dx, dy);
        const double nx = dx / len, ny = dy / len;
        const double c2 = -(nx * nx - ny * ny);
        const double s2 = -2.0 * nx * ny;
        const double m = std::abs(cos_phi[i] * (c2 * cos_phi[j] + s2 * sin_phi[j]) +
                                  sin_phi[i] * (s2 * cos_phi[j] - c2 * sin_phi[j]));
        if (m == 0.0) continue;
        const double q = min_sum(&color[i * color_bins], &color[j * color_bins], color_bins);
        if (q == 0.0) continue;
        const double t = min_sum(&texture[i * tex_bins], &mirrored[j * tex_bins], tex_bins);
        const double weight = m * t * q;
        if (weight == 0.0) continue;
        const auto [r, th] = hist.bin_of(axis);
        const std::size_t b = acc.index(r, th);
        acc[b] += weight;
        total += weight;
        pair_bin[linear] = static_cast<std::uint32_t>(b);
      }
    }
    partial_total[w] = total;
  });

  double total = 0.0;
  for (int w = 0; w < workers; ++w) {
    total += partial_total[w];
    if (w == 0) {
      hist.bins_ = std::move(partial[0]);
    } else {
      for (std::size_t b = 0; b < hist.bins_.size(); ++b) hist.bins_[b] += partial[w][b];
    }
  }
  if (!(total > 0.0))
    fail(ErrorKind::no_symmetry_evidence, "no symmetry evidence: every pair weight is zero");
  hist.raw_total_ = total;
  for (double& v : hist.bins_) v /= total;

  // Voter lists in CSR layout, ordered by pair index within each bin.
  std::vector<std::uint32_t>& offsets = hist.offsets_;
  for (std::uint32_t b : pair_bin)
    if (b != kNoVote) ++offsets[b + 1];
  for (std::size_t b = 1; b < offsets.size(); ++b) offsets[b] += offsets[b - 1];
  hist.voters_.resize(offsets.back());
  std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
  std::size_t linear = 0;
  for (std::size_t i = 0; i + 1 < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j, ++linear)
      if (const std::uint32_t b = pair_bin[linear]; b != kNoVote)
        hist.voters_[cursor[b]++] = {static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j)};
  return hist;
}

Grid<double> smooth(const Grid<double>& bins, double sigma_rho, double sigma_theta) {
  require(sigma_rho > 0.0 && sigma_theta > 0.0, "smoothing sigmas must be positive");
  const int rho_n = bins.width();
  const int theta_n = bins.height();
  const std::vector<double> kr = gaussian_kernel(sigma_rho);
  const std::vector<double> kt = gaussian_kernel(sigma_theta);
  const int rr = static_cast<int>(kr.size() / 2);
  const int rt = static_cast<int>(kt.size() / 2);

  Grid<double> tmp(rho_n, theta_n);
  for (int t = 0; t < theta_n; ++t)
    for (int r = 0; r < rho_n; ++r) {
      double sum = 0.0;
      for (int k = -rr; k <= rr; ++k) {
        const int rk = r + k;
        if (rk >= 0 && rk < rho_n) sum += kr[k + rr] * bins(rk, t);
      }
      tmp(r, t) = sum;
    }
  Grid<double> out(rho_n, theta_n);
  for (int t = 0; t < theta_n; ++t)
    for (int r = 0; r < rho_n; ++r) {
      double sum = 0.0;
      for (int k = -rt; k <= rt; ++k) sum += kt[k + rt] * tmp(r, wrap_index(t + k, theta_n));
      out(r, t) = sum;
    }
  return out;
}

std::vector<Peak> find_peaks(const Grid<double>& smoothed, int max_peaks, NmsWindow window) {
  require(max_peaks >= 1, "max_peaks must be >= 1");
  require(window.rho >= 1 && window.theta >= 1, "NMS window must be at least 1x1");
  const int rho_n = smoothed.width();
  const int theta_n = smoothed.height();
  const int hr = window.rho / 2;
  const int ht = window.theta / 2;
  const double theta_width = 360.0 / theta_n;

  std::vector<Peak> peaks;
  for (int t = 0; t < theta_n; ++t) {
    for (int r = 0; r < rho_n; ++r) {
      const double v = smoothed(r, t);
      if (!(v > 0.0)) continue;
      bool is_max = true;
      for (int dt = -ht; dt <= ht && is_max; ++dt) {
        const int tt = wrap_index(t + dt, theta_n);
        for (int dr = -hr; dr <= hr; ++dr) {
          const int rr = r + dr;
          if (rr < 0 || rr >= rho_n || (rr == r && tt == t)) continue;
          if (!(v > smoothed(rr, tt))) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) continue;
      Peak p;
      p.rho_bin = r;
      p.theta_bin = t;
      p.value = v;
      const double dr = (r > 0 && r + 1 < rho_n)
                            ? parabolic_offset(smoothed(r - 1, t), v, smoothed(r + 1, t))
                            : 0.0;
      const double dt = parabolic_offset(smoothed(r, wrap_index(t - 1, theta_n)), v,
                                         smoothed(r, wrap_index(t + 1, theta_n)));
      p.rho = r + 0.5 + dr;
      p.theta = wrap_degrees((t + 0.5 + dt) * theta_width);
      peaks.push_back(p);
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.value > b.value; });
  if (peaks.size() > static_cast<std::size_t>(max_peaks)) peaks.resize(max_peaks);
  if (!peaks.empty()) {
    const double top = peaks.front().value;
    for (Peak& p : peaks) p.score = p.value / top;
  }
  return peaks;
}

SymmetryAxis axis_endpoints(const Peak& peak, const VoteHistogram& hist,
                            std::span<const Point2> positions, NmsWindow window) {
  const int hr = window.rho / 2;
  const int ht = window.theta / 2;
  std::vector<char> used(positions.size(), 0);
  std::vector<Point2> voters;
  std::vector<Point2> midpoints;
  for (int dt = -ht; dt <= ht; ++dt) {
    const int t = wrap_index(peak.theta_bin + dt, hist.theta_bins());
    for (int dr = -hr; dr <= hr; ++dr) {
      const int r = peak.rho_bin + dr;
      if (r < 0 || r >= hist.rho_bins()) continue;
      for (const PairRef& pr : hist.voters(r, t)) {
        require(pr.i < positions.size() && pr.j < positions.size(),
                "axis_endpoints: voter index outside feature list");
        for (const std::uint16_t k : {pr.i, pr.j})
          if (!used[k]) {
            used[k] = 1;
            voters.push_back(positions[k]);
          }
        midpoints.push_back({0.5 * (positions[pr.i].x + positions[pr.j].x),
                             0.5 * (positions[pr.i].y + positions[pr.j].y)});
      }
    }
  }
  if (midpoints.empty())
    fail(ErrorKind::no_symmetry_evidence, "axis_endpoints: no voters near the peak");

  const double theta = peak.theta / kDegPerRad;
  const Point2 normal{std::cos(theta), std::sin(theta)};
  const Point2 dir{-normal.y, normal.x};
  const Point2 foot{peak.rho * normal.x, peak.rho * normal.y};

  double t0 = 0.0, t1 = 0.0;
  const std::vector<Point2> hull = convex_hull(voters);
  if (auto span = clip_line(hull, foot, dir)) {
    std::tie(t0, t1) = *span;
  } else {
    // Degenerate hull or a line that misses it: extent of the voting midpoints.
    t0 = std::numeric_limits<double>::infinity();
    t1 = -t0;
    for (const Point2& m : midpoints) {
      const double s = (m.x - foot.x) * dir.x + (m.y - foot.y) * dir.y;
      t0 = std::min(t0, s);
      t1 = std::max(t1, s);
    }
  }
  return {peak.rho, peak.theta, peak.score,
          {foot.x + t0 * dir.x, foot.y + t0 * dir.y},
          {foot.x + t1 * dir.x, foot.y + t1 * dir.y}};
}

}  // namespace symdet
