#include "magtorus/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "magtorus/error.hpp"
#include "magtorus/random.hpp"

namespace magtorus {

namespace {

constexpr double kSlack = 1e-12;

std::vector<double> sorted_desc(const std::vector<double>& b) {
  std::vector<double> s = b;
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

// Indices of the two longest links, ties broken by lower index.
std::pair<std::size_t, std::size_t> two_longest(std::span<const double> b, std::size_t limit) {
  std::vector<std::size_t> idx(limit);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return b[i] > b[j]; });
  return {idx[0], idx[1]};
}

}  // namespace

void validate(const LinkageSpec& spec) {
  if (spec.b.empty()) throw Error(ErrorKind::InvalidInput, "linkage needs at least one link");
  for (double x : spec.b)
    if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorKind::InvalidInput, "link lengths must be positive");
}

double total_length(const LinkageSpec& spec) { return std::accumulate(spec.b.begin(), spec.b.end(), 0.0); }

bool is_generic(const LinkageSpec& spec) {
  validate(spec);
  const std::size_t d = spec.b.size();
  if (d > 30) throw Error(ErrorKind::CapExceeded, "genericity check limited to 30 links");
  const double tol = kSlack * total_length(spec);
  // The sign of the last link can be fixed.
  const std::uint64_t masks = std::uint64_t{1} << (d - 1);
  for (std::uint64_t m = 0; m < masks; ++m) {
    double s = spec.b[d - 1];
    for (std::size_t j = 0; j + 1 < d; ++j) s += ((m >> j) & 1U) ? -spec.b[j] : spec.b[j];
    if (std::abs(s) <= tol) return false;
  }
  return true;
}

LinkageClass classify(const LinkageSpec& spec) {
  if (!is_generic(spec)) throw Error(ErrorKind::DegenerateLinkage, "some signed sum of link lengths vanishes");
  const double sum = total_length(spec);
  const double half = 0.5 * sum;
  const auto s = sorted_desc(spec.b);
  LinkageClass c;
  const double margin1 = half - s[0];
  c.near_degenerate = std::abs(margin1) <= 1e-12 * sum;
  if (s.size() < 3 || margin1 <= 0.0) {
    c.nonempty = false;
    c.components = 0;
    return c;
  }
  c.nonempty = true;
  c.dim = static_cast<int>(s.size()) - 3;
  const double margin2 = s[1] + s[2] - half;
  if (std::abs(margin2) <= 1e-12 * sum) c.near_degenerate = true;
  c.components = margin2 < 0.0 ? 1 : 2;
  return c;
}

cplx linkage_residual(std::span<const double> b, std::span<const double> thetas) {
  cplx r = 0.0;
  const std::size_t d = b.size();
  for (std::size_t j = 0; j + 1 < d; ++j) r += b[j] * std::polar(1.0, thetas[j]);
  return r - b[d - 1];
}

RMatrix linkage_jacobian(std::span<const double> b, std::span<const double> thetas) {
  const std::size_t d = b.size();
  RMatrix jac(2, d - 1);
  for (std::size_t j = 0; j + 1 < d; ++j) {
    const cplx dz = cplx(0.0, 1.0) * b[j] * std::polar(1.0, thetas[j]);
    jac(0, j) = dz.real();
    jac(1, j) = dz.imag();
  }
  return jac;
}

int component_label(const LinkageSpec& spec, std::span<const double> thetas) {
  const LinkageClass c = classify(spec);
  if (c.components != 2) return 0;
  const auto [p, q] = two_longest(spec.b, spec.b.size());
  const double s = std::sin(thetas[q] - thetas[p]);
  return s > 0.0 ? 1 : -1;
}

std::array<LinkagePoint, 2> solve_triangle(double b1, double b2, double b3) {
  const double sum = b1 + b2 + b3;
  if (!(b1 > 0.0 && b2 > 0.0 && b3 > 0.0))
    throw Error(ErrorKind::InvalidInput, "triangle sides must be positive");
  const double tol = kSlack * sum;
  if (b1 >= b2 + b3 - tol || b2 >= b1 + b3 - tol || b3 >= b1 + b2 - tol) {
    std::ostringstream os;
    os << "triangle inequality fails for (" << b1 << ", " << b2 << ", " << b3 << ")";
    throw Error(ErrorKind::DegenerateLinkage, os.str());
  }
  const double c1 = std::clamp((b1 * b1 + b3 * b3 - b2 * b2) / (2.0 * b1 * b3), -1.0, 1.0);
  const double c2 = std::clamp((b2 * b2 + b3 * b3 - b1 * b1) / (2.0 * b2 * b3), -1.0, 1.0);
  const double t1 = std::acos(c1);
  const double t2 = std::acos(c2);
  const std::array<double, 3> b{b1, b2, b3};
  std::array<LinkagePoint, 2> out;
  const double signs[2] = {1.0, -1.0};
  for (int k = 0; k < 2; ++k) {
    out[k].thetas = {wrap_angle(signs[k] * t1), wrap_angle(-signs[k] * t2), std::numbers::pi};
    out[k].residual = linkage_residual(b, out[k].thetas);
    out[k].component = k == 0 ? 1 : -1;
  }
  // Orientation of (u_1, u_2) decides the component; relabel against the
  // two-longest convention.
  const LinkageSpec spec{{b1, b2, b3}};
  for (auto& pt : out) pt.component = component_label(spec, pt.thetas);
  return out;
}

std::vector<LinkagePoint> sample_points(const LinkageSpec& spec, int count, std::uint64_t seed) {
  const LinkageClass cls = classify(spec);
  if (!cls.nonempty) throw Error(ErrorKind::Precondition, "linkage space is empty");
  const std::size_t d = spec.b.size();
  if (d == 3) {
    auto tri = solve_triangle(spec.b[0], spec.b[1], spec.b[2]);
    return {tri[0], tri[1]};
  }
  if (count <= 0) return {};

  const double sum = total_length(spec);
  const auto [p, q] = two_longest(spec.b, d - 1);
  std::vector<std::size_t> fixed;
  for (std::size_t j = 0; j + 1 < d; ++j)
    if (j != p && j != q) fixed.push_back(j);

  Rng rng(seed);
  const int per = count;
  std::vector<LinkagePoint> plus, minus, single;
  auto full = [&]() {
    if (cls.components == 2) return static_cast<int>(plus.size()) >= per && static_cast<int>(minus.size()) >= per;
    return static_cast<int>(single.size()) >= per;
  };
  auto accept = [&](LinkagePoint pt) {
    pt.residual = linkage_residual(spec.b, pt.thetas);
    if (std::abs(pt.residual) > 1e-9 * sum) return;
    pt.component = component_label(spec, pt.thetas);
    auto& bucket = cls.components == 2 ? (pt.component > 0 ? plus : minus) : single;
    if (static_cast<int>(bucket.size()) < per) bucket.push_back(std::move(pt));
  };

  const long budget = std::max<long>(20000, 400L * count);
  for (long attempt = 0; attempt < budget && !full(); ++attempt) {
    std::vector<double> th(d, 0.0);
    th[d - 1] = std::numbers::pi;
    cplx w = -spec.b[d - 1];
    for (std::size_t j : fixed) {
      th[j] = rng.angle();
      w += spec.b[j] * std::polar(1.0, th[j]);
    }
    const double r = std::abs(w);
    const double bp = spec.b[p], bq = spec.b[q];
    const double tol = kSlack * sum;
    if (r <= tol || bp >= bq + r - tol || bq >= bp + r - tol || r >= bp + bq - tol) continue;
    const auto tri = solve_triangle(bp, bq, r);
    // b_p e^{i t1} + b_q e^{i t2} = r, rotate onto -w.
    const double phi = std::arg(w) + std::numbers::pi;
    for (const auto& t : tri) {
      LinkagePoint pt;
      pt.thetas = th;
      pt.thetas[p] = wrap_angle(t.thetas[0] + phi);
      pt.thetas[q] = wrap_angle(t.thetas[1] + phi);
      LinkagePoint conj = pt;
      for (std::size_t j = 0; j + 1 < d; ++j) conj.thetas[j] = wrap_angle(-pt.thetas[j]);
      accept(std::move(pt));
      accept(std::move(conj));
    }
  }
  if (!full()) {
    std::ostringstream os;
    os << "no closed configuration found after " << budget << " attempts";
    throw Error(ErrorKind::SamplingExhausted, os.str());
  }
  if (cls.components == 2) {
    plus.insert(plus.end(), minus.begin(), minus.end());
    return plus;
  }
  return single;
}

}  // namespace magtorus
