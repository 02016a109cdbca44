#pragma once

// Planar polygon spaces: solutions of sum_j b_j e^{i theta_j} = 0 modulo
// rotation. The rotation is fixed by theta_d = pi, i.e. the residual is
// f(theta) = sum_{j<d} b_j e^{i theta_j} - b_d.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "magtorus/linalg.hpp"

namespace magtorus {

struct LinkageSpec {
  std::vector<double> b;
};

struct LinkagePoint {
  std::vector<double> thetas;  // each in [0, 2pi), last one pi
  cplx residual = 0.0;
  int component = 0;           // +1 / -1 when there are two components, else 0
};

struct LinkageClass {
  bool nonempty = false;
  int dim = -1;         // d - 3 when nonempty
  int components = 0;   // 0, 1 or 2
  bool near_degenerate = false;
};

void validate(const LinkageSpec& spec);
double total_length(const LinkageSpec& spec);

bool is_generic(const LinkageSpec& spec);

// Throws Error(DegenerateLinkage) when spec is not generic.
LinkageClass classify(const LinkageSpec& spec);

cplx linkage_residual(std::span<const double> b, std::span<const double> thetas);

// 2 x (d-1) real Jacobian of the residual in the first d-1 angles.
RMatrix linkage_jacobian(std::span<const double> b, std::span<const double> thetas);

// Sign of Im(conj(u_1) u_2) for the two longest links; 0 when the space is
// connected.
int component_label(const LinkageSpec& spec, std::span<const double> thetas);

// The two closed triangles with b3 along the negative real axis. The first
// solution has theta_1 in (0, pi).
std::array<LinkagePoint, 2> solve_triangle(double b1, double b2, double b3);

// count points on each component (exactly the two triangle solutions when
// d = 3). Throws Error(Precondition) for an empty space and
// Error(SamplingExhausted) when the retry budget runs out.
std::vector<LinkagePoint> sample_points(const LinkageSpec& spec, int count, std::uint64_t seed);

}  // namespace magtorus
