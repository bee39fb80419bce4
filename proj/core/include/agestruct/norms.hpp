#pragma once

#include <span>

#include "agestruct/grid.hpp"
#include "agestruct/weights.hpp"

namespace agestruct {

enum class NormLevel { lp, first_order, second_order };

struct NormSpec {
  double p = 2.0;
  NormLevel level = NormLevel::lp;
};

// Discrete L_p norm with trapezoid weights, plus the L_p norms of first
// (and second) differences for the higher levels.
double spatial_norm(std::span<const double> w, double dx, const NormSpec& norm);

// Trapezoid integral over space.
double spatial_integral(std::span<const double> w, double dx);

// Trapezoid integral divided by the interval length.
double spatial_mean(std::span<const double> w, double dx);

// Per spatial node, trapezoid quadrature of u(a, x) kernel(a) over [0, a_max].
SpatialField weighted_age_integral(const AgeSpaceDensity& u, const AgeFunction& kernel);

// Same with kernel values precomputed at the age nodes.
void weighted_age_integral(const AgeSpaceDensity& u, std::span<const double> kernel_at_nodes,
                           std::span<double> out);

// sum_j w_j g(a_j) ||u(a_j, .)|| with trapezoid age weights w_j.
double weighted_norm(const AgeSpaceDensity& u, const WeightSpec& w, const NormSpec& norm);
double weighted_norm(const AgeSpaceDensity& u, std::span<const double> g_at_nodes,
                     const NormSpec& norm);

// weighted_norm(u - v) without forming the difference.
double weighted_distance(const AgeSpaceDensity& u, const AgeSpaceDensity& v,
                         std::span<const double> g_at_nodes, const NormSpec& norm);

// Double integral of u(a, x) kernel(a) over age and space.
double total_mass(const AgeSpaceDensity& u, std::span<const double> kernel_at_nodes);

std::vector<double> sample_ages(const Grid& grid, const AgeFunction& f);

}  // namespace agestruct
