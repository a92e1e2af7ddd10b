#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>

#include "fracpce/distributions.hpp"

namespace fracpce {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Input samples in physical and germ space plus model responses. Y stays
/// empty until the model has been evaluated.
struct ExperimentalDesign {
  Matrix x;   // n x M, physical space
  Matrix xi;  // n x M, germ space
  Vector y;   // n responses

  std::size_t size() const { return static_cast<std::size_t>(x.rows()); }
  std::size_t dimension() const { return static_cast<std::size_t>(x.cols()); }
};

/// Latin hypercube of n points in M dimensions: each column holds exactly one
/// point per stratum ((k-1)/n, k/n), placed uniformly at random inside it.
Matrix lhs(std::size_t n, std::size_t m, std::uint64_t seed);

/// LHS in the unit cube mapped through the inverse marginal CDFs.
ExperimentalDesign sample_inputs(const InputVector& inputs, const GermSpec& germ, std::size_t n, std::uint64_t seed);

/// LHS drawn directly in germ space (for evaluating a surrogate).
Matrix sample_germ(const GermSpec& germ, std::size_t n, std::uint64_t seed);

}  // namespace fracpce
