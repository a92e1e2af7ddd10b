#include <stdexcept>

#include "fracpce/models.hpp"

namespace fracpce {

double gaussian_sum(std::span<const double> x) {
  if (x.size() != 3) throw std::invalid_argument("gaussian_sum: expects three inputs");
  return 20.0 + x[0] + x[1] + x[2];
}

}  // namespace fracpce
