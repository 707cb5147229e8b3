#pragma once

#include <optional>
#include <vector>

#include "pwcanard/model.hpp"

// Quad-precision event integration used only by the finite-difference
// multiplier cross-check. It shares no flow code with linflow.
namespace pwc::detail {

// Ordinates (rounded to double) of the crossings of x = c with sign(dx/ds) =
// want_dir along the orbit from (x0, f(x0)) integrated in direction dir for
// time t_max.
std::vector<double> hp_line_hits(const Params& p, double x0, int dir, double c, int want_dir, double t_max);

// G'(x0) / B'(x0) where G, B are the forward / backward images of the width
// point on the line x = c (forward crossing direction sdir); `index` selects
// the forward crossing among `total` per revolution.
std::optional<double> hp_split_multiplier(const Params& p, double x0, double c, int sdir, int index, int total,
                                          double period);

} // namespace pwc::detail
