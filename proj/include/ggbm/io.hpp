#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "ggbm/fbm.hpp"
#include "ggbm/green.hpp"
#include "ggbm/montecarlo.hpp"
#include "ggbm/params.hpp"

namespace ggbm {

/// Shortest-form decimal with at most `significant` digits ("%.{n}g" style,
/// locale-independent). With 17 or more digits the shortest string that
/// round-trips the double is returned.
std::string format_number(double value, int significant = 17);

/// CSV with header t,x1,...,xd and one row per grid point.
void write_path_csv(std::ostream& out, const Path& path);

nlohmann::json to_json(const ModelParams& params);
nlohmann::json describe(const TestFunction& f);
/// {params, f_descriptor, x, n_paths, t_max, mean, std_error, tail_bound, seed, ...}
nlohmann::json to_json(const Estimate& est, const ModelParams& params, const TestFunction& f,
                       std::span<const double> x);

}  // namespace ggbm
