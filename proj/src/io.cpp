#include "ggbm/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <system_error>

namespace ggbm {

std::string format_number(double value, int significant) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  // 17 digits always round-trip, so the shortest round-trip form is used instead.
  const auto res = significant >= 17 ? std::to_chars(buf, buf + sizeof(buf), value)
                                     : std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, significant);
  if (res.ec != std::errc()) return "nan";
  return std::string(buf, res.ptr);
}

void write_path_csv(std::ostream& out, const Path& path) {
  out << 't';
  for (int j = 0; j < path.dim; ++j) out << ",x" << (j + 1);
  out << '\n';
  for (int k = 0; k < path.grid.n_points(); ++k) {
    out << format_number(path.grid.time(k));
    for (int j = 0; j < path.dim; ++j) out << ',' << format_number(path.at(k, j));
    out << '\n';
  }
}

nlohmann::json to_json(const ModelParams& params) {
  return {{"beta", params.beta}, {"alpha", params.alpha}, {"dim", params.dim}};
}

nlohmann::json describe(const TestFunction& f) {
  nlohmann::json j = {{"kind", f.kind_name()}, {"sup_norm", f.sup_norm}, {"l1_norm", f.l1_norm}};
  if (f.kind == TestFunctionKind::Gaussian) j["sigma"] = f.scale;
  if (f.kind == TestFunctionKind::Bump) j["radius"] = f.scale;
  if (f.is_radial()) j["center"] = f.center;
  return j;
}

nlohmann::json to_json(const Estimate& est, const ModelParams& params, const TestFunction& f,
                       std::span<const double> x) {
  return {{"params", to_json(params)},
          {"f_descriptor", describe(f)},
          {"x", std::vector<double>(x.begin(), x.end())},
          {"n_paths", est.n_paths},
          {"t_max", est.t_max},
          {"n_steps", est.n_steps},
          {"mean", est.mean},
          {"std_error", est.std_error},
          {"tail_bound", est.tail_bound},
          {"discretization_bound", est.discretization_bound},
          {"discretization_note", est.discretization_note},
          {"seed", est.seed}};
}

}  // namespace ggbm
