#pragma once

#include <span>
#include <vector>

namespace ggbm {

struct MeanSe {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sample mean and its standard error (sample std / sqrt(n)), pairwise-summed.
MeanSe mean_and_se(std::span<const double> samples);

/// Survival function of the Kolmogorov distribution,
/// Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_survival(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value and
/// Stephens' small-sample correction.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace ggbm
