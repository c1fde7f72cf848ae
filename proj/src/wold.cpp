#include "coblab/wold.hpp"

#include "coblab/numeric.hpp"

namespace coblab {

DecayFit fit_log2_decay(const std::vector<double>& norms) {
  std::vector<double> js, logs;
  for (std::size_t j = 0; j < norms.size(); ++j) {
    if (norms[j] > 0.0) {
      js.push_back(static_cast<double>(j));
      logs.push_back(std::log2(norms[j]));
    }
  }
  if (js.size() < 3) throw Error("insufficient data: fewer than 3 nonzero Wold components");
  const auto fit = fit_line(js, logs);
  return DecayFit{-fit.slope, fit.rms_residual, js.size()};
}

}  // namespace coblab
