#pragma once

#include <map>
#include <optional>

#include "hamdistill/noise.hpp"
#include "hamdistill/twirl.hpp"

namespace hd {

// (1/d) tr(V~^dag W^dag V~ W) with V~ = e^{iHt} V e^{-iHt}.
cplx otoc(const SpectralHamiltonian& h, double t, const cmat& v, const cmat& w);

// Alice-side identical-outcome POVM elements M_x = W^dag (|x><x| (x) I) W.
std::vector<cmat> outcome_projectors(int n, int m, const MeasurementBasis& basis);

// 1 - sum_x Re OTOC_{P, M_x}(t).
double detection_probability(const SpectralHamiltonian& h, double t, const PauliString& p, int m,
                             const MeasurementBasis& basis);

struct AveragedOtocReport {
  double value = 0.0;
  std::optional<std::map<std::string, double>> breakdown;
  bool exact = true;
  int samples = 0;
  double std_error = 0.0;
};

// sum_{P != I} c_P sum_x <OTOC_{P,M_x}>_mu, i.e. the surviving error weight.
AveragedOtocReport averaged_otoc(const SpectralHamiltonian& h, const TimeMeasure& mu,
                                 const PauliChannel& channel, int m, const MeasurementBasis& basis,
                                 int samples = 100000, std::uint64_t seed = 1,
                                 bool with_breakdown = false, Exec exec = Exec::parallel);

}  // namespace hd
