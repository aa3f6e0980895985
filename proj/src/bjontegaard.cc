// Copyright 2026 The MIF Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mif/bjontegaard.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mif/error.h"

namespace mif {
namespace {

constexpr int kFitDegree = 3;

void ValidateCurve(const RdCurve& c, const char* which) {
  if (c.size() < 4) {
    throw ValidationError(std::string(which) +
                          " curve needs at least 4 RD points");
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(c[i].bitrate > 0.0) || !std::isfinite(c[i].psnr)) {
      throw ValidationError(std::string(which) +
                            " curve has a non-positive rate or bad PSNR");
    }
    if (i > 0 && !(c[i].bitrate > c[i - 1].bitrate)) {
      throw ValidationError(std::string(which) +
                            " curve bitrates must be strictly increasing");
    }
  }
}

double IntegratePoly(const std::vector<double>& p, double lo, double hi) {
  auto antiderivative = [&](double x) {
    double acc = 0.0;
    for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) {
      acc = acc * x + p[k] / (k + 1);
    }
    return acc * x;
  };
  return antiderivative(hi) - antiderivative(lo);
}

// Mean of fit_test - fit_anchor over the overlap of the two abscissa ranges.
double MeanFitDifference(const std::vector<double>& xa,
                         const std::vector<double>& ya,
                         const std::vector<double>& xt,
                         const std::vector<double>& yt) {
  const double lo = std::max(*std::min_element(xa.begin(), xa.end()),
                             *std::min_element(xt.begin(), xt.end()));
  const double hi = std::min(*std::max_element(xa.begin(), xa.end()),
                             *std::max_element(xt.begin(), xt.end()));
  if (!(hi > lo)) {
    throw ComputationError("RD curves do not overlap");
  }
  const auto pa = PolyFit(xa, ya, kFitDegree);
  const auto pt = PolyFit(xt, yt, kFitDegree);
  return (IntegratePoly(pt, lo, hi) - IntegratePoly(pa, lo, hi)) / (hi - lo);
}

void Split(const RdCurve& c, std::vector<double>& log_rate,
           std::vector<double>& psnr) {
  for (const RdPoint& p : c) {
    log_rate.push_back(std::log10(p.bitrate));
    psnr.push_back(p.psnr);
  }
}

}  // namespace

std::vector<double> PolyFit(const std::vector<double>& x,
                            const std::vector<double>& y, int degree) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd a(n, degree + 1);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    double xp = 1.0;
    for (int k = 0; k <= degree; ++k) {
      a(i, k) = xp;
      xp *= x[i];
    }
    b(i) = y[i];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  return {c.data(), c.data() + c.size()};
}

double BdRate(const RdCurve& anchor, const RdCurve& test) {
  ValidateCurve(anchor, "anchor");
  ValidateCurve(test, "test");
  std::vector<double> ra, pa, rt, pt;
  Split(anchor, ra, pa);
  Split(test, rt, pt);
  const double mean_log_diff = MeanFitDifference(pa, ra, pt, rt);
  return (std::pow(10.0, mean_log_diff) - 1.0) * 100.0;
}

double BdPsnr(const RdCurve& anchor, const RdCurve& test) {
  ValidateCurve(anchor, "anchor");
  ValidateCurve(test, "test");
  std::vector<double> ra, pa, rt, pt;
  Split(anchor, ra, pa);
  Split(test, rt, pt);
  return MeanFitDifference(ra, pa, rt, pt);
}

std::map<std::string, RdCurve> ReadRdCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::map<std::string, RdCurve> curves;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.rfind("label", 0) == 0) continue;
    std::stringstream ss(line);
    std::string label, rate, psnr;
    if (!std::getline(ss, label, ',') || !std::getline(ss, rate, ',') ||
        !std::getline(ss, psnr)) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": expected label,bitrate,psnr");
    }
    try {
      curves[label].push_back({std::stod(rate), std::stod(psnr)});
    } catch (const std::exception&) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": malformed number");
    }
  }
  return curves;
}

void WriteRdCsv(const std::filesystem::path& path,
                const std::map<std::string, RdCurve>& curves) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  out << "label,bitrate,psnr\n";
  for (const auto& [label, curve] : curves) {
    for (const RdPoint& p : curve) {
      out << label << "," << p.bitrate << "," << p.psnr << "\n";
    }
  }
}

}  // namespace mif
