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

#ifndef MIF_BJONTEGAARD_H_
#define MIF_BJONTEGAARD_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace mif {

struct RdPoint {
  double bitrate = 0.0;  // any consistent unit, > 0
  double psnr = 0.0;     // dB
};

using RdCurve = std::vector<RdPoint>;

// Bjontegaard delta rate in percent (negative means the test curve needs
// fewer bits for equal quality). Each curve is fitted with a least-squares
// cubic of log10(rate) over PSNR and the fits are integrated over the
// overlapping PSNR interval.
double BdRate(const RdCurve& anchor, const RdCurve& test);

// Bjontegaard delta PSNR in dB, the same procedure with axes swapped.
double BdPsnr(const RdCurve& anchor, const RdCurve& test);

// Least-squares polynomial coefficients, lowest order first.
std::vector<double> PolyFit(const std::vector<double>& x,
                            const std::vector<double>& y, int degree);

// CSV with rows `label,bitrate,psnr`. An optional header row starting with
// "label" is skipped. Points keep file order per label.
std::map<std::string, RdCurve> ReadRdCsv(const std::filesystem::path& path);
void WriteRdCsv(const std::filesystem::path& path,
                const std::map<std::string, RdCurve>& curves);

}  // namespace mif

#endif  // MIF_BJONTEGAARD_H_
