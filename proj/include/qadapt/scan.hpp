// Copyright 2026 The qadapt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Phase diagram of the symmetric depolarizing + amplitude-damping pipeline
// over (gamma, p), for the PhiMinus and PsiMinus inputs.

#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qadapt/format.hpp"
#include "qadapt/optimize.hpp"

namespace qadapt {

enum class Classification { DepolarizingBroken, Preserving, ESD_PhiOnly, ESD_Both_Recovered, ESD_Both_Unrecovered };

inline constexpr std::array<Classification, 5> kClassifications{
    Classification::DepolarizingBroken, Classification::Preserving, Classification::ESD_PhiOnly,
    Classification::ESD_Both_Recovered, Classification::ESD_Both_Unrecovered};

inline std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::DepolarizingBroken: return "DepolarizingBroken";
    case Classification::Preserving: return "Preserving";
    case Classification::ESD_PhiOnly: return "ESD_PhiOnly";
    case Classification::ESD_Both_Recovered: return "ESD_Both_Recovered";
    case Classification::ESD_Both_Unrecovered: return "ESD_Both_Unrecovered";
  }
  return "?";
}

inline constexpr double kScanDeadBand = 1e-8;

struct ScanRecord {
  double gamma = 0.0;
  double p = 0.0;
  bool phi_entangled_unfiltered = false;
  bool psi_entangled_unfiltered = false;
  double min_pt_eig_phi = 0.0;
  double min_pt_eig_psi = 0.0;
  std::optional<double> best_r;
  std::optional<BellKind> best_input;
  double filtered_concurrence = 0.0;
  double success_rate = 1.0;
  Classification classification = Classification::DepolarizingBroken;
};

struct ScanOptions {
  int gamma_steps = 50;
  int p_steps = 50;
  double gamma_min = 0.01;
  double gamma_max = 0.99;
  double p_min = 0.05;
  double p_max = 1.0;
  int r_steps = 200;
  std::uint64_t seed = 1;
  GaConfig ga;
  unsigned threads = 0;  // 0: thread_count()
};

namespace detail {

// Best diagonal filter for one input: grid first, the genetic search only
// when the grid finds nothing feasible.
inline std::optional<OptimizationResult> best_diagonal_filter(BellKind input, double p, double gamma,
                                                              const ScanOptions& opt) {
  auto problem = damping_problem(input, p, gamma);
  problem.seed = opt.seed;
  problem.ga = opt.ga;
  problem.threads = 1;
  try {
    return grid_search_diag(problem, opt.r_steps);
  } catch (const NoFeasiblePoint&) {
  }
  try {
    return genetic_optimize(problem);
  } catch (const NoFeasiblePoint&) {
  }
  return std::nullopt;
}

}  // namespace detail

inline ScanRecord classify_point(double gamma, double p, const ScanOptions& opt = {}) {
  if (!(gamma >= 0.0 && gamma <= 1.0) || !(p >= 0.0 && p <= 1.0)) throw DomainError("classify_point: gamma, p in [0,1]");
  ScanRecord rec;
  rec.gamma = gamma;
  rec.p = p;
  const auto phi = run_pipeline(damping_pipeline(BellKind::PhiMinus, p, gamma));
  const auto psi = run_pipeline(damping_pipeline(BellKind::PsiMinus, p, gamma));
  rec.min_pt_eig_phi = phi.report.min_pt_eigenvalue;
  rec.min_pt_eig_psi = psi.report.min_pt_eigenvalue;
  rec.phi_entangled_unfiltered = phi.report.entangled;
  rec.psi_entangled_unfiltered = psi.report.entangled;
  rec.filtered_concurrence = std::max(phi.report.concurrence, psi.report.concurrence);
  rec.success_rate = 1.0;

  if (p <= 1.0 / 3.0 + kScanDeadBand) {
    rec.classification = Classification::DepolarizingBroken;
    return rec;
  }
  if (rec.phi_entangled_unfiltered && rec.psi_entangled_unfiltered) {
    rec.classification = Classification::Preserving;
    return rec;
  }
  if (rec.psi_entangled_unfiltered) {
    rec.classification = Classification::ESD_PhiOnly;
    return rec;
  }
  if (rec.phi_entangled_unfiltered) {
    // Damping hurts the PsiMinus input less; this ordering cannot reverse.
    throw std::logic_error("classify_point: PhiMinus survives where PsiMinus dies");
  }

  std::optional<OptimizationResult> best;
  for (BellKind input : {BellKind::PsiMinus, BellKind::PhiMinus}) {
    auto r = detail::best_diagonal_filter(input, p, gamma, opt);
    if (!r) continue;
    const Evaluation cand{r->objective, r->success_rate, true};
    if (!best || better(cand, Evaluation{best->objective, best->success_rate, true})) {
      best = std::move(r);
      rec.best_input = input;
    }
  }
  if (best && best->objective > 0.0) {
    rec.classification = Classification::ESD_Both_Recovered;
    rec.best_r = best->filters.front().r;
    rec.filtered_concurrence = best->objective;
    rec.success_rate = best->success_rate;
  } else {
    rec.classification = Classification::ESD_Both_Unrecovered;
    rec.best_input.reset();
  }
  return rec;
}

struct ScanSummary {
  std::array<std::size_t, 5> counts{};
  std::size_t count(Classification c) const { return counts[static_cast<std::size_t>(c)]; }
};

struct ScanResult {
  ScanOptions options;
  std::vector<double> gammas;
  std::vector<double> ps;
  std::vector<ScanRecord> records;  // p outer, gamma inner
  ScanSummary summary;

  const ScanRecord& at(std::size_t p_index, std::size_t gamma_index) const {
    return records[p_index * gammas.size() + gamma_index];
  }
};

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

inline ScanResult scan_grid(const ScanOptions& opt) {
  if (opt.gamma_steps < 2 || opt.p_steps < 2) throw DomainError("scan: at least two steps per axis");
  if (!(0.0 <= opt.gamma_min && opt.gamma_min <= opt.gamma_max && opt.gamma_max <= 1.0) ||
      !(0.0 <= opt.p_min && opt.p_min <= opt.p_max && opt.p_max <= 1.0)) {
    throw DomainError("scan: ranges must be ordered subsets of [0,1]");
  }
  ScanResult out;
  out.options = opt;
  out.gammas = linspace(opt.gamma_min, opt.gamma_max, opt.gamma_steps);
  out.ps = linspace(opt.p_min, opt.p_max, opt.p_steps);
  const std::size_t ng = out.gammas.size();
  out.records.resize(ng * out.ps.size());
  parallel_for(
      out.records.size(),
      [&](std::size_t i) { out.records[i] = classify_point(out.gammas[i % ng], out.ps[i / ng], opt); },
      opt.threads ? opt.threads : thread_count());
  for (const auto& r : out.records) ++out.summary.counts[static_cast<std::size_t>(r.classification)];
  return out;
}

inline ScanResult scan_grid(int gamma_steps, int p_steps, double p_min = 0.0) {
  ScanOptions opt;
  opt.gamma_steps = gamma_steps;
  opt.p_steps = p_steps;
  opt.p_min = p_min;
  return scan_grid(opt);
}

// ---- writers ----

inline void write_csv(std::ostream& os, const ScanResult& scan) {
  os << "gamma,p,min_pt_eig_phi,min_pt_eig_psi,phi_entangled,psi_entangled,best_r,filtered_concurrence,"
        "success_rate,classification\n";
  for (const auto& r : scan.records) {
    os << format_number(r.gamma) << ',' << format_number(r.p) << ',' << format_number(r.min_pt_eig_phi) << ','
       << format_number(r.min_pt_eig_psi) << ',' << (r.phi_entangled_unfiltered ? 1 : 0) << ','
       << (r.psi_entangled_unfiltered ? 1 : 0) << ',' << (r.best_r ? format_number(*r.best_r) : std::string()) << ','
       << format_number(r.filtered_concurrence) << ',' << format_number(r.success_rate) << ',' << to_string(r.classification)
       << '\n';
  }
}

// Binary PGM, one byte per cell holding the classification index; the top
// row is the largest p.
inline void write_pgm(std::ostream& os, const ScanResult& scan) {
  const std::size_t w = scan.gammas.size(), h = scan.ps.size();
  os << "P5\n" << w << ' ' << h << "\n4\n";
  for (std::size_t row = 0; row < h; ++row) {
    for (std::size_t col = 0; col < w; ++col) {
      os.put(static_cast<char>(scan.at(h - 1 - row, col).classification));
    }
  }
}

inline constexpr std::array<std::string_view, 5> kClassColors{"#b0b0b0", "#2c7bb6", "#abd9e9", "#fdae61", "#d7191c"};

inline void write_svg(std::ostream& os, const ScanResult& scan, int cell = 8) {
  const std::size_t w = scan.gammas.size(), h = scan.ps.size();
  const int margin = 40, legend = 190;
  const int width = margin + static_cast<int>(w) * cell + 20 + legend;
  const int height = std::max(margin + static_cast<int>(h) * cell + margin, margin + 5 * 20 + margin);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t row = 0; row < h; ++row) {
    for (std::size_t col = 0; col < w; ++col) {
      const auto c = static_cast<std::size_t>(scan.at(h - 1 - row, col).classification);
      os << "<rect x=\"" << margin + static_cast<int>(col) * cell << "\" y=\"" << margin / 2 + static_cast<int>(row) * cell
         << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"" << kClassColors[c] << "\"/>\n";
    }
  }
  const int plot_bottom = margin / 2 + static_cast<int>(h) * cell;
  os << "<text x=\"" << margin + static_cast<int>(w) * cell / 2 << "\" y=\"" << plot_bottom + 24
     << "\" font-size=\"12\" text-anchor=\"middle\">gamma " << format_number(scan.gammas.front()) << " .. "
     << format_number(scan.gammas.back()) << "</text>\n";
  os << "<text x=\"12\" y=\"" << margin / 2 + static_cast<int>(h) * cell / 2
     << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 12 "
     << margin / 2 + static_cast<int>(h) * cell / 2 << ")\">p " << format_number(scan.ps.front()) << " .. "
     << format_number(scan.ps.back()) << "</text>\n";
  const int lx = margin + static_cast<int>(w) * cell + 20;
  for (std::size_t k = 0; k < kClassifications.size(); ++k) {
    const int y = margin / 2 + static_cast<int>(k) * 20;
    os << "<rect x=\"" << lx << "\" y=\"" << y << "\" width=\"14\" height=\"14\" fill=\"" << kClassColors[k] << "\"/>\n";
    os << "<text x=\"" << lx + 20 << "\" y=\"" << y + 11 << "\" font-size=\"12\">" << to_string(kClassifications[k])
       << " (" << scan.summary.counts[k] << ")</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace qadapt
