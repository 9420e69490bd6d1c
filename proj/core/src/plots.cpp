// Copyright 2026 The bayesqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bqc/plots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "bqc/errors.hpp"

namespace bqc {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 50.0;
constexpr double kLogFloor = 1e-12;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void open_svg(std::ostringstream& os, const std::string& title) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
     << "</text>\n"
     << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin << "\" y2=\""
     << kHeight - kMargin << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\"" << kHeight - kMargin
     << "\" stroke=\"black\"/>\n";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace

std::string svg_line_plot(const std::string& title, const std::vector<Series>& series, bool log_y) {
  if (series.empty()) throw ContractError("line plot needs at least one series");
  auto tr = [&](double v) { return log_y ? std::log10(std::max(v, kLogFloor)) : v; };
  double lo = INFINITY, hi = -INFINITY;
  std::size_t n_max = 1;
  for (const auto& s : series) {
    n_max = std::max(n_max, s.y.size());
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, tr(v));
      hi = std::max(hi, tr(v));
    }
  }
  if (!(lo < hi)) {
    lo = std::isfinite(lo) ? lo - 1.0 : 0.0;
    hi = lo + 2.0;
  }
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;

  std::ostringstream os;
  open_svg(os, title);
  os << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin << "\" text-anchor=\"end\" font-size=\"10\">"
     << (log_y ? "1e" + num(hi) : num(hi)) << "</text>\n"
     << "<text x=\"" << kMargin - 4 << "\" y=\"" << kHeight - kMargin << "\" text-anchor=\"end\" font-size=\"10\">"
     << (log_y ? "1e" + num(lo) : num(lo)) << "</text>\n"
     << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 15
     << "\" text-anchor=\"end\" font-size=\"10\">" << n_max - 1 << "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* colour = kPalette[si % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      const double x = kMargin + plot_w * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(n_max - 1, 1));
      const double y = kHeight - kMargin - plot_h * (tr(s.y[i]) - lo) / (hi - lo);
      os << num(x) << ',' << num(y) << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kMargin + 14 * static_cast<double>(si)
       << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << colour << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_histogram(const std::string& title, const std::vector<std::uint64_t>& counts,
                          const std::vector<double>& reference, std::size_t lo, std::size_t hi) {
  if (counts.empty() || lo > hi || hi >= counts.size()) throw ContractError("invalid histogram range");
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  double top = 1e-12;
  for (std::size_t z = lo; z <= hi; ++z) {
    top = std::max(top, total > 0 ? static_cast<double>(counts[z]) / total : 0.0);
    if (z < reference.size()) top = std::max(top, reference[z]);
  }
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  const double bar_w = plot_w / static_cast<double>(hi - lo + 1);

  std::ostringstream os;
  open_svg(os, title);
  for (std::size_t z = lo; z <= hi; ++z) {
    const double x = kMargin + bar_w * static_cast<double>(z - lo);
    const double frac = total > 0 ? static_cast<double>(counts[z]) / total : 0.0;
    const double h = plot_h * frac / top;
    os << "<rect class=\"bar\" data-count=\"" << counts[z] << "\" x=\"" << num(x) << "\" y=\""
       << num(kHeight - kMargin - h) << "\" width=\"" << num(bar_w * 0.9) << "\" height=\"" << num(h)
       << "\" fill=\"#1f77b4\" fill-opacity=\"0.7\"/>\n";
  }
  if (!reference.empty()) {
    os << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" points=\"";
    for (std::size_t z = lo; z <= hi && z < reference.size(); ++z) {
      const double x = kMargin + bar_w * (static_cast<double>(z - lo) + 0.45);
      os << num(x) << ',' << num(kHeight - kMargin - plot_h * reference[z] / top) << ' ';
    }
    os << "\"/>\n";
  }
  os << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 15 << "\" font-size=\"10\">" << lo << "</text>\n"
     << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 15
     << "\" text-anchor=\"end\" font-size=\"10\">" << hi << "</text>\n"
     << "</svg>\n";
  return os.str();
}

ShotCounts generated_samples(const RunResult& result, std::uint64_t n_samples, std::uint64_t seed) {
  if (!result.model_distribution) throw ContractError("result has no model distribution");
  return sample_counts(*result.model_distribution, n_samples, seed);
}

std::vector<std::filesystem::path> emit_plots(const RunResult& result, const std::filesystem::path& dir) {
  const SeedRun* first = nullptr;
  for (const auto& s : result.seeds) {
    if (s.ok && s.trace && !s.trace->empty()) {
      first = &s;
      break;
    }
  }
  if (!first || result.median_shifted_cost.empty()) throw ContractError("nothing to plot: no completed trace");
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;

  const auto cost_path = dir / "cost.svg";
  write_file(cost_path, svg_line_plot("median C - C_min", {{"median shifted cost", result.median_shifted_cost}}, true));
  written.push_back(cost_path);

  if (result.model_distribution && result.data) {
    const ShotCounts shots = generated_samples(result);
    std::vector<std::uint64_t> counts(result.model_distribution->size(), 0);
    for (const auto& [z, c] : shots.counts) counts[z] = c;
    const auto& data = result.data->samples;
    const auto [mn, mx] = std::minmax_element(data.begin(), data.end());
    const std::size_t lo = static_cast<std::size_t>(std::max<std::int64_t>(*mn - 10, 0));
    const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(*mx + 10), counts.size() - 1);
    const auto probs = result.data->dist.probs();
    const auto hist_path = dir / "histogram.svg";
    write_file(hist_path, svg_histogram("generated samples vs data", counts, {probs.begin(), probs.end()}, lo, hi));
    written.push_back(hist_path);
  }

  if (result.spec.train.algorithm == Algorithm::PGA) {
    const auto rows = first->trace->rows();
    Series alpha{"alpha_t", {}};
    for (std::size_t i = 1; i < rows.size(); ++i) alpha.y.push_back(rows[i].alpha);
    // The two parameters crossing the zero threshold most often.
    const std::size_t k = first->trace->num_params();
    std::vector<std::size_t> crossings(k, 0);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if ((rows[i].theta[j] == 0.0) != (rows[i - 1].theta[j] == 0.0)) ++crossings[j];
      }
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return crossings[a] > crossings[b]; });
    std::vector<Series> paths;
    for (std::size_t n = 0; n < std::min<std::size_t>(2, k); ++n) {
      Series s{"theta_" + std::to_string(order[n]), {}};
      for (const auto& r : rows) s.y.push_back(r.theta[order[n]]);
      paths.push_back(std::move(s));
    }
    const auto alpha_path = dir / "alpha.svg";
    write_file(alpha_path, svg_line_plot("alpha_t", {alpha}, false));
    written.push_back(alpha_path);
    if (!paths.empty()) {
      const auto params_path = dir / "params.svg";
      write_file(params_path, svg_line_plot("parameter paths", paths, false));
      written.push_back(params_path);
    }
  }
  return written;
}

}  // namespace bqc
