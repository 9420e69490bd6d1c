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

#include "bqc/trace.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "bqc/errors.hpp"
#include "bqc/random.hpp"

namespace bqc {

std::string_view to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::GA:
      return "ga";
    case Algorithm::PGA:
      return "pga";
    case Algorithm::SGLD:
      return "sgld";
  }
  return "?";
}

std::size_t TraceRow::zero_count() const noexcept {
  return static_cast<std::size_t>(std::count(theta.begin(), theta.end(), 0.0));
}

struct TrainingTrace::SpillFile {
  std::filesystem::path path;
  bool owned = false;
  std::ofstream out;

  ~SpillFile() {
    out.close();
    if (owned) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
    }
  }
};

TrainingTrace::TrainingTrace(std::size_t n_params, std::size_t spill_cap,
                             std::filesystem::path spill_path)
    : n_params_(n_params), spill_cap_(std::max<std::size_t>(spill_cap, 1)), spill_path_(std::move(spill_path)) {}

TrainingTrace::~TrainingTrace() = default;
TrainingTrace::TrainingTrace(TrainingTrace&&) noexcept = default;
TrainingTrace& TrainingTrace::operator=(TrainingTrace&&) noexcept = default;

void TrainingTrace::append(TraceRow row) {
  if (row.theta.size() != n_params_) throw ContractError("trace row has the wrong parameter count");
  if (!first_) first_ = row;
  rows_.push_back(std::move(row));
  if (rows_.size() < 2 || rows_.size() * std::max<std::size_t>(n_params_, 1) <= spill_cap_) return;

  if (!spill_) {
    spill_ = std::make_unique<SpillFile>();
    if (spill_path_.empty()) {
      static std::atomic<std::uint64_t> counter{0};
      const auto tag = derive_seed(reinterpret_cast<std::uintptr_t>(this), {counter++});
      spill_->path = std::filesystem::temp_directory_path() / ("bqc_trace_" + std::to_string(tag) + ".csv");
      spill_->owned = true;
    } else {
      spill_->path = spill_path_;
    }
    spill_->out.open(spill_->path, std::ios::trunc);
    if (!spill_->out) throw std::runtime_error("cannot open spill file " + spill_->path.string());
  }
  // Keep the newest row resident so back() stays cheap.
  for (std::size_t i = 0; i + 1 < rows_.size(); ++i) write_trace_row(spill_->out, rows_[i]);
  spill_->out.flush();
  if (!spill_->out) throw std::runtime_error("write to spill file failed");
  spilled_ += rows_.size() - 1;
  rows_.erase(rows_.begin(), rows_.end() - 1);
}

const TraceRow& TrainingTrace::back() const {
  if (rows_.empty()) throw ContractError("trace is empty");
  return rows_.back();
}

const TraceRow& TrainingTrace::front() const {
  if (!first_) throw ContractError("trace is empty");
  return *first_;
}

void TrainingTrace::for_each(const std::function<void(const TraceRow&)>& visit) const {
  if (spilled_ > 0) {
    std::ifstream in(spill_->path);
    if (!in) throw std::runtime_error("cannot reopen spill file " + spill_->path.string());
    std::string line;
    for (std::size_t i = 0; i < spilled_; ++i) {
      if (!std::getline(in, line)) throw std::runtime_error("spill file truncated");
      visit(parse_trace_row(line, n_params_));
    }
  }
  for (const auto& r : rows_) visit(r);
}

std::vector<TraceRow> TrainingTrace::rows() const {
  std::vector<TraceRow> out;
  out.reserve(size());
  for_each([&](const TraceRow& r) { out.push_back(r); });
  return out;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_trace_row(std::ostream& os, const TraceRow& row) {
  os << row.iter << ',' << format_double(row.cost) << ',' << format_double(row.epsilon) << ','
     << format_double(row.alpha);
  for (double v : row.theta) os << ',' << format_double(v);
  os << '\n';
}

TraceRow parse_trace_row(const std::string& line, std::size_t n_params) {
  std::istringstream ls(line);
  std::string cell;
  std::vector<std::string> cells;
  while (std::getline(ls, cell, ',')) cells.push_back(cell);
  if (cells.size() != 4 + n_params) throw IngestionError("trace row has " + std::to_string(cells.size()) + " fields");
  TraceRow r;
  try {
    r.iter = std::stoull(cells[0]);
    r.cost = std::stod(cells[1]);
    r.epsilon = std::stod(cells[2]);
    r.alpha = std::stod(cells[3]);
    r.theta.reserve(n_params);
    for (std::size_t k = 0; k < n_params; ++k) r.theta.push_back(std::stod(cells[4 + k]));
  } catch (const std::exception& e) {
    throw IngestionError(std::string("malformed trace row: ") + e.what());
  }
  return r;
}

void TrainingTrace::write_csv(std::ostream& os) const {
  os << "iter,cost,epsilon,alpha";
  for (std::size_t k = 0; k < n_params_; ++k) os << ",theta_" << k;
  os << '\n';
  for_each([&](const TraceRow& r) { write_trace_row(os, r); });
}

void TrainingTrace::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_csv(out);
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace bqc
