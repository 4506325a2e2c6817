#include "mpdag/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpdag/error.hpp"

namespace mpdag {

std::size_t checked_configurations(std::span<const int> cards) {
  std::size_t total = 1;
  for (int c : cards) {
    if (c < 1) throw ArgumentError("cardinality must be positive");
    total *= static_cast<std::size_t>(c);
    if (total > kMaxConfigurations)
      throw Error("joint enumeration exceeds " + std::to_string(kMaxConfigurations) +
                  " configurations");
  }
  return total;
}

std::size_t Table::configurations() const {
  std::size_t total = 1;
  for (int c : cards) total *= static_cast<std::size_t>(c);
  return total;
}

double Table::at(std::span<const int> config) const {
  std::size_t idx = 0, stride = 1;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    idx += static_cast<std::size_t>(config[i]) * stride;
    stride *= static_cast<std::size_t>(cards[i]);
  }
  return values[idx];
}

double Table::at_assignment(const Assignment& full) const {
  std::size_t idx = 0, stride = 1;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    idx += static_cast<std::size_t>(full.at(scope[i])) * stride;
    stride *= static_cast<std::size_t>(cards[i]);
  }
  return values[idx];
}

namespace {

// strides[t][k]: contribution of space variable k to the index of table t.
std::vector<std::vector<std::size_t>> table_strides(std::span<const Node> vars,
                                                    std::span<const Table> tables) {
  std::vector<std::vector<std::size_t>> strides(tables.size(),
                                                std::vector<std::size_t>(vars.size(), 0));
  for (std::size_t t = 0; t < tables.size(); ++t) {
    std::size_t stride = 1;
    for (std::size_t i = 0; i < tables[t].scope.size(); ++i) {
      auto it = std::find(vars.begin(), vars.end(), tables[t].scope[i]);
      if (it == vars.end()) throw ArgumentError("table scope is not inside the product space");
      strides[t][static_cast<std::size_t>(it - vars.begin())] = stride;
      stride *= static_cast<std::size_t>(tables[t].cards[i]);
    }
  }
  return strides;
}

}  // namespace

namespace kernels {

std::vector<double> product_serial(std::span<const Node> vars, std::span<const int> cards,
                                   std::span<const Table> tables) {
  const std::size_t total = checked_configurations(cards);
  const auto strides = table_strides(vars, tables);
  std::vector<double> out(total);
  // Odometer over the space, keeping every table index up to date.
  std::vector<int> digit(vars.size(), 0);
  std::vector<std::size_t> idx(tables.size(), 0);
  for (std::size_t c = 0; c < total; ++c) {
    double w = 1.0;
    for (std::size_t t = 0; t < tables.size(); ++t) w *= tables[t].values[idx[t]];
    out[c] = w;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      if (++digit[k] < cards[k]) {
        for (std::size_t t = 0; t < tables.size(); ++t) idx[t] += strides[t][k];
        break;
      }
      for (std::size_t t = 0; t < tables.size(); ++t)
        idx[t] -= strides[t][k] * static_cast<std::size_t>(cards[k] - 1);
      digit[k] = 0;
    }
  }
  return out;
}

std::vector<double> product_parallel(std::span<const Node> vars, std::span<const int> cards,
                                     std::span<const Table> tables) {
  const std::size_t total = checked_configurations(cards);
  const auto strides = table_strides(vars, tables);
  const std::size_t nvars = vars.size();
  const std::size_t ntables = tables.size();
  std::vector<double> out(total);
  // Each chunk decodes its first configuration, then steps an odometer.
  constexpr std::size_t kChunk = 4096;
  const long long chunks = static_cast<long long>((total + kChunk - 1) / kChunk);
#pragma omp parallel for schedule(static)
  for (long long ch = 0; ch < chunks; ++ch) {
    const std::size_t begin = static_cast<std::size_t>(ch) * kChunk;
    const std::size_t end = std::min(total, begin + kChunk);
    std::vector<int> digit(nvars, 0);
    std::vector<std::size_t> idx(ntables, 0);
    std::size_t rest = begin;
    for (std::size_t k = 0; k < nvars; ++k) {
      const auto card = static_cast<std::size_t>(cards[k]);
      digit[k] = static_cast<int>(rest % card);
      rest /= card;
      for (std::size_t t = 0; t < ntables; ++t) idx[t] += static_cast<std::size_t>(digit[k]) * strides[t][k];
    }
    for (std::size_t c = begin; c < end; ++c) {
      double w = 1.0;
      for (std::size_t t = 0; t < ntables; ++t) w *= tables[t].values[idx[t]];
      out[c] = w;
      for (std::size_t k = 0; k < nvars; ++k) {
        if (++digit[k] < cards[k]) {
          for (std::size_t t = 0; t < ntables; ++t) idx[t] += strides[t][k];
          break;
        }
        for (std::size_t t = 0; t < ntables; ++t)
          idx[t] -= strides[t][k] * static_cast<std::size_t>(cards[k] - 1);
        digit[k] = 0;
      }
    }
  }
  return out;
}

}  // namespace kernels

Table product(std::span<const Node> vars, std::span<const int> cards,
              std::span<const Table> tables, Execution exec) {
  if (vars.size() > 64) throw ArgumentError("product space has too many variables");
  Table out;
  out.scope.assign(vars.begin(), vars.end());
  out.cards.assign(cards.begin(), cards.end());
  out.values = exec == Execution::parallel ? kernels::product_parallel(vars, cards, tables)
                                           : kernels::product_serial(vars, cards, tables);
  return out;
}

Table marginalize(const Table& t, std::span<const Node> keep) {
  Table out;
  out.scope.assign(keep.begin(), keep.end());
  std::vector<std::size_t> stride_in_out(t.scope.size(), 0);
  std::size_t stride = 1;
  for (Node v : keep) {
    auto it = std::find(t.scope.begin(), t.scope.end(), v);
    if (it == t.scope.end()) throw ArgumentError("marginal variable is not in the table scope");
    const auto pos = static_cast<std::size_t>(it - t.scope.begin());
    out.cards.push_back(t.cards[pos]);
    stride_in_out[pos] = stride;
    stride *= static_cast<std::size_t>(t.cards[pos]);
  }
  out.values.assign(stride, 0.0);
  std::vector<int> digit(t.scope.size(), 0);
  std::size_t idx = 0;
  const std::size_t total = t.configurations();
  for (std::size_t c = 0; c < total; ++c) {
    out.values[idx] += t.values[c];
    for (std::size_t k = 0; k < t.scope.size(); ++k) {
      if (++digit[k] < t.cards[k]) {
        idx += stride_in_out[k];
        break;
      }
      idx -= stride_in_out[k] * static_cast<std::size_t>(t.cards[k] - 1);
      digit[k] = 0;
    }
  }
  return out;
}

Table slice(const Table& t, const Assignment& fixed) {
  Table out;
  std::size_t base = 0, stride = 1;
  std::vector<std::size_t> kept_strides;
  for (std::size_t i = 0; i < t.scope.size(); ++i) {
    auto it = fixed.find(t.scope[i]);
    if (it != fixed.end()) {
      if (it->second < 0 || it->second >= t.cards[i])
        throw ArgumentError("assigned value outside the variable's range");
      base += static_cast<std::size_t>(it->second) * stride;
    } else {
      out.scope.push_back(t.scope[i]);
      out.cards.push_back(t.cards[i]);
      kept_strides.push_back(stride);
    }
    stride *= static_cast<std::size_t>(t.cards[i]);
  }
  const std::size_t total = out.configurations();
  out.values.resize(total);
  std::vector<int> digit(out.scope.size(), 0);
  std::size_t idx = base;
  for (std::size_t c = 0; c < total; ++c) {
    out.values[c] = t.values[idx];
    for (std::size_t k = 0; k < out.scope.size(); ++k) {
      if (++digit[k] < out.cards[k]) {
        idx += kept_strides[k];
        break;
      }
      idx -= kept_strides[k] * static_cast<std::size_t>(out.cards[k] - 1);
      digit[k] = 0;
    }
  }
  return out;
}

double total_variation(const Table& p, const Table& q) {
  if (p.scope != q.scope || p.cards != q.cards)
    throw ArgumentError("distributions have different scopes");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.values.size(); ++i) sum += std::abs(p.values[i] - q.values[i]);
  return 0.5 * sum;
}

double max_abs_difference(const Table& p, const Table& q) {
  if (p.scope != q.scope || p.cards != q.cards)
    throw ArgumentError("distributions have different scopes");
  double worst = 0.0;
  for (std::size_t i = 0; i < p.values.size(); ++i)
    worst = std::max(worst, std::abs(p.values[i] - q.values[i]));
  return worst;
}

}  // namespace mpdag
