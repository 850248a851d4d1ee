#include "martinet/chart.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace martinet {

Chart::Chart(std::vector<std::string> vars, std::optional<std::vector<int>> weights) {
  if (vars.empty()) throw DomainError("chart needs at least one variable");
  std::set<std::string> seen(vars.begin(), vars.end());
  if (seen.size() != vars.size()) throw DomainError("chart has duplicate variable names");
  if (weights) {
    if (weights->size() != vars.size())
      throw DomainError("chart weights must match variable count");
    for (int w : *weights)
      if (w <= 0) throw DomainError("chart weights must be positive");
  }
  auto impl = std::make_shared<Impl>();
  impl->vars = std::move(vars);
  impl->weights = std::move(weights);
  impl_ = std::move(impl);
}

const std::string& Chart::var(int i) const {
  if (!impl_ || i < 0 || i >= dim()) throw DomainError("chart variable index out of range");
  return impl_->vars[static_cast<size_t>(i)];
}

const std::vector<std::string>& Chart::vars() const {
  static const std::vector<std::string> empty;
  return impl_ ? impl_->vars : empty;
}

std::optional<int> Chart::index_of(std::string_view name) const {
  if (!impl_) return std::nullopt;
  for (size_t i = 0; i < impl_->vars.size(); ++i)
    if (impl_->vars[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

const std::optional<std::vector<int>>& Chart::weights() const {
  static const std::optional<std::vector<int>> none;
  return impl_ ? impl_->weights : none;
}

Chart Chart::drop(int i) const {
  if (i < 0 || i >= dim()) throw DomainError("chart variable index out of range");
  std::vector<std::string> vars;
  std::optional<std::vector<int>> weights;
  for (int j = 0; j < dim(); ++j)
    if (j != i) vars.push_back(impl_->vars[static_cast<size_t>(j)]);
  if (impl_->weights) {
    weights.emplace();
    for (int j = 0; j < dim(); ++j)
      if (j != i) weights->push_back((*impl_->weights)[static_cast<size_t>(j)]);
  }
  return Chart(std::move(vars), std::move(weights));
}

bool Chart::operator==(const Chart& o) const {
  if (impl_ == o.impl_) return true;
  if (!impl_ || !o.impl_) return false;
  return impl_->vars == o.impl_->vars && impl_->weights == o.impl_->weights;
}

std::string Chart::to_string() const {
  std::ostringstream out;
  for (int i = 0; i < dim(); ++i) {
    if (i) out << ' ';
    out << var(i);
  }
  return out.str();
}

void require_same_chart(const Chart& a, const Chart& b, const char* where) {
  if (a != b)
    throw ChartMismatch(std::string(where) + ": charts differ ('" + a.to_string() + "' vs '" +
                        b.to_string() + "')");
}

}  // namespace martinet
