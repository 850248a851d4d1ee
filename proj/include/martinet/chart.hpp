#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace martinet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ChartMismatch : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

// Ordered list of coordinate names, optionally weighted (for quasi-homogeneous
// work). Immutable and cheap to copy; equality compares contents.
class Chart {
 public:
  Chart() = default;
  explicit Chart(std::vector<std::string> vars,
                 std::optional<std::vector<int>> weights = std::nullopt);

  int dim() const { return impl_ ? static_cast<int>(impl_->vars.size()) : 0; }
  const std::string& var(int i) const;
  const std::vector<std::string>& vars() const;
  std::optional<int> index_of(std::string_view name) const;
  const std::optional<std::vector<int>>& weights() const;

  // Chart without the i-th coordinate; used for hypersurface restrictions.
  Chart drop(int i) const;

  bool operator==(const Chart& o) const;
  bool operator!=(const Chart& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  struct Impl {
    std::vector<std::string> vars;
    std::optional<std::vector<int>> weights;
  };
  std::shared_ptr<const Impl> impl_;
};

void require_same_chart(const Chart& a, const Chart& b, const char* where);

}  // namespace martinet
