// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace gkpr::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

/// Failure carrying the process exit code.
class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& what) : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

/// Parses a parameter range:
///   "100"                 single value
///   "10,20,40"            explicit list
///   "10:700:70"           70 linearly spaced points from 10 to 700
///   "log:1e-3:10:5"       5 log-spaced points, endpoints positive
/// Throws CliError(kExitValidation) naming `field` on malformed or empty input.
std::vector<double> parse_grid(std::string_view text, std::string_view field);

/// parse_grid restricted to whole numbers. Grid points within 1e-9 relative
/// of an integer are snapped to it; anything else is rejected.
std::vector<long> parse_int_grid(std::string_view text, std::string_view field);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

using Cell = std::variant<long, double, std::string>;

struct Record {
  std::vector<std::pair<std::string, Cell>> fields;

  Record& add(std::string name, Cell value) {
    fields.emplace_back(std::move(name), std::move(value));
    return *this;
  }
};

enum class Format { kCsv, kJson, kText };

Format parse_format(std::string_view name);

std::string format_cell(const Cell& c);

/// Header row always written, even for zero records when header is given.
void write_csv(std::ostream& os, const std::vector<Record>& records,
               const std::vector<std::string>& header = {});
void write_json(std::ostream& os, const std::vector<Record>& records);

/// Parsed CSV: header plus rows of typed cells. Cells that parse fully as an
/// integer become long, as a double become double, otherwise string.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

CsvTable parse_csv(std::string_view text);
std::string emit_csv(const CsvTable& table);

/// Runs fn(0..count-1) on up to `workers` threads and returns the results in
/// index order. An exception from any index is rethrown after all workers
/// finish; the lowest failing index wins.
template <class T>
std::vector<T> run_ordered(std::size_t count, unsigned workers, const std::function<T(std::size_t)>& fn);

unsigned default_workers();

namespace detail {
void run_indexed(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn,
                 std::vector<std::exception_ptr>& errors);
}

template <class T>
std::vector<T> run_ordered(std::size_t count, unsigned workers, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  detail::run_indexed(count, workers, [&](std::size_t i) { slots[i] = fn(i); }, errors);
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace gkpr::cli
