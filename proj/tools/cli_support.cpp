// SPDX-License-Identifier: Apache-2.0
#include "cli_support.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace gkpr::cli {

namespace {

[[noreturn]] void invalid(std::string_view field, const std::string& why) {
  throw CliError(kExitValidation, std::string(field) + ": " + why);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<long> to_long(std::string_view s) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

double number(std::string_view s, std::string_view field) {
  const auto v = to_double(s);
  if (!v || std::isnan(*v)) invalid(field, "expected a number, got '" + std::string(s) + "'");
  return *v;
}

long count_of(std::string_view s, std::string_view field) {
  const auto v = to_long(trim(s));
  if (!v || *v < 1) invalid(field, "grid point count must be a positive integer, got '" + std::string(s) + "'");
  return *v;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text, std::string_view field) {
  text = trim(text);
  if (text.empty()) invalid(field, "range is empty");
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    auto parts = split(text, ':');
    const bool log = trim(parts.front()) == "log";
    if (log) parts.erase(parts.begin());
    if (parts.size() != 3) invalid(field, "expected start:stop:count or log:start:stop:count");
    const double a = number(parts[0], field);
    const double b = number(parts[1], field);
    const long n = count_of(parts[2], field);
    if (!std::isfinite(a) || !std::isfinite(b)) invalid(field, "grid endpoints must be finite");
    if (log && (a <= 0 || b <= 0)) invalid(field, "log grid endpoints must be positive");
    out.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
      if (i == 0) {
        out.push_back(a);
      } else if (i == n - 1) {
        out.push_back(b);
      } else {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        out.push_back(log ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a));
      }
    }
    return out;
  }
  for (auto part : split(text, ',')) {
    if (trim(part).empty()) invalid(field, "empty entry in list '" + std::string(text) + "'");
    out.push_back(number(part, field));
  }
  return out;
}

std::vector<long> parse_int_grid(std::string_view text, std::string_view field) {
  std::vector<long> out;
  for (double v : parse_grid(text, field)) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 * std::max(1.0, std::abs(v))) {
      invalid(field, "expected whole numbers, got " + format_double(v));
    }
    out.push_back(static_cast<long>(r));
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  if (name == "text") return Format::kText;
  invalid("format", "expected csv, json or text, got '" + std::string(name) + "'");
}

std::string format_cell(const Cell& c) {
  if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<std::string>(c);
}

void write_csv(std::ostream& os, const std::vector<Record>& records, const std::vector<std::string>& header) {
  std::vector<std::string> names = header;
  if (names.empty() && !records.empty()) {
    for (const auto& f : records.front().fields) names.push_back(f.first);
  }
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
  os << '\n';
  for (const auto& r : records) {
    for (std::size_t i = 0; i < r.fields.size(); ++i) os << (i ? "," : "") << format_cell(r.fields[i].second);
    os << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<Record>& records) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (const auto& [name, cell] : r.fields) {
      std::visit([&](const auto& v) { row[name] = v; }, cell);
    }
    doc.push_back(std::move(row));
  }
  os << doc.dump(2) << '\n';
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) return table;
  for (auto h : split(lines.front(), ',')) table.header.emplace_back(h);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<Cell> row;
    for (auto cell : split(lines[i], ',')) {
      if (auto l = to_long(cell)) {
        row.emplace_back(*l);
      } else if (auto d = to_double(cell); d && cell == trim(cell) && cell.front() != '+') {
        row.emplace_back(*d);
      } else {
        row.emplace_back(std::string(cell));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string emit_csv(const CsvTable& table) {
  std::ostringstream os;
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
  return os.str();
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

namespace detail {

void run_indexed(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn,
                 std::vector<std::exception_ptr>& errors) {
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(count, 1)));
  if (n <= 1) {
    loop();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned w = 0; w < n; ++w) pool.emplace_back(loop);
  for (auto& t : pool) t.join();
}

}  // namespace detail

}  // namespace gkpr::cli
