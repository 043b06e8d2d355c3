#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "config.hpp"
#include "ecps/error.hpp"
#include "ecps/rational.hpp"

namespace ecps::cli {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string num_den(const Rational& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns, const ExperimentConfig& c)
      : out_(path, std::ios::binary) {
    if (!out_) throw Error(ErrorCode::invalid_argument, "cannot write " + path.string());
    row(columns);
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(c.hash()));
    out_ << "# config_hash=" << hash << " seed=" << c.seed << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

/// Result of one trajectory: a value, or the error that stopped it.
template <class R>
struct Slot {
  std::optional<R> value;
  std::optional<ErrorCode> code;
  std::string error;
};

/// Runs f(0..n-1) on `workers` threads; results come back in index order.
template <class R, class F>
std::vector<Slot<R>> run_pool(int n, int workers, F f) {
  std::vector<Slot<R>> slots(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i; (i = next.fetch_add(1)) < n;) {
      auto& slot = slots[static_cast<std::size_t>(i)];
      try {
        slot.value = f(i);
      } catch (const Error& e) {
        slot.code = e.code();
        slot.error = e.what();
      } catch (const std::exception& e) {
        slot.code = ErrorCode::consistency_violation;
        slot.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < std::max(1, std::min(workers, n)); ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return slots;
}

}  // namespace ecps::cli
