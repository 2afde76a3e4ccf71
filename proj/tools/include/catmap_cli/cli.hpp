#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "catmap/conventions.hpp"
#include "catmap/quantizer.hpp"
#include "catmap/symplectic.hpp"

namespace catmap::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidInput = 2,   // bad flags, malformed or non-symplectic g, bad grid
  kExitParity = 3,         // theta parity violated under --strict-theta
  kExitNumerical = 4,      // an asserted tolerance failed
};

// Raised for user input that cannot be turned into a valid RunConfig.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { kJson, kCsv };

enum class Command { kQuantize, kTrace, kSpectrum, kErgodic, kThetaCheck, kPeriodScan, kVerifyAll };

std::string to_string(Command c);

struct RunConfig {
  Command command = Command::kQuantize;
  std::vector<IntegerSymplecticMatrix> g;  // one entry for every command but verify-all
  std::vector<std::int64_t> N;             // strictly increasing
  std::pair<std::int64_t, std::int64_t> observable{1, 0};
  std::map<std::string, double> tolerances;  // overrides of default_tolerances
  std::string output;                        // directory; empty writes to the stream
  Format format = Format::kJson;
  bool strict_theta = false;
  QuantizeOptions::Path path = QuantizeOptions::Path::kAuto;
  Complex tau{0.0, 1.0};
  bool full = false;                 // verify-all level
  bool include_matrix = false;       // quantize: embed U in the JSON report
  Conventions conventions{};         // verify-all fault injection edits this
};

// "a,b,c,d", row-major. InputError on malformed text or a non-symplectic matrix.
IntegerSymplecticMatrix parse_matrix(const std::string& text);

// "lo..hi" or "n1,n2,...". InputError unless every entry is >= 1 and the
// list is strictly increasing.
std::vector<std::int64_t> parse_grid(const std::string& text);

std::pair<std::int64_t, std::int64_t> parse_pair(const std::string& text);

// "re,im" with im > 0.
Complex parse_tau(const std::string& text);

// "name=value" pairs, value > 0.
std::pair<std::string, double> parse_tolerance(const std::string& text);

// Tolerances asserted by a command when the user does not override them.
std::map<std::string, double> default_tolerances(Command c);

// %.17g: round-trips every double.
std::string format_double(double x);

// Worker count: hardware concurrency capped by CATMAP_THREADS when set.
std::size_t worker_count();

// Runs fn(i) for i in [0, n) on worker_count() threads; results keep index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn);

struct SuiteResult {
  std::string name;
  bool pass = true;
  double worst = 0;
  double tolerance = 0;
  std::size_t cases = 0;
  std::vector<std::string> failures;  // first few failing cases
};

nlohmann::json to_json(const SuiteResult& s);

// Invariant suites of every module; quick uses N <= 32, full N <= 512.
std::vector<SuiteResult> verify_all(bool full, const Conventions& conv,
                                    const std::vector<IntegerSymplecticMatrix>& extra = {});

// Executes a validated config. Reports go to `out` (or files under
// config.output), diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (CLI11) and calls run. Never throws.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------

template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          slots[i].emplace(fn(i));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace catmap::cli
