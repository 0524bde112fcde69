#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"

#include "tropskel/input.hpp"
#include "tropskel/mixed_np.hpp"
#include "tropskel/skeleton.hpp"

// The CLI subcommands as library calls, returning their JSON reports.
namespace tropskel {

struct RunOptions {
  int max_height_doublings = 6;
  std::ostream* trace = nullptr;  // step log when verbose
};

SeparatingTree run_septree(const InputSpec& in, const RunOptions& o);

// Newton-Puiseux expansion in the disk chart x = c + s t^k (written "B_k(c)"), optionally with
// roots rescaled y -> t^scale y.
nlohmann::json run_puiseux(const InputSpec& in, const std::string& disk, const Rational& height,
                           const Rational& scale, const std::string& var, const RunOptions& o);

// Both ends of the edge "S_{a,b}(c)".  `outer` are the heights at radius a;
// the inner end uses the same box (h_m and h_p swapped).
nlohmann::json run_mixed(const InputSpec& in, const std::string& annulus, const MixedHeights& outer,
                         const RunOptions& o);

Skeleton run_skeleton(const InputSpec& in, const Rational& height, const RunOptions& o);

// `text` is a polynomial in one of x, y (with --prime) or in y and t.
nlohmann::json run_dedekind(const std::string& text, std::optional<std::uint64_t> prime, const RunOptions& o);

}  // namespace tropskel
