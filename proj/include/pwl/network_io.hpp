#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "pwl/network.hpp"

namespace pwl {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON network files:
//   {"input_dim": n0,
//    "layers": [{"activation": "rectifier"|"maxout", "rank": k (maxout only),
//                "width": n, "weights": [[...], ...], "bias": [...]}]}
// Rows are unit-major then branch. Doubles are written with 17 significant
// digits so a save/load cycle is bit exact.

std::string network_to_json(const Network& net);
Network network_from_json(const std::string& text);

void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

/// "%.17g" formatting used by every writer in this project.
std::string format_double(double v);

}  // namespace pwl
