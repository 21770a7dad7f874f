/// @file docs.hpp
/// @brief Math-to-code index and errata, rendered as markdown.

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sdc {

struct IndexEntry {
  std::string object;   // mathematical object, e.g. "interface form b_I"
  std::string formula;  // short formula in plain text
  std::string code;     // implementing symbols
};

struct Erratum {
  std::string title;
  std::string published;
  std::string implemented;
  std::string reason;
};

/// One row per in-scope mathematical object, each object named once.
const std::vector<IndexEntry>& equation_index();
const std::vector<Erratum>& errata();

/// Spatial orders measured on the Test 1 h-sweep, quoted next to the
/// order-four claim when supplied.
struct MeasuredOrders {
  std::vector<double> co_w;
  std::vector<double> co_p;
  std::string starter;
};

std::string generate_index(const std::optional<MeasuredOrders>& measured = std::nullopt);

}  // namespace sdc
