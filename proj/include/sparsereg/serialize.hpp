#ifndef SPARSEREG_SERIALIZE_HPP
#define SPARSEREG_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "sparsereg/core.hpp"

namespace sparsereg {

// On-disk instance format (see docs/instance-format.md): a single-line JSON
// header {"m", "n", "delta", "has_x_true", "meta"} terminated by '\n',
// followed by little-endian float64 blobs for A (row-major), y_noisy, and
// x_true (omitted when absent), in that order.
void save_instance(const std::string& path, const ProblemInstance& p,
                   const nlohmann::json& meta = nlohmann::json::object());

ProblemInstance load_instance(const std::string& path,
                              nlohmann::json* meta = nullptr);

}  // namespace sparsereg

#endif
