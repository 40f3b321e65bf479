#pragma once

#include <string>

#include "tvpl/grid.hpp"

namespace tvpl {

/// 17-significant-digit decimal encoding; round-trips doubles bit-exactly.
std::string format_double(double v);

std::string grid_to_json(const Grid& g);
Grid grid_from_json(const std::string& text);

/// One row per node: coordinates, value.
void write_scalar_csv(const ScalarField& u, const std::string& path);
ScalarField read_scalar_csv(const Grid& g, const std::string& path,
                            BoundaryMode mode = BoundaryMode::dirichlet);

/// One row per edge: axis, midpoint coordinates, component value.
void write_vector_csv(const VectorField& z, const std::string& path);
VectorField read_vector_csv(const Grid& g, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace tvpl
