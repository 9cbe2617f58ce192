#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hpng/linear_form.hpp"

namespace hpng {

// One interval per variable, bounds of x_k referencing only x_0..x_{k-1}.
using Piece = std::vector<SymInterval>;

// Constant bounds per variable implied by `geq0` (each form >= 0), by interval
// propagation. Empty result means the system is infeasible.
std::vector<std::pair<double, double>> propagate_box(const std::vector<LinearForm>& geq0,
                                                     std::size_t n);

// Fourier-Motzkin style cylindrical decomposition of {x : f(x) >= 0 for all f}
// into triangular pieces, eliminating from the highest variable down. Pieces
// overlap at most on measure-zero sets; zero-width pieces are dropped.
std::vector<Piece> decompose(const std::vector<LinearForm>& geq0, std::size_t n,
                             std::size_t max_pieces = 200000);

// l_k <= x_k and x_k <= u_k as forms >= 0.
std::vector<LinearForm> piece_constraints(const Piece& piece);

bool piece_contains(const Piece& piece, std::span<const double> x, double tol);

// Sequential uniform draw: x_k uniform in [l_k(x), min(u_k(x), cap)].
std::vector<double> piece_point(const Piece& piece, std::span<const double> unit, double cap);

}  // namespace hpng
