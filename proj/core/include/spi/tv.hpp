#pragma once

#include <cstddef>
#include <span>

#include "spi/config.hpp"
#include "spi/image.hpp"

namespace spi {

// Discrete gradient with forward differences and Neumann boundary: the
// horizontal difference of the last column and the vertical difference of the
// last row are zero.

/// gh(r,c) = x(r,c+1) - x(r,c); gv(r,c) = x(r+1,c) - x(r,c).
void gradient(std::span<const double> plane, std::size_t side, std::span<double> gh,
              std::span<double> gv);
/// Adjoint of gradient(): out = D^T (gh, gv).
void gradient_adjoint(std::span<const double> gh, std::span<const double> gv, std::size_t side,
                      std::span<double> out);

/// Anisotropic: sum |gh| + |gv|. Isotropic: sum sqrt(gh^2 + gv^2).
double tv(std::span<const double> plane, std::size_t side, TvFlavor flavor);
/// Sum of per-channel TV.
double tv(const Image& image, TvFlavor flavor = TvFlavor::Anisotropic);

}  // namespace spi
